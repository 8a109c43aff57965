#ifndef TTK_DATASET_HPP
#define TTK_DATASET_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ttk {

// One sparse example. Feature indices are 1-based and strictly ascending;
// label, when present, is +1 or -1.
struct Instance {
  std::vector<std::pair<std::int32_t, double>> features;
  std::optional<int> label;

  double feature(std::int32_t index) const;
};

struct Dataset {
  std::vector<Instance> instances;
  std::int32_t dim = 0;

  std::size_t size() const { return instances.size(); }
  bool empty() const { return instances.empty(); }
  bool all_labeled() const;
  std::size_t count_label(int label) const;
};

// A labeled training set plus an unlabeled-for-the-solver test set.
// Test labels stay stored for evaluation; solvers only read test features.
struct TransductiveProblem {
  Dataset train;
  Dataset test;
  std::size_t k = 0;
  double C = 1.0;

  // Throws ArgumentError when 1 <= k <= |test|, C > 0 or train labeling fails.
  void validate() const;
};

// LIBSVM text format: "<label> <idx>:<val> ...", label in {+1, 1, -1},
// indices strictly ascending. Throws ParseError with the offending line.
Dataset parse_libsvm(std::istream& in);
Dataset parse_libsvm(const std::string& text);
Dataset load_libsvm_file(const std::string& path);

// Inverse of parse_libsvm; values printed with shortest round-trip form so
// serialize . parse is the identity.
std::string serialize_libsvm(const Dataset& data);
void save_libsvm_file(const Dataset& data, const std::string& path);

// Seeded partition into train/test with |test| = round(fraction * n).
// Stratified keeps per-class proportions within one instance. Instance
// order inside each part follows the original dataset order.
struct SplitResult {
  Dataset train;
  Dataset test;
};
SplitResult random_split(const Dataset& data, double test_fraction, bool stratified,
                         std::uint64_t seed);

// The two-cluster illustrative scenario: 40 train / 40 test, 22 positive and
// 18 negative in each, k = 4, C = 1. Generated so that thresholding the
// accuracy-optimal separator to 4 test positives lands in a mixed region
// (precision 1/2) while a rotated separator selects 4 true positives.
TransductiveProblem make_synthetic_figure(std::uint64_t seed);

}  // namespace ttk

#endif  // TTK_DATASET_HPP
