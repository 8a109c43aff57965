#ifndef TTK_BENCH_HPP
#define TTK_BENCH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ttk/dataset.hpp"
#include "ttk/exact_solver.hpp"
#include "ttk/linear_model.hpp"
#include "ttk/stats.hpp"
#include "ttk/ttk_solver.hpp"

namespace ttk::bench {

enum class Method { svm_threshold, ttk_fd, ttk_exact };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

struct ExperimentConfig {
  std::string dataset_path;
  std::vector<Method> methods;
  double k_fraction = 0.05;
  std::size_t n_splits = 10;
  std::vector<double> c_grid{0.01, 0.1, 1.0, 10.0, 100.0};
  std::size_t cv_repeats = 5;
  std::size_t cv_folds = 2;
  std::uint64_t seed = 0;
  double test_fraction = 0.5;  // stratified train/test split ratio

  void validate() const;
  static ExperimentConfig from_json(const std::string& text);
};

// k = max(1, round-half-up(fraction * n)).
std::size_t k_from_fraction(double k_fraction, std::size_t n_test);

struct BoundaryStats {
  std::size_t at_boundary = 0;     // |score| <= delta
  double fraction_positive = 0.0;  // score > 0, strict
};
BoundaryStats boundary_stats(const LinearModel& model, const Dataset& data, double delta);

// Train + top-k prediction for one method on one transductive problem.
struct MethodFit {
  LinearModel model;
  double train_objective = 0.0;
  bool available = true;  // false when capacity-refused (reported as NA)
};
MethodFit fit_method(Method method, const TransductiveProblem& problem);

// Repeated stratified cv_folds-fold cross-validation: picks the c_grid value
// with the best held-out top-k precision, ties toward smaller C. Single-class
// folds are resampled with the next seed, up to 10 attempts.
double cross_validate_c(const Dataset& train, const ExperimentConfig& config, Method method,
                        std::uint64_t seed);

struct MethodColumn {
  Method method = Method::svm_threshold;
  bool available = true;
  std::vector<double> precisions;
  std::vector<double> train_objectives;
  std::vector<double> chosen_c;
  double mean = 0.0;
  double sd = 0.0;  // sample sd; 0 by convention for a single split
};

struct PairVerdict {
  Method a = Method::svm_threshold;
  Method b = Method::svm_threshold;
  stats::TTestResult test;
};

struct ResultTable {
  std::vector<std::size_t> ks;  // per split
  std::vector<MethodColumn> columns;
  std::vector<PairVerdict> verdicts;  // all pairs of available methods

  std::string to_csv() const;
  std::string verdicts_to_csv() const;
};

// The full protocol: stratified splits, per-method cross-validated C,
// training, top-k precision, aggregation and pairwise significance tests.
// Deterministic given the config; splits run as independent seeded units.
ResultTable run_experiment(const ExperimentConfig& config);

}  // namespace ttk::bench

#endif  // TTK_BENCH_HPP
