#ifndef TTK_LINEAR_MODEL_HPP
#define TTK_LINEAR_MODEL_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "ttk/dataset.hpp"

namespace ttk {

// Dense linear classifier. An instance is predicted positive iff its score
// w'x + b is strictly greater than zero; exact zeros count as negative.
struct LinearModel {
  std::vector<double> w;
  double b = 0.0;

  std::size_t dim() const { return w.size(); }

  static LinearModel zeros(std::size_t dim) { return LinearModel{std::vector<double>(dim, 0.0), 0.0}; }
};

double score(const LinearModel& model, const Instance& x);

// Scores for every instance, in dataset order.
std::vector<double> score_all(const LinearModel& model, const Dataset& data);

// Indices of the k largest scores, ties broken toward the lower instance
// index, returned sorted ascending.
std::vector<std::size_t> top_k_set(const LinearModel& model, const Dataset& data, std::size_t k);
std::vector<std::size_t> top_k_of_scores(const std::vector<double>& scores, std::size_t k);

// Shifts b so that exactly k test scores are strictly positive, placing the
// boundary at the midpoint of the k-th and (k+1)-th descending scores. An
// exact tie between those two raises TieError. Callers that prefer to break
// ties may opt into a perturbation of 1e-9 * instance_index on the scores.
LinearModel adjust_intercept(const LinearModel& model, const Dataset& test, std::size_t k,
                             bool perturb_ties = false);

// Fraction of true positives among the k top-scoring instances.
double precision_at_k(const LinearModel& model, const Dataset& labeled_test, std::size_t k);

// JSON round-trip: {"w": [..], "b": .., "dim": ..} with shortest-form doubles.
std::string model_to_json(const LinearModel& model);
LinearModel model_from_json(const std::string& json_text);
void save_model(const LinearModel& model, const std::string& path);
LinearModel load_model(const std::string& path);

}  // namespace ttk

#endif  // TTK_LINEAR_MODEL_HPP
