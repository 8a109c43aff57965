#ifndef TTK_KERNELS_HPP
#define TTK_KERNELS_HPP

#include <cstddef>
#include <vector>

#include "ttk/dataset.hpp"
#include "ttk/linear_model.hpp"

namespace ttk::kernels {

// The parallel kernels below reduce over fixed-size chunks and combine the
// partial sums in chunk order, so the result does not depend on the thread
// count or schedule. The *_serial variants are plain reference loops kept
// for testing and benchmarking; they may round differently by at most the
// usual reassociation error.

inline constexpr std::size_t kChunk = 1024;

void score_into(const LinearModel& model, const Dataset& data, std::vector<double>& out);
void score_into_serial(const LinearModel& model, const Dataset& data, std::vector<double>& out);

// 0.5 * ||w||^2 + C * sum_i max(0, 1 - y_i (w'x_i + b))
double hinge_objective(const LinearModel& model, const Dataset& train, double C);
double hinge_objective_serial(const LinearModel& model, const Dataset& train, double C);

// Subgradient of hinge_objective over (w, b). At a kink (margin exactly 1)
// the loss-active branch is taken. gw has size dim, gb is the intercept part.
struct HingeSubgradient {
  std::vector<double> gw;
  double gb = 0.0;
};
HingeSubgradient hinge_subgradient(const LinearModel& model, const Dataset& train, double C);
HingeSubgradient hinge_subgradient_serial(const LinearModel& model, const Dataset& train, double C);

std::size_t count_positive(const std::vector<double>& scores);

}  // namespace ttk::kernels

#endif  // TTK_KERNELS_HPP
