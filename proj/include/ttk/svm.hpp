#ifndef TTK_SVM_HPP
#define TTK_SVM_HPP

#include <cstdint>

#include "ttk/dataset.hpp"
#include "ttk/linear_model.hpp"

namespace ttk {

struct SvmConfig {
  double C = 1.0;
  int max_epochs = 2000;
  double tol = 1e-10;  // relative best-objective change stop
  std::uint64_t seed = 0;

  void validate() const;
};

// 0.5 * ||w||^2 + C * sum_i max(0, 1 - y_i (w'x_i + b)); b carries no
// regularization weight.
double svm_objective(const LinearModel& model, const Dataset& train, double C);

struct SvmTrainResult {
  LinearModel model;
  double objective = 0.0;  // minimum objective observed
};

// Seeded stochastic subgradient descent on w with step schedule
// eta_t = 1 / (1 + t/n) and best-iterate/averaged-iterate selection.
// The intercept is left at zero during descent; top-k pipelines set it
// afterwards via adjust_intercept. At hinge kinks the loss-active branch
// is taken.
SvmTrainResult train_svm(const Dataset& train, const SvmConfig& config);

}  // namespace ttk

#endif  // TTK_SVM_HPP
