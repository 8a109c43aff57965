#include "ttk/svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "ttk/errors.hpp"
#include "ttk/kernels.hpp"

namespace ttk {

void SvmConfig::validate() const {
  if (!(C > 0.0)) throw ArgumentError("svm config: C must be positive");
  if (!(tol > 0.0)) throw ArgumentError("svm config: tol must be positive");
  if (max_epochs < 1) throw ArgumentError("svm config: max_epochs must be at least 1");
}

double svm_objective(const LinearModel& model, const Dataset& train, double C) {
  return kernels::hinge_objective(model, train, C);
}

SvmTrainResult train_svm(const Dataset& train, const SvmConfig& config) {
  config.validate();
  if (train.empty()) throw ArgumentError("train_svm: empty training set");
  if (!train.all_labeled()) throw ArgumentError("train_svm: unlabeled training instance");
  for (const Instance& x : train.instances)
    for (const auto& [idx, val] : x.features)
      if (!std::isfinite(val)) throw ArgumentError("train_svm: non-finite feature value");

  const std::size_t n = train.size();
  const std::size_t dim = static_cast<std::size_t>(train.dim);
  const double inv_n = 1.0 / static_cast<double>(n);

  LinearModel current = LinearModel::zeros(dim);
  LinearModel averaged = current;
  LinearModel best = current;
  double best_obj = svm_objective(best, train, config.C);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(config.seed);

  std::size_t t = 0;
  double stale_reference = best_obj;
  int stale_epochs = 0;

  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t pos = 0; pos < n; ++pos) {
      const Instance& x = train.instances[order[pos]];
      const double y = static_cast<double>(*x.label);
      const double eta = 1.0 / (1.0 + static_cast<double>(t) * inv_n);
      ++t;

      double s = current.b;
      for (const auto& [idx, val] : x.features)
        s += current.w[static_cast<std::size_t>(idx - 1)] * val;

      // Per-sample subgradient of (||w||^2 / 2n + C * hinge_i); margin
      // exactly 1 counts as loss-active.
      const double shrink = 1.0 - eta * inv_n;
      for (double& wj : current.w) wj *= shrink;
      if (y * s <= 1.0) {
        const double step = eta * config.C * y;
        for (const auto& [idx, val] : x.features)
          current.w[static_cast<std::size_t>(idx - 1)] += step * val;
      }

      const double weight = 1.0 / static_cast<double>(t);
      for (std::size_t j = 0; j < dim; ++j)
        averaged.w[j] += weight * (current.w[j] - averaged.w[j]);
    }

    for (const LinearModel* cand : {&current, &averaged}) {
      const double obj = svm_objective(*cand, train, config.C);
      if (obj < best_obj) {
        best_obj = obj;
        best = *cand;
      }
    }

    if (stale_reference - best_obj <= config.tol * (1.0 + std::abs(stale_reference))) {
      if (++stale_epochs >= 50) break;
    } else {
      stale_reference = best_obj;
      stale_epochs = 0;
    }
  }

  return SvmTrainResult{best, best_obj};
}

}  // namespace ttk
