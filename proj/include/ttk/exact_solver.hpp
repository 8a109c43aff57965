#ifndef TTK_EXACT_SOLVER_HPP
#define TTK_EXACT_SOLVER_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ttk/dataset.hpp"
#include "ttk/linear_model.hpp"

namespace ttk {

struct ExactLimits {
  std::size_t max_test = 25;
  std::size_t max_nodes = 2000000;
  // Strictness margin: assigned positives must score >= margin_delta,
  // assigned negatives <= -margin_delta.
  double margin_delta = 1e-4;
  // 0 means the default 1e3 * C (the enforced floor).
  double penalty_weight = 0.0;

  double resolve_penalty(double C) const;
  void validate(double C) const;
};

struct Certificate {
  std::vector<std::size_t> chosen_set;  // ascending test indices, |set| = k
  double objective = 0.0;               // penalty-free ttk objective
  std::size_t nodes_explored = 0;
  double bound_gap = 0.0;               // 0 when the search completed

  std::string to_json() const;
};

struct AssignedSolution {
  LinearModel model;
  double objective = 0.0;         // penalty-free ttk objective at the model
  double penalized_primal = 0.0;  // objective + penalty terms
  double penalized_dual = 0.0;    // certified lower bound on the penalized optimum
  bool satisfied = false;         // every assigned sign holds with margin >= delta/2
};

// Convex subproblem for one sign assignment: minimizes the penalized
// objective  ttk_objective + P * sum of margin violations, with the
// violation hinge max(0, delta - score) for assigned positives and
// max(0, score + delta) for assigned negatives. |positive_set| must be k;
// the remaining test instances are assigned negative.
AssignedSolution solve_assigned(const TransductiveProblem& problem,
                                const std::vector<std::size_t>& positive_set,
                                const ExactLimits& limits);

struct ExactResult {
  LinearModel model;
  Certificate certificate;
};

// Branch and bound over test sign assignments. Node bounds are certified
// dual values of the partial-assignment relaxations, so pruning never cuts
// the optimum. Throws CapacityError above limits.max_test; returns the
// incumbent with a positive bound_gap when max_nodes runs out.
ExactResult solve_exact(const TransductiveProblem& problem, const ExactLimits& limits);

// Exhaustive reference: solves every k-subset assignment with no pruning.
// Used as the oracle for pruning-soundness checks.
ExactResult solve_enumerate(const TransductiveProblem& problem, const ExactLimits& limits);

}  // namespace ttk

#endif  // TTK_EXACT_SOLVER_HPP
