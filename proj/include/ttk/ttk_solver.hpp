#ifndef TTK_TTK_SOLVER_HPP
#define TTK_TTK_SOLVER_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ttk/dataset.hpp"
#include "ttk/linear_model.hpp"

namespace ttk {

struct TtkOptions {
  // Activity band around the decision boundary. Non-positive means the
  // default 1e-6 * (1 + |b|), evaluated at the current iterate.
  double eps_active = 0.0;
  // 0 means the default 500 * (dim + 1).
  std::size_t max_iters = 0;
  double step_tol = 1e-8;
  std::size_t swap_budget = 16;

  double active_band(const LinearModel& model) const;
  std::size_t iteration_limit(std::size_t dim) const;
};

enum class TerminationReason { stationary, iter_limit, no_direction };

struct SolverTrace {
  // objectives[0] is the initial objective; each later entry is one
  // accepted move, tagged by moves[i-1].
  std::vector<double> objectives;
  std::vector<bool> feasible_flags;
  std::vector<std::string> moves;  // "descent" or "swap"
  std::size_t swaps_taken = 0;
  TerminationReason terminated_by = TerminationReason::stationary;
};

// CSV with columns iter,objective,feasible,move; one row per accepted move.
std::string trace_to_csv(const SolverTrace& trace);

// Direction over (w, b); d_w has the model dimension.
struct Direction {
  std::vector<double> d_w;
  double d_b = 0.0;
};

// Regularized training hinge loss; the test set enters only through the
// cardinality constraint.
double ttk_objective(const LinearModel& model, const TransductiveProblem& problem);

// True iff exactly k test scores are strictly positive.
bool is_feasible(const LinearModel& model, const TransductiveProblem& problem);

// Minimizes g'd over ||d||_inf <= 1 subject to sign-preservation constraints
// for test instances inside the activity band, where g is the objective
// subgradient. Returns nullopt when the best attainable g'd >= -step_tol.
std::optional<Direction> feasible_direction(const LinearModel& model,
                                            const TransductiveProblem& problem,
                                            const TtkOptions& options);

// Largest step that keeps every out-of-band test score on its side of zero;
// +infinity when nothing crosses.
double max_feasible_step(const LinearModel& model, const Direction& d,
                         const TransductiveProblem& problem);

// Backtracking step selection under the crossing cap; satisfies
// f(model + a d) <= f(model) - 1e-4 * a * |g'd|. Returns 0 when no
// progress is possible along d.
double line_search(const LinearModel& model, const Direction& d,
                   const TransductiveProblem& problem, const TtkOptions& options);

// Escape move for stationary points: exchanges a boundary-band positive with
// a boundary-band negative (tilting w, re-shifting b, then running a bounded
// descent) and returns the result only when the objective strictly drops.
std::optional<LinearModel> swap_step(const LinearModel& model, const TransductiveProblem& problem,
                                     const TtkOptions& options);

struct FdResult {
  LinearModel model;
  SolverTrace trace;
};

// Feasible-direction descent from a feasible start (typically train_svm
// followed by adjust_intercept). Every accepted iterate is feasible and the
// trace objective sequence is non-increasing.
FdResult solve_fd(const TransductiveProblem& problem, const LinearModel& init,
                  const TtkOptions& options);

namespace detail {

// min c'z s.t. A z = 0, lo <= z <= hi, with the trailing m columns of A
// forming a -I slack block that seeds the initial basis. Dense bounded
// simplex with Bland's rule; sizes here are tiny.
std::vector<double> bounded_simplex(std::size_t m, std::size_t n, const std::vector<double>& cols,
                                    const std::vector<double>& c, const std::vector<double>& lo,
                                    const std::vector<double>& hi);

}  // namespace detail

}  // namespace ttk

#endif  // TTK_TTK_SOLVER_HPP
