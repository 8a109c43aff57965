#include "ttk/ttk_solver.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include "ttk/errors.hpp"
#include "ttk/kernels.hpp"
#include "ttk/svm.hpp"

namespace ttk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t problem_dim(const TransductiveProblem& problem) {
  return static_cast<std::size_t>(std::max(problem.train.dim, problem.test.dim));
}

LinearModel padded(const LinearModel& model, std::size_t dim) {
  if (model.dim() >= dim) return model;
  LinearModel out = model;
  out.w.resize(dim, 0.0);
  return out;
}

std::vector<double> densify(const Instance& x, std::size_t dim) {
  std::vector<double> out(dim, 0.0);
  for (const auto& [idx, val] : x.features) out[static_cast<std::size_t>(idx - 1)] = val;
  return out;
}

LinearModel stepped(const LinearModel& model, const Direction& d, double alpha) {
  LinearModel out = model;
  for (std::size_t j = 0; j < out.w.size(); ++j) out.w[j] += alpha * d.d_w[j];
  out.b += alpha * d.d_b;
  return out;
}

}  // namespace

double TtkOptions::active_band(const LinearModel& model) const {
  if (eps_active > 0.0) return eps_active;
  return 1e-6 * (1.0 + std::abs(model.b));
}

std::size_t TtkOptions::iteration_limit(std::size_t dim) const {
  if (max_iters > 0) return max_iters;
  return 500 * (dim + 1);
}

std::string trace_to_csv(const SolverTrace& trace) {
  std::string out = "iter,objective,feasible,move\n";
  char buf[32];
  for (std::size_t i = 1; i < trace.objectives.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), trace.objectives[i]);
    out.append(buf, ptr);
    out += ',';
    out += trace.feasible_flags[i] ? "1" : "0";
    out += ',';
    out += trace.moves[i - 1];
    out += '\n';
  }
  return out;
}

double ttk_objective(const LinearModel& model, const TransductiveProblem& problem) {
  return svm_objective(model, problem.train, problem.C);
}

bool is_feasible(const LinearModel& model, const TransductiveProblem& problem) {
  const auto scores = score_all(model, problem.test);
  return kernels::count_positive(scores) == problem.k;
}

namespace detail {

namespace {

enum class VarStatus { basic, at_lower, at_upper };

// Solve M x = rhs in place; M is m x m column-major, destroyed.
std::vector<double> solve_dense(std::size_t m, std::vector<double> M, std::vector<double> rhs) {
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    double best = std::abs(M[perm[col] + col * m]);
    for (std::size_t r = col + 1; r < m; ++r) {
      const double v = std::abs(M[perm[r] + col * m]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best < 1e-13) throw ContractViolation("singular basis in direction subproblem");
    std::swap(perm[col], perm[piv]);
    const double diag = M[perm[col] + col * m];
    for (std::size_t r = col + 1; r < m; ++r) {
      const double f = M[perm[r] + col * m] / diag;
      if (f == 0.0) continue;
      M[perm[r] + col * m] = 0.0;
      for (std::size_t cc = col + 1; cc < m; ++cc) M[perm[r] + cc * m] -= f * M[perm[col] + cc * m];
      rhs[perm[r]] -= f * rhs[perm[col]];
    }
  }
  std::vector<double> x(m, 0.0);
  for (std::size_t col = m; col-- > 0;) {
    double v = rhs[perm[col]];
    for (std::size_t cc = col + 1; cc < m; ++cc) v -= M[perm[col] + cc * m] * x[cc];
    x[col] = v / M[perm[col] + col * m];
  }
  return x;
}

}  // namespace

std::vector<double> bounded_simplex(std::size_t m, std::size_t n, const std::vector<double>& cols,
                                    const std::vector<double>& c, const std::vector<double>& lo,
                                    const std::vector<double>& hi) {
  assert(cols.size() == m * n && c.size() == n && lo.size() == n && hi.size() == n);
  double cmax = 0.0;
  for (double v : c) cmax = std::max(cmax, std::abs(v));
  const double tol_rc = 1e-11 * std::max(1.0, cmax);
  const double ztol = 1e-11;

  std::vector<VarStatus> status(n, VarStatus::at_lower);
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    basis[r] = n - m + r;
    status[n - m + r] = VarStatus::basic;
  }

  auto column = [&](std::size_t j) { return cols.data() + j * m; };

  std::vector<double> xB(m, 0.0);
  for (std::size_t iter = 0; iter < 50000; ++iter) {
    // Fresh basis matrix and basic values each iteration; sizes are tiny.
    std::vector<double> B(m * m);
    for (std::size_t r = 0; r < m; ++r)
      std::copy(column(basis[r]), column(basis[r]) + m, B.begin() + static_cast<std::ptrdiff_t>(r * m));

    std::vector<double> rhs(m, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (status[j] == VarStatus::basic) continue;
      const double v = (status[j] == VarStatus::at_lower) ? lo[j] : hi[j];
      if (v == 0.0) continue;
      const double* aj = column(j);
      for (std::size_t r = 0; r < m; ++r) rhs[r] -= aj[r] * v;
    }
    xB = solve_dense(m, B, rhs);

    std::vector<double> Bt(m * m);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t cc = 0; cc < m; ++cc) Bt[cc + r * m] = B[r + cc * m];
    std::vector<double> cB(m);
    for (std::size_t r = 0; r < m; ++r) cB[r] = c[basis[r]];
    const std::vector<double> y = solve_dense(m, Bt, cB);

    // Bland's rule: smallest-index profitable nonbasic variable.
    std::size_t entering = n;
    bool increasing = true;
    for (std::size_t j = 0; j < n; ++j) {
      if (status[j] == VarStatus::basic) continue;
      double rc = c[j];
      const double* aj = column(j);
      for (std::size_t r = 0; r < m; ++r) rc -= y[r] * aj[r];
      if (status[j] == VarStatus::at_lower && rc < -tol_rc) {
        entering = j;
        increasing = true;
        break;
      }
      if (status[j] == VarStatus::at_upper && rc > tol_rc) {
        entering = j;
        increasing = false;
        break;
      }
    }
    if (entering == n) {
      std::vector<double> z(n);
      for (std::size_t j = 0; j < n; ++j)
        z[j] = (status[j] == VarStatus::at_lower) ? lo[j] : (status[j] == VarStatus::at_upper ? hi[j] : 0.0);
      for (std::size_t r = 0; r < m; ++r) z[basis[r]] = xB[r];
      return z;
    }

    std::vector<double> Bcopy(m * m);
    for (std::size_t r = 0; r < m; ++r)
      std::copy(column(basis[r]), column(basis[r]) + m,
                Bcopy.begin() + static_cast<std::ptrdiff_t>(r * m));
    std::vector<double> ecol(column(entering), column(entering) + m);
    const std::vector<double> u = solve_dense(m, std::move(Bcopy), std::move(ecol));

    const double sgn = increasing ? 1.0 : -1.0;
    double best = hi[entering] - lo[entering];  // bound-to-bound flip distance
    std::size_t leaving = m;                    // m means flip
    bool leaves_at_lower = true;
    for (std::size_t r = 0; r < m; ++r) {
      const double rate = -sgn * u[r];
      double limit;
      bool to_lower;
      if (rate < -ztol) {
        limit = (xB[r] - lo[basis[r]]) / (-rate);
        to_lower = true;
      } else if (rate > ztol) {
        if (hi[basis[r]] == kInf) continue;
        limit = (hi[basis[r]] - xB[r]) / rate;
        to_lower = false;
      } else {
        continue;
      }
      limit = std::max(limit, 0.0);
      if (limit < best - 1e-12 ||
          (limit < best + 1e-12 && leaving < m && basis[r] < basis[leaving])) {
        best = limit;
        leaving = r;
        leaves_at_lower = to_lower;
      }
    }
    if (best == kInf) throw ContractViolation("unbounded direction subproblem");

    if (leaving == m) {
      status[entering] = increasing ? VarStatus::at_upper : VarStatus::at_lower;
    } else {
      status[basis[leaving]] = leaves_at_lower ? VarStatus::at_lower : VarStatus::at_upper;
      status[entering] = VarStatus::basic;
      basis[leaving] = entering;
    }
  }
  throw ContractViolation("direction subproblem did not converge");
}

}  // namespace detail

std::optional<Direction> feasible_direction(const LinearModel& model,
                                            const TransductiveProblem& problem,
                                            const TtkOptions& options) {
  problem.validate();
  if (!is_feasible(model, problem))
    throw ContractViolation("feasible_direction requires a feasible model");

  const std::size_t dim = model.dim();
  const std::size_t D = dim + 1;
  const auto g = kernels::hinge_subgradient(model, problem.train, problem.C);
  std::vector<double> gvec(D);
  std::copy(g.gw.begin(), g.gw.end(), gvec.begin());
  gvec[dim] = g.gb;

  const auto scores = score_all(model, problem.test);
  const double band = options.active_band(model);

  std::vector<std::vector<double>> rows;
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (std::abs(scores[j]) > band) continue;
    std::vector<double> a = densify(problem.test.instances[j], dim);
    a.push_back(1.0);
    if (scores[j] <= 0.0)
      for (double& v : a) v = -v;
    rows.push_back(std::move(a));
  }

  Direction d;
  d.d_w.assign(dim, 0.0);
  if (rows.empty()) {
    double value = 0.0;
    for (std::size_t i = 0; i < D; ++i) {
      const double gi = gvec[i];
      const double di = (gi > 0.0) ? -1.0 : (gi < 0.0 ? 1.0 : 0.0);
      value += gi * di;
      if (i < dim)
        d.d_w[i] = di;
      else
        d.d_b = di;
    }
    if (value >= -options.step_tol) return std::nullopt;
    return d;
  }

  const std::size_t m = rows.size();
  const std::size_t n = 2 * D + m;
  std::vector<double> cols(m * n, 0.0);
  for (std::size_t i = 0; i < D; ++i)
    for (std::size_t r = 0; r < m; ++r) {
      cols[i * m + r] = rows[r][i];
      cols[(D + i) * m + r] = -rows[r][i];
    }
  for (std::size_t r = 0; r < m; ++r) cols[(2 * D + r) * m + r] = -1.0;

  std::vector<double> c(n, 0.0), lo(n, 0.0), hi(n, kInf);
  for (std::size_t i = 0; i < D; ++i) {
    c[i] = gvec[i];
    c[D + i] = -gvec[i];
    hi[i] = 1.0;
    hi[D + i] = 1.0;
  }

  const auto z = detail::bounded_simplex(m, n, cols, c, lo, hi);
  double value = 0.0;
  for (std::size_t i = 0; i < D; ++i) {
    const double di = z[i] - z[D + i];
    value += gvec[i] * di;
    if (i < dim)
      d.d_w[i] = di;
    else
      d.d_b = di;
  }
  if (value >= -options.step_tol) return std::nullopt;
  return d;
}

double max_feasible_step(const LinearModel& model, const Direction& d,
                         const TransductiveProblem& problem) {
  const auto scores = score_all(model, problem.test);
  double amax = kInf;
  for (std::size_t j = 0; j < scores.size(); ++j) {
    double ds = d.d_b;
    for (const auto& [idx, val] : problem.test.instances[j].features)
      ds += d.d_w[static_cast<std::size_t>(idx - 1)] * val;
    if (std::abs(ds) <= 1e-14) continue;
    const double s = scores[j];
    if (s > 0.0 && ds < 0.0) amax = std::min(amax, s / -ds);
    if (s < 0.0 && ds > 0.0) amax = std::min(amax, -s / ds);
    // s == 0 stays on the negative side: the direction subproblem already
    // constrained its derivative to be non-positive.
  }
  return amax;
}

double line_search(const LinearModel& model, const Direction& d,
                   const TransductiveProblem& problem, const TtkOptions& options) {
  (void)options;
  const auto g = kernels::hinge_subgradient(model, problem.train, problem.C);
  double gd = g.gb * d.d_b;
  for (std::size_t j = 0; j < g.gw.size(); ++j) gd += g.gw[j] * d.d_w[j];
  if (gd >= 0.0) return 0.0;

  const double f0 = ttk_objective(model, problem);
  const double amax = max_feasible_step(model, d, problem);
  const double cap = std::isinf(amax) ? kInf : amax * (1.0 - 1e-9);
  if (cap <= 0.0) return 0.0;

  auto armijo = [&](double a) {
    return ttk_objective(stepped(model, d, a), problem) <= f0 + 1e-4 * a * gd;
  };

  double a = std::isinf(cap) ? 1.0 : cap;
  if (std::isinf(cap) && armijo(a)) {
    // Uncapped ray: grow while the decrease condition keeps holding.
    for (int grow = 0; grow < 60 && armijo(a * 2.0); ++grow) a *= 2.0;
    return a;
  }
  const double floor = 1e-14 * std::max(1.0, a);
  while (a > floor) {
    if (armijo(a) && is_feasible(stepped(model, d, a), problem)) return a;
    a *= 0.5;
  }
  return 0.0;
}

namespace {

// Plain descent (no swap moves), logging into the trace when given.
// Returns true when it stopped on a stationarity certificate.
bool descend(LinearModel& model, double& objective, const TransductiveProblem& problem,
             const TtkOptions& options, std::size_t max_steps, SolverTrace* trace,
             std::size_t* steps_used) {
  std::size_t used = 0;
  bool stationary = false;
  while (used < max_steps) {
    const auto d = feasible_direction(model, problem, options);
    if (!d) {
      stationary = true;
      break;
    }
    const double a = line_search(model, *d, problem, options);
    if (a <= 0.0) break;
    model = stepped(model, *d, a);
    objective = ttk_objective(model, problem);
    ++used;
    if (trace) {
      if (!is_feasible(model, problem))
        throw ContractViolation("descent produced an infeasible iterate");
      trace->objectives.push_back(objective);
      trace->feasible_flags.push_back(true);
      trace->moves.emplace_back("descent");
    }
  }
  if (steps_used) *steps_used = used;
  return stationary;
}

}  // namespace

std::optional<LinearModel> swap_step(const LinearModel& model, const TransductiveProblem& problem,
                                     const TtkOptions& options) {
  problem.validate();
  if (options.swap_budget == 0) return std::nullopt;
  if (!is_feasible(model, problem)) throw ContractViolation("swap_step requires a feasible model");

  const double band = options.active_band(model);
  const auto scores = score_all(model, problem.test);

  std::vector<std::size_t> outs, ins;
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (scores[j] > 0.0 && scores[j] <= band) outs.push_back(j);
    if (scores[j] <= 0.0 && -scores[j] <= band) ins.push_back(j);
  }
  std::sort(outs.begin(), outs.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::sort(ins.begin(), ins.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  if (outs.empty() || ins.empty()) return std::nullopt;

  const std::size_t dim = model.dim();
  const double obj0 = ttk_objective(model, problem);
  std::size_t pairs_tried = 0;

  for (std::size_t j_out : outs) {
    for (std::size_t j_in : ins) {
      if (++pairs_tried > 16) return std::nullopt;

      const auto x_out = densify(problem.test.instances[j_out], dim);
      const auto x_in = densify(problem.test.instances[j_in], dim);
      std::vector<double> u(dim);
      double nu2 = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        u[i] = x_in[i] - x_out[i];
        nu2 += u[i] * u[i];
      }
      if (nu2 <= 1e-18) continue;

      // Tilt w until the candidate pair reverses order, then re-shift b to
      // restore an exactly-k positive set.
      double tau = (scores[j_out] - scores[j_in] + std::max(4.0 * band, 1e-9)) / nu2;
      LinearModel candidate;
      bool shifted_ok = false;
      for (int attempt = 0; attempt < 3 && !shifted_ok; ++attempt) {
        LinearModel tilted = model;
        for (std::size_t i = 0; i < dim; ++i) tilted.w[i] += tau * u[i];
        try {
          candidate = adjust_intercept(tilted, problem.test, problem.k);
          shifted_ok = true;
        } catch (const TieError&) {
          tau *= 1.000001;
        }
      }
      if (!shifted_ok || !is_feasible(candidate, problem)) continue;

      double obj = ttk_objective(candidate, problem);
      descend(candidate, obj, problem, options, 200, nullptr, nullptr);
      if (obj < obj0 - 1e-10 * (1.0 + std::abs(obj0))) return candidate;
    }
  }
  return std::nullopt;
}

FdResult solve_fd(const TransductiveProblem& problem, const LinearModel& init,
                  const TtkOptions& options) {
  problem.validate();
  LinearModel model = padded(init, problem_dim(problem));
  if (!is_feasible(model, problem)) throw ArgumentError("solve_fd: initial model is infeasible");

  SolverTrace trace;
  double objective = ttk_objective(model, problem);
  trace.objectives.push_back(objective);
  trace.feasible_flags.push_back(true);

  const std::size_t limit = options.iteration_limit(model.dim());
  std::size_t iters = 0;
  trace.terminated_by = TerminationReason::iter_limit;

  while (iters < limit) {
    const auto d = feasible_direction(model, problem, options);
    bool progressed = false;
    if (d) {
      const double a = line_search(model, *d, problem, options);
      if (a > 0.0) {
        model = stepped(model, *d, a);
        objective = ttk_objective(model, problem);
        if (!is_feasible(model, problem))
          throw ContractViolation("solve_fd produced an infeasible iterate");
        trace.objectives.push_back(objective);
        trace.feasible_flags.push_back(true);
        trace.moves.emplace_back("descent");
        progressed = true;
      }
    }
    if (!progressed && trace.swaps_taken < options.swap_budget) {
      if (auto swapped = swap_step(model, problem, options)) {
        model = *swapped;
        objective = ttk_objective(model, problem);
        if (!is_feasible(model, problem))
          throw ContractViolation("swap produced an infeasible iterate");
        trace.objectives.push_back(objective);
        trace.feasible_flags.push_back(true);
        trace.moves.emplace_back("swap");
        ++trace.swaps_taken;
        progressed = true;
      }
    }
    if (!progressed) {
      trace.terminated_by =
          d ? TerminationReason::no_direction : TerminationReason::stationary;
      break;
    }
    ++iters;
  }

  return FdResult{std::move(model), std::move(trace)};
}

}  // namespace ttk
