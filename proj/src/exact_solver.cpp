#include "ttk/exact_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>

#include <json.hpp>

#include "ttk/errors.hpp"
#include "ttk/kernels.hpp"
#include "ttk/svm.hpp"
#include "ttk/ttk_solver.hpp"

namespace ttk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using SignVector = std::vector<std::int8_t>;

std::size_t joint_dim(const TransductiveProblem& problem) {
  return static_cast<std::size_t>(std::max(problem.train.dim, problem.test.dim));
}

// Dual coordinate ascent (maximal violating pair) on the generalized hinge
// problem  min 0.5||w||^2 + sum_t cost_t * max(0, gamma_t - y_t (w'x_t + b))
// with unpenalized b. Train instances carry (cost C, gamma 1, y = label);
// assigned test instances carry (cost P, gamma delta, y = sign). The dual
// value of the returned point is a certified lower bound even before full
// convergence, which is what the branch-and-bound pruning relies on.
class PenalizedSmo {
 public:
  PenalizedSmo(const TransductiveProblem& problem, const ExactLimits& limits)
      : problem_(problem),
        C_(problem.C),
        P_(limits.resolve_penalty(problem.C)),
        delta_(limits.margin_delta),
        dim_(joint_dim(problem)),
        n_train_(problem.train.size()),
        n_test_(problem.test.size()) {
    const std::size_t n_all = n_train_ + n_test_;
    points_.assign(n_all, std::vector<double>(dim_, 0.0));
    for (std::size_t i = 0; i < n_train_; ++i)
      for (const auto& [idx, val] : problem.train.instances[i].features)
        points_[i][static_cast<std::size_t>(idx - 1)] = val;
    for (std::size_t j = 0; j < n_test_; ++j)
      for (const auto& [idx, val] : problem.test.instances[j].features)
        points_[n_train_ + j][static_cast<std::size_t>(idx - 1)] = val;
    gram_.assign(n_all * n_all, 0.0);
    for (std::size_t a = 0; a < n_all; ++a)
      for (std::size_t b = a; b < n_all; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) s += points_[a][i] * points_[b][i];
        gram_[a * n_all + b] = s;
        gram_[b * n_all + a] = s;
      }
  }

  struct Result {
    std::vector<double> alpha;  // over train terms then test terms
    LinearModel model;
    double primal = 0.0;
    double dual = 0.0;
    bool satisfied = false;
  };

  // gap_tol: relative duality-gap stop. stop_above: once the dual value
  // certifiably exceeds this ceiling the node is prunable and iteration
  // stops early (the dual stays a valid bound either way).
  Result solve(const SignVector& sign, const std::vector<double>* warm, double gap_tol = 1e-10,
               double stop_above = kInf) const {
    const std::size_t n_all = n_train_ + n_test_;
    std::vector<std::size_t> active;
    active.reserve(n_all);
    for (std::size_t i = 0; i < n_train_; ++i) active.push_back(i);
    for (std::size_t j = 0; j < n_test_; ++j)
      if (sign[j] != 0) active.push_back(n_train_ + j);

    const std::size_t na = active.size();
    std::vector<double> y(na), cost(na), gamma(na), alpha(na, 0.0);
    for (std::size_t t = 0; t < na; ++t) {
      const std::size_t id = active[t];
      if (id < n_train_) {
        y[t] = static_cast<double>(*problem_.train.instances[id].label);
        cost[t] = C_;
        gamma[t] = 1.0;
      } else {
        y[t] = static_cast<double>(sign[id - n_train_]);
        cost[t] = P_;
        gamma[t] = delta_;
      }
      if (warm) alpha[t] = (*warm)[id];
    }

    // u_t = w'x_t maintained through the pair updates.
    std::vector<double> u(na, 0.0);
    for (std::size_t s = 0; s < na; ++s) {
      if (alpha[s] == 0.0) continue;
      const double coef = alpha[s] * y[s];
      const double* krow = gram_.data() + active[s] * n_all;
      for (std::size_t t = 0; t < na; ++t) u[t] += coef * krow[active[t]];
    }

    // Pair updates until the duality gap closes; the gap check also yields
    // the intercept and primal/dual values of the current point.
    const std::size_t gap_stride = 4 * na + 16;
    const std::size_t max_updates = 800 * na + 2000;
    double cur_b = 0.0, cur_primal = kInf, cur_dual = -kInf;
    auto measure = [&]() {
      cur_b = optimal_intercept(y, cost, gamma, u);
      double loss = 0.0;
      for (std::size_t t = 0; t < na; ++t)
        loss += cost[t] * std::max(0.0, gamma[t] - y[t] * (u[t] + cur_b));
      double norm2 = 0.0;  // ||w||^2 = sum_t alpha_t y_t u_t
      for (std::size_t t = 0; t < na; ++t) norm2 += alpha[t] * y[t] * u[t];
      cur_primal = 0.5 * norm2 + loss;
      cur_dual = -0.5 * norm2;
      for (std::size_t t = 0; t < na; ++t) cur_dual += gamma[t] * alpha[t];
      if (cur_dual >= stop_above) return true;
      return cur_primal - cur_dual <= gap_tol * (1.0 + std::abs(cur_primal));
    };

    for (std::size_t iter = 0; iter < max_updates; ++iter) {
      if (iter % gap_stride == 0 && measure()) break;

      // v_t = y_t gamma_t - u_t; optimal when max over I_up <= min over I_low.
      double best_up = -kInf, best_low = kInf;
      std::size_t up = na, low = na;
      for (std::size_t t = 0; t < na; ++t) {
        const double v = y[t] * gamma[t] - u[t];
        const bool in_up = (y[t] > 0.0) ? (alpha[t] < cost[t]) : (alpha[t] > 0.0);
        const bool in_low = (y[t] > 0.0) ? (alpha[t] > 0.0) : (alpha[t] < cost[t]);
        if (in_up && v > best_up) {
          best_up = v;
          up = t;
        }
        if (in_low && v < best_low) {
          best_low = v;
          low = t;
        }
      }
      if (up == na || low == na || best_up - best_low <= 1e-12) break;

      const std::size_t pi = active[up], pj = active[low];
      const double eta =
          gram_[pi * n_all + pi] + gram_[pj * n_all + pj] - 2.0 * gram_[pi * n_all + pj];
      double step = (eta > 1e-14) ? (best_up - best_low) / eta : kInf;
      const double cap_i = (y[up] > 0.0) ? cost[up] - alpha[up] : alpha[up];
      const double cap_j = (y[low] > 0.0) ? alpha[low] : cost[low] - alpha[low];
      step = std::min(step, std::min(cap_i, cap_j));
      if (!(step > 0.0) || !std::isfinite(step)) break;

      alpha[up] += y[up] * step;
      alpha[low] -= y[low] * step;
      const double* ki = gram_.data() + pi * n_all;
      const double* kj = gram_.data() + pj * n_all;
      for (std::size_t t = 0; t < na; ++t) u[t] += step * (ki[active[t]] - kj[active[t]]);
    }

    Result res;
    res.model.w.assign(dim_, 0.0);
    for (std::size_t t = 0; t < na; ++t) {
      if (alpha[t] == 0.0) continue;
      const double coef = alpha[t] * y[t];
      const std::vector<double>& x = points_[active[t]];
      for (std::size_t i = 0; i < dim_; ++i) res.model.w[i] += coef * x[i];
    }

    // Exact 1-D minimization over b of the piecewise-linear loss; the slope
    // only jumps upward at the hinge breakpoints.
    std::vector<double> scores(na);
    for (std::size_t t = 0; t < na; ++t) {
      double s = 0.0;
      const std::vector<double>& x = points_[active[t]];
      for (std::size_t i = 0; i < dim_; ++i) s += res.model.w[i] * x[i];
      scores[t] = s;
    }
    res.model.b = optimal_intercept(y, cost, gamma, scores);

    double loss = 0.0;
    for (std::size_t t = 0; t < na; ++t)
      loss += cost[t] * std::max(0.0, gamma[t] - y[t] * (scores[t] + res.model.b));
    double norm2 = 0.0;
    for (double v : res.model.w) norm2 += v * v;
    res.primal = 0.5 * norm2 + loss;

    double dual = -0.5 * norm2;
    for (std::size_t t = 0; t < na; ++t) dual += gamma[t] * alpha[t];
    res.dual = dual;

    res.satisfied = true;
    for (std::size_t j = 0; j < n_test_; ++j) {
      if (sign[j] == 0) continue;
      double s = res.model.b;
      const std::vector<double>& x = points_[n_train_ + j];
      for (std::size_t i = 0; i < dim_; ++i) s += res.model.w[i] * x[i];
      if (static_cast<double>(sign[j]) * s < 0.5 * delta_) {
        res.satisfied = false;
        break;
      }
    }

    res.alpha.assign(n_all, 0.0);
    for (std::size_t t = 0; t < na; ++t) res.alpha[active[t]] = alpha[t];
    return res;
  }

  double penalty() const { return P_; }
  std::size_t n_test() const { return n_test_; }

 private:
  static double optimal_intercept(const std::vector<double>& y, const std::vector<double>& cost,
                                  const std::vector<double>& gamma,
                                  const std::vector<double>& scores) {
    struct Event {
      double at;
      double jump;
    };
    std::vector<Event> events;
    events.reserve(y.size());
    double slope = 0.0;
    double cost_scale = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
      cost_scale = std::max(cost_scale, cost[t]);
      if (y[t] > 0.0) {
        slope -= cost[t];
        events.push_back({gamma[t] - scores[t], cost[t]});
      } else {
        events.push_back({-gamma[t] - scores[t], cost[t]});
      }
    }
    if (events.empty()) return 0.0;
    std::sort(events.begin(), events.end(),
              [](const Event& a, const Event& b) { return a.at < b.at; });
    const double zero_tol = 1e-12 * std::max(1.0, cost_scale);
    if (slope >= -zero_tol) return events.front().at - 1.0;
    for (std::size_t i = 0; i < events.size(); ++i) {
      slope += events[i].jump;
      if (slope > zero_tol) return events[i].at;
      if (slope >= -zero_tol) {
        if (i + 1 < events.size()) return 0.5 * (events[i].at + events[i + 1].at);
        return events[i].at + 1.0;
      }
    }
    return events.back().at + 1.0;
  }

  const TransductiveProblem& problem_;
  double C_;
  double P_;
  double delta_;
  std::size_t dim_;
  std::size_t n_train_;
  std::size_t n_test_;
  std::vector<std::vector<double>> points_;
  std::vector<double> gram_;
};

double penalty_free_objective(const PenalizedSmo::Result& res, const TransductiveProblem& problem) {
  return svm_objective(res.model, problem.train, problem.C);
}

std::vector<std::size_t> positive_indices(const SignVector& sign) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < sign.size(); ++j)
    if (sign[j] > 0) out.push_back(j);
  return out;
}

// Lexicographic unranking of k-subsets of {0..n-1}.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    if (r > (std::numeric_limits<std::uint64_t>::max)() / (n - i)) return 0;  // overflow guard
    r = r * (n - i) / (i + 1);
  }
  return r;
}

std::vector<std::size_t> unrank_subset(std::uint64_t rank, std::size_t n, std::size_t k) {
  std::vector<std::size_t> out;
  out.reserve(k);
  std::size_t v = 0;
  for (std::size_t slot = k; slot > 0; --slot) {
    while (true) {
      const std::uint64_t with_v = binomial(n - 1 - v, slot - 1);
      if (rank < with_v) {
        out.push_back(v);
        ++v;
        break;
      }
      rank -= with_v;
      ++v;
    }
  }
  return out;
}

}  // namespace

double ExactLimits::resolve_penalty(double C) const {
  if (penalty_weight > 0.0) return penalty_weight;
  return 1e3 * C;
}

void ExactLimits::validate(double C) const {
  if (!(margin_delta > 0.0)) throw ArgumentError("exact limits: margin_delta must be positive");
  if (max_test < 1) throw ArgumentError("exact limits: max_test must be at least 1");
  if (penalty_weight > 0.0 && penalty_weight < 1e3 * C)
    throw ArgumentError("exact limits: penalty_weight must be at least 1000*C");
}

std::string Certificate::to_json() const {
  nlohmann::json j;
  j["chosen_set"] = chosen_set;
  j["objective"] = objective;
  j["nodes_explored"] = nodes_explored;
  j["bound_gap"] = bound_gap;
  return j.dump();
}

AssignedSolution solve_assigned(const TransductiveProblem& problem,
                                const std::vector<std::size_t>& positive_set,
                                const ExactLimits& limits) {
  problem.validate();
  limits.validate(problem.C);
  if (positive_set.size() != problem.k)
    throw ArgumentError("solve_assigned: |positive_set| must equal k");
  SignVector sign(problem.test.size(), -1);
  for (std::size_t j : positive_set) {
    if (j >= problem.test.size()) throw ArgumentError("solve_assigned: test index out of range");
    if (sign[j] > 0) throw ArgumentError("solve_assigned: duplicate test index");
    sign[j] = +1;
  }

  PenalizedSmo smo(problem, limits);
  const auto res = smo.solve(sign, nullptr);
  return AssignedSolution{res.model, penalty_free_objective(res, problem), res.primal, res.dual,
                          res.satisfied};
}

namespace {

struct BnbNode {
  SignVector sign;
  std::size_t depth = 0;
  double bound = -kInf;
  std::vector<double> alpha;
};

// The search runs with the robust margin_delta, but the "> 0" semantics of
// the original constraint admit scores arbitrarily close to zero. Once the
// optimal assignment is known, re-solve it with a near-zero margin so the
// reported objective is not biased upward by the encoding. Falls back to the
// unpolished model when the tiny margin is not numerically attainable.
void polish_incumbent(const TransductiveProblem& problem, const ExactLimits& limits,
                      const SignVector& sign, ExactResult& out) {
  ExactLimits fine = limits;
  fine.margin_delta = 1e-10;
  PenalizedSmo smo(problem, fine);
  const auto res = smo.solve(sign, nullptr);
  if (!res.satisfied) return;
  const double objective = svm_objective(res.model, problem.train, problem.C);
  if (objective <= out.certificate.objective && is_feasible(res.model, problem)) {
    out.model = res.model;
    out.certificate.objective = objective;
  }
}

}  // namespace

ExactResult solve_exact(const TransductiveProblem& problem, const ExactLimits& limits) {
  problem.validate();
  limits.validate(problem.C);
  const std::size_t n = problem.test.size();
  const std::size_t k = problem.k;
  if (n > limits.max_test)
    throw CapacityError("solve_exact: |test| = " + std::to_string(n) + " exceeds max_test = " +
                        std::to_string(limits.max_test));

  PenalizedSmo smo(problem, limits);
  std::size_t nodes = 0;

  SignVector all_free(n, 0);
  const auto root = smo.solve(all_free, nullptr);
  ++nodes;

  // Branch on the most ambiguous instances first, judged by the root
  // relaxation's scores.
  const auto root_scores = score_all(root.model, problem.test);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double va = std::abs(root_scores[a]), vb = std::abs(root_scores[b]);
    if (va != vb) return va < vb;
    return a < b;
  });

  double inc_value = kInf;
  PenalizedSmo::Result inc;
  SignVector inc_sign;
  auto offer_incumbent = [&](const PenalizedSmo::Result& res, const SignVector& sign) {
    if (res.satisfied && res.primal < inc_value) {
      inc_value = res.primal;
      inc = res;
      inc_sign = sign;
    }
  };

  {
    // Warm incumbent: the top-k assignment under the root relaxation model.
    SignVector sign(n, -1);
    for (std::size_t j : top_k_of_scores(root_scores, k)) sign[j] = +1;
    const auto leaf = smo.solve(sign, &root.alpha);
    ++nodes;
    offer_incumbent(leaf, sign);
  }

  auto prune_slack = [&]() { return 1e-9 * (1.0 + std::abs(std::min(inc_value, 1e300))); };

  std::vector<BnbNode> stack;
  stack.push_back(BnbNode{all_free, 0, root.dual, root.alpha});
  bool budget_hit = false;
  double frontier_min = kInf;

  while (!stack.empty()) {
    if (nodes >= limits.max_nodes) {
      budget_hit = true;
      for (const BnbNode& pending : stack) frontier_min = std::min(frontier_min, pending.bound);
      break;
    }
    BnbNode node = std::move(stack.back());
    stack.pop_back();
    if (node.bound >= inc_value - prune_slack()) continue;

    std::size_t pos = 0, neg = 0;
    for (std::int8_t s : node.sign) {
      if (s > 0) ++pos;
      if (s < 0) ++neg;
    }

    if (pos == k || n - neg == k) {
      SignVector sign = node.sign;
      const std::int8_t fill = (pos == k) ? -1 : +1;
      for (std::int8_t& s : sign)
        if (s == 0) s = fill;
      const auto leaf = smo.solve(sign, &node.alpha);
      ++nodes;
      offer_incumbent(leaf, sign);
      continue;
    }

    const std::size_t var = order[node.depth];
    BnbNode children[2];
    double child_bounds[2] = {kInf, kInf};
    int n_children = 0;
    for (int s = 0; s < 2; ++s) {
      const std::int8_t assign = (s == 0) ? std::int8_t{+1} : std::int8_t{-1};
      const std::size_t pos2 = pos + (assign > 0 ? 1 : 0);
      const std::size_t neg2 = neg + (assign < 0 ? 1 : 0);
      if (pos2 > k || n - neg2 < k) continue;
      SignVector sign = node.sign;
      sign[var] = assign;
      const auto res = smo.solve(sign, &node.alpha);
      ++nodes;
      if (node.depth + 1 == n) {
        offer_incumbent(res, sign);
        continue;
      }
      if (res.dual >= inc_value - prune_slack()) continue;
      children[n_children] = BnbNode{std::move(sign), node.depth + 1, res.dual, res.alpha};
      child_bounds[n_children] = res.dual;
      ++n_children;
    }
    // Depth-first, better-bound child explored first (pushed last).
    if (n_children == 2 && child_bounds[0] < child_bounds[1]) std::swap(children[0], children[1]);
    for (int i = 0; i < n_children; ++i) stack.push_back(std::move(children[i]));
  }

  if (!std::isfinite(inc_value))
    throw ContractViolation("solve_exact: no sign assignment was satisfiable");

  ExactResult out;
  out.model = inc.model;
  out.certificate.chosen_set = positive_indices(inc_sign);
  out.certificate.objective = penalty_free_objective(inc, problem);
  out.certificate.nodes_explored = nodes;
  out.certificate.bound_gap =
      budget_hit ? std::max(0.0, inc_value - std::min(frontier_min, inc_value)) : 0.0;

  polish_incumbent(problem, limits, inc_sign, out);

  if (!is_feasible(out.model, problem))
    throw ContractViolation("solve_exact: incumbent model violates the cardinality constraint");
  return out;
}

ExactResult solve_enumerate(const TransductiveProblem& problem, const ExactLimits& limits) {
  problem.validate();
  limits.validate(problem.C);
  const std::size_t n = problem.test.size();
  const std::size_t k = problem.k;
  if (n > limits.max_test)
    throw CapacityError("solve_enumerate: |test| exceeds max_test");
  const std::uint64_t total = binomial(n, k);
  if (total == 0 || total > 20000000)
    throw CapacityError("solve_enumerate: too many assignments to enumerate");

  PenalizedSmo smo(problem, limits);

  const std::uint64_t chunk = 512;
  const std::uint64_t nchunks = (total + chunk - 1) / chunk;
  std::vector<double> chunk_best(nchunks, kInf);
  std::vector<std::uint64_t> chunk_rank(nchunks, 0);

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(nchunks); ++c) {
    const std::uint64_t lo = static_cast<std::uint64_t>(c) * chunk;
    const std::uint64_t hi = std::min(lo + chunk, total);
    double best = kInf;
    std::uint64_t best_rank = 0;
    for (std::uint64_t r = lo; r < hi; ++r) {
      SignVector sign(n, -1);
      for (std::size_t j : unrank_subset(r, n, k)) sign[j] = +1;
      const auto res = smo.solve(sign, nullptr);
      if (res.satisfied && res.primal < best) {
        best = res.primal;
        best_rank = r;
      }
    }
    chunk_best[static_cast<std::size_t>(c)] = best;
    chunk_rank[static_cast<std::size_t>(c)] = best_rank;
  }

  double best = kInf;
  std::uint64_t best_rank = 0;
  for (std::size_t c = 0; c < nchunks; ++c) {
    if (chunk_best[c] < best) {
      best = chunk_best[c];
      best_rank = chunk_rank[c];
    }
  }
  if (!std::isfinite(best))
    throw ContractViolation("solve_enumerate: no sign assignment was satisfiable");

  SignVector sign(n, -1);
  for (std::size_t j : unrank_subset(best_rank, n, k)) sign[j] = +1;
  const auto res = smo.solve(sign, nullptr);

  ExactResult out;
  out.model = res.model;
  out.certificate.chosen_set = positive_indices(sign);
  out.certificate.objective = penalty_free_objective(res, problem);
  out.certificate.nodes_explored = static_cast<std::size_t>(total);
  out.certificate.bound_gap = 0.0;
  polish_incumbent(problem, limits, sign, out);
  if (!is_feasible(out.model, problem))
    throw ContractViolation("solve_enumerate: best model violates the cardinality constraint");
  return out;
}

}  // namespace ttk
