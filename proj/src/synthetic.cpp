#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>
#include <cstdio>
#include <cstdlib>

#include "ttk/dataset.hpp"
#include "ttk/errors.hpp"
#include "ttk/exact_solver.hpp"
#include "ttk/linear_model.hpp"
#include "ttk/svm.hpp"
#include "ttk/ttk_solver.hpp"

namespace ttk {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Hand-rolled Box-Muller so generated datasets are identical across standard
// libraries.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

  double uniform() {  // (0, 1]
    return (static_cast<double>(rng_() >> 11) + 1.0) * (1.0 / 9007199254740992.0);
  }

  double normal() {
    if (have_) {
      have_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * kPi * uniform();
    spare_ = r * std::sin(theta);
    have_ = true;
    return r * std::cos(theta);
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
  bool have_ = false;
  double spare_ = 0.0;
};

Instance point(double x, double y, int label) {
  Instance inst;
  inst.features = {{1, x}, {2, y}};
  inst.label = label;
  return inst;
}

struct ClusterSpec {
  double cx, cy, sx, sy;
  int label;
  std::size_t count;
};

// Per-set composition: elongated main clusters at x = +/-0.9, a tight pocket
// of positives low-right, and two negative intruders high-right. The pocket
// and the intruders compete for the largest horizontal scores, which is what
// makes plain intercept thresholding select a mixed region.
// TODO(dev): temporary env-tunable geometry for parameter sweeps
struct Geometry { double px, py, ix, iy, bx, sy; };
Geometry geom() {
  Geometry g{1.55, -0.70, 2.10, 1.10, 0.75, 1.30};
  if (const char* e = std::getenv("TTK_SYNTH_PARAMS"))
    std::sscanf(e, "%lf,%lf,%lf,%lf,%lf,%lf", &g.px, &g.py, &g.ix, &g.iy, &g.bx, &g.sy);
  return g;
}

std::vector<ClusterSpec> make_clusters() {
  const Geometry g = geom();
  return {
      {+g.bx, 0.0, 0.35, g.sy, +1, 18},
      {g.px, g.py, 0.15, 0.45, +1, 4},
      {-g.bx, 0.0, 0.35, g.sy, -1, 16},
      {g.ix, g.iy, 0.12, 0.12, -1, 2},
  };
}

Dataset sample_set(GaussianSource& g) {
  Dataset out;
  out.dim = 2;
  for (const ClusterSpec& c : make_clusters())
    for (std::size_t i = 0; i < c.count; ++i)
      out.instances.push_back(point(c.cx + c.sx * g.normal(), c.cy + c.sy * g.normal(), c.label));
  std::shuffle(out.instances.begin(), out.instances.end(), g.rng());
  return out;
}

// min over s >= 0 of s^2/2 + C * sum max(0, 1 - s * m_i), by ternary search
// (the function is convex in s).
double scale_optimized_objective(const std::vector<double>& margins, double C) {
  auto h = [&](double s) {
    double loss = 0.0;
    for (double m : margins) loss += std::max(0.0, 1.0 - s * m);
    return 0.5 * s * s + C * loss;
  };
  double lo = 0.0, hi = 100.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (h(m1) < h(m2))
      hi = m2;
    else
      lo = m1;
  }
  return h(0.5 * (lo + hi));
}

struct ScanOutcome {
  bool has_all_positive = false;
  double best_all_positive = 0.0;
  double best_mixed = 0.0;
  bool has_mixed = false;
  double best_all_theta = 0.0;
  double best_mixed_theta = 0.0;
};

// Over a direction grid: threshold each direction to exactly 4 test
// positives and score its scale-optimized training objective, split by
// whether the selected four are all truly positive.
ScanOutcome scan_directions(const Dataset& train, const Dataset& test, std::size_t k, double C) {
  ScanOutcome out;
  out.best_all_positive = out.best_mixed = 1e300;
  for (std::size_t gi = 0; gi < 720; ++gi) {
    const double theta = 2.0 * kPi * static_cast<double>(gi) / 720.0;
    const double ux = std::cos(theta), uy = std::sin(theta);

    std::vector<double> ts(test.size());
    for (std::size_t j = 0; j < test.size(); ++j)
      ts[j] = ux * test.instances[j].feature(1) + uy * test.instances[j].feature(2);
    std::vector<std::size_t> order(test.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return ts[a] > ts[b]; });
    if (ts[order[k - 1]] == ts[order[k]]) continue;
    const double shift = -0.5 * (ts[order[k - 1]] + ts[order[k]]);

    bool all_positive = true;
    for (std::size_t r = 0; r < k; ++r)
      if (*test.instances[order[r]].label < 0) all_positive = false;

    std::vector<double> margins(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) {
      const Instance& inst = train.instances[i];
      margins[i] = static_cast<double>(*inst.label) *
                   (ux * inst.feature(1) + uy * inst.feature(2) + shift);
    }
    const double obj = scale_optimized_objective(margins, C);
    if (all_positive) {
      out.has_all_positive = true;
      if (obj < out.best_all_positive) { out.best_all_positive = obj; out.best_all_theta = theta; }
    } else {
      out.has_mixed = true;
      if (obj < out.best_mixed) { out.best_mixed = obj; out.best_mixed_theta = theta; }
    }
  }
  return out;
}

}  // namespace

TransductiveProblem make_synthetic_figure(std::uint64_t seed) {
  constexpr std::size_t kTopK = 4;
  constexpr double kC = 1.0;

  int rej_tie = 0, rej_prec = 0, rej_nopos = 0, rej_margin = 0, rej_fd = 0, rej_exact = 0;  // TODO(dev): remove
  std::vector<double> ratios;  // TODO(dev): remove
  const char* survey = std::getenv("TTK_SYNTH_SURVEY");
  const std::uint64_t max_attempts = survey ? std::strtoull(survey, nullptr, 10) : 400;
  int accepted = 0;
  for (std::uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
    GaussianSource g(seed * 0x9E3779B97F4A7C15ULL + attempt + 1);
    TransductiveProblem problem;
    problem.train = sample_set(g);
    problem.test = sample_set(g);
    problem.k = kTopK;
    problem.C = kC;

    // Reject draws until the scenario holds: thresholding the trained SVM
    // hits precision exactly 1/2, some rotation selects four true positives,
    // and the best all-positive threshold beats every mixed threshold by a
    // clear objective margin (so the exact optimum selects positives only).
    SvmConfig cfg;
    cfg.C = kC;
    const LinearModel svm = train_svm(problem.train, cfg).model;
    LinearModel thresholded;
    try {
      thresholded = adjust_intercept(svm, problem.test, kTopK);
    } catch (const TieError&) {
      ++rej_tie;
      continue;
    }
    const double dbg_prec = precision_at_k(thresholded, problem.test, kTopK);
    if (dbg_prec != 0.5) { ++rej_prec; if (std::getenv("TTK_SYNTH_DEBUG")) std::fprintf(stderr, "attempt %llu prec=%.2f\n", (unsigned long long)attempt, dbg_prec); continue; }

    const ScanOutcome scan = scan_directions(problem.train, problem.test, kTopK, kC);
    if (!scan.has_all_positive) { ++rej_nopos; continue; }
    if (scan.has_mixed) ratios.push_back(scan.best_all_positive / scan.best_mixed);
    double margin_gate = 1.0;  // TODO(dev): freeze
    if (const char* e = std::getenv("TTK_SYNTH_MARGIN")) margin_gate = std::atof(e);
    if (scan.has_mixed && !(scan.best_all_positive <= margin_gate * scan.best_mixed)) {
      ++rej_margin;
      continue;
    }

    // Final gates: the descent solver must recover an all-positive top-4
    // from the thresholded start, and the exact solver must confirm that
    // the global optimum selects positives only.
    const auto fd = solve_fd(problem, thresholded, TtkOptions{});
    if (precision_at_k(fd.model, problem.test, kTopK) != 1.0) { ++rej_fd; continue; }
    ExactLimits lim;
    lim.max_test = 40;
    const auto exact = solve_exact(problem, lim);
    if (precision_at_k(exact.model, problem.test, kTopK) != 1.0) { ++rej_exact; continue; }

    if (survey) { ++accepted; continue; }
    return problem;
  }
  if (survey) {
    std::sort(ratios.begin(), ratios.end());
    std::fprintf(stderr, "survey: acc=%d/%llu tie=%d prec=%d nopos=%d margin=%d fd=%d exact=%d ratio[min/med]=%.3f/%.3f\n",
                 accepted, (unsigned long long)max_attempts, rej_tie, rej_prec, rej_nopos, rej_margin, rej_fd, rej_exact,
                 ratios.empty() ? -1.0 : ratios.front(),
                 ratios.empty() ? -1.0 : ratios[ratios.size() / 2]);
  }
  if (std::getenv("TTK_SYNTH_DEBUG")) std::fprintf(stderr, "rejects: tie=%d prec=%d nopos=%d margin=%d\n", rej_tie, rej_prec, rej_nopos, rej_margin);
  throw ContractViolation("make_synthetic_figure: no acceptable draw after 400 attempts");
}

}  // namespace ttk
