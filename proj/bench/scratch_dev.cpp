// Temporary development diagnostics; replaced by the kernel benchmark.
#include <chrono>
#include <cstdio>
#include <random>

#include "ttk/errors.hpp"

#include "ttk/bench.hpp"
#include "ttk/dataset.hpp"
#include "ttk/exact_solver.hpp"
#include "ttk/linear_model.hpp"
#include "ttk/svm.hpp"
#include "ttk/ttk_solver.hpp"

using namespace ttk;

namespace {

TransductiveProblem random_tiny(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> dims(1, 3);
  const int d = dims(rng);
  std::uniform_int_distribution<std::size_t> ntr(4, 10), nte(3, 8);
  TransductiveProblem p;
  p.train.dim = p.test.dim = d;
  const std::size_t n_train = ntr(rng), n_test = nte(rng);
  for (std::size_t i = 0; i < n_train; ++i) {
    Instance inst;
    for (int f = 1; f <= d; ++f) inst.features.emplace_back(f, u(rng));
    inst.label = (i % 2 == 0) ? +1 : -1;
    if (i >= 2) inst.label = (u(rng) > 0.0) ? +1 : -1;
    p.train.instances.push_back(inst);
  }
  for (std::size_t j = 0; j < n_test; ++j) {
    Instance inst;
    for (int f = 1; f <= d; ++f) inst.features.emplace_back(f, u(rng));
    inst.label = (u(rng) > 0.0) ? +1 : -1;
    p.test.instances.push_back(inst);
  }
  std::uniform_int_distribution<std::size_t> kk(1, std::min<std::size_t>(4, n_test));
  p.k = kk(rng);
  p.C = 1.0;
  return p;
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;

  // 1. random tiny problems: exact vs enumerate vs fd sandwich
  {
    const auto t0 = clock::now();
    int mism = 0, fd_worse = 0;
    double max_rel_gap = 0.0;
    for (std::uint64_t s = 0; s < 50; ++s) {
      auto p = random_tiny(s);
      ExactLimits lim;
      auto ex = solve_exact(p, lim);
      auto en = solve_enumerate(p, lim);
      const double rel = std::abs(ex.certificate.objective - en.certificate.objective) /
                         std::max(1.0, std::abs(en.certificate.objective));
      if (rel > 1e-6) {
        ++mism;
        std::printf("  seed %llu: exact %.9f enum %.9f nodes %zu\n",
                    (unsigned long long)s, ex.certificate.objective, en.certificate.objective,
                    ex.certificate.nodes_explored);
      }
      SvmConfig scfg; scfg.C = p.C;
      auto svm = train_svm(p.train, scfg);
      LinearModel w0 = svm.model;
      w0.w.resize(std::max(p.train.dim, p.test.dim), 0.0);
      LinearModel init;
      try {
        init = adjust_intercept(w0, p.test, p.k);
      } catch (const TieError&) { continue; }
      auto fd = solve_fd(p, init, TtkOptions{});
      const double o_init = ttk_objective(init, p);
      const double o_fd = ttk_objective(fd.model, p);
      const double o_ex = ex.certificate.objective;
      if (o_fd > o_init + 1e-9 || o_ex > o_fd + 1e-9) {
        ++fd_worse;
        std::printf("  seed %llu sandwich: exact %.6f fd %.6f init %.6f\n",
                    (unsigned long long)s, o_ex, o_fd, o_init);
      }
      max_rel_gap = std::max(max_rel_gap, (o_fd - o_ex) / std::max(1.0, std::abs(o_ex)));
    }
    const double dt = std::chrono::duration<double>(clock::now() - t0).count();
    std::printf("tiny problems: mismatches=%d sandwich_violations=%d max_rel_fd_gap=%.4f (%.2fs)\n",
                mism, fd_worse, max_rel_gap, dt);
  }

  // 2. figure scenario
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto t0 = clock::now();
    auto p = make_synthetic_figure(seed);
    const double gen_s = std::chrono::duration<double>(clock::now() - t0).count();

    SvmConfig scfg; scfg.C = 1.0;
    auto svm = train_svm(p.train, scfg);
    auto thr = adjust_intercept(svm.model, p.test, 4);
    const double prec_thr = precision_at_k(thr, p.test, 4);

    const auto t1 = clock::now();
    auto fd = solve_fd(p, thr, TtkOptions{});
    const double fd_s = std::chrono::duration<double>(clock::now() - t1).count();
    const double prec_fd = precision_at_k(fd.model, p.test, 4);

    const auto t2 = clock::now();
    ExactLimits lim;
    lim.max_test = 40;
    auto ex = solve_exact(p, lim);
    const double ex_s = std::chrono::duration<double>(clock::now() - t2).count();
    const double prec_ex = precision_at_k(ex.model, p.test, 4);

    std::printf(
        "figure seed %llu: thr=%.2f fd=%.2f (obj %.3f->%.3f, %zu moves, %zu swaps, %.2fs) "
        "exact=%.2f (obj %.3f, %zu nodes, %.2fs) gen %.2fs\n",
        (unsigned long long)seed, prec_thr, prec_fd, ttk_objective(thr, p),
        ttk_objective(fd.model, p), fd.trace.objectives.size() - 1, fd.trace.swaps_taken, fd_s,
        prec_ex, ex.certificate.objective, ex.certificate.nodes_explored, ex_s, gen_s);
  }

  return 0;
}
