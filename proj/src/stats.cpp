#include "ttk/stats.hpp"

#include <cmath>
#include <limits>

#include "ttk/errors.hpp"

namespace ttk::stats {

namespace {

double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw ArgumentError("incomplete_beta: a, b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_bt =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double bt = std::exp(ln_bt);
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_cf(a, b, x) / a;
  return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double dof) {
  if (!(dof > 0.0)) throw ArgumentError("student_t_cdf: dof must be positive");
  if (t == 0.0) return 0.5;
  const double tail = 0.5 * incomplete_beta(0.5 * dof, 0.5, dof / (dof + t * t));
  return (t > 0.0) ? 1.0 - tail : tail;
}

TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b,
                          double alpha) {
  if (a.size() != b.size()) throw ArgumentError("paired_t_test: sample sizes differ");
  if (a.size() < 2) throw ArgumentError("paired_t_test: need at least 2 paired samples");

  const std::size_t n = a.size();
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (a[i] - b[i]) - mean;
    ss += r * r;
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));

  TTestResult res;
  if (sd == 0.0) {
    res.degenerate = true;
    if (mean == 0.0) {
      res.t = 0.0;
      res.p = 1.0;
      res.verdict = Verdict::tie;
    } else {
      res.t = (mean > 0.0) ? std::numeric_limits<double>::infinity()
                           : -std::numeric_limits<double>::infinity();
      res.p = 0.0;
      res.verdict = (mean > 0.0) ? Verdict::a_better : Verdict::b_better;
    }
    return res;
  }

  res.t = mean / (sd / std::sqrt(static_cast<double>(n)));
  const double dof = static_cast<double>(n - 1);
  res.p = incomplete_beta(0.5 * dof, 0.5, dof / (dof + res.t * res.t));
  if (res.p >= alpha)
    res.verdict = Verdict::tie;
  else
    res.verdict = (mean > 0.0) ? Verdict::a_better : Verdict::b_better;
  return res;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::a_better:
      return "a_better";
    case Verdict::b_better:
      return "b_better";
    case Verdict::tie:
      return "tie";
  }
  return "tie";
}

}  // namespace ttk::stats
