#ifndef TTK_STATS_HPP
#define TTK_STATS_HPP

#include <vector>

namespace ttk::stats {

// Regularized incomplete beta function I_x(a, b), evaluated with the
// modified-Lentz continued fraction.
double incomplete_beta(double a, double b, double x);

// P(T <= t) for Student's t with dof degrees of freedom.
double student_t_cdf(double t, double dof);

enum class Verdict { a_better, b_better, tie };

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  Verdict verdict = Verdict::tie;
  // Zero-variance differences with nonzero mean: verdict decided by sign,
  // p reported as 0.
  bool degenerate = false;
};

// Two-sided paired-differences t-test on d = a - b with sample sd and
// n - 1 degrees of freedom. Requires |a| = |b| >= 2.
TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b,
                          double alpha);

const char* verdict_name(Verdict v);

}  // namespace ttk::stats

#endif  // TTK_STATS_HPP
