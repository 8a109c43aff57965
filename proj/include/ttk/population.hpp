#ifndef TTK_POPULATION_HPP
#define TTK_POPULATION_HPP

#include <array>
#include <string>
#include <vector>

namespace ttk::pop {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

// Two-component Gaussian mixture in the plane; lambda is the positive-class
// weight. Fixed at two dimensions: direction change is fully exhibited there
// and the unit circle admits exhaustive scans.
struct GaussianMixture {
  double lambda = 0.5;
  Vec2 mean_pos{0.0, 0.0};
  Vec2 mean_neg{0.0, 0.0};
  Mat2 cov_pos{{{1.0, 0.0}, {0.0, 1.0}}};
  Mat2 cov_neg{{{1.0, 0.0}, {0.0, 1.0}}};

  // Checks lambda in (0,1) and symmetric positive-definiteness via leading
  // minors. Throws ArgumentError.
  void validate() const;

  std::string to_json() const;
  static GaussianMixture from_json(const std::string& text);
};

struct QuantileSolution {
  Vec2 w{1.0, 0.0};  // unit length
  double b = 0.0;
  double q = 0.0;
  double precision = 0.0;
  double kkt_residual = 0.0;
};

// Gaussian mass of the open halfspace {x : w'x + b > 0}:
// Phi((w'mean + b) / sqrt(w' cov w)).
double region_mass(const Vec2& w, double b, const Vec2& mean, const Mat2& cov);

// Analytic gradient of region_mass with respect to (w1, w2, b).
std::array<double, 3> region_mass_gradient(const Vec2& w, double b, const Vec2& mean,
                                           const Mat2& cov);

double mixture_mass(const Vec2& w, double b, const GaussianMixture& mixture);

// Unique b with mixture_mass(w, b) = q, found by bisection; the residual
// after root-finding is at most 1e-9.
double quantile_intercept(const Vec2& w, const GaussianMixture& mixture, double q);

// lambda * mu_plus(region) / q at the quantile-matching intercept.
double precision_of(const Vec2& w, const GaussianMixture& mixture, double q);

// Maximizes precision_of over unit directions by grid scan plus
// golden-section refinement to 1e-6 in angle. Ties keep the lowest angle.
QuantileSolution optimize_direction(const GaussianMixture& mixture, double q,
                                    std::size_t grid_size);

// Normalized norm of the component of grad mu_plus orthogonal to
// grad mu_minus, both taken over (w, b) by central differences; zero means
// exactly collinear. Throws ArgumentError when either gradient is degenerate.
double kkt_collinearity_residual(const Vec2& w, double b, const GaussianMixture& mixture,
                                 double fd_step);

struct TheoremReport {
  double angle_degrees = 0.0;
  QuantileSolution first;
  QuantileSolution second;

  std::string to_json() const;
};

// Optimal directions at two quantiles and the angle between them.
TheoremReport theorem_demo(const GaussianMixture& mixture, double q1, double q2,
                           std::size_t grid_size = 720);

// (theta, precision) pairs over the direction grid, for plotting.
std::vector<std::pair<double, double>> direction_precision_scan(const GaussianMixture& mixture,
                                                                double q, std::size_t grid_size);

}  // namespace ttk::pop

#endif  // TTK_POPULATION_HPP
