#include "ttk/population.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "ttk/errors.hpp"

namespace ttk::pop {

namespace {

constexpr double kPi = 3.14159265358979323846;

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double norm_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi); }

double quad_form(const Vec2& w, const Mat2& cov) {
  return w[0] * (cov[0][0] * w[0] + cov[0][1] * w[1]) +
         w[1] * (cov[1][0] * w[0] + cov[1][1] * w[1]);
}

Vec2 mat_vec(const Mat2& cov, const Vec2& w) {
  return Vec2{cov[0][0] * w[0] + cov[0][1] * w[1], cov[1][0] * w[0] + cov[1][1] * w[1]};
}

void check_spd(const Mat2& cov, const char* name) {
  if (cov[0][1] != cov[1][0])
    throw ArgumentError(std::string(name) + ": covariance must be symmetric");
  if (!(cov[0][0] > 0.0) || !(cov[0][0] * cov[1][1] - cov[0][1] * cov[1][0] > 0.0))
    throw ArgumentError(std::string(name) + ": covariance must be positive-definite");
}

Mat2 mat_from_json(const nlohmann::json& j) {
  Mat2 m;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m[r][c] = j.at(r).at(c).get<double>();
  return m;
}

nlohmann::json mat_to_json(const Mat2& m) {
  return nlohmann::json::array({{m[0][0], m[0][1]}, {m[1][0], m[1][1]}});
}

nlohmann::json solution_to_json(const QuantileSolution& s) {
  nlohmann::json j;
  j["w"] = {s.w[0], s.w[1]};
  j["b"] = s.b;
  j["q"] = s.q;
  j["precision"] = s.precision;
  j["kkt_residual"] = s.kkt_residual;
  return j;
}

}  // namespace

void GaussianMixture::validate() const {
  if (!(lambda > 0.0 && lambda < 1.0)) throw ArgumentError("mixture: lambda must lie in (0,1)");
  check_spd(cov_pos, "mixture cov_pos");
  check_spd(cov_neg, "mixture cov_neg");
}

std::string GaussianMixture::to_json() const {
  nlohmann::json j;
  j["lambda"] = lambda;
  j["mean_pos"] = {mean_pos[0], mean_pos[1]};
  j["mean_neg"] = {mean_neg[0], mean_neg[1]};
  j["cov_pos"] = mat_to_json(cov_pos);
  j["cov_neg"] = mat_to_json(cov_neg);
  return j.dump();
}

GaussianMixture GaussianMixture::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  GaussianMixture m;
  m.lambda = j.at("lambda").get<double>();
  m.mean_pos = {j.at("mean_pos").at(0).get<double>(), j.at("mean_pos").at(1).get<double>()};
  m.mean_neg = {j.at("mean_neg").at(0).get<double>(), j.at("mean_neg").at(1).get<double>()};
  m.cov_pos = mat_from_json(j.at("cov_pos"));
  m.cov_neg = mat_from_json(j.at("cov_neg"));
  m.validate();
  return m;
}

double region_mass(const Vec2& w, double b, const Vec2& mean, const Mat2& cov) {
  const double s2 = quad_form(w, cov);
  if (!(s2 > 0.0)) throw ArgumentError("region_mass: w must be nonzero");
  return norm_cdf((w[0] * mean[0] + w[1] * mean[1] + b) / std::sqrt(s2));
}

std::array<double, 3> region_mass_gradient(const Vec2& w, double b, const Vec2& mean,
                                           const Mat2& cov) {
  const double s2 = quad_form(w, cov);
  if (!(s2 > 0.0)) throw ArgumentError("region_mass_gradient: w must be nonzero");
  const double sigma = std::sqrt(s2);
  const double num = w[0] * mean[0] + w[1] * mean[1] + b;
  const double z = num / sigma;
  const double phi = norm_pdf(z);
  const Vec2 cw = mat_vec(cov, w);
  std::array<double, 3> g;
  // d z / d w_i = mean_i / sigma - num * (cov w)_i / sigma^3
  g[0] = phi * (mean[0] / sigma - num * cw[0] / (s2 * sigma));
  g[1] = phi * (mean[1] / sigma - num * cw[1] / (s2 * sigma));
  g[2] = phi / sigma;
  return g;
}

double mixture_mass(const Vec2& w, double b, const GaussianMixture& mixture) {
  return mixture.lambda * region_mass(w, b, mixture.mean_pos, mixture.cov_pos) +
         (1.0 - mixture.lambda) * region_mass(w, b, mixture.mean_neg, mixture.cov_neg);
}

double quantile_intercept(const Vec2& w, const GaussianMixture& mixture, double q) {
  if (!(q > 0.0 && q < 1.0)) throw ArgumentError("quantile_intercept: q must lie in (0,1)");
  const double s2 = quad_form(w, mixture.cov_pos) + quad_form(w, mixture.cov_neg);
  if (!(s2 > 0.0)) throw ArgumentError("quantile_intercept: w must be nonzero");
  const double scale = std::sqrt(s2) + std::abs(w[0] * mixture.mean_pos[0]) +
                       std::abs(w[1] * mixture.mean_pos[1]) +
                       std::abs(w[0] * mixture.mean_neg[0]) +
                       std::abs(w[1] * mixture.mean_neg[1]) + 1.0;

  double lo = -scale, hi = scale;
  while (mixture_mass(w, lo, mixture) >= q) lo *= 2.0;
  while (mixture_mass(w, hi, mixture) <= q) hi *= 2.0;
  // The mass is strictly increasing in b, so bisection converges to the
  // unique root; 200 halvings push the interval to machine width.
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (mixture_mass(w, mid, mixture) < q)
      lo = mid;
    else
      hi = mid;
  }
  const double b = 0.5 * (lo + hi);
  return b;
}

double precision_of(const Vec2& w, const GaussianMixture& mixture, double q) {
  const double b = quantile_intercept(w, mixture, q);
  return mixture.lambda * region_mass(w, b, mixture.mean_pos, mixture.cov_pos) / q;
}

std::vector<std::pair<double, double>> direction_precision_scan(const GaussianMixture& mixture,
                                                                double q, std::size_t grid_size) {
  mixture.validate();
  std::vector<std::pair<double, double>> scan(grid_size);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(grid_size);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double theta = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(grid_size);
    const Vec2 w{std::cos(theta), std::sin(theta)};
    scan[static_cast<std::size_t>(i)] = {theta, precision_of(w, mixture, q)};
  }
  return scan;
}

QuantileSolution optimize_direction(const GaussianMixture& mixture, double q,
                                    std::size_t grid_size) {
  mixture.validate();
  if (grid_size < 36) throw ArgumentError("optimize_direction: grid_size must be at least 36");
  if (!(q > 0.0 && q < 1.0)) throw ArgumentError("optimize_direction: q must lie in (0,1)");

  const auto scan = direction_precision_scan(mixture, q, grid_size);
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid_size; ++i)
    if (scan[i].second > scan[best].second) best = i;

  auto eval = [&](double theta) {
    return precision_of(Vec2{std::cos(theta), std::sin(theta)}, mixture, q);
  };

  // Golden-section refinement inside the bracket around the best grid point.
  const double h = 2.0 * kPi / static_cast<double>(grid_size);
  double a = scan[best].first - h, c = scan[best].first + h;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = c - gr * (c - a), x2 = a + gr * (c - a);
  double f1 = eval(x1), f2 = eval(x2);
  while (c - a > 1e-6) {
    if (f1 > f2) {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - gr * (c - a);
      f1 = eval(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (c - a);
      f2 = eval(x2);
    }
  }
  double theta = 0.5 * (a + c);
  double prec = eval(theta);
  if (!(prec > scan[best].second)) {
    // Flat or tied: keep the lowest-angle grid maximizer.
    theta = scan[best].first;
    prec = scan[best].second;
  }

  QuantileSolution sol;
  sol.w = {std::cos(theta), std::sin(theta)};
  sol.b = quantile_intercept(sol.w, mixture, q);
  sol.q = q;
  sol.precision = prec;
  sol.kkt_residual = kkt_collinearity_residual(sol.w, sol.b, mixture, 1e-5);
  return sol;
}

double kkt_collinearity_residual(const Vec2& w, double b, const GaussianMixture& mixture,
                                 double fd_step) {
  if (!(fd_step > 0.0)) throw ArgumentError("kkt_collinearity_residual: fd_step must be positive");

  auto grad = [&](const Vec2& mean, const Mat2& cov) {
    std::array<double, 3> g;
    for (int i = 0; i < 3; ++i) {
      Vec2 wp = w, wm = w;
      double bp = b, bm = b;
      if (i < 2) {
        wp[static_cast<std::size_t>(i)] += fd_step;
        wm[static_cast<std::size_t>(i)] -= fd_step;
      } else {
        bp += fd_step;
        bm -= fd_step;
      }
      g[static_cast<std::size_t>(i)] =
          (region_mass(wp, bp, mean, cov) - region_mass(wm, bm, mean, cov)) / (2.0 * fd_step);
    }
    return g;
  };

  const auto gp = grad(mixture.mean_pos, mixture.cov_pos);
  const auto gn = grad(mixture.mean_neg, mixture.cov_neg);
  const double np = std::sqrt(gp[0] * gp[0] + gp[1] * gp[1] + gp[2] * gp[2]);
  const double nn = std::sqrt(gn[0] * gn[0] + gn[1] * gn[1] + gn[2] * gn[2]);
  if (np < 1e-12 || nn < 1e-12)
    throw ArgumentError("kkt_collinearity_residual: degenerate gradient");

  const double dot = (gp[0] * gn[0] + gp[1] * gn[1] + gp[2] * gn[2]) / nn;
  double resid2 = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double r = gp[static_cast<std::size_t>(i)] - dot * gn[static_cast<std::size_t>(i)] / nn;
    resid2 += r * r;
  }
  return std::sqrt(resid2) / np;
}

std::string TheoremReport::to_json() const {
  nlohmann::json j;
  j["angle_degrees"] = angle_degrees;
  j["solutions"] = {solution_to_json(first), solution_to_json(second)};
  return j.dump();
}

TheoremReport theorem_demo(const GaussianMixture& mixture, double q1, double q2,
                           std::size_t grid_size) {
  if (q1 == q2) throw ArgumentError("theorem_demo: q1 and q2 must differ");
  TheoremReport report;
  report.first = optimize_direction(mixture, q1, grid_size);
  report.second = optimize_direction(mixture, q2, grid_size);
  const Vec2& u = report.first.w;
  const Vec2& v = report.second.w;
  const double dot = u[0] * v[0] + u[1] * v[1];
  const double cross = u[0] * v[1] - u[1] * v[0];
  report.angle_degrees = std::atan2(std::abs(cross), dot) * 180.0 / kPi;
  return report;
}

}  // namespace ttk::pop
