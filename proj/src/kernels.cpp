#include "ttk/kernels.hpp"

#include <algorithm>

#include "ttk/errors.hpp"

namespace ttk::kernels {

namespace {

inline double dot(const LinearModel& model, const Instance& x) {
  double s = model.b;
  for (const auto& [idx, val] : x.features)
    s += model.w[static_cast<std::size_t>(idx - 1)] * val;
  return s;
}

inline void check_dims(const LinearModel& model, const Dataset& data) {
  if (static_cast<std::size_t>(data.dim) > model.dim())
    throw ArgumentError("dataset dimension " + std::to_string(data.dim) +
                        " exceeds model dimension " + std::to_string(model.dim()));
}

}  // namespace

void score_into(const LinearModel& model, const Dataset& data, std::vector<double>& out) {
  check_dims(model, data);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(data.size());
  out.resize(data.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = dot(model, data.instances[static_cast<std::size_t>(i)]);
}

void score_into_serial(const LinearModel& model, const Dataset& data, std::vector<double>& out) {
  check_dims(model, data);
  out.resize(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out[i] = dot(model, data.instances[i]);
}

double hinge_objective(const LinearModel& model, const Dataset& train, double C) {
  check_dims(model, train);
  if (!train.all_labeled()) throw ArgumentError("hinge objective needs labeled instances");

  const std::size_t n = train.size();
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(nchunks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(nchunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
    const std::size_t hi = std::min(lo + kChunk, n);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const Instance& x = train.instances[i];
      const double margin = static_cast<double>(*x.label) * dot(model, x);
      s += std::max(0.0, 1.0 - margin);
    }
    partial[static_cast<std::size_t>(c)] = s;
  }
  double hinge = 0.0;
  for (double p : partial) hinge += p;

  double norm2 = 0.0;
  for (double v : model.w) norm2 += v * v;
  return 0.5 * norm2 + C * hinge;
}

double hinge_objective_serial(const LinearModel& model, const Dataset& train, double C) {
  check_dims(model, train);
  if (!train.all_labeled()) throw ArgumentError("hinge objective needs labeled instances");
  double hinge = 0.0;
  for (const Instance& x : train.instances) {
    const double margin = static_cast<double>(*x.label) * dot(model, x);
    hinge += std::max(0.0, 1.0 - margin);
  }
  double norm2 = 0.0;
  for (double v : model.w) norm2 += v * v;
  return 0.5 * norm2 + C * hinge;
}

HingeSubgradient hinge_subgradient(const LinearModel& model, const Dataset& train, double C) {
  check_dims(model, train);
  if (!train.all_labeled()) throw ArgumentError("hinge subgradient needs labeled instances");

  const std::size_t n = train.size();
  const std::size_t dim = model.dim();
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<std::vector<double>> partial_w(nchunks);
  std::vector<double> partial_b(nchunks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(nchunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
    const std::size_t hi = std::min(lo + kChunk, n);
    std::vector<double> gw(dim, 0.0);
    double gb = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const Instance& x = train.instances[i];
      const double y = static_cast<double>(*x.label);
      // Kink rule: margin exactly 1 counts as loss-active.
      if (y * dot(model, x) <= 1.0) {
        for (const auto& [idx, val] : x.features)
          gw[static_cast<std::size_t>(idx - 1)] -= y * val;
        gb -= y;
      }
    }
    partial_w[static_cast<std::size_t>(c)] = std::move(gw);
    partial_b[static_cast<std::size_t>(c)] = gb;
  }

  HingeSubgradient g;
  g.gw.assign(dim, 0.0);
  for (std::size_t c = 0; c < nchunks; ++c) {
    for (std::size_t j = 0; j < dim; ++j) g.gw[j] += partial_w[c][j];
    g.gb += partial_b[c];
  }
  for (std::size_t j = 0; j < dim; ++j) g.gw[j] = model.w[j] + C * g.gw[j];
  g.gb *= C;
  return g;
}

HingeSubgradient hinge_subgradient_serial(const LinearModel& model, const Dataset& train,
                                          double C) {
  check_dims(model, train);
  if (!train.all_labeled()) throw ArgumentError("hinge subgradient needs labeled instances");
  HingeSubgradient g;
  g.gw.assign(model.dim(), 0.0);
  for (const Instance& x : train.instances) {
    const double y = static_cast<double>(*x.label);
    if (y * dot(model, x) <= 1.0) {
      for (const auto& [idx, val] : x.features)
        g.gw[static_cast<std::size_t>(idx - 1)] -= y * val;
      g.gb -= y;
    }
  }
  for (std::size_t j = 0; j < model.dim(); ++j) g.gw[j] = model.w[j] + C * g.gw[j];
  g.gb *= C;
  return g;
}

std::size_t count_positive(const std::vector<double>& scores) {
  return static_cast<std::size_t>(
      std::count_if(scores.begin(), scores.end(), [](double s) { return s > 0.0; }));
}

}  // namespace ttk::kernels
