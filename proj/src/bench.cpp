#include "ttk/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <random>

#include <json.hpp>

#include "ttk/errors.hpp"
#include "ttk/svm.hpp"

namespace ttk::bench {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  if (std::isnan(v)) return "NA";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::svm_threshold:
      return "svm_threshold";
    case Method::ttk_fd:
      return "ttk_fd";
    case Method::ttk_exact:
      return "ttk_exact";
  }
  return "svm_threshold";
}

Method method_from_name(const std::string& name) {
  if (name == "svm_threshold") return Method::svm_threshold;
  if (name == "ttk_fd") return Method::ttk_fd;
  if (name == "ttk_exact") return Method::ttk_exact;
  throw ArgumentError("unknown method: " + name);
}

void ExperimentConfig::validate() const {
  if (methods.empty()) throw ArgumentError("experiment config: methods must be nonempty");
  if (!(k_fraction > 0.0 && k_fraction < 1.0))
    throw ArgumentError("experiment config: k_fraction must lie in (0,1)");
  if (n_splits < 1) throw ArgumentError("experiment config: n_splits must be at least 1");
  if (c_grid.empty()) throw ArgumentError("experiment config: c_grid must be nonempty");
  if (cv_repeats < 1 || cv_folds < 2)
    throw ArgumentError("experiment config: cv_repeats >= 1 and cv_folds >= 2 required");
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw ArgumentError("experiment config: test_fraction must lie in (0,1)");
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ExperimentConfig cfg;
  cfg.dataset_path = j.at("dataset_path").get<std::string>();
  for (const auto& name : j.at("methods")) cfg.methods.push_back(method_from_name(name));
  if (j.contains("k_fraction")) cfg.k_fraction = j["k_fraction"].get<double>();
  if (j.contains("n_splits")) cfg.n_splits = j["n_splits"].get<std::size_t>();
  if (j.contains("c_grid")) cfg.c_grid = j["c_grid"].get<std::vector<double>>();
  if (j.contains("cv_repeats")) cfg.cv_repeats = j["cv_repeats"].get<std::size_t>();
  if (j.contains("cv_folds")) cfg.cv_folds = j["cv_folds"].get<std::size_t>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("test_fraction")) cfg.test_fraction = j["test_fraction"].get<double>();
  cfg.validate();
  return cfg;
}

std::size_t k_from_fraction(double k_fraction, std::size_t n_test) {
  const auto k = static_cast<std::size_t>(
      std::floor(k_fraction * static_cast<double>(n_test) + 0.5));
  return std::max<std::size_t>(1, k);
}

BoundaryStats boundary_stats(const LinearModel& model, const Dataset& data, double delta) {
  if (!(delta > 0.0)) throw ArgumentError("boundary_stats: delta must be positive");
  const auto scores = score_all(model, data);
  BoundaryStats out;
  std::size_t positive = 0;
  for (double s : scores) {
    if (std::abs(s) <= delta) ++out.at_boundary;
    if (s > 0.0) ++positive;
  }
  out.fraction_positive =
      data.empty() ? 0.0 : static_cast<double>(positive) / static_cast<double>(data.size());
  return out;
}

MethodFit fit_method(Method method, const TransductiveProblem& problem) {
  problem.validate();
  MethodFit out;
  switch (method) {
    case Method::svm_threshold: {
      SvmConfig cfg;
      cfg.C = problem.C;
      LinearModel model = train_svm(problem.train, cfg).model;
      model.w.resize(std::max<std::size_t>(model.dim(),
                                           static_cast<std::size_t>(problem.test.dim)),
                     0.0);
      out.model = adjust_intercept(model, problem.test, problem.k, /*perturb_ties=*/true);
      break;
    }
    case Method::ttk_fd: {
      const MethodFit init = fit_method(Method::svm_threshold, problem);
      out.model = solve_fd(problem, init.model, TtkOptions{}).model;
      break;
    }
    case Method::ttk_exact: {
      out.model = solve_exact(problem, ExactLimits{}).model;
      break;
    }
  }
  out.train_objective = svm_objective(out.model, problem.train, problem.C);
  return out;
}

namespace {

// Plain shuffled fold assignment; fold f holds indices with assignment f.
std::vector<std::vector<std::size_t>> make_folds(std::size_t n, std::size_t n_folds,
                                                 std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<std::size_t>> folds(n_folds);
  for (std::size_t i = 0; i < n; ++i) folds[i % n_folds].push_back(order[i]);
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

bool has_both_classes(const Dataset& data) {
  return data.count_label(+1) > 0 && data.count_label(-1) > 0;
}

Dataset subset(const Dataset& data, const std::vector<std::size_t>& indices) {
  Dataset out;
  out.dim = data.dim;
  for (std::size_t i : indices) out.instances.push_back(data.instances[i]);
  return out;
}

}  // namespace

double cross_validate_c(const Dataset& train, const ExperimentConfig& config, Method method,
                        std::uint64_t seed) {
  std::vector<double> grid = config.c_grid;
  std::sort(grid.begin(), grid.end());
  if (grid.size() == 1) return grid[0];

  if (train.count_label(+1) < 4 || train.count_label(-1) < 4)
    throw ArgumentError("cross_validate_c: need at least 4 instances of each class");

  std::vector<double> total(grid.size(), 0.0);
  for (std::size_t rep = 0; rep < config.cv_repeats; ++rep) {
    std::vector<std::vector<std::size_t>> folds;
    bool ok = false;
    for (std::uint64_t attempt = 0; attempt < 10 && !ok; ++attempt) {
      folds = make_folds(train.size(), config.cv_folds, seed + 7919 * rep + attempt);
      ok = true;
      for (const auto& f : folds)
        if (f.empty() || !has_both_classes(subset(train, f))) ok = false;
    }
    if (!ok) throw ArgumentError("cross_validate_c: could not draw non-degenerate folds");

    for (std::size_t hold = 0; hold < config.cv_folds; ++hold) {
      std::vector<std::size_t> fit_idx;
      for (std::size_t f = 0; f < config.cv_folds; ++f)
        if (f != hold) fit_idx.insert(fit_idx.end(), folds[f].begin(), folds[f].end());
      std::sort(fit_idx.begin(), fit_idx.end());

      TransductiveProblem fold_problem;
      fold_problem.train = subset(train, fit_idx);
      fold_problem.test = subset(train, folds[hold]);
      fold_problem.k = k_from_fraction(config.k_fraction, fold_problem.test.size());
      for (std::size_t ci = 0; ci < grid.size(); ++ci) {
        fold_problem.C = grid[ci];
        const MethodFit fit = fit_method(method, fold_problem);
        total[ci] += precision_at_k(fit.model, fold_problem.test, fold_problem.k);
      }
    }
  }

  std::size_t best = 0;
  for (std::size_t ci = 1; ci < grid.size(); ++ci)
    if (total[ci] > total[best]) best = ci;  // ties keep the smaller C
  return grid[best];
}

namespace {

struct SplitOutcome {
  std::size_t k = 0;
  std::vector<double> precisions;        // per method, NaN for NA
  std::vector<double> train_objectives;  // per method
  std::vector<double> chosen_c;          // per method
};

SplitOutcome run_split(const Dataset& data, const ExperimentConfig& config, std::uint64_t seed) {
  const SplitResult split = random_split(data, config.test_fraction, /*stratified=*/true, seed);
  SplitOutcome out;
  out.k = k_from_fraction(config.k_fraction, split.test.size());
  out.precisions.assign(config.methods.size(), kNaN);
  out.train_objectives.assign(config.methods.size(), kNaN);
  out.chosen_c.assign(config.methods.size(), kNaN);

  for (std::size_t m = 0; m < config.methods.size(); ++m) {
    const Method method = config.methods[m];
    if (method == Method::ttk_exact && split.test.size() > ExactLimits{}.max_test)
      continue;  // NA, mirroring capacity refusal
    double C;
    try {
      C = cross_validate_c(split.train, config, method, seed);
    } catch (const CapacityError&) {
      continue;
    }
    TransductiveProblem problem{split.train, split.test, out.k, C};
    MethodFit fit;
    try {
      fit = fit_method(method, problem);
    } catch (const CapacityError&) {
      continue;
    }
    if (method != Method::svm_threshold && !is_feasible(fit.model, problem))
      throw ContractViolation("run_experiment: solver returned an infeasible model");
    out.precisions[m] = precision_at_k(fit.model, split.test, out.k);
    out.train_objectives[m] = fit.train_objective;
    out.chosen_c[m] = C;
  }
  return out;
}

}  // namespace

ResultTable run_experiment(const ExperimentConfig& config) {
  config.validate();
  const Dataset data = load_libsvm_file(config.dataset_path);

  std::vector<SplitOutcome> outcomes(config.n_splits);
  std::vector<std::exception_ptr> errors(config.n_splits);
  const std::ptrdiff_t n_splits = static_cast<std::ptrdiff_t>(config.n_splits);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t s = 0; s < n_splits; ++s) {
    try {
      outcomes[static_cast<std::size_t>(s)] =
          run_split(data, config, config.seed + static_cast<std::uint64_t>(s));
    } catch (...) {
      errors[static_cast<std::size_t>(s)] = std::current_exception();
    }
  }
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);

  ResultTable table;
  for (const SplitOutcome& o : outcomes) table.ks.push_back(o.k);

  for (std::size_t m = 0; m < config.methods.size(); ++m) {
    MethodColumn col;
    col.method = config.methods[m];
    for (const SplitOutcome& o : outcomes) {
      col.precisions.push_back(o.precisions[m]);
      col.train_objectives.push_back(o.train_objectives[m]);
      col.chosen_c.push_back(o.chosen_c[m]);
    }
    col.available = std::none_of(col.precisions.begin(), col.precisions.end(),
                                 [](double v) { return std::isnan(v); });
    if (col.available) {
      double mean = 0.0;
      for (double v : col.precisions) mean += v;
      mean /= static_cast<double>(col.precisions.size());
      double ss = 0.0;
      for (double v : col.precisions) ss += (v - mean) * (v - mean);
      col.mean = mean;
      col.sd = (col.precisions.size() > 1)
                   ? std::sqrt(ss / static_cast<double>(col.precisions.size() - 1))
                   : 0.0;
    } else {
      col.mean = kNaN;
      col.sd = kNaN;
    }
    table.columns.push_back(std::move(col));
  }

  for (std::size_t i = 0; i < table.columns.size(); ++i)
    for (std::size_t j = i + 1; j < table.columns.size(); ++j) {
      if (!table.columns[i].available || !table.columns[j].available) continue;
      if (table.columns[i].precisions.size() < 2) continue;
      PairVerdict pv;
      pv.a = table.columns[i].method;
      pv.b = table.columns[j].method;
      pv.test =
          stats::paired_t_test(table.columns[i].precisions, table.columns[j].precisions, 0.05);
      table.verdicts.push_back(pv);
    }

  return table;
}

std::string ResultTable::to_csv() const {
  std::string out = "method,split,chosen_C,k,precision,train_objective\n";
  for (const MethodColumn& col : columns) {
    for (std::size_t s = 0; s < col.precisions.size(); ++s) {
      out += method_name(col.method);
      out += ',';
      out += std::to_string(s);
      out += ',';
      out += fmt(col.chosen_c[s]);
      out += ',';
      out += std::to_string(ks[s]);
      out += ',';
      out += fmt(col.precisions[s]);
      out += ',';
      out += fmt(col.train_objectives[s]);
      out += '\n';
    }
    out += method_name(col.method);
    out += ",mean,,,";
    out += fmt(col.mean);
    out += ',';
    double obj_mean = kNaN;
    if (col.available) {
      obj_mean = 0.0;
      for (double v : col.train_objectives) obj_mean += v;
      obj_mean /= static_cast<double>(col.train_objectives.size());
    }
    out += fmt(obj_mean);
    out += '\n';
    out += method_name(col.method);
    out += ",sd,,,";
    out += fmt(col.sd);
    out += ",\n";
  }
  return out;
}

std::string ResultTable::verdicts_to_csv() const {
  std::string out = "method_a,method_b,t,p,verdict,degenerate\n";
  for (const PairVerdict& pv : verdicts) {
    out += method_name(pv.a);
    out += ',';
    out += method_name(pv.b);
    out += ',';
    out += fmt(pv.test.t);
    out += ',';
    out += fmt(pv.test.p);
    out += ',';
    out += stats::verdict_name(pv.test.verdict);
    out += ',';
    out += pv.test.degenerate ? "1" : "0";
    out += '\n';
  }
  return out;
}

}  // namespace ttk::bench
