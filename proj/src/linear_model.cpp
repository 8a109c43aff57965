#include "ttk/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "ttk/errors.hpp"
#include "ttk/kernels.hpp"

namespace ttk {

double score(const LinearModel& model, const Instance& x) {
  double s = model.b;
  for (const auto& [idx, val] : x.features) {
    if (static_cast<std::size_t>(idx) > model.dim())
      throw ArgumentError("instance feature index " + std::to_string(idx) +
                          " exceeds model dimension " + std::to_string(model.dim()));
    s += model.w[static_cast<std::size_t>(idx - 1)] * val;
  }
  return s;
}

std::vector<double> score_all(const LinearModel& model, const Dataset& data) {
  std::vector<double> out;
  kernels::score_into(model, data, out);
  return out;
}

std::vector<std::size_t> top_k_of_scores(const std::vector<double>& scores, std::size_t k) {
  if (k > scores.size()) throw ArgumentError("k exceeds number of instances");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<std::size_t> top_k_set(const LinearModel& model, const Dataset& data, std::size_t k) {
  return top_k_of_scores(score_all(model, data), k);
}

LinearModel adjust_intercept(const LinearModel& model, const Dataset& test, std::size_t k,
                             bool perturb_ties) {
  if (k < 1 || k > test.size()) throw ArgumentError("adjust_intercept: k out of range");
  std::vector<double> scores = score_all(model, test);
  if (perturb_ties) {
    for (std::size_t i = 0; i < scores.size(); ++i)
      scores[i] += 1e-9 * static_cast<double>(i);
  }
  std::sort(scores.begin(), scores.end(), std::greater<>());

  LinearModel shifted = model;
  if (k == test.size()) {
    shifted.b = model.b - scores.back() + 1.0;
    return shifted;
  }
  const double sk = scores[k - 1];
  const double sk1 = scores[k];
  if (sk == sk1) throw TieError(sk);
  shifted.b = model.b - 0.5 * (sk + sk1);
  return shifted;
}

double precision_at_k(const LinearModel& model, const Dataset& labeled_test, std::size_t k) {
  if (k < 1 || k > labeled_test.size()) throw ArgumentError("precision_at_k: k out of range");
  if (!labeled_test.all_labeled()) throw ArgumentError("precision_at_k: missing test label");
  const auto selected = top_k_set(model, labeled_test, k);
  std::size_t true_pos = 0;
  for (std::size_t i : selected)
    if (*labeled_test.instances[i].label > 0) ++true_pos;
  return static_cast<double>(true_pos) / static_cast<double>(k);
}

std::string model_to_json(const LinearModel& model) {
  nlohmann::json j;
  j["w"] = model.w;
  j["b"] = model.b;
  j["dim"] = model.w.size();
  return j.dump();
}

LinearModel model_from_json(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  LinearModel model;
  model.w = j.at("w").get<std::vector<double>>();
  model.b = j.at("b").get<double>();
  if (j.at("dim").get<std::size_t>() != model.w.size())
    throw ArgumentError("model json: dim does not match |w|");
  for (double v : model.w)
    if (!std::isfinite(v)) throw ArgumentError("model json: non-finite weight");
  if (!std::isfinite(model.b)) throw ArgumentError("model json: non-finite intercept");
  return model;
}

void save_model(const LinearModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write model file: " + path);
  out << model_to_json(model) << '\n';
}

LinearModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open model file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace ttk
