#include "ttk/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <system_error>

#include "ttk/errors.hpp"

namespace ttk {

double Instance::feature(std::int32_t index) const {
  auto it = std::lower_bound(features.begin(), features.end(), index,
                             [](const auto& kv, std::int32_t i) { return kv.first < i; });
  if (it != features.end() && it->first == index) return it->second;
  return 0.0;
}

bool Dataset::all_labeled() const {
  return std::all_of(instances.begin(), instances.end(),
                     [](const Instance& x) { return x.label.has_value(); });
}

std::size_t Dataset::count_label(int label) const {
  return static_cast<std::size_t>(
      std::count_if(instances.begin(), instances.end(),
                    [label](const Instance& x) { return x.label && *x.label == label; }));
}

void TransductiveProblem::validate() const {
  if (test.empty()) throw ArgumentError("transductive problem: empty test set");
  if (k < 1 || k > test.size()) throw ArgumentError("transductive problem: k out of range");
  if (!(C > 0.0)) throw ArgumentError("transductive problem: C must be positive");
  if (!train.all_labeled()) throw ArgumentError("transductive problem: unlabeled train instance");
}

namespace {

double parse_value(std::string_view token, std::size_t line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw ParseError(line_no, "malformed value '" + std::string(token) + "'");
  if (!std::isfinite(v)) throw ParseError(line_no, "non-finite value '" + std::string(token) + "'");
  return v;
}

std::int32_t parse_index(std::string_view token, std::size_t line_no) {
  std::int32_t idx = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), idx);
  if (ec != std::errc{} || ptr != token.data() + token.size() || idx < 1)
    throw ParseError(line_no, "malformed feature index '" + std::string(token) + "'");
  return idx;
}

int parse_label(std::string_view token, std::size_t line_no) {
  if (token == "+1" || token == "1") return +1;
  if (token == "-1") return -1;
  throw ParseError(line_no, "label must be +1, 1 or -1, got '" + std::string(token) + "'");
}

}  // namespace

Dataset parse_libsvm(std::istream& in) {
  Dataset data;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string token;
    if (!(tokens >> token)) continue;  // blank line

    Instance inst;
    inst.label = parse_label(token, line_no);
    std::int32_t last_index = 0;
    while (tokens >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos)
        throw ParseError(line_no, "expected idx:val, got '" + token + "'");
      const std::int32_t idx = parse_index(std::string_view(token).substr(0, colon), line_no);
      const double val = parse_value(std::string_view(token).substr(colon + 1), line_no);
      if (idx <= last_index)
        throw ParseError(line_no, "feature indices not strictly ascending at index " +
                                      std::to_string(idx));
      last_index = idx;
      inst.features.emplace_back(idx, val);
      data.dim = std::max(data.dim, idx);
    }
    data.instances.push_back(std::move(inst));
  }
  return data;
}

Dataset parse_libsvm(const std::string& text) {
  std::istringstream in(text);
  return parse_libsvm(in);
}

Dataset load_libsvm_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open data file: " + path);
  return parse_libsvm(in);
}

namespace {

void append_double(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

}  // namespace

std::string serialize_libsvm(const Dataset& data) {
  std::string out;
  for (const Instance& inst : data.instances) {
    if (!inst.label) throw ArgumentError("cannot serialize unlabeled instance");
    out += (*inst.label > 0) ? "+1" : "-1";
    for (const auto& [idx, val] : inst.features) {
      out += ' ';
      out += std::to_string(idx);
      out += ':';
      append_double(out, val);
    }
    out += '\n';
  }
  return out;
}

void save_libsvm_file(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write data file: " + path);
  out << serialize_libsvm(data);
}

namespace {

Dataset gather(const Dataset& data, const std::vector<std::size_t>& indices) {
  Dataset out;
  out.dim = data.dim;
  out.instances.reserve(indices.size());
  for (std::size_t i : indices) out.instances.push_back(data.instances[i]);
  return out;
}

}  // namespace

SplitResult random_split(const Dataset& data, double test_fraction, bool stratified,
                         std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw ArgumentError("test_fraction must lie in (0,1)");
  if (data.empty()) throw ArgumentError("cannot split an empty dataset");

  const std::size_t n = data.size();
  const auto n_test_total =
      static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
  std::mt19937_64 rng(seed);

  std::vector<std::size_t> test_idx;
  if (!stratified) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    test_idx.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test_total));
  } else {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < n; ++i) {
      if (!data.instances[i].label) throw ArgumentError("stratified split needs labels");
      (*data.instances[i].label > 0 ? pos : neg).push_back(i);
    }
    if (pos.empty() || neg.empty())
      throw ArgumentError("stratified split needs both classes present");

    auto pick = [&](std::vector<std::size_t>& cls, std::size_t take) {
      std::shuffle(cls.begin(), cls.end(), rng);
      test_idx.insert(test_idx.end(), cls.begin(), cls.begin() + static_cast<std::ptrdiff_t>(take));
    };
    auto t_pos = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(pos.size())));
    auto t_neg = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(neg.size())));
    // Keep the total pinned to round(fraction * n); adjust the larger class
    // by at most one instance.
    while (t_pos + t_neg > n_test_total) (t_pos >= t_neg ? t_pos : t_neg) -= 1;
    while (t_pos + t_neg < n_test_total) (pos.size() - t_pos >= neg.size() - t_neg ? t_pos : t_neg) += 1;
    pick(pos, t_pos);
    pick(neg, t_neg);
  }

  std::sort(test_idx.begin(), test_idx.end());
  std::vector<std::size_t> train_idx;
  train_idx.reserve(n - test_idx.size());
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (cursor < test_idx.size() && test_idx[cursor] == i)
      ++cursor;
    else
      train_idx.push_back(i);
  }

  return SplitResult{gather(data, train_idx), gather(data, test_idx)};
}

}  // namespace ttk
