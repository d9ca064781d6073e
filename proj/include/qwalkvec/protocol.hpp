#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <ostream>
#include <string>
#include <vector>

#include "qwalkvec/classify.hpp"

namespace qwalkvec {

struct EvalRow {
  double train_ratio = 0.0;
  std::size_t repeats = 0;
  double micro_mean = 0.0;
  double micro_std = 0.0;
  double macro_mean = 0.0;
  double macro_std = 0.0;
  std::vector<double> micro_scores;
  std::vector<double> macro_scores;
};

struct EvalReport {
  std::string method;
  std::string dataset;
  std::string params;
  std::uint64_t seed = 0;
  std::vector<EvalRow> rows;
};

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// Sample standard deviation; 0 for fewer than two values.
inline double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean_of(v), ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

// split -> train -> predict -> score for every repeat. Repeats may run in
// parallel; results are gathered by repeat index.
inline EvalRow evaluate_protocol(const FeatureMatrix& x, const LabelMap& labels, const SplitSpec& spec,
                                 const LogRegOptions& opt = {}, unsigned threads = 1) {
  spec.validate();
  if (x.rows != labels.size()) throw data_error("feature rows (" + std::to_string(x.rows) + ") do not match labels (" +
                                                std::to_string(labels.size()) + ")");
  require_finite(x);
  EvalRow row;
  row.train_ratio = spec.train_ratio;
  row.repeats = spec.repeats;
  row.micro_scores.resize(spec.repeats);
  row.macro_scores.resize(spec.repeats);
  auto run = [&](std::size_t r) {
    auto s = split(labels, spec, r);
    auto model = train_ovr_logreg(x, labels, s.train, opt);
    auto pred = predict(model, x, s.test);
    std::vector<int> truth;
    truth.reserve(s.test.size());
    for (auto i : s.test) truth.push_back(labels[i]);
    row.micro_scores[r] = micro_f1(pred, truth);
    row.macro_scores[r] = macro_f1(pred, truth, labels.label_count);
  };
  threads = std::max(1u, threads);
  if (threads == 1) {
    for (std::size_t r = 0; r < spec.repeats; ++r) run(r);
  } else {
    std::vector<std::future<void>> jobs;
    for (unsigned t = 0; t < threads; ++t)
      jobs.push_back(std::async(std::launch::async, [&, t] {
        for (std::size_t r = t; r < spec.repeats; r += threads) run(r);
      }));
    for (auto& j : jobs) j.get();
  }
  row.micro_mean = mean_of(row.micro_scores);
  row.micro_std = sample_std(row.micro_scores);
  row.macro_mean = mean_of(row.macro_scores);
  row.macro_std = sample_std(row.macro_scores);
  return row;
}

inline constexpr const char* report_csv_header =
    "method,dataset,T_R,repeat_count,micro_mean,micro_std,macro_mean,macro_std,params,seed";

inline void write_report_row(std::ostream& os, const std::string& method, const std::string& dataset,
                             const EvalRow& r, const std::string& params, std::uint64_t seed) {
  os << method << ',' << dataset << ',' << detail::shortest(r.train_ratio) << ',' << r.repeats << ','
     << detail::full_precision(r.micro_mean) << ',' << detail::full_precision(r.micro_std) << ','
     << detail::full_precision(r.macro_mean) << ',' << detail::full_precision(r.macro_std) << ',' << params << ','
     << seed << '\n';
}

inline void write_report(std::ostream& os, const EvalReport& rep) {
  os << report_csv_header << '\n';
  for (const auto& r : rep.rows) write_report_row(os, rep.method, rep.dataset, r, rep.params, rep.seed);
}

struct GridCell {
  double first = 0.0;   // w_p or p
  double second = 0.0;  // w_q or q
  EvalRow result;
};

struct GridResult {
  std::vector<GridCell> cells;  // ascending (first, second)
  std::size_t best = 0;
};

inline std::string grid_params(double a, double b, bool quantum) {
  return std::string(quantum ? "wp=" : "p=") + detail::shortest(a) + (quantum ? ";wq=" : ";q=") + detail::shortest(b);
}

// Evaluates every (a, b) in values x values. `cell_features(a, b)` builds the
// embedding for one cell. Best = highest mean micro F1, ties to the
// lexicographically smallest (a, b).
inline GridResult grid_search(std::vector<double> values, const LabelMap& labels, const SplitSpec& spec,
                              const std::function<FeatureMatrix(double, double)>& cell_features,
                              const LogRegOptions& opt = {}, unsigned threads = 1) {
  if (values.empty()) throw std::invalid_argument("grid must not be empty");
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  GridResult out;
  for (double a : values)
    for (double b : values) out.cells.push_back({a, b, {}});
  for (auto& cell : out.cells) cell.result = evaluate_protocol(cell_features(cell.first, cell.second), labels, spec, opt, threads);
  for (std::size_t k = 1; k < out.cells.size(); ++k)
    if (out.cells[k].result.micro_mean > out.cells[out.best].result.micro_mean) out.best = k;
  return out;
}

}  // namespace qwalkvec
