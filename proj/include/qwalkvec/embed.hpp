#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <future>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qwalkvec/graph.hpp"
#include "qwalkvec/qwalk.hpp"

namespace qwalkvec {

// Node-by-feature matrix. For quantum embeddings cols = t, one column per step.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;            // row-major
  std::vector<std::int64_t> node_ids;    // original id per row
  std::string kind = "aggregated";       // aggregated | source:<v0> | baseline
  double w_p = 1.0;
  double w_q = 1.0;

  FeatureMatrix() = default;
  FeatureMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c) {}

  double& operator()(std::size_t i, std::size_t j) { return values[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
  std::span<const double> row(std::size_t i) const { return {values.data() + i * cols, cols}; }

  double column_sum(std::size_t j) const {
    double s = 0.0;
    for (std::size_t i = 0; i < rows; ++i) s += (*this)(i, j);
    return s;
  }

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;
};

struct EmbedDiagnostics {
  std::size_t sources = 0;
  double max_norm_drift = 0.0;
};

inline FeatureMatrix as_feature_matrix(const SourceTrajectory& traj, const Graph& g, const WalkParams& params) {
  FeatureMatrix m(traj.rows, traj.cols);
  m.values = traj.values;
  m.node_ids = g.original_ids();
  m.kind = "source:" + std::to_string(g.original_id(traj.source));
  m.w_p = params.w_p;
  m.w_q = params.w_q;
  return m;
}

// Sum of per-source probability trajectories over every non-isolated source.
// Sources are accumulated in ascending id order regardless of `threads`.
inline FeatureMatrix qwalkvec(const Graph& g, const WalkParams& params, unsigned threads = 1,
                              EmbedDiagnostics* diag = nullptr) {
  params.validate();
  if (g.active_node_count() == 0) throw data_error("graph has no non-isolated nodes");
  auto arcs = build_arc_space(g);
  FeatureMatrix phi(g.node_count(), params.t);
  phi.node_ids = g.original_ids();
  phi.kind = "aggregated";
  phi.w_p = params.w_p;
  phi.w_q = params.w_q;

  std::vector<node_id> sources;
  for (node_id v = 0; v < g.node_count(); ++v)
    if (g.degree(v) > 0) sources.push_back(v);

  EmbedDiagnostics local;
  auto accumulate = [&](const SourceTrajectory& traj) {
    for (std::size_t k = 0; k < phi.values.size(); ++k) phi.values[k] += traj.values[k];
    local.max_norm_drift = std::max(local.max_norm_drift, traj.max_norm_drift);
    ++local.sources;
  };

  threads = std::max(1u, threads);
  if (threads == 1) {
    for (auto v : sources) accumulate(evolve_collect(g, arcs, v, params));
  } else {
    for (std::size_t start = 0; start < sources.size(); start += threads) {
      std::vector<std::future<SourceTrajectory>> batch;
      for (std::size_t k = start; k < std::min(sources.size(), start + threads); ++k)
        batch.push_back(std::async(std::launch::async, [&, v = sources[k]] { return evolve_collect(g, arcs, v, params); }));
      for (auto& f : batch) accumulate(f.get());
    }
  }
  if (diag) *diag = local;
  return phi;
}

namespace detail {

inline std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string full_precision(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(std::string_view tok, std::size_t line) {
  double v = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    throw parse_error("malformed number '" + std::string(tok) + "'", line);
  return v;
}

}  // namespace detail

inline std::string embedding_header(const FeatureMatrix& m) {
  return "# qwalkvec N=" + std::to_string(m.rows) + " t=" + std::to_string(m.cols) + " wp=" + detail::shortest(m.w_p) +
         " wq=" + detail::shortest(m.w_q) + " kind=" + m.kind;
}

inline void write_embedding(const FeatureMatrix& m, std::ostream& os) {
  for (double v : m.values)
    if (!std::isfinite(v)) throw data_error("embedding contains non-finite values");
  os << embedding_header(m) << '\n';
  for (std::size_t i = 0; i < m.rows; ++i) {
    os << (m.node_ids.empty() ? static_cast<std::int64_t>(i) : m.node_ids[i]);
    for (std::size_t j = 0; j < m.cols; ++j) os << ',' << detail::full_precision(m(i, j));
    os << '\n';
  }
}

inline FeatureMatrix read_embedding(std::string_view text) {
  FeatureMatrix m;
  bool have_header = false;
  std::size_t rows_seen = 0;
  detail::for_each_data_line(text, [&](std::string_view line, std::size_t line_no) {
    if (!have_header) {
      auto toks = detail::tokenize(line);
      if (toks.size() != 7 || toks[0] != "#" || toks[1] != "qwalkvec")
        throw parse_error("missing '# qwalkvec' header", line_no);
      auto field = [&](std::string_view tok, std::string_view key) {
        if (tok.substr(0, key.size()) != key) throw parse_error("expected header field " + std::string(key), line_no);
        return tok.substr(key.size());
      };
      m.rows = static_cast<std::size_t>(detail::parse_nonneg_int(field(toks[2], "N="), line_no));
      m.cols = static_cast<std::size_t>(detail::parse_nonneg_int(field(toks[3], "t="), line_no));
      m.w_p = detail::parse_double(field(toks[4], "wp="), line_no);
      m.w_q = detail::parse_double(field(toks[5], "wq="), line_no);
      m.kind = std::string(field(toks[6], "kind="));
      m.values.reserve(m.rows * m.cols);
      have_header = true;
      return;
    }
    if (line.front() == '#') return;
    auto toks = detail::tokenize(line);
    if (toks.size() != m.cols + 1)
      throw parse_error("expected " + std::to_string(m.cols + 1) + " fields, got " + std::to_string(toks.size()), line_no);
    if (++rows_seen > m.rows) throw parse_error("more rows than header N=" + std::to_string(m.rows), line_no);
    m.node_ids.push_back(detail::parse_int(toks[0], line_no));
    for (std::size_t j = 1; j < toks.size(); ++j) {
      double v = detail::parse_double(toks[j], line_no);
      if (!std::isfinite(v)) throw parse_error("non-finite value", line_no);
      m.values.push_back(v);
    }
  });
  if (!have_header) throw parse_error("empty embedding file", 0);
  if (rows_seen != m.rows)
    throw data_error("embedding has " + std::to_string(rows_seen) + " rows but header says N=" + std::to_string(m.rows));
  return m;
}

}  // namespace qwalkvec
