#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "qwalkvec/graph.hpp"
#include "qwalkvec/qwalk.hpp"

namespace qwalkvec::oracle {

// Reference evolution with explicit A x A operators. Verification only; keep A small.
inline constexpr std::size_t max_dense_arcs = 2000;

struct DenseMatrix {
  std::size_t n = 0;
  std::vector<amplitude> data;  // row-major

  explicit DenseMatrix(std::size_t size = 0) : n(size), data(size * size) {}
  amplitude& operator()(std::size_t r, std::size_t c) { return data[r * n + c]; }
  const amplitude& operator()(std::size_t r, std::size_t c) const { return data[r * n + c]; }

  static DenseMatrix identity(std::size_t size) {
    DenseMatrix m(size);
    for (std::size_t i = 0; i < size; ++i) m(i, i) = 1.0;
    return m;
  }
};

inline DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.n);
  for (std::size_t r = 0; r < a.n; ++r)
    for (std::size_t k = 0; k < a.n; ++k) {
      const auto v = a(r, k);
      if (v == amplitude{}) continue;
      for (std::size_t c = 0; c < a.n; ++c) out(r, c) += v * b(k, c);
    }
  return out;
}

inline DenseMatrix adjoint(const DenseMatrix& a) {
  DenseMatrix out(a.n);
  for (std::size_t r = 0; r < a.n; ++r)
    for (std::size_t c = 0; c < a.n; ++c) out(c, r) = std::conj(a(r, c));
  return out;
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

inline std::vector<amplitude> matvec(const DenseMatrix& m, const std::vector<amplitude>& v) {
  std::vector<amplitude> out(m.n);
  for (std::size_t r = 0; r < m.n; ++r) {
    amplitude acc{};
    for (std::size_t c = 0; c < m.n; ++c) acc += m(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

inline void check_size(const ArcSpace& arcs) {
  if (arcs.arc_count() > max_dense_arcs)
    throw std::length_error("dense oracle limited to " + std::to_string(max_dense_arcs) + " arcs");
}

// Block-diagonal coin: node i's k_i x k_i block is 2|s><s| - I.
inline DenseMatrix coin_matrix(const ArcSpace& arcs, const std::vector<double>& weights) {
  check_size(arcs);
  DenseMatrix c(arcs.arc_count());
  for (node_id i = 0; i < arcs.node_count(); ++i) {
    const auto b = arcs.begin(i), e = arcs.end(i);
    double total = 0.0;
    for (auto a = b; a < e; ++a) total += weights[a];
    for (auto r = b; r < e; ++r)
      for (auto col = b; col < e; ++col)
        c(r, col) = 2.0 * std::sqrt(weights[r] * weights[col]) / total - (r == col ? 1.0 : 0.0);
  }
  return c;
}

// Permutation matrix sending |i->j> to |j->i>.
inline DenseMatrix shift_matrix(const ArcSpace& arcs) {
  check_size(arcs);
  DenseMatrix s(arcs.arc_count());
  for (std::size_t a = 0; a < arcs.arc_count(); ++a) {
    for (std::size_t b = 0; b < arcs.arc_count(); ++b) {
      if (arcs.tail[b] == arcs.head[a] && arcs.head[b] == arcs.tail[a]) s(b, a) = 1.0;
    }
  }
  return s;
}

// Per-arc weights computed straight from BFS layers, without the kernel's helper.
inline std::vector<double> reference_weights(const Graph& g, const ArcSpace& arcs, node_id source,
                                             const WalkParams& params) {
  auto dist = bfs_distances(g, source);
  std::vector<double> w(arcs.arc_count());
  for (std::size_t a = 0; a < w.size(); ++a) {
    const auto& li = dist.dist[arcs.tail[a]];
    const auto& lj = dist.dist[arcs.head[a]];
    if (li == 0u)
      w[a] = 1.0;
    else if (li && lj && *li > *lj)
      w[a] = 1.0 / params.w_p;
    else if (li && lj && *li == *lj)
      w[a] = 1.0 / params.w_q;
    else
      w[a] = 1.0 / params.w_q;
  }
  return w;
}

// N x t node-probability matrix (row-major), same layout as SourceTrajectory.
inline std::vector<double> dense_oracle(const Graph& g, node_id source, const WalkParams& params) {
  params.validate();
  auto arcs = build_arc_space(g);
  check_size(arcs);
  auto w = reference_weights(g, arcs, source, params);
  auto evolution = multiply(shift_matrix(arcs), coin_matrix(arcs, w));

  std::size_t active = 0;
  for (node_id i = 0; i < g.node_count(); ++i) active += g.degree(i) > 0;
  std::vector<amplitude> psi(arcs.arc_count());
  for (node_id i = 0; i < g.node_count(); ++i) {
    double total = 0.0;
    for (auto a = arcs.begin(i); a < arcs.end(i); ++a) total += w[a];
    for (auto a = arcs.begin(i); a < arcs.end(i); ++a)
      psi[a] = std::sqrt(w[a]) / std::sqrt(total) / std::sqrt(static_cast<double>(active));
  }

  std::vector<double> out(g.node_count() * params.t);
  for (std::size_t c = 0; c < params.t; ++c) {
    psi = matvec(evolution, psi);
    for (std::size_t a = 0; a < psi.size(); ++a) out[arcs.tail[a] * params.t + c] += std::norm(psi[a]);
  }
  return out;
}

}  // namespace qwalkvec::oracle
