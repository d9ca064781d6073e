#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "qwalkvec/graph.hpp"

namespace qwalkvec {

using amplitude = std::complex<double>;
using arc_id = std::uint32_t;

// Basis of the walk: one directed arc i->j per (node, neighbor) pair.
// Arcs are grouped by tail in ascending node order, heads ascending within a group.
struct ArcSpace {
  std::vector<node_id> tail;
  std::vector<node_id> head;
  std::vector<arc_id> reverse;
  // arcs of node i are [offset[i], offset[i+1])
  std::vector<arc_id> offset;

  std::size_t arc_count() const noexcept { return tail.size(); }
  std::size_t node_count() const noexcept { return offset.empty() ? 0 : offset.size() - 1; }
  arc_id begin(node_id i) const { return offset[i]; }
  arc_id end(node_id i) const { return offset[i + 1]; }
  std::size_t degree(node_id i) const { return offset[i + 1] - offset[i]; }
};

inline ArcSpace build_arc_space(const Graph& g) {
  ArcSpace s;
  const auto n = g.node_count();
  s.offset.resize(n + 1, 0);
  for (node_id i = 0; i < n; ++i) s.offset[i + 1] = s.offset[i] + static_cast<arc_id>(g.degree(i));
  const auto arcs = s.offset[n];
  s.tail.resize(arcs);
  s.head.resize(arcs);
  s.reverse.resize(arcs);
  for (node_id i = 0; i < n; ++i) {
    auto nbrs = g.neighbors(i);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      s.tail[s.offset[i] + k] = i;
      s.head[s.offset[i] + k] = nbrs[k];
    }
  }
  for (arc_id a = 0; a < arcs; ++a) {
    auto j = s.head[a];
    auto nbrs = g.neighbors(j);
    auto pos = std::lower_bound(nbrs.begin(), nbrs.end(), s.tail[a]) - nbrs.begin();
    s.reverse[a] = s.offset[j] + static_cast<arc_id>(pos);
  }
  return s;
}

struct WalkParams {
  double w_p = 1.0;  // return parameter
  double w_q = 1.0;  // in-out parameter
  std::size_t t = 1;

  void validate() const {
    if (!(w_p > 0.0) || !(w_q > 0.0) || !std::isfinite(w_p) || !std::isfinite(w_q))
      throw std::invalid_argument("w_p and w_q must be positive and finite");
    if (t < 1) throw std::invalid_argument("walk length t must be >= 1");
  }
};

struct WeightVector {
  node_id source = 0;
  std::vector<double> w;  // per arc
};

// Source-relative coin weights. Branches are checked in order: tail is the
// source, tail farther than head, equal distance, anything else (including
// arcs touching unreachable nodes).
inline WeightVector coin_weights(const ArcSpace& arcs, const DistanceVector& dist, const WalkParams& params) {
  WeightVector out{dist.source, std::vector<double>(arcs.arc_count())};
  const double back = 1.0 / params.w_p;
  const double out_w = 1.0 / params.w_q;
  for (arc_id a = 0; a < arcs.arc_count(); ++a) {
    const auto& di = dist.dist[arcs.tail[a]];
    const auto& dj = dist.dist[arcs.head[a]];
    if (di && *di == 0)
      out.w[a] = 1.0;
    else if (di && dj && *di > *dj)
      out.w[a] = back;
    else
      out.w[a] = out_w;
  }
  return out;
}

inline WeightVector coin_weights(const Graph& g, const ArcSpace& arcs, const DistanceVector& dist,
                                 const WalkParams& params) {
  if (dist.dist.size() != g.node_count()) throw std::invalid_argument("distance vector does not match graph");
  return coin_weights(arcs, dist, params);
}

using QuantumState = std::vector<amplitude>;

// Per-arc components of the weighted coin state |s_i>: sqrt(w_a / sum of w over tail's arcs).
inline std::vector<double> coin_state(const ArcSpace& arcs, const WeightVector& weights) {
  std::vector<double> s(arcs.arc_count());
  for (node_id i = 0; i < arcs.node_count(); ++i) {
    double total = 0.0;
    for (auto a = arcs.begin(i); a < arcs.end(i); ++a) total += weights.w[a];
    for (auto a = arcs.begin(i); a < arcs.end(i); ++a) s[a] = std::sqrt(weights.w[a] / total);
  }
  return s;
}

// Superposition start: every non-isolated node gets mass 1/N_eff, spread over
// its arcs in proportion to the coin weights.
inline QuantumState initial_state(const ArcSpace& arcs, const WeightVector& weights) {
  std::size_t active = 0;
  for (node_id i = 0; i < arcs.node_count(); ++i) active += arcs.degree(i) > 0;
  if (active == 0) throw data_error("graph has no non-isolated nodes");
  const double prefactor = 1.0 / std::sqrt(static_cast<double>(active));
  auto s = coin_state(arcs, weights);
  QuantumState psi(arcs.arc_count());
  for (arc_id a = 0; a < psi.size(); ++a) psi[a] = prefactor * s[a];
  return psi;
}

// psi_i <- 2 <s_i|psi_i> s_i - psi_i for every node, in place. O(arcs).
inline void apply_coin_inplace(std::span<amplitude> psi, const ArcSpace& arcs, std::span<const double> s) {
  for (node_id i = 0; i < arcs.node_count(); ++i) {
    const auto b = arcs.begin(i), e = arcs.end(i);
    amplitude proj{0.0, 0.0};
    for (auto a = b; a < e; ++a) proj += s[a] * psi[a];
    proj *= 2.0;
    for (auto a = b; a < e; ++a) psi[a] = proj * s[a] - psi[a];
  }
}

inline QuantumState apply_coin(QuantumState psi, const ArcSpace& arcs, const WeightVector& weights) {
  apply_coin_inplace(psi, arcs, coin_state(arcs, weights));
  return psi;
}

inline void apply_shift(std::span<const amplitude> in, std::span<amplitude> out, const ArcSpace& arcs) {
  for (arc_id a = 0; a < arcs.arc_count(); ++a) out[a] = in[arcs.reverse[a]];
}

inline QuantumState apply_shift(const QuantumState& psi, const ArcSpace& arcs) {
  QuantumState out(psi.size());
  apply_shift(psi, out, arcs);
  return out;
}

inline QuantumState step(QuantumState psi, const ArcSpace& arcs, const WeightVector& weights) {
  return apply_shift(apply_coin(std::move(psi), arcs, weights), arcs);
}

inline double squared_norm(std::span<const amplitude> psi) {
  double total = 0.0;
  for (const auto& a : psi) total += std::norm(a);
  return total;
}

inline void node_probabilities(std::span<const amplitude> psi, const ArcSpace& arcs, std::span<double> out) {
  for (node_id i = 0; i < arcs.node_count(); ++i) {
    double p = 0.0;
    for (auto a = arcs.begin(i); a < arcs.end(i); ++a) p += std::norm(psi[a]);
    out[i] = p;
  }
}

inline std::vector<double> node_probabilities(std::span<const amplitude> psi, const ArcSpace& arcs) {
  std::vector<double> p(arcs.node_count());
  node_probabilities(psi, arcs, p);
  return p;
}

// Reusable evolution for one source: holds the coin state and two buffers.
class Walker {
 public:
  Walker(const ArcSpace& arcs, const WeightVector& weights)
      : arcs_(&arcs), coin_(coin_state(arcs, weights)), psi_(initial_state(arcs, weights)), scratch_(psi_.size()) {}

  Walker(const ArcSpace& arcs, const WeightVector& weights, QuantumState start)
      : arcs_(&arcs), coin_(coin_state(arcs, weights)), psi_(std::move(start)), scratch_(psi_.size()) {
    if (psi_.size() != arcs.arc_count()) throw std::invalid_argument("state size does not match arc space");
  }

  void step() {
    apply_coin_inplace(psi_, *arcs_, coin_);
    apply_shift(psi_, scratch_, *arcs_);
    psi_.swap(scratch_);
    ++steps_;
    double drift = std::abs(squared_norm(psi_) - 1.0);
    if (drift > max_norm_drift_) max_norm_drift_ = drift;
  }

  const QuantumState& state() const noexcept { return psi_; }
  std::size_t steps() const noexcept { return steps_; }
  // Largest | ||psi||^2 - 1 | seen after any step.
  double max_norm_drift() const noexcept { return max_norm_drift_; }

 private:
  const ArcSpace* arcs_;
  std::vector<double> coin_;
  QuantumState psi_;
  QuantumState scratch_;
  std::size_t steps_ = 0;
  double max_norm_drift_ = 0.0;
};

// Row-major N x t matrix of node probabilities, column c = after c+1 steps.
struct SourceTrajectory {
  node_id source = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  double max_norm_drift = 0.0;

  double at(std::size_t i, std::size_t c) const { return values[i * cols + c]; }
};

inline SourceTrajectory evolve_collect(const Graph& g, const ArcSpace& arcs, node_id source, const WalkParams& params) {
  params.validate();
  auto dist = bfs_distances(g, source);
  auto weights = coin_weights(g, arcs, dist, params);
  Walker walker(arcs, weights);
  SourceTrajectory out{source, g.node_count(), params.t, std::vector<double>(g.node_count() * params.t)};
  std::vector<double> probs(g.node_count());
  for (std::size_t c = 0; c < params.t; ++c) {
    walker.step();
    node_probabilities(walker.state(), arcs, probs);
    for (std::size_t i = 0; i < probs.size(); ++i) out.values[i * params.t + c] = probs[i];
  }
  out.max_norm_drift = walker.max_norm_drift();
  return out;
}

}  // namespace qwalkvec
