#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qwalkvec/qwalk.hpp"

namespace qwalkvec {

inline Graph cycle_graph(std::size_t n) {
  std::vector<std::pair<node_id, node_id>> edges;
  for (std::size_t i = 0; i < n; ++i)
    edges.emplace_back(static_cast<node_id>(i), static_cast<node_id>((i + 1) % n));
  return Graph(n, edges);
}

// Least-squares slope of log(y) against log(t) over points with lo <= t <= hi.
inline double fit_power_exponent(const std::vector<double>& y, std::size_t lo, std::size_t hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t t = lo; t <= hi && t < y.size(); ++t) {
    if (t == 0 || !(y[t] > 0.0)) continue;
    double lx = std::log(static_cast<double>(t)), ly = std::log(y[t]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::nan("");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct SpreadResult {
  std::vector<double> sigma2_quantum;    // index t = 0..t_max
  std::vector<double> sigma2_classical;
  std::size_t fit_lo = 10;
  std::size_t fit_hi = 80;
  double exponent_quantum = 0.0;         // of sigma^2(t)
  double exponent_classical = 0.0;
};

inline void check_spread_args(std::size_t cycle_size, std::size_t t_max) {
  if (t_max < 1) throw std::invalid_argument("t_max must be >= 1");
  if (cycle_size % 2 == 0 || cycle_size < 2 * t_max + 1)
    throw std::invalid_argument("cycle size must be odd and >= 2*t_max+1 to avoid wrap-around");
}

inline double position_variance(const std::vector<double>& prob, std::size_t center) {
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    double x = static_cast<double>(i) - static_cast<double>(center);
    m1 += prob[i] * x;
    m2 += prob[i] * x * x;
  }
  return m2 - m1 * m1;
}

// Positional variance of a Grover walk started in the equal coin
// superposition at the middle node of a cycle, next to the exact
// distribution of a simple random walk from the same node.
inline SpreadResult spread_variance(std::size_t cycle_size, std::size_t t_max) {
  check_spread_args(cycle_size, t_max);
  const auto g = cycle_graph(cycle_size);
  const auto arcs = build_arc_space(g);
  const auto center = static_cast<node_id>(cycle_size / 2);
  WeightVector ones{center, std::vector<double>(arcs.arc_count(), 1.0)};
  QuantumState start(arcs.arc_count());
  const double amp = 1.0 / std::sqrt(static_cast<double>(arcs.degree(center)));
  for (auto a = arcs.begin(center); a < arcs.end(center); ++a) start[a] = amp;
  Walker walker(arcs, ones, std::move(start));

  std::vector<double> classical(cycle_size, 0.0), next(cycle_size);
  classical[center] = 1.0;

  SpreadResult res;
  res.sigma2_quantum.push_back(position_variance(node_probabilities(walker.state(), arcs), center));
  res.sigma2_classical.push_back(position_variance(classical, center));
  for (std::size_t t = 1; t <= t_max; ++t) {
    walker.step();
    res.sigma2_quantum.push_back(position_variance(node_probabilities(walker.state(), arcs), center));
    for (std::size_t i = 0; i < cycle_size; ++i)
      next[i] = 0.5 * classical[(i + cycle_size - 1) % cycle_size] + 0.5 * classical[(i + 1) % cycle_size];
    classical.swap(next);
    res.sigma2_classical.push_back(position_variance(classical, center));
  }
  res.fit_hi = std::min<std::size_t>(80, t_max);
  res.fit_lo = std::min<std::size_t>(10, res.fit_hi > 1 ? res.fit_hi - 1 : 1);
  if (res.fit_lo < 1) res.fit_lo = 1;
  res.exponent_quantum = fit_power_exponent(res.sigma2_quantum, res.fit_lo, res.fit_hi);
  res.exponent_classical = fit_power_exponent(res.sigma2_classical, res.fit_lo, res.fit_hi);
  return res;
}

}  // namespace qwalkvec
