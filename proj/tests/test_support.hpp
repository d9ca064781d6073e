#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qwalkvec/cli.hpp"
#include "qwalkvec/graph.hpp"

namespace qwalkvec::fixtures {

inline std::string data_path(const std::string& name) { return std::string(QWALKVEC_DATA_DIR) + "/" + name; }

inline Graph karate() { return load_edge_list(cli::read_file(data_path("karate.edges"))); }

inline LabelMap karate_labels(const Graph& g) { return load_labels(cli::read_file(data_path("karate.labels")), g); }

inline node_id internal_id(const Graph& g, std::int64_t original) { return *g.find_original(original); }

inline Graph from_edges(std::size_t n, std::vector<std::pair<node_id, node_id>> edges) { return Graph(n, edges); }

inline Graph path_graph(std::size_t n) {
  std::vector<std::pair<node_id, node_id>> e;
  for (node_id i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, e);
}

inline Graph star_graph(std::size_t leaves) {
  std::vector<std::pair<node_id, node_id>> e;
  for (node_id i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return Graph(leaves + 1, e);
}

inline Graph complete_graph(std::size_t n, node_id offset = 0, std::size_t total = 0) {
  std::vector<std::pair<node_id, node_id>> e;
  for (node_id i = 0; i < n; ++i)
    for (node_id j = i + 1; j < n; ++j) e.emplace_back(offset + i, offset + j);
  return Graph(total ? total : n, e);
}

// Erdos-Renyi graph with a random spanning path folded in for the
// `connected` case. Node count in [lo, hi].
inline Graph random_graph(std::mt19937_64& rng, std::size_t lo, std::size_t hi, double density, bool connected = true) {
  std::uniform_int_distribution<std::size_t> size(lo, hi);
  auto n = size(rng);
  std::bernoulli_distribution coin(density);
  std::vector<std::pair<node_id, node_id>> e;
  std::vector<node_id> order(n);
  for (node_id i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  if (connected)
    for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(order[i], order[i + 1]);
  for (node_id i = 0; i < n; ++i)
    for (node_id j = i + 1; j < n; ++j)
      if (coin(rng)) e.emplace_back(i, j);
  return Graph(n, e);
}

// Plain Grover walk on (node, neighbor) pairs held in a map, with the
// textbook coin entries 2/k - delta and the flip-flop shift done by key
// swap. Starts from 1/sqrt(N k_i) on every arc of node i.
class MapGroverWalk {
 public:
  explicit MapGroverWalk(const Graph& g) : g_(&g) {
    std::size_t active = 0;
    for (node_id i = 0; i < g.node_count(); ++i) active += g.degree(i) > 0;
    for (node_id i = 0; i < g.node_count(); ++i)
      for (auto j : g.neighbors(i))
        amp_[{i, j}] = 1.0 / std::sqrt(static_cast<double>(active) * static_cast<double>(g.degree(i)));
  }

  void step() {
    std::map<std::pair<node_id, node_id>, std::complex<double>> coined;
    for (node_id i = 0; i < g_->node_count(); ++i) {
      auto nbrs = g_->neighbors(i);
      const double k = static_cast<double>(nbrs.size());
      for (auto j : nbrs) {
        std::complex<double> v{};
        for (auto l : nbrs) v += ((j == l ? -1.0 : 0.0) + 2.0 / k) * amp_.at({i, l});
        coined[{i, j}] = v;
      }
    }
    amp_.clear();
    for (const auto& [arc, v] : coined) amp_[{arc.second, arc.first}] = v;
  }

  std::complex<double> at(node_id i, node_id j) const { return amp_.at({i, j}); }

 private:
  const Graph* g_;
  std::map<std::pair<node_id, node_id>, std::complex<double>> amp_;
};

}  // namespace qwalkvec::fixtures
