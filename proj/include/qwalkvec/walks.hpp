#pragma once

#include <cstdint>
#include <future>
#include <ostream>
#include <random>
#include <stdexcept>
#include <vector>

#include "qwalkvec/graph.hpp"

namespace qwalkvec {

// walks[source * walks_per_node + r] is the r-th walk started at `source`.
struct WalkCorpus {
  std::vector<std::vector<node_id>> walks;
  std::size_t walks_per_node = 0;
  std::size_t walk_length = 0;
};

struct BiasParams {
  double p = 1.0;  // return
  double q = 1.0;  // in-out

  void validate() const {
    if (!(p > 0.0) || !(q > 0.0)) throw std::invalid_argument("node2vec p and q must be positive");
  }
  bool unbiased() const noexcept { return p == 1.0 && q == 1.0; }
};

// Independent stream per (seed, source).
inline std::mt19937_64 source_rng(std::uint64_t seed, std::uint64_t source) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(source), static_cast<std::uint32_t>(source >> 32), 0x5157u};
  return std::mt19937_64(seq);
}

inline node_id uniform_neighbor(const Graph& g, node_id cur, std::mt19937_64& rng) {
  auto nbrs = g.neighbors(cur);
  std::uniform_int_distribution<std::size_t> pick(0, nbrs.size() - 1);
  return nbrs[pick(rng)];
}

// Second-order node2vec rule: probabilities over neighbors(cur), in neighbor order.
inline std::vector<double> node2vec_transition(const Graph& g, node_id prev, node_id cur, const BiasParams& bias) {
  if (!g.has_edge(prev, cur)) throw std::invalid_argument("node2vec_transition: prev is not adjacent to cur");
  auto nbrs = g.neighbors(cur);
  std::vector<double> w(nbrs.size());
  double total = 0.0;
  for (std::size_t k = 0; k < nbrs.size(); ++k) {
    auto x = nbrs[k];
    if (x == prev)
      w[k] = 1.0 / bias.p;
    else if (g.has_edge(x, prev))
      w[k] = 1.0;
    else
      w[k] = 1.0 / bias.q;
    total += w[k];
  }
  for (auto& v : w) v /= total;
  return w;
}

namespace detail {

template <typename StepFn>
WalkCorpus generate_walks(const Graph& g, std::size_t walks_per_node, std::size_t walk_length, std::uint64_t seed,
                          unsigned threads, StepFn&& next) {
  if (walks_per_node < 1) throw std::invalid_argument("walks per node must be >= 1");
  if (walk_length < 2) throw std::invalid_argument("walk length must be >= 2");
  WalkCorpus corpus;
  corpus.walks_per_node = walks_per_node;
  corpus.walk_length = walk_length;
  corpus.walks.resize(g.node_count() * walks_per_node);

  auto run_source = [&](node_id s) {
    auto rng = source_rng(seed, s);
    for (std::size_t r = 0; r < walks_per_node; ++r) {
      auto& walk = corpus.walks[s * walks_per_node + r];
      walk.reserve(walk_length);
      walk.push_back(s);
      while (walk.size() < walk_length) {
        auto cur = walk.back();
        if (g.degree(cur) == 0) break;
        walk.push_back(next(walk, rng));
      }
    }
  };
  threads = std::max(1u, threads);
  if (threads == 1) {
    for (node_id s = 0; s < g.node_count(); ++s) run_source(s);
  } else {
    std::vector<std::future<void>> jobs;
    for (unsigned t = 0; t < threads; ++t)
      jobs.push_back(std::async(std::launch::async, [&, t] {
        for (node_id s = t; s < g.node_count(); s += threads) run_source(s);
      }));
    for (auto& j : jobs) j.get();
  }
  return corpus;
}

}  // namespace detail

inline WalkCorpus uniform_walks(const Graph& g, std::size_t walks_per_node, std::size_t walk_length, std::uint64_t seed,
                                unsigned threads = 1) {
  return detail::generate_walks(g, walks_per_node, walk_length, seed, threads,
                                [&](const std::vector<node_id>& walk, std::mt19937_64& rng) {
                                  return uniform_neighbor(g, walk.back(), rng);
                                });
}

inline WalkCorpus biased_walks(const Graph& g, std::size_t walks_per_node, std::size_t walk_length,
                               const BiasParams& bias, std::uint64_t seed, unsigned threads = 1) {
  bias.validate();
  return detail::generate_walks(
      g, walks_per_node, walk_length, seed, threads, [&](const std::vector<node_id>& walk, std::mt19937_64& rng) {
        // p = q = 1 takes the uniform path so the two walkers coincide draw for draw
        if (walk.size() < 2 || bias.unbiased()) return uniform_neighbor(g, walk.back(), rng);
        auto cur = walk.back();
        auto probs = node2vec_transition(g, walk[walk.size() - 2], cur, bias);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double x = u(rng);
        auto nbrs = g.neighbors(cur);
        double acc = 0.0;
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
          acc += probs[k];
          if (x < acc) return nbrs[k];
        }
        return nbrs.back();
      });
}

// One walk per line, space-separated original node ids.
inline void write_corpus(const WalkCorpus& corpus, const Graph& g, std::ostream& os) {
  for (const auto& walk : corpus.walks) {
    for (std::size_t k = 0; k < walk.size(); ++k) os << (k ? " " : "") << g.original_id(walk[k]);
    os << '\n';
  }
}

}  // namespace qwalkvec
