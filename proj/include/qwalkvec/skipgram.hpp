#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "qwalkvec/embed.hpp"
#include "qwalkvec/walks.hpp"

namespace qwalkvec {

struct SkipGramConfig {
  std::size_t dim = 128;
  std::size_t window = 10;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;
  std::uint64_t seed = 42;
};

inline double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

// Negative-sampling loss for one (center, context, negatives) triple:
//   -log sigma(u.v_pos) - sum_k log sigma(-u.v_neg_k)
// Gradients are accumulated (+=) into the grad_* buffers.
inline double sgns_loss_grad(std::span<const double> center, std::span<const double> context,
                             std::span<const std::span<const double>> negatives, std::span<double> grad_center,
                             std::span<double> grad_context, std::span<const std::span<double>> grad_negatives) {
  const auto d = center.size();
  auto dot = [d](std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) s += a[k] * b[k];
    return s;
  };
  double loss = 0.0;
  {
    double score = dot(center, context);
    double sp = sigmoid(score);
    loss -= std::log(std::max(sp, 1e-300));
    double g = sp - 1.0;
    for (std::size_t k = 0; k < d; ++k) {
      grad_center[k] += g * context[k];
      grad_context[k] += g * center[k];
    }
  }
  for (std::size_t n = 0; n < negatives.size(); ++n) {
    double score = dot(center, negatives[n]);
    double sn = sigmoid(score);
    loss -= std::log(std::max(1.0 - sn, 1e-300));
    for (std::size_t k = 0; k < d; ++k) {
      grad_center[k] += sn * negatives[n][k];
      grad_negatives[n][k] += sn * center[k];
    }
  }
  return loss;
}

struct SkipGramResult {
  FeatureMatrix embedding;  // input-side vectors, kind=baseline
  std::vector<double> epoch_loss;  // mean loss per pair after each epoch, fixed negatives
};

namespace detail {

// Mean SGNS loss over every (center, context) pair within the full window.
// Parameters are frozen and negatives come from a fresh RNG with a fixed seed,
// so successive calls score the same objective.
inline double corpus_loss(const WalkCorpus& corpus, const std::vector<double>& input,
                          const std::vector<double>& output, std::size_t d, std::size_t window,
                          std::size_t negatives, std::discrete_distribution<std::size_t> noise, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto row = [d](const std::vector<double>& m, std::size_t i) { return std::span<const double>(m.data() + i * d, d); };
  auto dot = [d](std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) s += a[k] * b[k];
    return s;
  };
  double total = 0.0;
  std::size_t pairs = 0;
  for (const auto& walk : corpus.walks)
    for (std::size_t pos = 0; pos < walk.size(); ++pos) {
      std::size_t lo = pos >= window ? pos - window : 0;
      std::size_t hi = std::min(walk.size() - 1, pos + window);
      auto u = row(input, walk[pos]);
      for (std::size_t c = lo; c <= hi; ++c) {
        if (c == pos) continue;
        total -= std::log(std::max(sigmoid(dot(u, row(output, walk[c]))), 1e-300));
        for (std::size_t k = 0; k < negatives; ++k) {
          auto n = noise(rng);
          if (n == walk[c]) continue;
          total -= std::log(std::max(sigmoid(-dot(u, row(output, n))), 1e-300));
        }
        ++pairs;
      }
    }
  return pairs ? total / static_cast<double>(pairs) : 0.0;
}

}  // namespace detail

// SGD over the corpus with word2vec-style dynamic windows and a unigram^0.75
// noise distribution. Learning rate decays linearly to 1e-4 of its start value.
inline SkipGramResult train_skipgram(const WalkCorpus& corpus, std::size_t node_count, const SkipGramConfig& cfg) {
  if (cfg.dim < 2) throw std::invalid_argument("embedding dimension must be >= 2");
  if (cfg.window < 1) throw std::invalid_argument("window must be >= 1");
  std::size_t tokens = 0;
  std::vector<double> counts(node_count, 0.0);
  for (const auto& walk : corpus.walks) {
    tokens += walk.size();
    for (auto v : walk) counts.at(v) += 1.0;
  }
  if (tokens == 0) throw std::invalid_argument("empty corpus");
  const std::size_t d = cfg.dim;

  std::mt19937_64 rng(cfg.seed);
  std::vector<double> input(node_count * d), output(node_count * d, 0.0);
  {
    std::uniform_real_distribution<double> init(-0.5 / d, 0.5 / d);
    for (auto& x : input) x = init(rng);
  }
  std::vector<double> noise_w(node_count);
  for (std::size_t i = 0; i < node_count; ++i) noise_w[i] = std::pow(counts[i], 0.75);
  std::discrete_distribution<std::size_t> noise(noise_w.begin(), noise_w.end());

  std::vector<std::size_t> order(corpus.walks.size());
  std::iota(order.begin(), order.end(), 0);

  const double total_steps = static_cast<double>(tokens * cfg.epochs);
  double processed = 0.0;
  std::vector<double> grad_center(d), grad_context(d), grad_neg(cfg.negatives * d);
  std::vector<std::size_t> negs(cfg.negatives);
  std::vector<std::span<const double>> neg_views(cfg.negatives);
  std::vector<std::span<double>> neg_grads(cfg.negatives);
  auto row = [d](std::vector<double>& m, std::size_t i) { return std::span<double>(m.data() + i * d, d); };

  SkipGramResult result;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (auto w : order) {
      const auto& walk = corpus.walks[w];
      for (std::size_t pos = 0; pos < walk.size(); ++pos, processed += 1.0) {
        double lr = cfg.learning_rate * std::max(1e-4, 1.0 - processed / total_steps);
        std::uniform_int_distribution<std::size_t> shrink(0, cfg.window - 1);
        std::size_t span = cfg.window - shrink(rng);
        std::size_t lo = pos >= span ? pos - span : 0;
        std::size_t hi = std::min(walk.size() - 1, pos + span);
        const auto center = walk[pos];
        for (std::size_t c = lo; c <= hi; ++c) {
          if (c == pos) continue;
          const auto context = walk[c];
          std::size_t used = 0;
          for (std::size_t k = 0; k < cfg.negatives; ++k) {
            auto n = noise(rng);
            if (n == context) continue;
            negs[used] = n;
            neg_views[used] = row(output, n);
            neg_grads[used] = std::span<double>(grad_neg.data() + used * d, d);
            ++used;
          }
          std::fill(grad_center.begin(), grad_center.end(), 0.0);
          std::fill(grad_context.begin(), grad_context.end(), 0.0);
          std::fill(grad_neg.begin(), grad_neg.begin() + used * d, 0.0);
          sgns_loss_grad(row(input, center), row(output, context),
                                       std::span<const std::span<const double>>(neg_views.data(), used), grad_center,
                                       grad_context, std::span<const std::span<double>>(neg_grads.data(), used));
          auto out_ctx = row(output, context);
          for (std::size_t k = 0; k < d; ++k) out_ctx[k] -= lr * grad_context[k];
          for (std::size_t n = 0; n < used; ++n) {
            auto out_n = row(output, negs[n]);
            for (std::size_t k = 0; k < d; ++k) out_n[k] -= lr * neg_grads[n][k];
          }
          auto in_c = row(input, center);
          for (std::size_t k = 0; k < d; ++k) in_c[k] -= lr * grad_center[k];
        }
      }
    }
    result.epoch_loss.push_back(
        detail::corpus_loss(corpus, input, output, d, cfg.window, cfg.negatives, noise, cfg.seed ^ 0x9e3779b97f4a7c15ull));
  }

  result.embedding = FeatureMatrix(node_count, d);
  result.embedding.values = std::move(input);
  result.embedding.kind = "baseline";
  return result;
}

}  // namespace qwalkvec
