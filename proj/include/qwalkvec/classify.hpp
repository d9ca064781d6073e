#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "qwalkvec/embed.hpp"
#include "qwalkvec/graph.hpp"

namespace qwalkvec {

struct SplitSpec {
  double train_ratio = 0.5;
  std::size_t repeats = 20;
  std::uint64_t seed = 42;

  void validate() const {
    if (!(train_ratio > 0.0 && train_ratio < 1.0)) throw std::invalid_argument("train ratio must lie in (0,1)");
    if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");
  }
};

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Uniform random subset of round(T_R * N) rows for training; the stream
// depends only on (seed, repeat_index) so every method sees the same splits.
inline Split split(std::size_t n, const SplitSpec& spec, std::size_t repeat_index) {
  spec.validate();
  auto train_size = static_cast<std::size_t>(std::llround(spec.train_ratio * static_cast<double>(n)));
  if (train_size == 0 || train_size >= n)
    throw std::invalid_argument("degenerate split: " + std::to_string(train_size) + " of " + std::to_string(n) +
                                " rows for training");
  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                    static_cast<std::uint32_t>(repeat_index), 0x53504cu};
  std::mt19937_64 rng(seq);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Split s;
  s.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(train_size));
  s.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(train_size), perm.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

inline Split split(const LabelMap& labels, const SplitSpec& spec, std::size_t repeat_index) {
  return split(labels.size(), spec, repeat_index);
}

// Binary L2-regularized logistic regression, intercept unregularized:
//   f(w, b) = 0.5 |w|^2 + C * sum_i log(1 + exp(-y_i (w.x_i + b)))
// Parameters are packed as [w_0 .. w_{d-1}, b].
class BinaryLogisticObjective {
 public:
  BinaryLogisticObjective(const FeatureMatrix& x, std::span<const std::size_t> rows, std::span<const int> y,
                          double c)
      : x_(&x), rows_(rows), y_(y), c_(c) {}

  std::size_t dim() const noexcept { return x_->cols + 1; }

  double value_grad(std::span<const double> theta, std::span<double> grad) const {
    const auto d = x_->cols;
    double f = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      f += 0.5 * theta[k] * theta[k];
      grad[k] = theta[k];
    }
    grad[d] = 0.0;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      auto xr = x_->row(rows_[r]);
      double z = theta[d];
      for (std::size_t k = 0; k < d; ++k) z += theta[k] * xr[k];
      const double m = y_[r] * z;
      f += c_ * (m > 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m)));
      // d/dz log(1+exp(-y z)) = -y * sigma(-y z)
      const double s = m > 0 ? std::exp(-m) / (1.0 + std::exp(-m)) : 1.0 / (1.0 + std::exp(m));
      const double g = -c_ * y_[r] * s;
      for (std::size_t k = 0; k < d; ++k) grad[k] += g * xr[k];
      grad[d] += g;
    }
    return f;
  }

 private:
  const FeatureMatrix* x_;
  std::span<const std::size_t> rows_;
  std::span<const int> y_;
  double c_;
};

struct MinimizeResult {
  std::vector<double> theta;
  std::vector<double> loss_history;  // objective after each accepted iterate, starting at theta0
  double grad_norm = 0.0;
  std::size_t iterations = 0;
};

// L-BFGS with backtracking (Armijo) line search; every accepted step decreases f.
template <typename Objective>
MinimizeResult minimize_lbfgs(const Objective& obj, std::vector<double> theta, double grad_tol = 1e-6,
                              std::size_t max_iter = 1000, std::size_t memory = 10) {
  const auto n = theta.size();
  std::vector<double> grad(n), new_grad(n), dir(n), trial(n);
  std::vector<std::vector<double>> s_hist, y_hist;
  std::vector<double> rho_hist;
  auto dotp = [n](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
    return s;
  };
  MinimizeResult res;
  double f = obj.value_grad(theta, grad);
  res.loss_history.push_back(f);
  for (; res.iterations < max_iter; ++res.iterations) {
    res.grad_norm = std::sqrt(dotp(grad, grad));
    if (res.grad_norm < grad_tol) break;
    // two-loop recursion
    dir = grad;
    std::vector<double> alpha(s_hist.size());
    for (std::size_t h = s_hist.size(); h-- > 0;) {
      alpha[h] = rho_hist[h] * dotp(s_hist[h], dir);
      for (std::size_t k = 0; k < n; ++k) dir[k] -= alpha[h] * y_hist[h][k];
    }
    if (!s_hist.empty()) {
      double gamma = dotp(s_hist.back(), y_hist.back()) / dotp(y_hist.back(), y_hist.back());
      for (auto& v : dir) v *= gamma;
    }
    for (std::size_t h = 0; h < s_hist.size(); ++h) {
      double beta = rho_hist[h] * dotp(y_hist[h], dir);
      for (std::size_t k = 0; k < n; ++k) dir[k] += s_hist[h][k] * (alpha[h] - beta);
    }
    for (auto& v : dir) v = -v;
    double slope = dotp(grad, dir);
    if (!(slope < 0.0)) {
      // not a descent direction: fall back to steepest descent
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      for (std::size_t k = 0; k < n; ++k) dir[k] = -grad[k];
      slope = -res.grad_norm * res.grad_norm;
    }
    double step = s_hist.empty() ? std::min(1.0, 1.0 / res.grad_norm) : 1.0;
    double f_new = f;
    bool accepted = false;
    for (int tries = 0; tries < 60; ++tries) {
      for (std::size_t k = 0; k < n; ++k) trial[k] = theta[k] + step * dir[k];
      f_new = obj.value_grad(trial, new_grad);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    std::vector<double> s(n), y(n);
    for (std::size_t k = 0; k < n; ++k) {
      s[k] = trial[k] - theta[k];
      y[k] = new_grad[k] - grad[k];
    }
    double sy = dotp(s, y);
    if (sy > 1e-12 * std::sqrt(dotp(s, s) * dotp(y, y))) {
      if (s_hist.size() == memory) {
        s_hist.erase(s_hist.begin());
        y_hist.erase(y_hist.begin());
        rho_hist.erase(rho_hist.begin());
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
    }
    theta.swap(trial);
    grad.swap(new_grad);
    f = f_new;
    res.loss_history.push_back(f);
  }
  res.grad_norm = std::sqrt(dotp(grad, grad));
  res.theta = std::move(theta);
  return res;
}

struct OvrModel {
  enum class Mode { trained, always_negative, always_positive };

  std::size_t dim = 0;
  int class_count = 0;
  double reg_strength = 1.0;
  std::vector<std::vector<double>> weights;  // per class, length dim
  std::vector<double> bias;
  std::vector<Mode> mode;
};

struct LogRegOptions {
  double reg_strength = 1.0;  // C; penalty 1/(2C) |w|^2 relative to the loss
  double grad_tol = 1e-6;
  std::size_t max_iter = 1000;
};

inline void require_finite(const FeatureMatrix& x) {
  for (double v : x.values)
    if (!std::isfinite(v)) throw data_error("features contain non-finite values");
}

inline OvrModel train_ovr_logreg(const FeatureMatrix& x, const LabelMap& labels, std::span<const std::size_t> train,
                                 const LogRegOptions& opt = {}) {
  require_finite(x);
  if (labels.size() != x.rows) throw std::invalid_argument("label count does not match feature rows");
  OvrModel model;
  model.dim = x.cols;
  model.class_count = labels.label_count;
  model.reg_strength = opt.reg_strength;
  for (int cls = 0; cls < labels.label_count; ++cls) {
    std::vector<int> y(train.size());
    std::size_t positives = 0;
    for (std::size_t r = 0; r < train.size(); ++r) {
      y[r] = labels[train[r]] == cls ? 1 : -1;
      positives += y[r] > 0;
    }
    model.weights.emplace_back(x.cols, 0.0);
    model.bias.push_back(0.0);
    if (positives == 0) {
      model.mode.push_back(OvrModel::Mode::always_negative);
      continue;
    }
    if (positives == train.size()) {
      model.mode.push_back(OvrModel::Mode::always_positive);
      continue;
    }
    BinaryLogisticObjective obj(x, train, y, opt.reg_strength);
    auto res = minimize_lbfgs(obj, std::vector<double>(obj.dim(), 0.0), opt.grad_tol, opt.max_iter);
    std::copy(res.theta.begin(), res.theta.begin() + static_cast<std::ptrdiff_t>(x.cols), model.weights.back().begin());
    model.bias.back() = res.theta.back();
    model.mode.push_back(OvrModel::Mode::trained);
  }
  return model;
}

inline double ovr_score(const OvrModel& m, int cls, std::span<const double> row) {
  switch (m.mode[cls]) {
    case OvrModel::Mode::always_negative: return -std::numeric_limits<double>::infinity();
    case OvrModel::Mode::always_positive: return std::numeric_limits<double>::infinity();
    case OvrModel::Mode::trained: break;
  }
  double z = m.bias[cls];
  for (std::size_t k = 0; k < row.size(); ++k) z += m.weights[cls][k] * row[k];
  return z;
}

// Argmax of per-class linear scores; ties go to the smallest class id.
inline std::vector<int> predict(const OvrModel& m, const FeatureMatrix& x, std::span<const std::size_t> rows) {
  if (x.cols != m.dim) throw std::invalid_argument("feature dimension does not match model");
  std::vector<int> out;
  out.reserve(rows.size());
  for (auto r : rows) {
    auto row = x.row(r);
    int best = 0;
    double best_score = ovr_score(m, 0, row);
    for (int c = 1; c < m.class_count; ++c) {
      double s = ovr_score(m, c, row);
      if (s > best_score) {
        best = c;
        best_score = s;
      }
    }
    out.push_back(best);
  }
  return out;
}

inline double micro_f1(std::span<const int> pred, std::span<const int> truth) {
  if (pred.size() != truth.size() || pred.empty()) throw std::invalid_argument("micro_f1: need equal, nonempty inputs");
  // single-label: global TP = correct, FP = FN = wrong
  std::size_t correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == truth[i];
  return static_cast<double>(correct) / static_cast<double>(pred.size());
}

// Unweighted mean over the label universe 0..class_count-1. A class with no
// true and no predicted members scores 0.
inline double macro_f1(std::span<const int> pred, std::span<const int> truth, int class_count) {
  if (pred.size() != truth.size() || pred.empty()) throw std::invalid_argument("macro_f1: need equal, nonempty inputs");
  std::vector<std::size_t> tp(class_count), fp(class_count), fn(class_count);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] == truth[i]) {
      ++tp[pred[i]];
    } else {
      ++fp[pred[i]];
      ++fn[truth[i]];
    }
  }
  double total = 0.0;
  for (int c = 0; c < class_count; ++c) {
    auto denom = 2 * tp[c] + fp[c] + fn[c];
    total += denom ? 2.0 * static_cast<double>(tp[c]) / static_cast<double>(denom) : 0.0;
  }
  return total / class_count;
}

inline double macro_f1(std::span<const int> pred, std::span<const int> truth) {
  int m = 0;
  for (auto v : pred) m = std::max(m, v + 1);
  for (auto v : truth) m = std::max(m, v + 1);
  return macro_f1(pred, truth, m);
}

}  // namespace qwalkvec
