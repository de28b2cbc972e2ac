#pragma once

// Supervised verification scheduling: labeling, a logistic scorer, recall
// simulation, the verification budget and budgeted verification.

#include "cluster.hpp"
#include "error.hpp"
#include "features.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <queue>
#include <span>
#include <vector>

namespace simclust {

struct LabeledCluster
{
  ClusterId id = 0;
  ClusterFeatureVector features{};
  int label = 0; // 1 = high similarity
  double true_si = 0.0;
};

struct LabelSplit
{
  std::vector<ClusterId> pos;
  std::vector<ClusterId> neg;
  std::vector<double> pos_si;
  std::vector<double> neg_si;
  bool imbalanced = false; // sample ran out before both classes reached N
};

//! Walks the (already shuffled) sample assigning SI >= thr to `pos`, stopping
//! once both classes hold at least N clusters.
template <class SiFn>
LabelSplit
label_sample(std::span<const ClusterId> sample, SiFn&& si, double thr, std::size_t class_size)
{
  if (class_size == 0)
    throw std::invalid_argument("label_sample: class size must be at least 1");
  LabelSplit out;
  for (ClusterId c : sample) {
    if (out.pos.size() >= class_size && out.neg.size() >= class_size)
      break;
    const double v = si(c);
    if (v >= thr) {
      out.pos.push_back(c);
      out.pos_si.push_back(v);
    } else {
      out.neg.push_back(c);
      out.neg_si.push_back(v);
    }
  }
  out.imbalanced = out.pos.size() < class_size || out.neg.size() < class_size;
  return out;
}

//! Probabilistic binary scorer over cluster feature vectors.
class Scorer
{
public:
  virtual ~Scorer() = default;
  //! Probability of the high-similarity class, strictly inside (0, 1).
  virtual double score(std::span<const double> u) const = 0;
};

inline double
sigmoid_clamped(double z)
{
  z = std::clamp(z, -35.0, 35.0);
  return 1.0 / (1.0 + std::exp(-z));
}

struct TrainOptions
{
  double learning_rate = 0.1;
  double l2 = 1e-4;
  std::size_t max_iterations = 500;
  double gradient_tolerance = 1e-6;
};

class LogisticModel final : public Scorer
{
public:
  LogisticModel() = default;

  //! Raw model; inputs are standardized with (u - mean) / scale before the dot product.
  LogisticModel(std::vector<double> coefficients, double intercept, std::vector<double> mean,
                std::vector<double> scale)
    : coef_(std::move(coefficients)), intercept_(intercept), mean_(std::move(mean)), scale_(std::move(scale))
  {
    if (mean_.empty())
      mean_.assign(coef_.size(), 0.0);
    if (scale_.empty())
      scale_.assign(coef_.size(), 1.0);
    if (mean_.size() != coef_.size() || scale_.size() != coef_.size())
      throw std::invalid_argument("LogisticModel: parameter size mismatch");
  }

  std::size_t dimension() const { return coef_.size(); }
  std::span<const double> coefficients() const { return coef_; }
  double intercept() const { return intercept_; }

  double logit(std::span<const double> u) const
  {
    if (u.size() != coef_.size())
      throw std::invalid_argument("LogisticModel: expected " + std::to_string(coef_.size()) +
                                  " features, got " + std::to_string(u.size()));
    double z = intercept_;
    for (std::size_t j = 0; j < coef_.size(); ++j)
      z += coef_[j] * (u[j] - mean_[j]) / scale_[j];
    return z;
  }

  double score(std::span<const double> u) const override { return sigmoid_clamped(logit(u)); }

  std::size_t iterations = 0;
  double final_loss = 0.0;

private:
  std::vector<double> coef_;
  double intercept_ = 0.0;
  std::vector<double> mean_;
  std::vector<double> scale_;
};

//! Deterministic L2-regularized logistic regression by full-batch gradient
//! descent from zero on standardized features. Throws TrainingError unless
//! both classes are present.
inline LogisticModel
train_logistic(std::span<const LabeledCluster> data, const TrainOptions& opts = {})
{
  std::size_t positives = 0;
  for (const auto& d : data)
    positives += d.label == 1 ? 1 : 0;
  if (positives == 0 || positives == data.size())
    throw TrainingError("training needs both high and low similarity clusters; got " +
                        std::to_string(positives) + " high of " + std::to_string(data.size()));

  constexpr std::size_t d = kClusterFeatureCount;
  const double n = static_cast<double>(data.size());
  std::vector<double> mean(d, 0.0);
  std::vector<double> scale(d, 0.0);
  for (const auto& row : data)
    for (std::size_t j = 0; j < d; ++j)
      mean[j] += row.features[j];
  for (auto& m : mean)
    m /= n;
  for (const auto& row : data)
    for (std::size_t j = 0; j < d; ++j) {
      const double c = row.features[j] - mean[j];
      scale[j] += c * c;
    }
  for (auto& s : scale) {
    s = std::sqrt(s / n);
    if (!(s > 1e-12))
      s = 1.0;
  }

  std::vector<std::array<double, d>> x(data.size());
  for (std::size_t i = 0; i < data.size(); ++i)
    for (std::size_t j = 0; j < d; ++j)
      x[i][j] = (data[i].features[j] - mean[j]) / scale[j];

  std::vector<double> w(d, 0.0);
  double b = 0.0;
  std::vector<double> grad(d);
  std::size_t it = 0;
  double loss = 0.0;
  for (; it < opts.max_iterations; ++it) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0.0;
    loss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double z = b;
      for (std::size_t j = 0; j < d; ++j)
        z += w[j] * x[i][j];
      const double pr = sigmoid_clamped(z);
      const double y = data[i].label == 1 ? 1.0 : 0.0;
      const double err = pr - y;
      for (std::size_t j = 0; j < d; ++j)
        grad[j] += err * x[i][j];
      grad_b += err;
      loss -= y * std::log(pr) + (1.0 - y) * std::log(1.0 - pr);
    }
    double gnorm2 = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      grad[j] = grad[j] / n + opts.l2 * w[j];
      gnorm2 += grad[j] * grad[j];
    }
    grad_b /= n;
    gnorm2 += grad_b * grad_b;
    loss /= n;
    if (std::sqrt(gnorm2) < opts.gradient_tolerance)
      break;
    for (std::size_t j = 0; j < d; ++j)
      w[j] -= opts.learning_rate * grad[j];
    b -= opts.learning_rate * grad_b;
  }

  LogisticModel model(std::move(w), b, std::move(mean), std::move(scale));
  model.iterations = it;
  model.final_loss = loss;
  return model;
}

struct ScoredCluster
{
  ClusterId id = 0;
  double weight = 0.0;
};

//! Max-priority queue on weight; equal weights pop in ascending id order.
class RankedQueue
{
public:
  RankedQueue() = default;
  explicit RankedQueue(std::span<const ScoredCluster> items) : heap_(Less{}, {items.begin(), items.end()}) {}

  void push(ScoredCluster c) { heap_.push(c); }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  const ScoredCluster& top() const { return heap_.top(); }

  ScoredCluster pop()
  {
    ScoredCluster c = heap_.top();
    heap_.pop();
    return c;
  }

  //! Keeps only the n highest-priority entries.
  void truncate(std::size_t n)
  {
    if (heap_.size() <= n)
      return;
    std::vector<ScoredCluster> keep;
    keep.reserve(n);
    while (keep.size() < n)
      keep.push_back(pop());
    heap_ = Heap(Less{}, std::move(keep));
  }

private:
  struct Less
  {
    bool operator()(const ScoredCluster& a, const ScoredCluster& b) const
    {
      if (a.weight != b.weight)
        return a.weight < b.weight;
      return a.id > b.id;
    }
  };
  using Heap = std::priority_queue<ScoredCluster, std::vector<ScoredCluster>, Less>;
  Heap heap_;
};

struct BudgetEstimate
{
  double recall_approx = 1.0;
  std::size_t high_sim_indices = 0; // queued clusters with SI >= thr
  std::size_t queue_size = 0;       // N actually used (<= N)
  std::size_t pops = 0;
  std::size_t hits = 0;
  bool degenerate = false; // no queued cluster reached the threshold
};

inline std::size_t
ceil_count(double x)
{
  return static_cast<std::size_t>(std::ceil(x - 1e-9 * std::max(1.0, std::abs(x))));
}

//! Replays verification on the scored threshold sample to estimate the
//! recall reached after ceil(p * N) pops of the top-N queue.
template <class SiFn>
BudgetEstimate
simulate_recall(std::span<const ScoredCluster> scored, SiFn&& si, double thr, double top_fraction,
                std::size_t class_size)
{
  RankedQueue q(scored);
  q.truncate(class_size);
  BudgetEstimate est;
  est.queue_size = q.size();

  std::vector<ScoredCluster> queued;
  queued.reserve(q.size());
  {
    RankedQueue copy = q;
    while (!copy.empty())
      queued.push_back(copy.pop());
  }
  for (const auto& c : queued)
    est.high_sim_indices += si(c.id) >= thr ? 1 : 0;

  const std::size_t limit = ceil_count(top_fraction * static_cast<double>(est.queue_size));
  while (!q.empty() && est.pops < limit) {
    const ScoredCluster c = q.pop();
    ++est.pops;
    if (si(c.id) >= thr)
      ++est.hits;
  }
  if (est.high_sim_indices == 0) {
    est.degenerate = true;
    est.recall_approx = 1.0;
  } else {
    est.recall_approx = static_cast<double>(est.hits) / static_cast<double>(est.high_sim_indices);
  }
  return est;
}

//! ceil(r_d / recall_approx * high / N * total), clamped to [0, total].
inline std::size_t
compute_max_size(double desired_recall, double recall_approx, std::size_t high_sim_indices,
                 std::size_t class_size, std::size_t total_clusters)
{
  if (!(recall_approx > 0.0))
    throw std::domain_error("compute_max_size: recall estimate must be positive");
  if (class_size == 0)
    throw std::domain_error("compute_max_size: class size must be positive");
  const double x = desired_recall / recall_approx * (static_cast<double>(high_sim_indices) /
                                                     static_cast<double>(class_size)) *
                   static_cast<double>(total_clusters);
  if (!(x > 0.0))
    return 0;
  if (x >= static_cast<double>(total_clusters))
    return total_clusters;
  return std::min(ceil_count(x), total_clusters);
}

inline std::size_t
compute_max_size(double desired_recall, const BudgetEstimate& est, std::size_t class_size,
                 std::size_t total_clusters)
{
  return compute_max_size(desired_recall, est.recall_approx, est.high_sim_indices, class_size, total_clusters);
}

struct VerificationResult
{
  std::vector<ClusterId> accepted; // L_R in pop order
  std::vector<double> accepted_si;
  std::size_t checked = 0;
  std::size_t hits = 0;
};

//! Pops up to max_size clusters in descending weight, keeping those whose SI
//! reaches the threshold.
template <class SiFn>
VerificationResult
verify(std::span<const ScoredCluster> scored, SiFn&& si, double thr, std::size_t max_size)
{
  RankedQueue q(scored);
  VerificationResult out;
  while (!q.empty() && out.checked < max_size) {
    const ScoredCluster c = q.pop();
    ++out.checked;
    const double v = si(c.id);
    if (v >= thr) {
      ++out.hits;
      out.accepted.push_back(c.id);
      out.accepted_si.push_back(v);
    }
  }
  return out;
}

} // namespace simclust
