#pragma once

// Gaussian kernel density estimate on [0, 1] and the top-fraction threshold
// derived from it.
//
// Each kernel is truncated to [0, 1] and renormalized there, so the density
// integrates to one on the unit interval and no mass leaks past the edges.
// The bandwidth is picked from a fixed log-spaced grid by k-fold
// cross-validated log-likelihood.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace simclust {

struct KdeOptions
{
  std::size_t min_samples = 30;
  std::size_t grid_size = 20;       // candidate bandwidths
  double min_bandwidth = 0.005;
  double max_bandwidth = 0.5;
  std::size_t folds = 5;
  std::size_t threshold_grid = 4096; // evaluation points on [0, 1]
  std::uint64_t seed = 0;           // fold assignment
};

namespace detail {

inline double
std_normal_cdf(double z)
{
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

// kernels farther than this many bandwidths contribute < 1e-16 of the peak
inline constexpr double kKernelCutoff = 8.5;

//! Sum of truncated kernels at `x` from the sorted `centers`.
inline double
truncated_kernel_sum(std::span<const double> centers, std::span<const double> inv_mass, double h,
                     double x)
{
  const auto lo = std::lower_bound(centers.begin(), centers.end(), x - kKernelCutoff * h);
  const auto hi = std::upper_bound(lo, centers.end(), x + kKernelCutoff * h);
  const double inv_h = 1.0 / h;
  double sum = 0.0;
  for (auto it = lo; it != hi; ++it) {
    const double z = (x - *it) * inv_h;
    sum += std::exp(-0.5 * z * z) * inv_mass[static_cast<std::size_t>(it - centers.begin())];
  }
  return sum * inv_h / std::sqrt(2.0 * std::numbers::pi);
}

//! 1 / (mass of a Gaussian kernel centred at c with bandwidth h inside [0, 1]).
inline std::vector<double>
inverse_masses(std::span<const double> centers, double h)
{
  std::vector<double> out(centers.size());
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const double mass = std_normal_cdf((1.0 - centers[i]) / h) - std_normal_cdf(-centers[i] / h);
    out[i] = 1.0 / mass;
  }
  return out;
}

} // namespace detail

//! Fitted boundary-corrected Gaussian KDE over values in [0, 1].
class KdeModel
{
public:
  KdeModel(std::vector<double> samples, double bandwidth)
    : samples_(std::move(samples)), bandwidth_(bandwidth)
  {
    if (!(bandwidth_ > 0.0))
      throw std::invalid_argument("KdeModel: bandwidth must be positive");
    if (samples_.empty())
      throw std::invalid_argument("KdeModel: no samples");
    std::sort(samples_.begin(), samples_.end());
    inv_mass_ = detail::inverse_masses(samples_, bandwidth_);
  }

  double bandwidth() const { return bandwidth_; }
  std::span<const double> samples() const { return samples_; }

  //! Density at x; zero outside [0, 1].
  double pdf(double x) const
  {
    if (x < 0.0 || x > 1.0)
      return 0.0;
    return detail::truncated_kernel_sum(samples_, inv_mass_, bandwidth_, x) /
           static_cast<double>(samples_.size());
  }

  double cv_score = 0.0; // mean held-out log-likelihood at the chosen bandwidth

private:
  std::vector<double> samples_;
  double bandwidth_;
  std::vector<double> inv_mass_;
};

//! Log-spaced candidate bandwidths.
inline std::vector<double>
bandwidth_grid(const KdeOptions& opts = {})
{
  std::vector<double> grid(opts.grid_size);
  const double lo = std::log(opts.min_bandwidth);
  const double hi = std::log(opts.max_bandwidth);
  for (std::size_t k = 0; k < opts.grid_size; ++k) {
    const double t = opts.grid_size == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(opts.grid_size - 1);
    grid[k] = std::exp(lo + t * (hi - lo));
  }
  return grid;
}

//! Mean held-out log-likelihood of bandwidth `h` under a fixed fold split.
inline double
cross_validated_log_likelihood(std::span<const double> values, std::span<const std::size_t> fold_of,
                               std::size_t folds, double h)
{
  double total = 0.0;
  std::vector<double> train;
  std::vector<double> test;
  for (std::size_t f = 0; f < folds; ++f) {
    train.clear();
    test.clear();
    for (std::size_t i = 0; i < values.size(); ++i)
      (fold_of[i] == f ? test : train).push_back(values[i]);
    if (test.empty() || train.empty())
      continue;
    std::sort(train.begin(), train.end());
    const auto inv_mass = detail::inverse_masses(train, h);
    const double norm = 1.0 / static_cast<double>(train.size());
    for (double x : test) {
      const double d = detail::truncated_kernel_sum(train, inv_mass, h, x) * norm;
      total += std::log(std::max(d, 1e-300));
    }
  }
  return total / static_cast<double>(values.size());
}

//! Picks the bandwidth by cross-validation. Returns nullopt when the data
//! cannot support a KDE (fewer than min_samples values, or zero variance);
//! callers then fall back to the empirical quantile.
//! Throws std::invalid_argument for values outside [0, 1].
inline std::optional<KdeModel>
fit_best_model(std::span<const double> values, const KdeOptions& opts = {})
{
  std::vector<double> clean;
  clean.reserve(values.size());
  for (double v : values) {
    if (!std::isfinite(v) || v < -1e-9 || v > 1.0 + 1e-9)
      throw std::invalid_argument("fit_best_model: values must lie in [0, 1]");
    clean.push_back(std::clamp(v, 0.0, 1.0));
  }
  if (clean.size() < opts.min_samples)
    return std::nullopt;
  const auto [mn, mx] = std::minmax_element(clean.begin(), clean.end());
  if (*mn == *mx)
    return std::nullopt;

  std::vector<std::size_t> order(clean.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(opts.seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> fold_of(clean.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos)
    fold_of[order[pos]] = pos % opts.folds;

  double best_h = 0.0;
  double best_score = -INFINITY;
  for (double h : bandwidth_grid(opts)) {
    const double score = cross_validated_log_likelihood(clean, fold_of, opts.folds, h);
    if (score >= best_score) { // ties go to the larger bandwidth
      best_score = score;
      best_h = h;
    }
  }
  KdeModel model(std::move(clean), best_h);
  model.cv_score = best_score;
  return model;
}

//! Smallest x in [0, 1] whose upper-tail mass equals `top_fraction`, from a
//! trapezoidal integral over a uniform grid, interpolated linearly between
//! grid points.
inline double
estimate_threshold(const KdeModel& model, double top_fraction, std::size_t grid_size = 4096)
{
  if (!(top_fraction > 0.0 && top_fraction < 1.0))
    throw std::invalid_argument("estimate_threshold: top fraction must be in (0, 1)");
  const std::size_t g = std::max<std::size_t>(grid_size, 2);
  const double dx = 1.0 / static_cast<double>(g - 1);
  std::vector<double> cdf(g, 0.0);
  double prev = model.pdf(0.0);
  for (std::size_t i = 1; i < g; ++i) {
    const double cur = model.pdf(static_cast<double>(i) * dx);
    cdf[i] = cdf[i - 1] + 0.5 * (prev + cur) * dx;
    prev = cur;
  }
  const double total = cdf.back();
  auto tail = [&](std::size_t i) { return 1.0 - cdf[i] / total; };
  for (std::size_t i = 0; i + 1 < g; ++i) {
    const double t0 = tail(i);
    const double t1 = tail(i + 1);
    if (t1 <= top_fraction) {
      if (t0 <= top_fraction || t0 == t1)
        return static_cast<double>(i) * dx;
      const double frac = (t0 - top_fraction) / (t0 - t1);
      return (static_cast<double>(i) + frac) * dx;
    }
  }
  return 1.0;
}

//! Nearest-rank empirical (1 - p) quantile.
inline double
empirical_upper_quantile(std::span<const double> values, double top_fraction)
{
  if (values.empty())
    throw std::invalid_argument("empirical_upper_quantile: no values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil((1.0 - top_fraction) * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

struct ThresholdEstimate
{
  double threshold = 0.0;
  bool used_fallback = false;
  double bandwidth = 0.0; // 0 when the fallback path was taken
};

//! KDE threshold with the empirical-quantile fallback for tiny or constant samples.
inline ThresholdEstimate
top_fraction_threshold(std::span<const double> values, double top_fraction, const KdeOptions& opts = {})
{
  if (!(top_fraction > 0.0 && top_fraction < 1.0))
    throw std::invalid_argument("top fraction must be in (0, 1)");
  const auto model = fit_best_model(values, opts);
  if (!model)
    return {empirical_upper_quantile(values, top_fraction), true, 0.0};
  return {estimate_threshold(*model, top_fraction, opts.threshold_grid), false, model->bandwidth()};
}

} // namespace simclust
