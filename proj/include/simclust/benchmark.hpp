#pragma once

// Coverage sweeps over the top fraction, SI histograms and metric kernel timings.

#include "io.hpp"
#include "pipeline.hpp"
#include "synthetic.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace simclust {

struct SweepRow
{
  ReportRow report;
  RunMetrics metrics;
  double wall_seconds = 0.0;
};

//! One run per top fraction with the same seed; recall is measured against
//! the oracle when `with_oracle` is set.
inline std::vector<SweepRow>
sweep(std::span<const Polygon> sources, std::span<const Polygon> targets, const PipelineConfig& base,
      std::span<const double> fractions, bool with_oracle = true)
{
  std::vector<SweepRow> rows;
  std::vector<Link> oracle;
  if (with_oracle && !fractions.empty())
    oracle = brute_force_oracle(sources, targets, base);
  for (double p : fractions) {
    PipelineConfig cfg = base;
    cfg.top_fraction = p;
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = run_pipeline(sources, targets, cfg);
    const auto t1 = std::chrono::steady_clock::now();
    SweepRow row;
    row.metrics = res.metrics;
    row.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    row.report.top_fraction = p;
    row.report.checked_fraction = res.metrics.checked_fraction();
    row.report.checked_targeted_ratio = res.metrics.checked_targeted_ratio();
    if (with_oracle)
      row.report.achieved_recall = recall_against(res.links, top_set(oracle, p));
    rows.push_back(row);
  }
  return rows;
}

using SiHistogram = std::array<std::size_t, 10>;

//! Decile counts of SI values; 1.0 falls in the last bin.
inline SiHistogram
si_histogram(std::span<const Link> oracle)
{
  SiHistogram h{};
  for (const auto& l : oracle) {
    const auto bin = static_cast<std::size_t>(std::clamp(std::floor(l.si * 10.0), 0.0, 9.0));
    ++h[bin];
  }
  return h;
}

inline void
write_histogram_csv(std::ostream& out, const SiHistogram& h)
{
  out << "bin_low,bin_high,count\n";
  for (std::size_t b = 0; b < h.size(); ++b)
    out << format_double(static_cast<double>(b) / 10.0) << ',' << format_double(static_cast<double>(b + 1) / 10.0)
        << ',' << h[b] << '\n';
}

struct KernelTiming
{
  std::string name;
  double mean_ns = 0.0;
  double stddev_ns = 0.0; // across repetitions
  double checksum = 0.0;  // sum of results; reproducible from the seed
};

//! Mean ns per call of each metric kernel over n_pairs seeded random pairs.
inline std::vector<KernelTiming>
time_kernels(std::size_t n_pairs, std::uint64_t seed = 0, std::size_t repetitions = 5)
{
  std::vector<KernelTiming> out;
  if (n_pairs == 0)
    return out;
  GeneratorParams gp;
  gp.neighborhoods = n_pairs;
  gp.min_members = gp.max_members = 1;
  gp.high_fraction = 0.5;
  gp.seed = seed;
  const auto data = generate_synthetic(gp);
  std::vector<Polygon> a;
  std::vector<Polygon> b;
  for (std::size_t k = 0; k < n_pairs; ++k) {
    a.push_back(center_at_origin(data.targets[k]));
    b.push_back(center_at_origin(data.sources[k]));
  }

  using Kernel = std::function<double(const Polygon&, const Polygon&)>;
  const std::array<std::pair<const char*, Kernel>, kMetricCount + 1> kernels = {{
    {"jaccard", [](const Polygon& x, const Polygon& y) { return jaccard(x, y); }},
    {"area", [](const Polygon& x, const Polygon& y) { return area_similarity(x, y); }},
    {"curvature", [](const Polygon& x, const Polygon& y) { return curvature_similarity(x, y); }},
    {"fourier", [](const Polygon& x, const Polygon& y) { return fourier_similarity(x, y); }},
    {"aspect_ratio", [](const Polygon& x, const Polygon& y) { return aspect_ratio_similarity(x, y); }},
    {"perimeter", [](const Polygon& x, const Polygon& y) { return perimeter_similarity(x, y); }},
    {"bbox_distance", [](const Polygon& x, const Polygon& y) { return bbox_distance_similarity(x, y); }},
    {"circularity", [](const Polygon& x, const Polygon& y) { return circularity_similarity(x, y); }},
    {"combined", [](const Polygon& x, const Polygon& y) {
       return combined_similarity(x, y, MetricWeights::equal()).combined;
     }},
  }};

  for (const auto& [name, fn] : kernels) {
    KernelTiming t;
    t.name = name;
    std::vector<double> per_rep;
    for (std::size_t r = 0; r < std::max<std::size_t>(repetitions, 1); ++r) {
      double sum = 0.0;
      const auto t0 = std::chrono::steady_clock::now();
      for (std::size_t k = 0; k < n_pairs; ++k)
        sum += fn(a[k], b[k]);
      const auto t1 = std::chrono::steady_clock::now();
      per_rep.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count() / static_cast<double>(n_pairs));
      t.checksum = sum;
    }
    for (double v : per_rep)
      t.mean_ns += v;
    t.mean_ns /= static_cast<double>(per_rep.size());
    for (double v : per_rep)
      t.stddev_ns += (v - t.mean_ns) * (v - t.mean_ns);
    t.stddev_ns = std::sqrt(t.stddev_ns / static_cast<double>(per_rep.size()));
    out.push_back(t);
  }
  return out;
}

} // namespace simclust
