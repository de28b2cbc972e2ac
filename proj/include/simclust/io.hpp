#pragma once

// CSV and JSON writers for run outputs. Numbers use the shortest round-trip
// representation so repeated runs produce identical bytes.

#include "pipeline.hpp"
#include "wkt.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>
#include <ostream>
#include <span>
#include <string>

namespace simclust {

//! cluster_id,target_id,si
inline void
write_links_csv(std::ostream& out, std::span<const Link> links, std::span<const Cluster> clusters,
                std::span<const Polygon> targets)
{
  out << "cluster_id,target_id,si\n";
  for (const auto& l : links) {
    const auto& t = targets[clusters[l.cluster].target];
    out << l.cluster << ',' << (t.id().empty() ? std::to_string(clusters[l.cluster].target) : t.id()) << ','
        << format_double(l.si) << '\n';
  }
}

//! cluster_id,f1..f16
inline void
write_features_csv(std::ostream& out, std::span<const std::pair<ClusterId, ClusterFeatureVector>> rows)
{
  out << "cluster_id";
  for (std::size_t j = 1; j <= kClusterFeatureCount; ++j)
    out << ",f" << j;
  out << '\n';
  for (const auto& [id, fv] : rows) {
    out << id;
    for (double v : fv)
      out << ',' << format_double(v);
    out << '\n';
  }
}

inline nlohmann::ordered_json
metrics_json(const RunMetrics& m, const PipelineConfig& cfg, std::optional<double> achieved_recall = {})
{
  nlohmann::ordered_json j;
  j["top_fraction"] = cfg.top_fraction;
  j["desired_recall"] = cfg.desired_recall;
  j["sample_size"] = cfg.sample_size;
  j["class_size"] = cfg.class_size;
  j["seed"] = cfg.seed;
  j["sources"] = m.sources;
  j["targets"] = m.targets;
  j["clusters"] = m.clusters;
  j["dropped_targets"] = m.dropped_targets;
  j["ranked_clusters"] = m.ranked_clusters;
  j["sample"] = m.sample;
  j["kde_sample"] = m.kde_sample;
  j["threshold"] = m.threshold;
  j["threshold_fallback"] = m.threshold_fallback;
  j["bandwidth"] = m.bandwidth;
  j["labeled_high"] = m.labeled_high;
  j["labeled_low"] = m.labeled_low;
  j["imbalanced_sample"] = m.imbalanced;
  j["train_iterations"] = m.train_iterations;
  j["train_loss"] = m.train_loss;
  j["recall_approx"] = m.estimate.recall_approx;
  j["high_sim_indices"] = m.estimate.high_sim_indices;
  j["simulation_queue"] = m.estimate.queue_size;
  j["simulation_pops"] = m.estimate.pops;
  j["simulation_hits"] = m.estimate.hits;
  j["degenerate_estimate"] = m.estimate.degenerate;
  j["max_size"] = m.max_size;
  j["checked"] = m.checked;
  j["hits"] = m.hits;
  j["targeted"] = m.targeted;
  j["checked_fraction"] = m.checked_fraction();
  j["checked_targeted_ratio"] = m.checked_targeted_ratio();
  j["si_computations"] = m.si_computations;
  if (achieved_recall)
    j["achieved_recall_vs_oracle"] = *achieved_recall;
  return j;
}

struct ReportRow
{
  double top_fraction = 0.0;
  double checked_fraction = 0.0;
  double checked_targeted_ratio = 0.0;
  std::optional<double> achieved_recall;
};

//! p,checked_fraction,checked_targeted_ratio,achieved_recall
inline void
write_report_csv(std::ostream& out, std::span<const ReportRow> rows)
{
  out << "p,checked_fraction,checked_targeted_ratio,achieved_recall\n";
  for (const auto& r : rows) {
    out << format_double(r.top_fraction) << ',' << format_double(r.checked_fraction) << ','
        << format_double(r.checked_targeted_ratio) << ',';
    if (r.achieved_recall)
      out << format_double(*r.achieved_recall);
    out << '\n';
  }
}

inline std::ofstream
open_output(const std::string& path)
{
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw InputError("cannot write " + path);
  return f;
}

} // namespace simclust
