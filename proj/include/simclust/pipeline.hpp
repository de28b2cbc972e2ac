#pragma once

// End-to-end run: clustering, threshold estimation, labeling and training,
// recall simulation, budgeted verification; plus the brute-force oracle.

#include "cluster.hpp"
#include "error.hpp"
#include "features.hpp"
#include "kde.hpp"
#include "metrics.hpp"
#include "scheduler.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace simclust {

enum class SiMembers
{
  with_representative, // cluster objects are g and its members
  sources_only,        // members only
};

struct PipelineConfig
{
  double top_fraction = 0.1;
  double desired_recall = 0.9;
  std::size_t sample_size = 500;
  std::size_t class_size = 200;
  MetricWeights weights = MetricWeights::equal();
  FourierParams fourier{};
  std::uint64_t seed = 0;
  Normalization normalization = Normalization::max_denominator;
  SiMembers si_members = SiMembers::with_representative;
  SamplingMode sampling = SamplingMode::pair_weighted;
  bool exhaustive = false; // verification budget forced to every cluster

  //! Throws InputError on out-of-range settings.
  void validate() const
  {
    if (!(top_fraction > 0.0 && top_fraction < 1.0))
      throw InputError("top fraction must be in (0, 1)");
    if (!(desired_recall > 0.0 && desired_recall <= 1.0))
      throw InputError("desired recall must be in (0, 1]");
    if (class_size < 1)
      throw InputError("class size must be at least 1");
    if (sample_size < 2 * class_size)
      throw InputError("sample size must be at least twice the class size");
    if (fourier.points < 2 || fourier.coefficients < 1 || fourier.coefficients >= fourier.points)
      throw InputError("invalid Fourier descriptor parameters");
  }
};

//! Independent 64-bit stream seeds derived from one run seed.
inline std::uint64_t
derive_seed(std::uint64_t seed, std::uint64_t stream)
{
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

//! Memoized similarity index per cluster, with lazily built shape profiles.
class SimilarityCalculator
{
public:
  SimilarityCalculator(std::span<const Polygon> sources, std::span<const Polygon> targets,
                       std::span<const Cluster> clusters, const MetricWeights& weights,
                       const FourierParams& fourier, SiMembers mode, std::uint64_t seed)
    : sources_(sources), targets_(targets), clusters_(clusters), weights_(weights), fourier_(fourier),
      mode_(mode), seed_(seed), source_profiles_(sources.size()), target_profiles_(targets.size()),
      cache_(clusters.size())
  {
  }

  //! Number of objects whose pairs define the cluster's SI.
  std::size_t object_count(ClusterId c) const
  {
    const auto& cl = clusters_[c];
    return cl.members.size() + (mode_ == SiMembers::with_representative ? 1 : 0);
  }

  //! Clusters with fewer than two objects have no pairs and are not ranked.
  bool rankable(ClusterId c) const { return object_count(c) >= 2; }

  double operator()(ClusterId c)
  {
    if (c >= cache_.size())
      throw std::out_of_range("SimilarityCalculator: unknown cluster " + std::to_string(c));
    if (!cache_[c]) {
      cache_[c] = compute(c);
      ++computations_;
    }
    return *cache_[c];
  }

  //! Recomputes without touching the cache or the counter.
  double compute(ClusterId c)
  {
    const auto& cl = clusters_[c];
    std::vector<const ShapeProfile*> objects;
    objects.reserve(object_count(c));
    if (mode_ == SiMembers::with_representative)
      objects.push_back(&profile(target_profiles_, targets_, cl.target));
    for (SourceId s : cl.members)
      objects.push_back(&profile(source_profiles_, sources_, s));
    SimilarityIndexOptions opts;
    opts.seed = derive_seed(seed_, 0x51000000ull + c);
    return similarity_index(std::span<const ShapeProfile* const>(objects), weights_, opts).value;
  }

  bool cached(ClusterId c) const { return cache_.at(c).has_value(); }
  std::size_t computations() const { return computations_; }

private:
  const ShapeProfile& profile(std::vector<std::optional<ShapeProfile>>& store, std::span<const Polygon> polys,
                              std::size_t i)
  {
    if (!store[i])
      store[i] = make_profile(polys[i], fourier_);
    return *store[i];
  }

  std::span<const Polygon> sources_;
  std::span<const Polygon> targets_;
  std::span<const Cluster> clusters_;
  MetricWeights weights_;
  FourierParams fourier_;
  SiMembers mode_;
  std::uint64_t seed_;
  std::vector<std::optional<ShapeProfile>> source_profiles_;
  std::vector<std::optional<ShapeProfile>> target_profiles_;
  std::vector<std::optional<double>> cache_;
  std::size_t computations_ = 0;
};

struct Link
{
  ClusterId cluster = 0;
  double si = 0.0;
};

//! SI descending, cluster id ascending on ties.
inline void
sort_links(std::vector<Link>& links)
{
  std::sort(links.begin(), links.end(), [](const Link& a, const Link& b) {
    if (a.si != b.si)
      return a.si > b.si;
    return a.cluster < b.cluster;
  });
}

struct RunMetrics
{
  std::size_t sources = 0;
  std::size_t targets = 0;
  std::size_t clusters = 0;        // emitted
  std::size_t dropped_targets = 0; // targets without any candidate
  std::size_t ranked_clusters = 0; // clusters with at least one pair; budget total
  std::size_t sample = 0;
  std::size_t kde_sample = 0;
  double threshold = 0.0;
  bool threshold_fallback = false;
  double bandwidth = 0.0;
  std::size_t labeled_high = 0;
  std::size_t labeled_low = 0;
  bool imbalanced = false;
  std::size_t train_iterations = 0;
  double train_loss = 0.0;
  BudgetEstimate estimate;
  std::size_t max_size = 0;
  std::size_t checked = 0;
  std::size_t hits = 0;
  std::size_t targeted = 0; // ceil(p * ranked_clusters)
  std::size_t si_computations = 0;

  double checked_fraction() const
  {
    return ranked_clusters ? static_cast<double>(checked) / static_cast<double>(ranked_clusters) : 0.0;
  }
  double checked_targeted_ratio() const
  {
    return targeted ? static_cast<double>(checked) / static_cast<double>(targeted) : 0.0;
  }
};

struct RunResult
{
  ClusterSet clusters;
  std::vector<ClusterId> ranked;                // clusters taking part in ranking
  std::vector<Link> links;                      // L_R, sorted
  std::vector<std::pair<ClusterId, ClusterFeatureVector>> features; // per ranked cluster
  RunMetrics metrics;
};

//! Runs the full filtering-verification procedure on one dataset.
inline RunResult
run_pipeline(std::span<const Polygon> sources, std::span<const Polygon> targets, const PipelineConfig& cfg)
{
  cfg.validate();
  if (sources.empty() || targets.empty())
    throw InputError("source and target sets must be nonempty");

  RunResult out{find_clusters(sources, targets), {}, {}, {}, {}};
  auto& m = out.metrics;
  const auto& all = out.clusters.clusters;
  m.sources = sources.size();
  m.targets = targets.size();
  m.clusters = all.size();
  m.dropped_targets = out.clusters.dropped_targets;

  SimilarityCalculator si(sources, targets, all, cfg.weights, cfg.fourier, cfg.si_members, cfg.seed);
  std::vector<Cluster> rankable;
  for (const auto& c : all)
    if (si.rankable(c.id)) {
      out.ranked.push_back(c.id);
      rankable.push_back(c);
    }
  m.ranked_clusters = out.ranked.size();
  m.targeted = ceil_count(cfg.top_fraction * static_cast<double>(m.ranked_clusters));
  if (out.ranked.empty())
    throw InputError("no cluster has two or more objects to compare");

  auto samples = draw_samples(rankable, cfg.sample_size, derive_seed(cfg.seed, 1), cfg.sampling);
  m.sample = samples.sample.size();
  m.kde_sample = samples.kde_sample.size();

  // threshold from the density of sampled SIs
  std::vector<double> kde_values;
  kde_values.reserve(samples.kde_sample.size());
  for (ClusterId c : samples.kde_sample)
    kde_values.push_back(si(c));
  if (kde_values.empty())
    throw InputError("threshold sample is empty");
  KdeOptions kopts;
  kopts.seed = derive_seed(cfg.seed, 2);
  const auto thr = top_fraction_threshold(kde_values, cfg.top_fraction, kopts);
  m.threshold = thr.threshold;
  m.threshold_fallback = thr.used_fallback;
  m.bandwidth = thr.bandwidth;

  // labels, registries and the classifier
  std::mt19937_64 shuffle_rng(derive_seed(cfg.seed, 3));
  std::shuffle(samples.sample.begin(), samples.sample.end(), shuffle_rng);
  const auto split = label_sample(samples.sample, si, m.threshold, cfg.class_size);
  m.labeled_high = split.pos.size();
  m.labeled_low = split.neg.size();
  m.imbalanced = split.imbalanced;

  FeatureContext ctx{sources, targets, out.clusters.stats, &out.clusters.index};
  std::vector<ClusterId> population = split.pos;
  population.insert(population.end(), split.neg.begin(), split.neg.end());
  std::vector<std::vector<PairFeatures>> pop_pairs;
  pop_pairs.reserve(population.size());
  for (ClusterId c : population)
    pop_pairs.push_back(cluster_pair_features(all[c], ctx));
  const auto registry = MinMaxRegistry::build(pop_pairs, cfg.normalization);

  std::vector<LabeledCluster> labeled;
  labeled.reserve(population.size());
  for (std::size_t k = 0; k < population.size(); ++k) {
    const bool high = k < split.pos.size();
    labeled.push_back({population[k], cluster_feature_vector(pop_pairs[k], registry), high ? 1 : 0,
                       high ? split.pos_si[k] : split.neg_si[k - split.pos.size()]});
  }
  const LogisticModel model = train_logistic(labeled);
  m.train_iterations = model.iterations;
  m.train_loss = model.final_loss;

  // feature vectors and weights for every ranked cluster
  std::vector<double> weight(all.size(), 0.0);
  out.features.reserve(out.ranked.size());
  std::vector<ScoredCluster> scored_all;
  scored_all.reserve(out.ranked.size());
  for (ClusterId c : out.ranked) {
    const auto fv = cluster_feature_vector(all[c], ctx, registry);
    weight[c] = model.score(fv);
    out.features.emplace_back(c, fv);
    scored_all.push_back({c, weight[c]});
  }

  std::vector<ScoredCluster> scored_kde;
  scored_kde.reserve(samples.kde_sample.size());
  for (ClusterId c : samples.kde_sample)
    scored_kde.push_back({c, weight[c]});
  m.estimate = simulate_recall(scored_kde, si, m.threshold, cfg.top_fraction, cfg.class_size);
  m.max_size = cfg.exhaustive
                 ? m.ranked_clusters
                 : compute_max_size(cfg.desired_recall, m.estimate, m.estimate.queue_size, m.ranked_clusters);

  const auto ver = verify(scored_all, si, m.threshold, m.max_size);
  m.checked = ver.checked;
  m.hits = ver.hits;
  for (std::size_t k = 0; k < ver.accepted.size(); ++k)
    out.links.push_back({ver.accepted[k], ver.accepted_si[k]});
  sort_links(out.links);
  m.si_computations = si.computations();
  return out;
}

inline constexpr std::size_t kOracleGuard = 100000;

//! Exact SI of every listed cluster, sorted. Throws ScaleGuardError above
//! the guard unless forced.
inline std::vector<Link>
brute_force_oracle(std::span<const ClusterId> ids, SimilarityCalculator& si, bool force = false,
                   std::size_t guard = kOracleGuard)
{
  if (ids.size() > guard && !force)
    throw ScaleGuardError("oracle refuses " + std::to_string(ids.size()) + " clusters (limit " +
                          std::to_string(guard) + "); force it explicitly");
  std::vector<Link> out;
  out.reserve(ids.size());
  for (ClusterId c : ids)
    out.push_back({c, si(c)});
  sort_links(out);
  return out;
}

//! Oracle over a dataset, clustered the same way the pipeline clusters it.
inline std::vector<Link>
brute_force_oracle(std::span<const Polygon> sources, std::span<const Polygon> targets, const PipelineConfig& cfg,
                   bool force = false)
{
  const auto cs = find_clusters(sources, targets);
  SimilarityCalculator si(sources, targets, cs.clusters, cfg.weights, cfg.fourier, cfg.si_members, cfg.seed);
  std::vector<ClusterId> ids;
  for (const auto& c : cs.clusters)
    if (si.rankable(c.id))
      ids.push_back(c.id);
  return brute_force_oracle(ids, si, force);
}

//! The first ceil(p * n) entries of a sorted oracle list.
inline std::vector<Link>
top_set(std::span<const Link> oracle, double top_fraction)
{
  if (!(top_fraction > 0.0 && top_fraction <= 1.0))
    throw std::invalid_argument("top fraction must be in (0, 1]");
  const std::size_t k = std::min(oracle.size(), ceil_count(top_fraction * static_cast<double>(oracle.size())));
  return {oracle.begin(), oracle.begin() + static_cast<std::ptrdiff_t>(k)};
}

//! |links ∩ reference| / |reference|; 1 for an empty reference.
inline double
recall_against(std::span<const Link> links, std::span<const Link> reference)
{
  if (reference.empty())
    return 1.0;
  std::vector<ClusterId> a;
  std::vector<ClusterId> b;
  for (const auto& l : links)
    a.push_back(l.cluster);
  for (const auto& l : reference)
    b.push_back(l.cluster);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<ClusterId> both;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
  return static_cast<double>(both.size()) / static_cast<double>(b.size());
}

} // namespace simclust
