// simclust command line: generate, run, oracle, report, bench.

#include <simclust/benchmark.hpp>
#include <simclust/io.hpp>
#include <simclust/pipeline.hpp>
#include <simclust/synthetic.hpp>
#include <simclust/wkt.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>

namespace fs = std::filesystem;
using namespace simclust;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInput = 2;
constexpr int kExitScale = 3;

struct CommonOptions
{
  std::string source;
  std::string target;
  std::string out = ".";
  std::vector<double> weights;
  std::string si_members = "with-rep";
  std::string sampling = "pair-weighted";
  bool range_normalize = false;
  PipelineConfig cfg;
};

void
add_dataset_options(CLI::App* app, CommonOptions& o)
{
  app->add_option("--source", o.source, "Source polygons, one WKT POLYGON per line")->required();
  app->add_option("--target", o.target, "Target polygons, one WKT POLYGON per line")->required();
}

void
add_config_options(CLI::App* app, CommonOptions& o)
{
  app->add_option("--top-fraction", o.cfg.top_fraction, "Share p of highest-SI clusters wanted")
    ->capture_default_str();
  app->add_option("--desired-recall", o.cfg.desired_recall, "Recall target r_d")->capture_default_str();
  app->add_option("--sample-size", o.cfg.sample_size, "Maximum size m of each cluster sample")
    ->capture_default_str();
  app->add_option("--class-size", o.cfg.class_size, "Class size N")->capture_default_str();
  app->add_option("--seed", o.cfg.seed, "Run seed")->capture_default_str();
  app->add_option("--weights", o.weights, "Eight metric weights summing to 1")
    ->delimiter(',')
    ->expected(kMetricCount);
  app->add_flag("--range-normalize", o.range_normalize, "Normalize features by (max - min) instead of max");
  app->add_option("--si-members", o.si_members, "Objects of a cluster's SI")
    ->check(CLI::IsMember({"with-rep", "sources-only"}))
    ->capture_default_str();
  app->add_option("--sampling", o.sampling, "Cluster sampling scheme")
    ->check(CLI::IsMember({"pair-weighted", "uniform"}))
    ->capture_default_str();
  app->add_option("--fourier-points", o.cfg.fourier.points, "Boundary resampling points")->capture_default_str();
  app->add_option("--fourier-coefficients", o.cfg.fourier.coefficients, "Fourier harmonics kept")
    ->capture_default_str();
  app->add_option("--out", o.out, "Output directory")->capture_default_str();
}

PipelineConfig
finish_config(const CommonOptions& o)
{
  PipelineConfig cfg = o.cfg;
  if (!o.weights.empty()) {
    std::array<double, kMetricCount> w{};
    std::copy(o.weights.begin(), o.weights.end(), w.begin());
    try {
      cfg.weights = MetricWeights::normalized(w);
    } catch (const std::invalid_argument& e) {
      throw InputError(std::string("--weights: ") + e.what());
    }
  }
  cfg.normalization = o.range_normalize ? Normalization::range_denominator : Normalization::max_denominator;
  cfg.si_members = o.si_members == "sources-only" ? SiMembers::sources_only : SiMembers::with_representative;
  cfg.sampling = o.sampling == "uniform" ? SamplingMode::uniform : SamplingMode::pair_weighted;
  return cfg;
}

fs::path
ensure_dir(const std::string& dir)
{
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw InputError("cannot create output directory " + dir + ": " + ec.message());
  return fs::path(dir);
}

std::vector<double>
parse_fractions(const std::vector<double>& ps)
{
  for (double p : ps)
    if (!(p > 0.0 && p < 1.0))
      throw InputError("top fractions must lie in (0, 1)");
  return ps;
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{"Similarity-ranked cluster retrieval over polygon datasets"};
  app.require_subcommand(1);

  // generate
  GeneratorParams gen;
  std::string gen_out = ".";
  auto* generate = app.add_subcommand("generate", "Write a seeded synthetic source/target dataset");
  generate->add_option("--neighborhoods", gen.neighborhoods, "Targets (one neighborhood each)")
    ->capture_default_str();
  generate->add_option("--high-fraction", gen.high_fraction, "Share of high-similarity neighborhoods")
    ->check(CLI::Range(0.0, 1.0))
    ->capture_default_str();
  generate->add_option("--min-members", gen.min_members, "Fewest sources per neighborhood")->capture_default_str();
  generate->add_option("--max-members", gen.max_members, "Most sources per neighborhood")->capture_default_str();
  generate->add_option("--noise", gen.vertex_noise, "Vertex jitter in high-similarity neighborhoods")
    ->capture_default_str();
  generate->add_option("--scale-jitter", gen.scale_jitter, "Scale jitter in high-similarity neighborhoods")
    ->capture_default_str();
  generate->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  generate->add_option("--out", gen_out, "Output directory")->capture_default_str();

  // run
  CommonOptions run_opts;
  bool run_exhaustive = false;
  bool run_evaluate = false;
  auto* run = app.add_subcommand("run", "Run the full pipeline and write L_R, features and metrics");
  add_dataset_options(run, run_opts);
  add_config_options(run, run_opts);
  run->add_flag("--exhaustive", run_exhaustive, "Force the verification budget to every cluster");
  run->add_flag("--evaluate", run_evaluate, "Also compute recall against the brute-force top set");

  // oracle
  CommonOptions oracle_opts;
  bool oracle_force = false;
  auto* oracle = app.add_subcommand("oracle", "Exact SI of every cluster, sorted");
  add_dataset_options(oracle, oracle_opts);
  add_config_options(oracle, oracle_opts);
  oracle->add_flag("--force", oracle_force, "Ignore the cluster-count guard");

  // report
  CommonOptions report_opts;
  std::vector<double> report_ps = {0.1, 0.3, 0.5};
  bool report_no_oracle = false;
  auto* report = app.add_subcommand("report", "Sweep top fractions and tabulate coverage");
  add_dataset_options(report, report_opts);
  add_config_options(report, report_opts);
  report->add_option("--p-values", report_ps, "Top fractions to sweep")->delimiter(',')->capture_default_str();
  report->add_flag("--no-oracle", report_no_oracle, "Skip recall measurement against the oracle");

  // bench
  std::size_t bench_pairs = 2000;
  std::size_t bench_reps = 5;
  std::uint64_t bench_seed = 0;
  std::string bench_out = ".";
  std::string bench_source;
  std::string bench_target;
  auto* bench = app.add_subcommand("bench", "Time metric kernels; optionally histogram a dataset's SIs");
  bench->add_option("--pairs", bench_pairs, "Polygon pairs per kernel")->capture_default_str();
  bench->add_option("--repetitions", bench_reps, "Timing repetitions")->capture_default_str();
  bench->add_option("--seed", bench_seed, "Seed")->capture_default_str();
  bench->add_option("--source", bench_source, "Source polygons for the SI histogram");
  bench->add_option("--target", bench_target, "Target polygons for the SI histogram");
  bench->add_option("--out", bench_out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*generate) {
      const auto data = generate_synthetic(gen);
      const auto dir = ensure_dir(gen_out);
      auto src = open_output((dir / "source.wkt").string());
      write_wkt_lines(src, data.sources);
      auto tgt = open_output((dir / "target.wkt").string());
      write_wkt_lines(tgt, data.targets);
      std::cout << "wrote " << data.sources.size() << " sources and " << data.targets.size() << " targets to "
                << dir.string() << '\n';
    } else if (*run) {
      const auto cfg = [&] {
        auto c = finish_config(run_opts);
        c.exhaustive = run_exhaustive;
        return c;
      }();
      cfg.validate();
      const auto sources = read_wkt_file(run_opts.source);
      const auto targets = read_wkt_file(run_opts.target);
      const auto res = run_pipeline(sources, targets, cfg);
      std::optional<double> recall;
      if (run_evaluate) {
        const auto orc = brute_force_oracle(sources, targets, cfg);
        recall = recall_against(res.links, top_set(orc, cfg.top_fraction));
      }
      const auto dir = ensure_dir(run_opts.out);
      auto lr = open_output((dir / "lr.csv").string());
      write_links_csv(lr, res.links, res.clusters.clusters, targets);
      auto feats = open_output((dir / "features.csv").string());
      write_features_csv(feats, res.features);
      auto mj = open_output((dir / "metrics.json").string());
      mj << metrics_json(res.metrics, cfg, recall).dump(2) << '\n';
      std::cout << "clusters " << res.metrics.ranked_clusters << ", threshold "
                << format_double(res.metrics.threshold) << ", checked " << res.metrics.checked << ", links "
                << res.links.size();
      if (recall)
        std::cout << ", recall " << format_double(*recall);
      std::cout << '\n';
    } else if (*oracle) {
      const auto cfg = finish_config(oracle_opts);
      const auto sources = read_wkt_file(oracle_opts.source);
      const auto targets = read_wkt_file(oracle_opts.target);
      const auto cs = find_clusters(sources, targets);
      SimilarityCalculator si(sources, targets, cs.clusters, cfg.weights, cfg.fourier, cfg.si_members, cfg.seed);
      std::vector<ClusterId> ids;
      for (const auto& c : cs.clusters)
        if (si.rankable(c.id))
          ids.push_back(c.id);
      const auto links = brute_force_oracle(ids, si, oracle_force);
      const auto dir = ensure_dir(oracle_opts.out);
      auto f = open_output((dir / "oracle.csv").string());
      write_links_csv(f, links, cs.clusters, targets);
      auto top = open_output((dir / "oracle_top.csv").string());
      const auto ts = top_set(links, cfg.top_fraction);
      write_links_csv(top, ts, cs.clusters, targets);
      std::cout << "oracle over " << links.size() << " clusters; top set " << ts.size() << '\n';
    } else if (*report) {
      const auto cfg = finish_config(report_opts);
      const auto ps = parse_fractions(report_ps);
      const auto sources = read_wkt_file(report_opts.source);
      const auto targets = read_wkt_file(report_opts.target);
      const auto rows = sweep(sources, targets, cfg, ps, !report_no_oracle);
      std::vector<ReportRow> table;
      for (const auto& r : rows)
        table.push_back(r.report);
      const auto dir = ensure_dir(report_opts.out);
      auto f = open_output((dir / "report.csv").string());
      write_report_csv(f, table);
      auto t = open_output((dir / "timing.csv").string());
      t << "p,wall_seconds\n";
      for (const auto& r : rows)
        t << format_double(r.report.top_fraction) << ',' << format_double(r.wall_seconds) << '\n';
      write_report_csv(std::cout, table);
    } else if (*bench) {
      const auto dir = ensure_dir(bench_out);
      const auto timings = time_kernels(bench_pairs, bench_seed, bench_reps);
      auto f = open_output((dir / "kernels.csv").string());
      f << "metric,mean_ns,stddev_ns,checksum\n";
      for (const auto& t : timings) {
        f << t.name << ',' << format_double(t.mean_ns) << ',' << format_double(t.stddev_ns) << ','
          << format_double(t.checksum) << '\n';
        std::cout << t.name << ": " << format_double(t.mean_ns) << " ns/op\n";
      }
      if (!bench_source.empty() || !bench_target.empty()) {
        if (bench_source.empty() || bench_target.empty())
          throw InputError("--source and --target must be given together");
        const auto sources = read_wkt_file(bench_source);
        const auto targets = read_wkt_file(bench_target);
        PipelineConfig cfg;
        cfg.seed = bench_seed;
        const auto hist = si_histogram(brute_force_oracle(sources, targets, cfg));
        auto h = open_output((dir / "si_histogram.csv").string());
        write_histogram_csv(h, hist);
      }
    }
  } catch (const ScaleGuardError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitScale;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}
