#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dimple/baseline.hpp"
#include "dimple/between.hpp"
#include "dimple/generator.hpp"
#include "dimple/harness.hpp"
#include "dimple/parallel.hpp"
#include "dimple/rng.hpp"
#include "dimple/within.hpp"
#include "svg_plot.hpp"

namespace {

#ifdef _OPENMP
void apply_threads(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}
#else
void apply_threads(int) {}
#endif

std::string padded_index(int value, int width) {
  std::string s = std::to_string(value);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

int run_generate(int n, int L, int K, int M, double a, double b, std::vector<double> omega,
                 std::uint64_t seed, const std::string& out_dir) {
  dimple::GenConfig cfg;
  cfg.n = n;
  cfg.L = L;
  cfg.K = K;
  cfg.M = M;
  cfg.a = a;
  cfg.b = b;
  cfg.seed = seed;
  if (omega.empty()) omega.push_back(1.0);
  if (omega.size() == 1 || static_cast<int>(omega.size()) == L) {
    cfg.omega = omega;
  } else {
    // several values but not one per layer: contiguous blocks, mixture-style
    dimple::OmegaScenario sc{true, omega};
    cfg.omega = sc.per_layer(L);
  }

  const dimple::GroundTruthModel model = dimple::sample_model(cfg);
  const dimple::AdjacencyTensor A =
      dimple::sample_adjacency(model, dimple::hash_combine(seed, static_cast<std::uint64_t>(0x616468)));

  dimple::MultiplexDataset ds{{}, {}, A};
  const int node_w = static_cast<int>(std::to_string(n).size());
  const int layer_w = static_cast<int>(std::to_string(L).size());
  for (int i = 1; i <= n; ++i) ds.node_names.push_back("node_" + padded_index(i, node_w));
  for (int l = 1; l <= L; ++l) ds.layer_names.push_back("layer_" + padded_index(l, layer_w));
  dimple::write_multiplex(ds, out_dir);

  namespace fs = std::filesystem;
  std::ofstream tl(fs::path(out_dir) / "truth_layers.txt", std::ios::binary);
  for (int l = 0; l < L; ++l)
    tl << ds.layer_names[static_cast<std::size_t>(l)] << ' ' << model.layer_labels().label(l)
       << '\n';
  std::ofstream tn(fs::path(out_dir) / "truth_nodes.txt", std::ios::binary);
  tn << "# node";
  for (int m = 1; m <= M; ++m) tn << " community_in_group_" << m;
  tn << '\n';
  for (int i = 0; i < n; ++i) {
    tn << ds.node_names[static_cast<std::size_t>(i)];
    for (int m = 0; m < M; ++m)
      tn << ' ' << model.node_labels()[static_cast<std::size_t>(m)].label(i);
    tn << '\n';
  }

  std::cout << "wrote " << out_dir << ": n=" << n << " L=" << L << " (plus ground truth)\n";
  return 0;
}

int run_cluster(const std::string& dir, int K, int M, std::optional<double> lambda,
                std::optional<double> threshold, std::uint64_t seed, int restarts,
                const std::string& method, double min_activity, double min_avg_degree,
                const std::string& out_path) {
  dimple::MultiplexDataset ds = dimple::load_multiplex(dir);
  if (min_activity > 0.0 || min_avg_degree > 0.0) {
    const int n0 = ds.tensor.node_count(), L0 = ds.tensor.layer_count();
    ds = dimple::preprocess_multiplex(ds, min_activity, min_avg_degree);
    std::cout << "preprocess: " << n0 << " -> " << ds.tensor.node_count() << " nodes, " << L0
              << " -> " << ds.tensor.layer_count() << " layers\n";
  }

  std::ostringstream report;
  std::optional<dimple::ClusteringAssignment> labels;
  if (method == "ssc") {
    dimple::BetweenOptions opt;
    opt.lambda = lambda;
    opt.threshold = threshold;
    opt.kmeans_restarts = restarts;
    dimple::BetweenResult res = dimple::between_layer_cluster(ds.tensor, K, M, opt, seed);
    report << "# method=ssc lambda=" << res.lambda_used << " m_tilde=" << res.report.m_tilde;
    if (res.report.merged) report << " threshold=" << res.report.threshold_used;
    if (res.report.low_confidence) report << " LOW_CONFIDENCE(" << res.report.note << ")";
    report << '\n';
    labels = std::move(res.labels);
  } else {
    labels = dimple::pw_between_cluster(ds.tensor, K, M, seed, restarts);
    report << "# method=pw\n";
  }

  const dimple::GroupCommunityResult within =
      dimple::within_pipeline(ds.tensor, *labels, K, dimple::hash_combine(seed, static_cast<std::uint64_t>(0x777468)),
                              restarts);

  report << "# layer_groups\n";
  for (int l = 0; l < ds.tensor.layer_count(); ++l)
    report << "layer " << ds.layer_names[static_cast<std::size_t>(l)] << ' ' << labels->label(l)
           << '\n';
  report << "# node_communities (one column per layer group)\n";
  for (int i = 0; i < ds.tensor.node_count(); ++i) {
    report << "node " << ds.node_names[static_cast<std::size_t>(i)];
    for (int m = 0; m < M; ++m)
      report << ' ' << within.z_hat[static_cast<std::size_t>(m)].label(i);
    report << '\n';
  }

  if (out_path.empty()) {
    std::cout << report.str();
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw dimple::ValidationError("cluster: cannot open " + out_path);
    out << report.str();
    std::cout << "wrote " << out_path << '\n';
  }
  return 0;
}

int run_experiment_cmd(const std::string& config_path, const std::string& out_path,
                       std::optional<std::uint64_t> seed, int threads,
                       const std::string& method) {
  dimple::ExperimentConfig cfg = dimple::parse_experiment_config(config_path);
  if (seed) cfg.base_seed = *seed;
  if (threads > 0) cfg.parallelism = threads;
  if (method == "ssc" || method == "pw")
    cfg.methods = {method};
  else if (method == "both")
    cfg.methods = {"ssc", "pw"};
  else if (!method.empty())
    throw dimple::ValidationError("experiment: unknown method '" + method + "'");

  const std::vector<dimple::ResultRow> rows = dimple::run_experiment(cfg);
  dimple::write_csv(rows, out_path);
  int failures = 0;
  for (const auto& row : rows)
    if (!row.error.empty()) ++failures;
  std::cout << "wrote " << out_path << ": " << rows.size() << " rows, " << failures
            << " failed\n";
  return 0;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw dimple::ValidationError("plot: cannot open " + path);
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      table.rows.push_back(std::move(fields));
    }
  }
  return table;
}

int run_plot(const std::string& in_path, const std::string& out_path, const std::string& x_field,
             const std::string& metric, const std::string& method) {
  const CsvTable table = read_csv(in_path);
  auto col = [&](const std::string& name) {
    for (std::size_t i = 0; i < table.header.size(); ++i)
      if (table.header[i] == name) return i;
    throw dimple::ValidationError("plot: column '" + name + "' not in " + in_path);
  };
  const std::size_t cx = col(x_field), cm = col(metric), cmethod = col("method"),
                    cscen = col("omega_scenario"), cerr = col("error");

  // mean metric per (scenario, x)
  std::map<std::string, std::map<double, std::pair<double, int>>> agg;
  for (const auto& row : table.rows) {
    if (row[cmethod] != method || !row[cerr].empty() || row[cm].empty()) continue;
    const double x = std::stod(row[cx]);
    const double y = std::stod(row[cm]);
    auto& cell = agg[row[cscen]][x];
    cell.first += y;
    cell.second += 1;
  }
  if (agg.empty())
    throw dimple::ValidationError("plot: no usable rows for method '" + method + "'");

  std::vector<svgplot::Series> series;
  for (const auto& [scenario, points] : agg) {
    svgplot::Series s;
    s.name = scenario;
    for (const auto& [x, cell] : points) {
      s.x.push_back(x);
      s.y.push_back(cell.first / cell.second);
    }
    series.push_back(std::move(s));
  }
  svgplot::write_line_chart(out_path, series, x_field, "mean " + metric,
                            metric + " vs " + x_field + " (" + method + ")");
  std::cout << "wrote " << out_path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiplex network clustering: layer groups via sparse self-representation, "
               "communities via bias-adjusted spectral clustering"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Sample a synthetic multiplex dataset to disk");
  int g_n = 100, g_L = 20, g_K = 3, g_M = 2;
  double g_a = 0.3, g_b = 0.8;
  std::vector<double> g_omega;
  std::uint64_t g_seed = 0;
  std::string g_out;
  gen->add_option("--n", g_n, "nodes per layer");
  gen->add_option("--layers,-L", g_L, "number of layers");
  gen->add_option("--communities,-K", g_K, "communities per layer group");
  gen->add_option("--groups,-M", g_M, "number of layer groups");
  gen->add_option("--a", g_a, "block probability lower endpoint");
  gen->add_option("--b", g_b, "block probability upper endpoint");
  gen->add_option("--omega", g_omega, "assortativity factor(s); several values split the layers")
      ->expected(-1);
  gen->add_option("--seed", g_seed, "RNG seed");
  gen->add_option("--out", g_out, "output directory")->required();

  // cluster
  auto* clu = app.add_subcommand("cluster", "Cluster a dataset directory and print assignments");
  std::string c_dir, c_method = "ssc", c_out;
  int c_K = 0, c_M = 0, c_restarts = 10, c_threads = 0;
  double c_lambda = -1.0, c_threshold = -1.0, c_activity = 0.0, c_avg_degree = 0.0;
  std::uint64_t c_seed = 0;
  clu->add_option("dir", c_dir, "dataset directory (nodes.txt + layers/*.edges)")->required();
  clu->add_option("--communities,-K", c_K, "communities per layer group")->required();
  clu->add_option("--groups,-M", c_M, "number of layer groups")->required();
  clu->add_option("--lambda", c_lambda, "LASSO penalty (default: data-driven)");
  clu->add_option("--threshold", c_threshold, "merge threshold (default: largest gap)");
  clu->add_option("--seed", c_seed, "RNG seed");
  clu->add_option("--restarts", c_restarts, "k-means restarts");
  clu->add_option("--method", c_method, "ssc or pw")->check(CLI::IsMember({"ssc", "pw"}));
  clu->add_option("--threads", c_threads, "worker threads (0 = all)");
  clu->add_option("--min-activity", c_activity, "drop nodes active in < fraction of layers");
  clu->add_option("--min-avg-degree", c_avg_degree, "drop layers with average degree below this");
  clu->add_option("--out", c_out, "write the report here instead of stdout");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a simulation grid and write a CSV");
  std::string e_config, e_out, e_method;
  std::uint64_t e_seed = 0;
  bool e_seed_set = false;
  int e_threads = 0;
  exp->add_option("--config", e_config, "experiment config file")->required();
  exp->add_option("--out", e_out, "output CSV path")->required();
  exp->add_option("--seed", e_seed, "override base_seed")->each([&](const std::string&) {
    e_seed_set = true;
  });
  exp->add_option("--threads", e_threads, "override worker count");
  exp->add_option("--method", e_method, "ssc, pw, or both")
      ->check(CLI::IsMember({"ssc", "pw", "both"}));

  // plot
  auto* plt = app.add_subcommand("plot", "Render mean error curves from an experiment CSV");
  std::string p_in, p_out, p_x = "n", p_metric = "err_between", p_method = "ssc";
  plt->add_option("--in", p_in, "experiment CSV")->required();
  plt->add_option("--out", p_out, "output SVG path")->required();
  plt->add_option("--x", p_x, "x axis column: n or L")->check(CLI::IsMember({"n", "L"}));
  plt->add_option("--metric", p_metric, "err_between or r_wl")
      ->check(CLI::IsMember({"err_between", "r_wl"}));
  plt->add_option("--method", p_method, "series method")->check(CLI::IsMember({"ssc", "pw"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return run_generate(g_n, g_L, g_K, g_M, g_a, g_b, g_omega, g_seed, g_out);
    if (clu->parsed()) {
      apply_threads(c_threads);
      return run_cluster(c_dir, c_K, c_M,
                         c_lambda > 0 ? std::optional<double>(c_lambda) : std::nullopt,
                         c_threshold >= 0 ? std::optional<double>(c_threshold) : std::nullopt,
                         c_seed, c_restarts, c_method, c_activity, c_avg_degree, c_out);
    }
    if (exp->parsed())
      return run_experiment_cmd(e_config, e_out,
                                e_seed_set ? std::optional<std::uint64_t>(e_seed) : std::nullopt,
                                e_threads, e_method);
    if (plt->parsed()) return run_plot(p_in, p_out, p_x, p_metric, p_method);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
