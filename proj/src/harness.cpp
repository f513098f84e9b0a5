#include "dimple/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "dimple/baseline.hpp"
#include "dimple/between.hpp"
#include "dimple/generator.hpp"
#include "dimple/metrics.hpp"
#include "dimple/parallel.hpp"
#include "dimple/rng.hpp"
#include "dimple/within.hpp"

namespace dimple {

namespace {

constexpr std::uint64_t kModelStream = 0x6d6f64;    // "mod"
constexpr std::uint64_t kAdjStream = 0x616468;      // "adj"
constexpr std::uint64_t kMethodStream = 0x6d7468;   // "mth"
constexpr std::uint64_t kWithinStream = 0x777468;   // "wth"

std::string fmt_g9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string sanitize_field(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

struct Task {
  int n, L, K, M;
  const OmegaScenario* scenario;
  int replicate;
  std::uint64_t seed;
};

std::uint64_t task_seed(const ExperimentConfig& cfg, int n, int L, int K, int M,
                        const OmegaScenario& sc, int replicate) {
  std::uint64_t h = cfg.base_seed;
  h = hash_combine(h, static_cast<std::uint64_t>(n));
  h = hash_combine(h, static_cast<std::uint64_t>(L));
  h = hash_combine(h, static_cast<std::uint64_t>(K));
  h = hash_combine(h, static_cast<std::uint64_t>(M));
  h = hash_combine(h, static_cast<std::uint64_t>(sc.mixture ? 2 : 1));
  for (double w : sc.values) h = hash_combine(h, w);
  h = hash_combine(h, cfg.a);
  h = hash_combine(h, cfg.b);
  h = hash_combine(h, static_cast<std::uint64_t>(replicate));
  return h;
}

}  // namespace

std::vector<double> OmegaScenario::per_layer(int L) const {
  if (values.empty()) throw ValidationError("OmegaScenario: no values");
  if (!mixture) return {values[0]};
  // contiguous blocks of layers, one per value; remainders spread evenly
  std::vector<double> per(static_cast<std::size_t>(L));
  const int k = static_cast<int>(values.size());
  for (int i = 0; i < k; ++i) {
    const int lo = static_cast<int>(static_cast<long long>(i) * L / k);
    const int hi = static_cast<int>(static_cast<long long>(i + 1) * L / k);
    for (int l = lo; l < hi; ++l) per[static_cast<std::size_t>(l)] = values[static_cast<std::size_t>(i)];
  }
  return per;
}

std::string OmegaScenario::str() const {
  std::string s = mixture ? "mixture:" : "single:";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) s += '|';
    s += fmt_g9(values[i]);
  }
  return s;
}

void ExperimentConfig::validate() const {
  if (n_grid.empty() || L_grid.empty() || K_grid.empty() || M_grid.empty() || omega_grid.empty())
    throw ValidationError("ExperimentConfig: every grid dimension needs at least one value");
  for (int v : n_grid)
    if (v < 2) throw ValidationError("ExperimentConfig: n must be >= 2");
  for (int v : L_grid)
    if (v < 1) throw ValidationError("ExperimentConfig: L must be >= 1");
  for (int v : K_grid)
    if (v < 2) throw ValidationError("ExperimentConfig: K must be >= 2");
  for (int v : M_grid)
    if (v < 1) throw ValidationError("ExperimentConfig: M must be >= 1");
  for (const auto& sc : omega_grid) {
    if (sc.values.empty()) throw ValidationError("ExperimentConfig: empty omega scenario");
    for (double w : sc.values)
      if (!(w > 0.0)) throw ValidationError("ExperimentConfig: omega values must be positive");
    if (sc.mixture && sc.values.size() < 2)
      throw ValidationError("ExperimentConfig: a mixture scenario needs at least two values");
  }
  if (!(0.0 <= a && a <= b && b <= 1.0))
    throw ValidationError("ExperimentConfig: need 0 <= a <= b <= 1");
  if (replicates < 1) throw ValidationError("ExperimentConfig: replicates must be >= 1");
  if (kmeans_restarts < 1) throw ValidationError("ExperimentConfig: kmeans_restarts must be >= 1");
  if (methods.empty()) throw ValidationError("ExperimentConfig: no methods selected");
  for (const auto& m : methods)
    if (m != "ssc" && m != "pw")
      throw ValidationError("ExperimentConfig: unknown method '" + m + "'");
}

ExperimentConfig parse_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path);

  ExperimentConfig cfg;
  cfg.methods.clear();
  bool saw_omega = false;

  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw ValidationError("config " + path + ":" + std::to_string(lineno) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      std::istringstream probe(line);
      std::string tok;
      if (probe >> tok) fail("expected key = value");
      continue;  // blank line
    }
    std::istringstream key_in(line.substr(0, eq));
    std::string key;
    key_in >> key;
    std::string extra;
    if (key.empty() || (key_in >> extra)) fail("malformed key");

    std::istringstream val_in(line.substr(eq + 1));
    std::vector<std::string> tokens;
    std::string tok;
    while (val_in >> tok) tokens.push_back(tok);
    if (tokens.empty()) fail("no value for key '" + key + "'");

    auto as_int = [&](const std::string& t) {
      try {
        std::size_t pos = 0;
        const int v = std::stoi(t, &pos);
        if (pos != t.size()) throw std::invalid_argument(t);
        return v;
      } catch (...) {
        fail("not an integer: '" + t + "'");
        return 0;
      }
    };
    auto as_double = [&](const std::string& t) {
      try {
        std::size_t pos = 0;
        const double v = std::stod(t, &pos);
        if (pos != t.size()) throw std::invalid_argument(t);
        return v;
      } catch (...) {
        fail("not a number: '" + t + "'");
        return 0.0;
      }
    };

    if (key == "n") {
      for (const auto& t : tokens) cfg.n_grid.push_back(as_int(t));
    } else if (key == "L") {
      for (const auto& t : tokens) cfg.L_grid.push_back(as_int(t));
    } else if (key == "K") {
      for (const auto& t : tokens) cfg.K_grid.push_back(as_int(t));
    } else if (key == "M") {
      for (const auto& t : tokens) cfg.M_grid.push_back(as_int(t));
    } else if (key == "omega") {
      for (const auto& t : tokens) cfg.omega_grid.push_back({false, {as_double(t)}});
      saw_omega = true;
    } else if (key == "omega_mixture") {
      OmegaScenario sc{true, {}};
      for (const auto& t : tokens) sc.values.push_back(as_double(t));
      cfg.omega_grid.push_back(std::move(sc));
      saw_omega = true;
    } else if (key == "a") {
      cfg.a = as_double(tokens[0]);
    } else if (key == "b") {
      cfg.b = as_double(tokens[0]);
    } else if (key == "replicates") {
      cfg.replicates = as_int(tokens[0]);
    } else if (key == "base_seed") {
      try {
        cfg.base_seed = std::stoull(tokens[0]);
      } catch (...) {
        fail("not a seed: '" + tokens[0] + "'");
      }
    } else if (key == "lambda") {
      cfg.lambda_override = as_double(tokens[0]);
    } else if (key == "threshold") {
      cfg.threshold_override = as_double(tokens[0]);
    } else if (key == "kmeans_restarts") {
      cfg.kmeans_restarts = as_int(tokens[0]);
    } else if (key == "threads") {
      cfg.parallelism = as_int(tokens[0]);
    } else if (key == "timing") {
      const std::string& t = tokens[0];
      if (t == "on" || t == "true" || t == "1")
        cfg.record_timing = true;
      else if (t == "off" || t == "false" || t == "0")
        cfg.record_timing = false;
      else
        fail("timing must be on or off");
    } else if (key == "methods") {
      for (const auto& t : tokens) {
        if (t == "both") {
          cfg.methods = {"ssc", "pw"};
        } else {
          cfg.methods.push_back(t);
        }
      }
    } else {
      fail("unknown key '" + key + "'");
    }
  }

  if (cfg.methods.empty()) cfg.methods = {"ssc"};
  if (!saw_omega && cfg.omega_grid.empty()) cfg.omega_grid.push_back({false, {1.0}});
  cfg.validate();
  return cfg;
}

std::string csv_header() {
  return "n,L,K,M,omega_scenario,a,b,replicate,seed,method,err_between,r_wl,m_tilde,"
         "low_confidence,wall_time_ms,error";
}

std::string to_csv_row(const ResultRow& row) {
  std::string s;
  s += std::to_string(row.n);
  s += ',' + std::to_string(row.L);
  s += ',' + std::to_string(row.K);
  s += ',' + std::to_string(row.M);
  s += ',' + sanitize_field(row.omega_scenario);
  s += ',' + fmt_g9(row.a);
  s += ',' + fmt_g9(row.b);
  s += ',' + std::to_string(row.replicate);
  s += ',' + std::to_string(row.seed);
  s += ',' + sanitize_field(row.method);
  s += ',';
  if (row.err_between) s += fmt_g9(*row.err_between);
  s += ',';
  if (row.r_wl) s += fmt_g9(*row.r_wl);
  s += ',';
  if (row.m_tilde) s += std::to_string(*row.m_tilde);
  s += ',' + std::string(row.low_confidence ? "1" : "0");
  s += ',' + fmt_g9(row.wall_time_ms);
  s += ',' + sanitize_field(row.error);
  return s;
}

void write_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
  if (!out) throw ValidationError("write_csv: cannot open " + path);
  out << csv_header() << '\n';
  for (const auto& row : rows) out << to_csv_row(row) << '\n';
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();

  std::vector<Task> tasks;
  for (int n : cfg.n_grid)
    for (int L : cfg.L_grid)
      for (int K : cfg.K_grid)
        for (int M : cfg.M_grid)
          for (const auto& sc : cfg.omega_grid)
            for (int rep = 0; rep < cfg.replicates; ++rep)
              tasks.push_back(Task{n, L, K, M, &sc, rep, task_seed(cfg, n, L, K, M, sc, rep)});

  {
    std::unordered_set<std::uint64_t> seen;
    for (const auto& t : tasks)
      if (!seen.insert(t.seed).second)
        throw ValidationError("run_experiment: seed collision across the grid");
  }

  const int n_methods = static_cast<int>(cfg.methods.size());
  std::vector<ResultRow> rows(tasks.size() * static_cast<std::size_t>(n_methods));

  parallel_for_index(
      static_cast<int>(tasks.size()),
      [&](int ti) {
        const Task& task = tasks[static_cast<std::size_t>(ti)];
        const Rng task_rng(task.seed);

        for (int mi = 0; mi < n_methods; ++mi) {
          ResultRow& row = rows[static_cast<std::size_t>(ti) * n_methods + mi];
          row.n = task.n;
          row.L = task.L;
          row.K = task.K;
          row.M = task.M;
          row.omega_scenario = task.scenario->str();
          row.a = cfg.a;
          row.b = cfg.b;
          row.replicate = task.replicate;
          row.seed = task.seed;
          row.method = cfg.methods[static_cast<std::size_t>(mi)];
        }

        // one sampled instance shared by all methods of this replicate
        std::optional<GroundTruthModel> model;
        std::optional<AdjacencyTensor> A;
        try {
          GenConfig gen;
          gen.n = task.n;
          gen.L = task.L;
          gen.K = task.K;
          gen.M = task.M;
          gen.a = cfg.a;
          gen.b = cfg.b;
          gen.omega = task.scenario->per_layer(task.L);
          gen.seed = task_rng.split(kModelStream).seed();
          model = sample_model(gen);
          A = sample_adjacency(*model, task_rng.split(kAdjStream).seed());
        } catch (const std::exception& e) {
          for (int mi = 0; mi < n_methods; ++mi)
            rows[static_cast<std::size_t>(ti) * n_methods + mi].error =
                std::string("generate: ") + e.what();
          return;
        }

        for (int mi = 0; mi < n_methods; ++mi) {
          ResultRow& row = rows[static_cast<std::size_t>(ti) * n_methods + mi];
          const std::string& method = row.method;
          const std::uint64_t method_tag =
              hash_combine(kMethodStream, static_cast<std::uint64_t>(method == "pw" ? 2 : 1));
          try {
            const auto t0 = std::chrono::steady_clock::now();
            std::optional<ClusteringAssignment> estimate;
            if (method == "ssc") {
              BetweenOptions opt;
              opt.lambda = cfg.lambda_override;
              opt.threshold = cfg.threshold_override;
              opt.kmeans_restarts = cfg.kmeans_restarts;
              BetweenResult res = between_layer_cluster(*A, task.K, task.M, opt,
                                                        task_rng.split(method_tag).seed());
              row.m_tilde = res.report.m_tilde;
              row.low_confidence = res.report.low_confidence;
              estimate = std::move(res.labels);
            } else {
              estimate = pw_between_cluster(*A, task.K, task.M, task_rng.split(method_tag).seed(),
                                            cfg.kmeans_restarts);
            }
            GroupCommunityResult within = within_pipeline(
                *A, *estimate, task.K, task_rng.split(hash_combine(kWithinStream, method_tag)).seed(),
                cfg.kmeans_restarts);
            const auto t1 = std::chrono::steady_clock::now();
            if (cfg.record_timing)
              row.wall_time_ms =
                  std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(t1 - t0)
                      .count();

            row.err_between = between_error(model->layer_labels(), *estimate).err;
            row.r_wl = within_error(model->node_labels(), within.z_hat).r_wl;
            for (bool d : within.degenerate)
              if (d) row.low_confidence = true;
          } catch (const std::exception& e) {
            row.error = e.what();
          }
        }
      },
      cfg.parallelism > 0 ? cfg.parallelism : hardware_threads());

  return rows;
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

MultiplexDataset load_multiplex(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  const fs::path nodes_path = root / "nodes.txt";

  std::ifstream nodes_in(nodes_path);
  if (!nodes_in) throw ValidationError("load_multiplex: cannot open " + nodes_path.string());

  std::vector<std::string> node_names;
  std::unordered_map<std::string, int> node_ids;
  std::string line;
  int lineno = 0;
  while (std::getline(nodes_in, line)) {
    ++lineno;
    const std::string name = trim(line);
    if (name.empty()) continue;
    if (!node_ids.emplace(name, static_cast<int>(node_names.size())).second)
      throw ValidationError("load_multiplex: duplicate node '" + name + "' at " +
                            nodes_path.string() + ":" + std::to_string(lineno));
    node_names.push_back(name);
  }
  if (node_names.empty())
    throw ValidationError("load_multiplex: " + nodes_path.string() + " lists no nodes");

  const fs::path layers_dir = root / "layers";
  std::vector<fs::path> layer_files;
  if (fs::is_directory(layers_dir))
    for (const auto& entry : fs::directory_iterator(layers_dir))
      if (entry.is_regular_file() && entry.path().extension() == ".edges")
        layer_files.push_back(entry.path());
  if (layer_files.empty())
    throw ValidationError("load_multiplex: no .edges files under " + layers_dir.string());
  std::sort(layer_files.begin(), layer_files.end());

  const int n = static_cast<int>(node_names.size());
  std::vector<std::string> layer_names;
  std::vector<Matrix> layers;
  for (const auto& path : layer_files) {
    std::ifstream in(path);
    if (!in) throw ValidationError("load_multiplex: cannot open " + path.string());
    Matrix A = Matrix::Zero(n, n);
    lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::size_t hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      std::string u, v, extra;
      if (!(ls >> u)) continue;  // blank or comment-only line
      const std::string where = path.string() + ":" + std::to_string(lineno);
      if (!(ls >> v) || (ls >> extra))
        throw ValidationError("load_multiplex: expected 'u v' at " + where);
      const auto iu = node_ids.find(u);
      if (iu == node_ids.end())
        throw ValidationError("load_multiplex: unknown node '" + u + "' at " + where);
      const auto iv = node_ids.find(v);
      if (iv == node_ids.end())
        throw ValidationError("load_multiplex: unknown node '" + v + "' at " + where);
      if (iu->second == iv->second)
        throw ValidationError("load_multiplex: self-loop on '" + u + "' at " + where);
      A(iu->second, iv->second) = 1.0;
      A(iv->second, iu->second) = 1.0;
    }
    layers.push_back(std::move(A));
    layer_names.push_back(path.stem().string());
  }

  return MultiplexDataset{std::move(node_names), std::move(layer_names),
                          AdjacencyTensor(std::move(layers))};
}

void write_multiplex(const MultiplexDataset& ds, const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  fs::create_directories(root / "layers");

  std::ofstream nodes_out(root / "nodes.txt", std::ios::binary);
  if (!nodes_out) throw ValidationError("write_multiplex: cannot write nodes.txt");
  for (const auto& name : ds.node_names) nodes_out << name << '\n';

  for (int l = 0; l < ds.tensor.layer_count(); ++l) {
    const fs::path path = root / "layers" / (ds.layer_names[static_cast<std::size_t>(l)] + ".edges");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("write_multiplex: cannot write " + path.string());
    const Matrix& A = ds.tensor.layer(l);
    for (int i = 0; i < ds.tensor.node_count(); ++i)
      for (int j = i + 1; j < ds.tensor.node_count(); ++j)
        if (A(i, j) != 0.0)
          out << ds.node_names[static_cast<std::size_t>(i)] << ' '
              << ds.node_names[static_cast<std::size_t>(j)] << '\n';
  }
}

MultiplexDataset preprocess_multiplex(const MultiplexDataset& ds, double min_node_activity,
                                      double min_avg_degree) {
  if (!(0.0 <= min_node_activity && min_node_activity <= 1.0))
    throw ValidationError("preprocess_multiplex: activity threshold outside [0, 1]");
  if (min_avg_degree < 0.0)
    throw ValidationError("preprocess_multiplex: negative degree threshold");

  const int n = ds.tensor.node_count();
  const int L = ds.tensor.layer_count();

  // node filter first: active (positive degree) in >= activity * L layers;
  // the epsilon snaps near-integer products like 0.7 * 130 to the intended count
  const int required =
      static_cast<int>(std::ceil(min_node_activity * static_cast<double>(L) - 1e-9));
  std::vector<int> keep_nodes;
  for (int i = 0; i < n; ++i) {
    int active = 0;
    for (int l = 0; l < L; ++l)
      if (ds.tensor.layer(l).row(i).sum() > 0.0) ++active;
    if (active >= required) keep_nodes.push_back(i);
  }
  if (keep_nodes.empty())
    throw ValidationError("preprocess_multiplex: node activity filter removed every node");

  const int kept_n = static_cast<int>(keep_nodes.size());
  std::vector<Matrix> filtered(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l) {
    Matrix A(kept_n, kept_n);
    for (int i = 0; i < kept_n; ++i)
      for (int j = 0; j < kept_n; ++j)
        A(i, j) = ds.tensor.layer(l)(keep_nodes[static_cast<std::size_t>(i)],
                                     keep_nodes[static_cast<std::size_t>(j)]);
    filtered[static_cast<std::size_t>(l)] = std::move(A);
  }

  // then the layer filter on average degree over the remaining nodes
  std::vector<int> keep_layers;
  for (int l = 0; l < L; ++l) {
    const double avg_degree = filtered[static_cast<std::size_t>(l)].sum() / kept_n;
    if (avg_degree >= min_avg_degree - 1e-9) keep_layers.push_back(l);
  }
  if (keep_layers.empty())
    throw ValidationError("preprocess_multiplex: degree filter removed every layer");

  MultiplexDataset out{
      {}, {}, AdjacencyTensor([&] {
        std::vector<Matrix> kept;
        kept.reserve(keep_layers.size());
        for (int l : keep_layers) kept.push_back(std::move(filtered[static_cast<std::size_t>(l)]));
        return kept;
      }())};
  for (int i : keep_nodes) out.node_names.push_back(ds.node_names[static_cast<std::size_t>(i)]);
  for (int l : keep_layers) out.layer_names.push_back(ds.layer_names[static_cast<std::size_t>(l)]);
  return out;
}

}  // namespace dimple
