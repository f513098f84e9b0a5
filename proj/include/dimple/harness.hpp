#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dimple/core.hpp"

namespace dimple {

/// One assortativity setting of the simulation grid: either a single omega
/// shared by all layers, or a mixture that splits the layer range into
/// contiguous blocks, one per value.
struct OmegaScenario {
  bool mixture = false;
  std::vector<double> values;

  std::vector<double> per_layer(int L) const;
  std::string str() const;  // "single:w" or "mixture:w1|w2|..."
};

struct ExperimentConfig {
  std::vector<int> n_grid;
  std::vector<int> L_grid;
  std::vector<int> K_grid;
  std::vector<int> M_grid;
  std::vector<OmegaScenario> omega_grid;
  double a = 0.3;
  double b = 0.8;
  int replicates = 1;
  std::uint64_t base_seed = 0;
  std::optional<double> lambda_override;
  std::optional<double> threshold_override;
  int kmeans_restarts = 10;
  std::vector<std::string> methods{"ssc"};  // subset of {"ssc", "pw"}
  int parallelism = 0;                      // 0 = all hardware threads
  bool record_timing = false;               // off keeps the CSV byte-stable

  void validate() const;
};

/// Parses the flat key-value config format (see README for the schema).
ExperimentConfig parse_experiment_config(const std::string& path);

struct ResultRow {
  int n = 0, L = 0, K = 0, M = 0;
  std::string omega_scenario;
  double a = 0.0, b = 0.0;
  int replicate = 0;
  std::uint64_t seed = 0;
  std::string method;
  std::optional<double> err_between;
  std::optional<double> r_wl;
  std::optional<int> m_tilde;
  bool low_confidence = false;
  double wall_time_ms = 0.0;
  std::string error;  // empty on success
};

/// Runs every grid point x replicate x method. Each task derives its own
/// seed from the base seed and all of its coordinates (the two methods of a
/// replicate share one sampled instance, so the comparison is paired). Rows
/// come back in deterministic grid order regardless of the parallel
/// schedule; per-row failures are recorded in the row, never aborting the
/// sweep.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

std::string csv_header();
std::string to_csv_row(const ResultRow& row);
void write_csv(const std::vector<ResultRow>& rows, const std::string& path);

struct MultiplexDataset {
  std::vector<std::string> node_names;
  std::vector<std::string> layer_names;
  AdjacencyTensor tensor;
};

/// Loads a dataset directory: nodes.txt (one name per line) and
/// layers/<name>.edges (whitespace-separated "u v" pairs, # comments).
/// Directed duplicates collapse to one undirected edge; unknown node names
/// and self-loops are errors with file and line.
MultiplexDataset load_multiplex(const std::string& dir);

/// Writes a dataset in the same directory layout.
void write_multiplex(const MultiplexDataset& ds, const std::string& dir);

/// Density filters: first drop nodes with positive degree in fewer than
/// min_node_activity * L layers, then drop layers whose average degree over
/// the remaining nodes is below min_avg_degree. Both comparisons are >=.
MultiplexDataset preprocess_multiplex(const MultiplexDataset& ds, double min_node_activity,
                                      double min_avg_degree);

}  // namespace dimple
