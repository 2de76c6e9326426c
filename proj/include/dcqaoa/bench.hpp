#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dcqaoa/opt.hpp"

namespace dcqaoa {

using json = nlohmann::json;

/// One model family plus the sizes to run it at. Unset fields take the
/// family's preset values (lfim: J=h_z=1; tfim: J=h_x=1; ghz: J=1).
struct ModelSelector {
  std::string model;  // lfim | tfim | ghz | ising | maxcut | sk | pspin
  std::vector<std::size_t> sizes;
  std::optional<double> J, h_z, h_x;
  bool periodic = true;
  std::optional<int> P;
  std::optional<double> h;
  /// Explicit graph for maxcut; random 3-regular graphs are drawn otherwise.
  std::optional<std::vector<Edge>> edges;

  bool is_random() const;
  /// Row label, e.g. "pspin[P=4 h=0]".
  std::string label() const;
  ProblemInstance instance(std::size_t L,
                           std::optional<std::uint64_t> seed) const;
};

struct ExperimentConfig {
  std::string name = "sweep";
  std::vector<ModelSelector> models;
  std::vector<Variant> variants = {Variant::QAOA, Variant::DCQAOA};
  std::vector<std::size_t> p_values = {1};
  /// Replaces the per-model default CD shape, e.g. "ZY".
  std::optional<std::string> cd_shape;
  OptimizerConfig optimizer;
  /// Used by random families only; fixed models run a single instance.
  std::vector<std::uint64_t> instance_seeds = {0};
  std::vector<std::uint64_t> init_seeds = {0};
  std::size_t threads = 0;  // 0: hardware concurrency
  bool record_trajectories = false;
  /// Aggregate each instance's best start rather than every start.
  bool best_of_inits = false;
  std::string output;
  /// Free-form notes on where each setting came from; echoed in metadata.
  std::map<std::string, std::string> notes;

  void validate() const;
};

json to_json(const ExperimentConfig& config);
/// Seed lists may be given as arrays or as {"count": N, "start": s}.
ExperimentConfig config_from_json(const json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

json to_json(const ProblemInstance& instance);
ProblemInstance instance_from_json(const json& j);

struct TrajectoryPoint {
  std::size_t iteration = 0;
  double F = 0.0;
  double R = 0.0;
  double gradient_norm = 0.0;
};

struct ResultRow {
  std::string model;
  std::size_t L = 0;
  Variant variant = Variant::QAOA;
  std::size_t p = 1;
  std::optional<std::uint64_t> instance_seed;
  std::uint64_t init_seed = 0;
  double E0 = 0.0;
  double F = 0.0;
  double R = 0.0;
  std::size_t iterations = 0;
  std::size_t depth = 0;
  std::size_t parameter_count = 0;
  std::string status;  // converged | max_iterations | failed
  std::string error;
  double wall_seconds = 0.0;
  std::vector<double> final_params;
  std::vector<TrajectoryPoint> trajectory;  // only if recorded

  bool failed() const { return status == "failed"; }
};

struct Stats {
  double mean = 0.0;
  double standard_error = 0.0;  // sample sd / sqrt(N); 0 when N = 1
  double best = 0.0;
  std::size_t n = 0;
  bool single = false;
};

/// Throws std::invalid_argument on an empty sample.
Stats summarize(const std::vector<double>& values);

struct AggregateRow {
  std::map<std::string, std::string> key;
  Stats stats;
};

/// Groups non-failed rows by the named columns (model, L, variant, p,
/// instance_seed, init_seed) and summarizes R within each group. Groups come
/// out in first-appearance order.
std::vector<AggregateRow> aggregate(const std::vector<ResultRow>& rows,
                                    const std::vector<std::string>& keys);

/// Keeps, for each (model, L, variant, p, instance) group, the non-failed row
/// with the highest R: the multi-start result for that instance.
std::vector<ResultRow> best_over_inits(const std::vector<ResultRow>& rows);

struct ResultTable {
  std::vector<ResultRow> rows;
  /// By model, L, variant, p; over best_over_inits(rows) when the config
  /// asks for best_of_inits.
  std::vector<AggregateRow> aggregates;

  std::size_t failures() const;
};

using Progress = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every (model, L, instance, variant, p, init) cell. Cells run in
/// parallel but rows come back in loop order, so the table depends only on
/// the config. A failing cell becomes a row with status "failed".
ResultTable run_sweep(const ExperimentConfig& config,
                      const Progress& progress = {});

enum class Format { Csv, JsonLines };

Format format_for(const std::filesystem::path& path);

/// Writes the row file, "<stem>.aggregate.csv", "<path>.meta.json" and,
/// when trajectories were recorded, "<stem>.trajectories.jsonl". Returns the
/// paths written. Throws std::runtime_error naming the path on I/O failure.
std::vector<std::filesystem::path> emit(const ResultTable& table,
                                        const ExperimentConfig& config,
                                        const std::filesystem::path& path,
                                        Format format);

std::vector<ResultRow> read_rows(const std::filesystem::path& path,
                                 Format format);

extern const std::vector<std::string> kRowColumns;

/// Built-in configs: fig2a, fig2b, fig2c, fig3a, fig3b, fig4, fig5.
std::vector<std::string> figure_names();
/// With `scale_L`, every model runs at that single size instead.
ExperimentConfig figure_config(const std::string& name,
                               std::optional<std::size_t> scale_L = {});

}  // namespace dcqaoa
