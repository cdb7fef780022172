#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "snape/evaluate.hpp"
#include "snape/presets.hpp"
#include "snape/trainer.hpp"

namespace snape {

struct DatasetPaths {
    std::string train;
    std::string valid;
    std::string test;
};

struct GridAxes {
    std::vector<double> lr;
    std::vector<OptimizerKind> optimizer;
    std::vector<std::uint32_t> cycles;
    std::vector<std::uint32_t> num_models;
    std::vector<std::uint32_t> dim;

    bool empty() const {
        return lr.empty() && optimizer.empty() && cycles.empty() && num_models.empty() &&
               dim.empty();
    }
};

struct ExperimentConfig {
    DatasetPaths dataset;
    TrainConfig train;
    EnsembleConfig ensemble;
    RankPolicy evaluation;
    std::string output_dir = "runs/default";
    GridAxes grid;

    void validate_paths() const;  // referenced files must exist
};

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig experiment_from_json(const nlohmann::json& j);

/// Loads the config file and resolves relative dataset paths against the
/// SNAPE_DATA_ROOT environment variable when set.
ExperimentConfig load_experiment(const std::string& path);
void save_experiment(const ExperimentConfig& config, const std::string& path);

/// Trains per config, writes snapshots + resolved config + a JSON-lines
/// RunReport record under config.output_dir. Returns the report.
RunReport run_training(const ExperimentConfig& config);

struct EvaluationRow {
    std::size_t num_models;
    CombinerKind combiner;
    Metrics metrics;
};

/// Evaluates the snapshots stored in `run_dir` (its resolved config supplies
/// dataset paths). For SnapE runs with sweep=true, one row per M in
/// [2..#snapshots]; otherwise a single row at the configured M. Appends
/// JSON-lines metric records and writes metrics.csv in run_dir.
std::vector<EvaluationRow> run_evaluation(const std::string& run_dir,
                                          const EnsembleConfig& ensemble,
                                          const RankPolicy& policy, bool sweep);

struct GridCell {
    ExperimentConfig config;
    double validation_hits10 = 0.0;
    bool failed = false;
    std::string error;
};

struct GridResult {
    std::vector<GridCell> cells;
    std::size_t best_index = 0;  // argmax validation HITS@10, first wins ties
};

/// Runs every axis combination (earlier axes vary slowest). Single-cell
/// failures are recorded and the grid continues.
GridResult run_grid(const ExperimentConfig& base);

/// Writes the per-epoch schedule table: epoch,lr,is_snapshot.
void dump_schedule_csv(const ScheduleConfig& schedule, std::ostream& out);

}  // namespace snape
