#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "snape/ensemble.hpp"
#include "snape/evaluate.hpp"
#include "snape/kg.hpp"
#include "snape/loss.hpp"
#include "snape/model.hpp"
#include "snape/optimizer.hpp"
#include "snape/sampling.hpp"
#include "snape/schedule.hpp"

namespace snape {

enum class TrainMode { Baseline, SnapE, MBase };

const char* to_string(TrainMode mode);
TrainMode train_mode_from_string(const std::string& s);

struct EarlyStopConfig {
    bool enabled = false;
    double relative_delta = 1e-6;
    std::uint32_t patience = 2;
    std::uint32_t eval_every = 10;  // epochs between validation evaluations
};

struct TrainConfig {
    ModelKind model = ModelKind::TransE;
    std::uint32_t dim = 64;
    LossKind loss = LossKind::MarginRanking;
    double margin = 1.0;
    OptimizerKind optimizer = OptimizerKind::AdaGrad;
    ScheduleConfig schedule;
    SamplerPolicy sampler;
    std::uint32_t batch_size = 128;
    std::uint64_t seed = 0;
    EarlyStopConfig early_stop;
    TrainMode mode = TrainMode::Baseline;
    std::uint32_t mbase_models = 10;    // MBase only
    bool normalize_entities = false;    // optional post-update L2 renorm, off by default
    bool per_batch_lr = false;          // evaluate the schedule per batch instead of per epoch

    void validate() const;
};

struct Snapshot {
    ModelParams params;
    double final_loss = 0.0;      // mean training loss of the snapshot's epoch
    std::uint32_t cycle_index = 0;
    std::uint32_t epoch = 0;
};

struct SnapshotSet {
    std::vector<Snapshot> snapshots;  // calendar order, oldest first
    ScheduleConfig schedule;

    std::vector<ScoredSnapshot> scored() const;
};

struct RunReport {
    double train_seconds = 0.0;
    std::uint32_t epochs_run = 0;
    std::vector<double> epoch_mean_loss;
    std::uint64_t optimizer_applications = 0;
    bool stopped_early = false;
};

struct TrainResult {
    SnapshotSet snapshots;  // one element for Baseline; m for MBase
    RunReport report;
};

/// Sliding-window early stop: stop once the metric has failed to improve on
/// the best seen by more than relative_delta (relative) for `patience`
/// consecutive evaluations.
bool early_stop_check(const std::vector<double>& history, double relative_delta,
                      std::uint32_t patience);

TrainResult train(const TrainConfig& config, const Dataset& dataset);

/// Directory layout: manifest.txt (one "filename loss cycle epoch" line per
/// snapshot, in order) plus one binary file per snapshot. Round trip is
/// bit-exact.
void save_snapshots(const SnapshotSet& set, const std::string& directory);
SnapshotSet load_snapshots(const std::string& directory);

void save_model_binary(const ModelParams& params, double final_loss, std::uint32_t cycle_index,
                       std::uint32_t epoch, const std::string& path);
Snapshot load_model_binary(const std::string& path);

}  // namespace snape
