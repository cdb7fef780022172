#pragma once

#include <optional>
#include <string>
#include <vector>

#include "snape/trainer.hpp"

namespace snape {

/// One baseline row of the per-dataset configuration tables.
struct BasePreset {
    std::string dataset;  // dbpedia50 | fb15k237 | wn18rr | aristov4
    ModelKind model;
    std::uint32_t dim;
    double lr;
    std::uint32_t epochs;
    OptimizerKind optimizer;
};

enum class Budget { SameMemory, SameTime };

/// One SnapE row: cycles C, ensemble size M, optimizer, per budget.
struct SnapePreset {
    std::string dataset;
    ModelKind model;
    std::uint32_t dim;
    Budget budget;
    std::uint32_t cycles;
    std::uint32_t num_models;
    OptimizerKind optimizer;
};

const std::vector<BasePreset>& base_presets();
const std::vector<SnapePreset>& snape_presets();

struct Preset {
    std::string name;
    TrainConfig train;
    EnsembleConfig ensemble;
};

/// Names: "<dataset>-<model>-<dim>-baseline", "<dataset>-<model>-<dim>-snape-memory",
/// "<dataset>-<model>-<dim>-snape-time" (model lowercase).
std::vector<std::string> preset_names();
std::optional<Preset> find_preset(const std::string& name);

/// Default loss for a model kind: Softplus for ComplEx, MarginRanking otherwise.
LossKind default_loss(ModelKind kind);

}  // namespace snape
