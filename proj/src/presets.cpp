#include "snape/presets.hpp"

#include <algorithm>

namespace snape {

namespace {

constexpr OptimizerKind AG = OptimizerKind::AdaGrad;
constexpr OptimizerKind Ad = OptimizerKind::Adam;
constexpr OptimizerKind SG = OptimizerKind::SGD;

constexpr ModelKind TE = ModelKind::TransE;
constexpr ModelKind DM = ModelKind::DistMult;
constexpr ModelKind CX = ModelKind::ComplEx;
constexpr ModelKind RO = ModelKind::RotatE;

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace

const std::vector<BasePreset>& base_presets() {
    static const std::vector<BasePreset> table = {
        {"dbpedia50", TE, 64, 1.0, 110, AG},   {"dbpedia50", TE, 128, 1.0, 80, SG},
        {"dbpedia50", DM, 64, 0.1, 90, AG},    {"dbpedia50", DM, 128, 0.1, 20, AG},
        {"dbpedia50", CX, 64, 0.01, 210, Ad},  {"dbpedia50", CX, 128, 0.1, 10, Ad},
        {"dbpedia50", RO, 64, 10.0, 100, SG},  {"dbpedia50", RO, 128, 10.0, 110, SG},

        {"fb15k237", TE, 64, 0.1, 80, AG},     {"fb15k237", TE, 128, 0.1, 120, AG},
        {"fb15k237", DM, 64, 0.1, 20, AG},     {"fb15k237", DM, 128, 0.1, 20, AG},
        {"fb15k237", CX, 64, 1.0, 350, AG},    {"fb15k237", CX, 128, 10.0, 170, SG},
        {"fb15k237", RO, 64, 1.0, 270, SG},    {"fb15k237", RO, 128, 1.0, 400, SG},

        {"wn18rr", TE, 64, 0.1, 220, AG},      {"wn18rr", TE, 128, 0.1, 80, AG},
        {"wn18rr", DM, 64, 0.1, 10, AG},       {"wn18rr", DM, 128, 0.1, 30, AG},
        {"wn18rr", CX, 64, 0.01, 40, Ad},      {"wn18rr", CX, 128, 0.01, 120, Ad},
        {"wn18rr", RO, 64, 10.0, 70, SG},      {"wn18rr", RO, 128, 10.0, 80, SG},

        {"aristov4", TE, 64, 0.1, 170, AG},    {"aristov4", TE, 128, 0.1, 150, AG},
        {"aristov4", DM, 64, 0.1, 20, AG},     {"aristov4", DM, 128, 0.01, 400, AG},
        {"aristov4", CX, 64, 10.0, 210, SG},   {"aristov4", CX, 128, 10.0, 160, SG},
        {"aristov4", RO, 64, 0.1, 490, AG},    {"aristov4", RO, 128, 0.1, 150, AG},
    };
    return table;
}

const std::vector<SnapePreset>& snape_presets() {
    constexpr Budget Mem = Budget::SameMemory;
    constexpr Budget Time = Budget::SameTime;
    static const std::vector<SnapePreset> table = {
        {"dbpedia50", TE, 64, Mem, 10, 2, AG},  {"dbpedia50", TE, 128, Mem, 10, 2, SG},
        {"dbpedia50", DM, 64, Mem, 5, 2, AG},   {"dbpedia50", DM, 128, Mem, 10, 2, Ad},
        {"dbpedia50", CX, 64, Mem, 10, 2, Ad},  {"dbpedia50", CX, 128, Mem, 10, 10, Ad},
        {"dbpedia50", RO, 64, Mem, 5, 5, Ad},   {"dbpedia50", RO, 128, Mem, 5, 4, Ad},

        {"fb15k237", TE, 64, Mem, 10, 2, AG},   {"fb15k237", TE, 128, Mem, 10, 2, AG},
        {"fb15k237", DM, 64, Mem, 10, 9, Ad},   {"fb15k237", DM, 128, Mem, 5, 5, Ad},
        {"fb15k237", CX, 64, Mem, 10, 2, AG},   {"fb15k237", CX, 128, Mem, 5, 3, Ad},
        {"fb15k237", RO, 64, Mem, 10, 2, SG},   {"fb15k237", RO, 128, Mem, 10, 2, SG},

        {"wn18rr", TE, 64, Mem, 10, 2, AG},     {"wn18rr", TE, 128, Mem, 10, 2, AG},
        {"wn18rr", DM, 64, Mem, 10, 2, AG},     {"wn18rr", DM, 128, Mem, 10, 2, AG},
        {"wn18rr", CX, 64, Mem, 10, 2, Ad},     {"wn18rr", CX, 128, Mem, 10, 2, Ad},
        {"wn18rr", RO, 64, Mem, 10, 2, SG},     {"wn18rr", RO, 128, Mem, 10, 2, SG},

        {"aristov4", TE, 64, Mem, 10, 2, AG},   {"aristov4", TE, 128, Mem, 5, 2, AG},
        {"aristov4", DM, 64, Mem, 5, 5, Ad},    {"aristov4", DM, 128, Mem, 5, 5, Ad},
        {"aristov4", CX, 64, Mem, 5, 2, Ad},    {"aristov4", CX, 128, Mem, 10, 2, SG},
        {"aristov4", RO, 64, Mem, 5, 2, SG},    {"aristov4", RO, 128, Mem, 10, 2, AG},

        {"dbpedia50", TE, 64, Time, 10, 9, AG}, {"dbpedia50", TE, 128, Time, 10, 8, SG},
        {"dbpedia50", DM, 64, Time, 10, 3, Ad}, {"dbpedia50", DM, 128, Time, 10, 6, Ad},
        {"dbpedia50", CX, 64, Time, 10, 3, Ad}, {"dbpedia50", CX, 128, Time, 10, 10, Ad},
        {"dbpedia50", RO, 64, Time, 10, 10, Ad}, {"dbpedia50", RO, 128, Time, 10, 10, Ad},

        {"fb15k237", TE, 64, Time, 10, 6, AG},  {"fb15k237", TE, 128, Time, 10, 6, AG},
        {"fb15k237", DM, 64, Time, 10, 10, Ad}, {"fb15k237", DM, 128, Time, 10, 9, Ad},
        {"fb15k237", CX, 64, Time, 10, 9, Ad},  {"fb15k237", CX, 128, Time, 10, 7, Ad},
        {"fb15k237", RO, 64, Time, 10, 9, Ad},  {"fb15k237", RO, 128, Time, 10, 2, SG},

        {"wn18rr", TE, 64, Time, 10, 2, AG},    {"wn18rr", TE, 128, Time, 10, 2, AG},
        {"wn18rr", DM, 64, Time, 10, 9, Ad},    {"wn18rr", DM, 128, Time, 10, 3, AG},
        {"wn18rr", CX, 64, Time, 10, 2, Ad},    {"wn18rr", CX, 128, Time, 10, 2, Ad},
        {"wn18rr", RO, 64, Time, 10, 10, Ad},   {"wn18rr", RO, 128, Time, 10, 10, Ad},

        {"aristov4", TE, 64, Time, 10, 6, AG},  {"aristov4", TE, 128, Time, 10, 8, AG},
        {"aristov4", DM, 64, Time, 10, 10, Ad}, {"aristov4", DM, 128, Time, 10, 2, AG},
        {"aristov4", CX, 64, Time, 10, 10, Ad}, {"aristov4", CX, 128, Time, 10, 2, SG},
        {"aristov4", RO, 64, Time, 10, 4, SG},  {"aristov4", RO, 128, Time, 10, 2, AG},
    };
    return table;
}

LossKind default_loss(ModelKind kind) {
    return kind == ModelKind::ComplEx ? LossKind::Softplus : LossKind::MarginRanking;
}

namespace {

std::string preset_name(const std::string& dataset, ModelKind model, std::uint32_t dim,
                        const std::string& suffix) {
    return dataset + "-" + lower(to_string(model)) + "-" + std::to_string(dim) + "-" + suffix;
}

const BasePreset& base_row(const std::string& dataset, ModelKind model, std::uint32_t dim) {
    for (const BasePreset& b : base_presets())
        if (b.dataset == dataset && b.model == model && b.dim == dim) return b;
    throw std::logic_error("missing base preset row");
}

TrainConfig baseline_train_config(const BasePreset& b) {
    TrainConfig c;
    c.model = b.model;
    c.dim = b.dim;
    c.loss = default_loss(b.model);
    c.optimizer = b.optimizer;
    c.schedule.kind = ScheduleKind::Constant;
    c.schedule.alpha0 = b.lr;
    c.schedule.total_epochs = b.epochs;
    c.schedule.cycles = 1;
    c.mode = TrainMode::Baseline;
    c.early_stop.enabled = true;
    return c;
}

TrainConfig snape_train_config(const SnapePreset& s) {
    const BasePreset& b = base_row(s.dataset, s.model, s.dim);
    TrainConfig c;
    c.model = s.model;
    // Same memory budget trains at d/M dimensions with M snapshots.
    c.dim = s.budget == Budget::SameMemory ? std::max(1u, s.dim / s.num_models) : s.dim;
    c.loss = default_loss(s.model);
    c.optimizer = s.optimizer;
    c.mode = TrainMode::SnapE;
    c.sampler.kind = SamplerKind::Extended;

    // Deferred CCA: cycle length follows C, the cyclic part covers the last
    // M cycles, and the first T - M*ceil(T/C) epochs are constant warmup
    // (no warmup when M = C).
    std::uint32_t T = b.epochs;
    std::uint32_t len = (T + s.cycles - 1) / s.cycles;
    std::uint32_t span = std::min(T, s.num_models * len);
    c.schedule.kind = ScheduleKind::DeferredCCA;
    c.schedule.alpha0 = b.lr;
    c.schedule.total_epochs = T;
    c.schedule.cycles = s.num_models;
    c.schedule.warmup_epochs = T - span;
    c.early_stop.enabled = false;
    return c;
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const BasePreset& b : base_presets())
        names.push_back(preset_name(b.dataset, b.model, b.dim, "baseline"));
    for (const SnapePreset& s : snape_presets())
        names.push_back(preset_name(s.dataset, s.model, s.dim,
                                    s.budget == Budget::SameMemory ? "snape-memory" : "snape-time"));
    return names;
}

std::optional<Preset> find_preset(const std::string& name) {
    for (const BasePreset& b : base_presets()) {
        if (preset_name(b.dataset, b.model, b.dim, "baseline") == name) {
            Preset p;
            p.name = name;
            p.train = baseline_train_config(b);
            p.ensemble = {1, CombinerKind::LossWeighted};
            return p;
        }
    }
    for (const SnapePreset& s : snape_presets()) {
        std::string suffix = s.budget == Budget::SameMemory ? "snape-memory" : "snape-time";
        if (preset_name(s.dataset, s.model, s.dim, suffix) == name) {
            Preset p;
            p.name = name;
            p.train = snape_train_config(s);
            p.ensemble = {s.num_models, CombinerKind::LossWeighted};
            return p;
        }
    }
    return std::nullopt;
}

}  // namespace snape
