#include "snape/experiment.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

namespace snape {

namespace fs = std::filesystem;
using nlohmann::json;

void ExperimentConfig::validate_paths() const {
    for (const std::string* p : {&dataset.train, &dataset.valid, &dataset.test}) {
        if (p->empty()) throw std::runtime_error("experiment config: missing dataset path");
        if (!fs::exists(*p)) throw std::runtime_error("dataset file not found: " + *p);
    }
}

namespace {

json schedule_to_json(const ScheduleConfig& s) {
    return {{"kind", to_string(s.kind)},      {"alpha0", s.alpha0},
            {"eta_min", s.eta_min},           {"epochs", s.total_epochs},
            {"cycles", s.cycles},             {"warmup", s.warmup_epochs}};
}

ScheduleConfig schedule_from_json(const json& j) {
    ScheduleConfig s;
    s.kind = schedule_kind_from_string(j.value("kind", "Constant"));
    s.alpha0 = j.value("alpha0", 0.1);
    s.eta_min = j.value("eta_min", 0.0);
    s.total_epochs = j.value("epochs", 100u);
    s.cycles = j.value("cycles", 1u);
    s.warmup_epochs = j.value("warmup", 0u);
    return s;
}

json train_to_json(const TrainConfig& t) {
    return {{"model", to_string(t.model)},
            {"dim", t.dim},
            {"loss", to_string(t.loss)},
            {"margin", t.margin},
            {"optimizer", to_string(t.optimizer)},
            {"schedule", schedule_to_json(t.schedule)},
            {"sampler",
             {{"kind", t.sampler.kind == SamplerKind::Random ? "Random" : "Extended"},
              {"extended_start_cycle", t.sampler.extended_start_cycle},
              {"ramp", t.sampler.ramp},
              {"candidate_pool", t.sampler.candidate_pool},
              {"filter_known_positives", t.sampler.filter_known_positives}}},
            {"batch_size", t.batch_size},
            {"seed", t.seed},
            {"early_stop",
             {{"enabled", t.early_stop.enabled},
              {"relative_delta", t.early_stop.relative_delta},
              {"patience", t.early_stop.patience},
              {"eval_every", t.early_stop.eval_every}}},
            {"mode", to_string(t.mode)},
            {"mbase_models", t.mbase_models},
            {"normalize_entities", t.normalize_entities},
            {"per_batch_lr", t.per_batch_lr}};
}

TrainConfig train_from_json(const json& j) {
    TrainConfig t;
    t.model = model_kind_from_string(j.value("model", "TransE"));
    t.dim = j.value("dim", 64u);
    t.loss = j.contains("loss") ? loss_kind_from_string(j["loss"].get<std::string>())
                                : default_loss(t.model);
    t.margin = j.value("margin", 1.0);
    t.optimizer = optimizer_kind_from_string(j.value("optimizer", "AdaGrad"));
    if (j.contains("schedule")) t.schedule = schedule_from_json(j["schedule"]);
    if (j.contains("sampler")) {
        const json& s = j["sampler"];
        t.sampler.kind = s.value("kind", "Random") == std::string("Extended")
                             ? SamplerKind::Extended
                             : SamplerKind::Random;
        t.sampler.extended_start_cycle = s.value("extended_start_cycle", std::size_t(1));
        if (s.contains("ramp")) t.sampler.ramp = s["ramp"].get<std::vector<double>>();
        t.sampler.candidate_pool = s.value("candidate_pool", std::size_t(512));
        t.sampler.filter_known_positives = s.value("filter_known_positives", false);
    }
    t.batch_size = j.value("batch_size", 128u);
    t.seed = j.value("seed", std::uint64_t(0));
    if (j.contains("early_stop")) {
        const json& e = j["early_stop"];
        t.early_stop.enabled = e.value("enabled", false);
        t.early_stop.relative_delta = e.value("relative_delta", 1e-6);
        t.early_stop.patience = e.value("patience", 2u);
        t.early_stop.eval_every = e.value("eval_every", 10u);
    }
    t.mode = train_mode_from_string(j.value("mode", "Baseline"));
    t.mbase_models = j.value("mbase_models", 10u);
    t.normalize_entities = j.value("normalize_entities", false);
    t.per_batch_lr = j.value("per_batch_lr", false);
    return t;
}

std::string resolve_path(std::string path) {
    if (path.empty() || fs::path(path).is_absolute() || fs::exists(path)) return path;
    if (const char* root = std::getenv("SNAPE_DATA_ROOT"))
        return (fs::path(root) / path).string();
    return path;
}

}  // namespace

json to_json(const ExperimentConfig& config) {
    json j;
    j["dataset"] = {{"train", config.dataset.train},
                    {"valid", config.dataset.valid},
                    {"test", config.dataset.test}};
    j["train"] = train_to_json(config.train);
    j["ensemble"] = {{"num_models", config.ensemble.num_models},
                     {"combiner", to_string(config.ensemble.combiner)}};
    j["evaluation"] = {{"filtering", to_string(config.evaluation.filtering)},
                       {"tie_rule", to_string(config.evaluation.tie_rule)}};
    j["output_dir"] = config.output_dir;
    if (!config.grid.empty()) {
        json g;
        if (!config.grid.lr.empty()) g["lr"] = config.grid.lr;
        if (!config.grid.optimizer.empty()) {
            std::vector<std::string> names;
            for (auto o : config.grid.optimizer) names.push_back(to_string(o));
            g["optimizer"] = names;
        }
        if (!config.grid.cycles.empty()) g["cycles"] = config.grid.cycles;
        if (!config.grid.num_models.empty()) g["num_models"] = config.grid.num_models;
        if (!config.grid.dim.empty()) g["dim"] = config.grid.dim;
        j["grid"] = g;
    }
    return j;
}

ExperimentConfig experiment_from_json(const json& j) {
    ExperimentConfig c;
    if (j.contains("dataset")) {
        c.dataset.train = resolve_path(j["dataset"].value("train", ""));
        c.dataset.valid = resolve_path(j["dataset"].value("valid", ""));
        c.dataset.test = resolve_path(j["dataset"].value("test", ""));
    }
    if (j.contains("train")) c.train = train_from_json(j["train"]);
    if (j.contains("ensemble")) {
        c.ensemble.num_models = j["ensemble"].value("num_models", std::size_t(2));
        c.ensemble.combiner =
            combiner_kind_from_string(j["ensemble"].value("combiner", "LossWeighted"));
    }
    if (j.contains("evaluation")) {
        c.evaluation.filtering =
            filter_mode_from_string(j["evaluation"].value("filtering", "Filtered"));
        c.evaluation.tie_rule =
            tie_rule_from_string(j["evaluation"].value("tie_rule", "Realistic"));
    }
    c.output_dir = j.value("output_dir", "runs/default");
    if (j.contains("grid")) {
        const json& g = j["grid"];
        if (g.contains("lr")) c.grid.lr = g["lr"].get<std::vector<double>>();
        if (g.contains("optimizer"))
            for (const auto& name : g["optimizer"])
                c.grid.optimizer.push_back(optimizer_kind_from_string(name.get<std::string>()));
        if (g.contains("cycles")) c.grid.cycles = g["cycles"].get<std::vector<std::uint32_t>>();
        if (g.contains("num_models"))
            c.grid.num_models = g["num_models"].get<std::vector<std::uint32_t>>();
        if (g.contains("dim")) c.grid.dim = g["dim"].get<std::vector<std::uint32_t>>();
    }
    return c;
}

ExperimentConfig load_experiment(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open experiment config: " + path);
    json j;
    in >> j;
    return experiment_from_json(j);
}

void save_experiment(const ExperimentConfig& config, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write experiment config: " + path);
    out << to_json(config).dump(2) << '\n';
}

namespace {

void append_jsonl(const std::string& path, const json& record) {
    std::ofstream out(path, std::ios::app);
    if (!out) throw std::runtime_error("cannot append to " + path);
    out << record.dump() << '\n';
}

json report_to_json(const RunReport& r) {
    return {{"train_seconds", r.train_seconds},
            {"epochs_run", r.epochs_run},
            {"optimizer_applications", r.optimizer_applications},
            {"stopped_early", r.stopped_early},
            {"epoch_mean_loss", r.epoch_mean_loss}};
}

json metrics_to_json(const Metrics& m) {
    auto side = [](const SideMetrics& s) {
        return json{{"hits_at_1", s.hits_at_1}, {"hits_at_10", s.hits_at_10}, {"mrr", s.mrr}};
    };
    return {{"head", side(m.head)},
            {"tail", side(m.tail)},
            {"both", side(m.both)},
            {"query_count", m.query_count},
            {"filtering", to_string(m.policy.filtering)},
            {"tie_rule", to_string(m.policy.tie_rule)}};
}

}  // namespace

RunReport run_training(const ExperimentConfig& config) {
    config.validate_paths();
    Dataset dataset = load_dataset(config.dataset.train, config.dataset.valid,
                                   config.dataset.test);
    TrainResult result = train(config.train, dataset);

    fs::create_directories(config.output_dir);
    save_experiment(config, (fs::path(config.output_dir) / "config.json").string());
    save_snapshots(result.snapshots, (fs::path(config.output_dir) / "snapshots").string());

    // Every record embeds the resolved config so any row can be reproduced.
    append_jsonl((fs::path(config.output_dir) / "report.jsonl").string(),
                 json{{"phase", "train"},
                      {"config", to_json(config)},
                      {"seed", config.train.seed},
                      {"report", report_to_json(result.report)}});
    return result.report;
}

std::vector<EvaluationRow> run_evaluation(const std::string& run_dir,
                                          const EnsembleConfig& ensemble,
                                          const RankPolicy& policy, bool sweep) {
    ExperimentConfig config = load_experiment((fs::path(run_dir) / "config.json").string());
    config.validate_paths();
    Dataset dataset = load_dataset(config.dataset.train, config.dataset.valid,
                                   config.dataset.test);
    TripleMembership membership(dataset);
    SnapshotSet snapshots = load_snapshots((fs::path(run_dir) / "snapshots").string());
    std::vector<ScoredSnapshot> scored = snapshots.scored();

    if (ensemble.num_models > scored.size())
        throw std::runtime_error("ensemble M=" + std::to_string(ensemble.num_models) +
                                 " exceeds stored snapshots (" + std::to_string(scored.size()) +
                                 ")");

    std::vector<std::size_t> ms;
    if (sweep && scored.size() >= 2) {
        for (std::size_t m = 2; m <= scored.size(); ++m) ms.push_back(m);
    } else {
        ms.push_back(std::min(ensemble.num_models, scored.size()));
    }

    std::vector<EvaluationRow> rows;
    for (std::size_t m : ms) {
        EnsembleConfig ec{m, ensemble.combiner};
        Metrics metrics = evaluate(ensemble_scorer(scored, ec), dataset.test, membership, policy);
        rows.push_back({m, ec.combiner, metrics});
        append_jsonl((fs::path(run_dir) / "report.jsonl").string(),
                     json{{"phase", "evaluate"},
                          {"config", to_json(config)},
                          {"seed", config.train.seed},
                          {"num_models", m},
                          {"combiner", to_string(ec.combiner)},
                          {"metrics", metrics_to_json(metrics)}});
    }

    std::ofstream csv(fs::path(run_dir) / "metrics.csv");
    csv << "num_models,combiner,filtering,tie_rule,H@1,H@10,MRR\n";
    for (const EvaluationRow& row : rows) {
        csv << row.num_models << ',' << to_string(row.combiner) << ','
            << to_string(row.metrics.policy.filtering) << ','
            << to_string(row.metrics.policy.tie_rule) << ',' << row.metrics.both.hits_at_1 << ','
            << row.metrics.both.hits_at_10 << ',' << row.metrics.both.mrr << '\n';
    }
    return rows;
}

GridResult run_grid(const ExperimentConfig& base) {
    base.validate_paths();
    Dataset dataset = load_dataset(base.dataset.train, base.dataset.valid, base.dataset.test);
    TripleMembership membership(dataset);

    // Missing axes collapse to the base config's value.
    GridAxes axes = base.grid;
    if (axes.lr.empty()) axes.lr = {base.train.schedule.alpha0};
    if (axes.optimizer.empty()) axes.optimizer = {base.train.optimizer};
    if (axes.cycles.empty()) axes.cycles = {base.train.schedule.cycles};
    if (axes.num_models.empty()) axes.num_models = {std::uint32_t(base.ensemble.num_models)};
    if (axes.dim.empty()) axes.dim = {base.train.dim};

    GridResult result;
    std::size_t cell_index = 0;
    for (double lr : axes.lr)
        for (OptimizerKind opt : axes.optimizer)
            for (std::uint32_t cycles : axes.cycles)
                for (std::uint32_t m : axes.num_models)
                    for (std::uint32_t dim : axes.dim) {
                        GridCell cell;
                        cell.config = base;
                        cell.config.grid = {};
                        cell.config.train.schedule.alpha0 = lr;
                        cell.config.train.optimizer = opt;
                        cell.config.train.schedule.cycles = cycles;
                        cell.config.ensemble.num_models = m;
                        cell.config.train.dim = dim;
                        cell.config.output_dir =
                            (fs::path(base.output_dir) / ("cell_" + std::to_string(cell_index)))
                                .string();
                        ++cell_index;
                        try {
                            TrainResult tr = train(cell.config.train, dataset);
                            std::vector<ScoredSnapshot> scored = tr.snapshots.scored();
                            EnsembleConfig ec{std::min<std::size_t>(m, scored.size()),
                                              cell.config.ensemble.combiner};
                            Metrics metrics = evaluate(ensemble_scorer(scored, ec), dataset.valid,
                                                       membership, cell.config.evaluation);
                            cell.validation_hits10 = metrics.both.hits_at_10;
                        } catch (const std::exception& e) {
                            cell.failed = true;
                            cell.error = e.what();
                        }
                        result.cells.push_back(std::move(cell));
                    }

    // Argmax over successful cells; the first cell in axis order wins ties.
    bool have_best = false;
    for (std::size_t i = 0; i < result.cells.size(); ++i) {
        const GridCell& c = result.cells[i];
        if (c.failed) continue;
        if (!have_best || c.validation_hits10 > result.cells[result.best_index].validation_hits10) {
            result.best_index = i;
            have_best = true;
        }
    }

    fs::create_directories(base.output_dir);
    std::ofstream csv(fs::path(base.output_dir) / "grid.csv");
    csv << "cell,lr,optimizer,cycles,num_models,dim,validation_H@10,status\n";
    for (std::size_t i = 0; i < result.cells.size(); ++i) {
        const GridCell& c = result.cells[i];
        csv << i << ',' << c.config.train.schedule.alpha0 << ','
            << to_string(c.config.train.optimizer) << ',' << c.config.train.schedule.cycles << ','
            << c.config.ensemble.num_models << ',' << c.config.train.dim << ','
            << c.validation_hits10 << ',' << (c.failed ? "failed" : "ok") << '\n';
    }
    append_jsonl((fs::path(base.output_dir) / "report.jsonl").string(),
                 json{{"phase", "grid"},
                      {"config", to_json(base)},
                      {"best_cell", result.best_index},
                      {"cells", result.cells.size()}});
    return result;
}

void dump_schedule_csv(const ScheduleConfig& schedule, std::ostream& out) {
    std::vector<std::uint32_t> calendar = snapshot_calendar(schedule);
    out << "epoch,lr,is_snapshot\n";
    char buf[64];
    for (std::uint32_t t = 1; t <= schedule.total_epochs; ++t) {
        bool snap = std::find(calendar.begin(), calendar.end(), t) != calendar.end();
        std::snprintf(buf, sizeof(buf), "%.17g", lr_at(schedule, t));
        out << t << ',' << buf << ',' << (snap ? 1 : 0) << '\n';
    }
}

}  // namespace snape
