#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "snape/experiment.hpp"

namespace fs = std::filesystem;
using namespace snape;

namespace {

ExperimentConfig build_config(const std::string& config_path, const std::string& preset_name) {
    ExperimentConfig config;
    if (!config_path.empty()) config = load_experiment(config_path);
    if (!preset_name.empty()) {
        auto preset = find_preset(preset_name);
        if (!preset) throw std::runtime_error("unknown preset: " + preset_name);
        config.train = preset->train;
        config.ensemble = preset->ensemble;
    }
    return config;
}

int cmd_train(const std::string& config_path, const std::string& preset_name,
              const std::string& output_dir, std::int64_t seed, bool dry_run) {
    ExperimentConfig config = build_config(config_path, preset_name);
    if (!output_dir.empty()) config.output_dir = output_dir;
    if (seed >= 0) config.train.seed = std::uint64_t(seed);

    if (dry_run) {
        nlohmann::json j = to_json(config);
        j["derived"]["snapshot_calendar"] = snapshot_calendar(config.train.schedule);
        std::cout << j.dump(2) << '\n';
        return 0;
    }

    RunReport report = run_training(config);
    std::cout << "trained " << report.epochs_run << " epochs in " << report.train_seconds
              << " s (" << report.optimizer_applications << " optimizer applications)\n"
              << "artifacts in " << config.output_dir << '\n';
    return 0;
}

int cmd_evaluate(const std::string& run_dir, std::size_t num_models,
                 const std::string& combiner, const std::string& filtering,
                 const std::string& tie_rule, bool sweep) {
    EnsembleConfig ensemble;
    ensemble.num_models = num_models;
    ensemble.combiner = combiner_kind_from_string(combiner);
    RankPolicy policy;
    policy.filtering = filter_mode_from_string(filtering);
    policy.tie_rule = tie_rule_from_string(tie_rule);

    auto rows = run_evaluation(run_dir, ensemble, policy, sweep);
    std::cout << "M\tcombiner\tH@1\tH@10\tMRR\n";
    for (const EvaluationRow& row : rows) {
        std::cout << row.num_models << '\t' << to_string(row.combiner) << '\t'
                  << row.metrics.both.hits_at_1 << '\t' << row.metrics.both.hits_at_10 << '\t'
                  << row.metrics.both.mrr << '\n';
    }
    return 0;
}

int cmd_grid(const std::string& config_path) {
    ExperimentConfig config = load_experiment(config_path);
    GridResult result = run_grid(config);
    std::size_t failed = 0;
    for (const GridCell& c : result.cells) failed += c.failed ? 1 : 0;
    std::cout << result.cells.size() << " cells (" << failed << " failed), table in "
              << config.output_dir << "/grid.csv\n";
    const GridCell& best = result.cells.at(result.best_index);
    std::cout << "best: lr=" << best.config.train.schedule.alpha0
              << " optimizer=" << to_string(best.config.train.optimizer)
              << " cycles=" << best.config.train.schedule.cycles
              << " M=" << best.config.ensemble.num_models << " dim=" << best.config.train.dim
              << " validation H@10=" << best.validation_hits10 << '\n';
    return 0;
}

int cmd_schedule_dump(const std::string& kind, double alpha0, double eta_min,
                      std::uint32_t epochs, std::uint32_t cycles, std::uint32_t warmup,
                      const std::string& out_path) {
    ScheduleConfig s;
    s.kind = schedule_kind_from_string(kind);
    s.alpha0 = alpha0;
    s.eta_min = eta_min;
    s.total_epochs = epochs;
    s.cycles = cycles;
    s.warmup_epochs = warmup;
    if (out_path.empty()) {
        dump_schedule_csv(s, std::cout);
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        dump_schedule_csv(s, out);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SnapE: snapshot-ensemble training for link prediction models"};
    app.require_subcommand(1);

    std::string config_path, preset_name, output_dir, run_dir;
    std::int64_t seed = -1;
    bool dry_run = false;

    auto* train_cmd = app.add_subcommand("train", "train a model per config or preset");
    train_cmd->add_option("--config", config_path, "experiment config JSON");
    train_cmd->add_option("--preset", preset_name, "named preset (see `presets list`)");
    train_cmd->add_option("--output", output_dir, "output directory override");
    train_cmd->add_option("--seed", seed, "seed override");
    train_cmd->add_flag("--dry-run", dry_run, "print resolved config and exit");

    std::size_t num_models = 2;
    std::string combiner = "LossWeighted", filtering = "Filtered", tie_rule = "Realistic";
    bool sweep = false;
    auto* eval_cmd = app.add_subcommand("evaluate", "evaluate a stored run");
    eval_cmd->add_option("run_dir", run_dir, "run directory (from train)")->required();
    eval_cmd->add_option("-M,--num-models", num_models, "snapshots in the ensemble");
    eval_cmd->add_option("--combiner", combiner,
                         "SimpleAverage|LossWeighted|DescendingWeights|Borda");
    eval_cmd->add_option("--filtering", filtering, "Raw|Filtered");
    eval_cmd->add_option("--tie-rule", tie_rule, "Optimistic|Pessimistic|Realistic");
    eval_cmd->add_flag("--sweep", sweep, "one row per M in [2..#snapshots]");

    std::string grid_config;
    auto* grid_cmd = app.add_subcommand("grid", "grid search over config axes");
    grid_cmd->add_option("--config", grid_config, "experiment config JSON with grid axes")
        ->required();

    std::string sched_kind = "CCA", sched_out;
    double alpha0 = 0.1, eta_min = 0.0;
    std::uint32_t epochs = 100, cycles = 5, warmup = 0;
    auto* sched_cmd = app.add_subcommand("schedule-dump", "emit epoch,lr,is_snapshot CSV");
    sched_cmd->add_option("--kind", sched_kind, "Constant|CCA|MMCCLR|DeferredCCA|DeferredMMCCLR");
    sched_cmd->add_option("--alpha0", alpha0, "maximum learning rate");
    sched_cmd->add_option("--eta-min", eta_min, "MMCCLR floor");
    sched_cmd->add_option("--epochs", epochs, "total epochs T");
    sched_cmd->add_option("--cycles", cycles, "cycles C");
    sched_cmd->add_option("--warmup", warmup, "warmup epochs k (deferred kinds)");
    sched_cmd->add_option("--out", sched_out, "output file (default stdout)");

    auto* presets_cmd = app.add_subcommand("presets", "preset library");
    auto* presets_list = presets_cmd->add_subcommand("list", "list preset names");
    std::string show_name;
    auto* presets_show = presets_cmd->add_subcommand("show", "show one preset as JSON");
    presets_show->add_option("name", show_name, "preset name")->required();
    presets_cmd->require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (train_cmd->parsed())
            return cmd_train(config_path, preset_name, output_dir, seed, dry_run);
        if (eval_cmd->parsed())
            return cmd_evaluate(run_dir, num_models, combiner, filtering, tie_rule, sweep);
        if (grid_cmd->parsed()) return cmd_grid(grid_config);
        if (sched_cmd->parsed())
            return cmd_schedule_dump(sched_kind, alpha0, eta_min, epochs, cycles, warmup,
                                     sched_out);
        if (presets_cmd->parsed()) {
            if (presets_list->parsed()) {
                for (const std::string& name : preset_names()) std::cout << name << '\n';
                return 0;
            }
            if (presets_show->parsed()) {
                auto preset = find_preset(show_name);
                if (!preset) throw std::runtime_error("unknown preset: " + show_name);
                ExperimentConfig config;
                config.train = preset->train;
                config.ensemble = preset->ensemble;
                std::cout << to_json(config).dump(2) << '\n';
                return 0;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
