#include "snape/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace snape {

namespace fs = std::filesystem;

const char* to_string(TrainMode mode) {
    switch (mode) {
        case TrainMode::Baseline: return "Baseline";
        case TrainMode::SnapE: return "SnapE";
        case TrainMode::MBase: return "MBase";
    }
    return "?";
}

TrainMode train_mode_from_string(const std::string& s) {
    if (s == "Baseline") return TrainMode::Baseline;
    if (s == "SnapE") return TrainMode::SnapE;
    if (s == "MBase") return TrainMode::MBase;
    throw std::invalid_argument("unknown train mode: " + s);
}

void TrainConfig::validate() const {
    schedule.validate();
    if (dim < 1) throw std::invalid_argument("train: dimension must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("train: batch size must be >= 1");
    for (double f : sampler.ramp)
        if (f < 0.0 || f > 1.0)
            throw std::invalid_argument("train: sampler ramp fractions must lie in [0, 1]");
    if (early_stop.patience < 1) throw std::invalid_argument("train: patience must be >= 1");
    if (mode == TrainMode::SnapE && !is_cyclic(schedule.kind))
        throw std::invalid_argument("train: SnapE mode requires a cyclic schedule");
    if (mode == TrainMode::MBase && mbase_models < 1)
        throw std::invalid_argument("train: MBase needs at least one model");
    if (loss == LossKind::MarginRanking && margin <= 0.0)
        throw std::invalid_argument("train: margin must be positive");
}

std::vector<ScoredSnapshot> SnapshotSet::scored() const {
    std::vector<ScoredSnapshot> out;
    out.reserve(snapshots.size());
    for (const Snapshot& s : snapshots) out.push_back({&s.params, s.final_loss});
    return out;
}

bool early_stop_check(const std::vector<double>& history, double relative_delta,
                      std::uint32_t patience) {
    if (history.empty()) return false;
    double best = history.front();
    std::uint32_t stale = 0;
    for (std::size_t i = 1; i < history.size(); ++i) {
        double threshold = best + relative_delta * std::abs(best);
        if (history[i] > threshold) {
            stale = 0;
        } else {
            ++stale;
        }
        best = std::max(best, history[i]);
    }
    return stale >= patience;
}

namespace {

struct EpochOutcome {
    double mean_loss = 0.0;
    std::uint64_t optimizer_applications = 0;
};

// Cycle index (0-based) that `epoch` belongs to; warmup epochs map to no
// cycle, signalled by returning SIZE_MAX.
std::size_t cycle_of_epoch(const ScheduleConfig& sched, std::uint32_t epoch) {
    if (!is_cyclic(sched.kind)) return 0;
    if (epoch <= sched.warmup_epochs) return SIZE_MAX;
    std::size_t c = (epoch - sched.warmup_epochs - 1) / sched.cycle_length();
    return std::min<std::size_t>(c, sched.cycles - 1);
}

class SingleRun {
public:
    SingleRun(const TrainConfig& config, const Dataset& dataset, std::uint64_t seed)
        : config_(config),
          dataset_(dataset),
          membership_(dataset),
          params_(init_params(config.model, dataset.vocab.num_entities(),
                              dataset.vocab.num_relations(), config.dim, seed)),
          optimizer_(config.optimizer),
          rng_(seed * 0x9e3779b97f4a7c15ULL + 1) {}

    // Runs the full loop; fills `snapshots` (SnapE only) and the report.
    void run(std::vector<Snapshot>* snapshots, RunReport& report) {
        const bool snape = config_.mode == TrainMode::SnapE;
        std::vector<std::uint32_t> calendar =
            snape ? snapshot_calendar(config_.schedule) : std::vector<std::uint32_t>{};
        SamplerPolicy policy = config_.sampler;
        if (policy.kind == SamplerKind::Extended && policy.ramp.empty())
            policy.ramp = SamplerPolicy::default_ramp(config_.schedule.cycles);

        std::vector<double> validation_history;
        std::size_t active_cycle = SIZE_MAX - 1;  // force sampler build on first epoch
        CycleSampler sampler(policy, 0, nullptr, dataset_.vocab.num_entities(), &membership_);

        for (std::uint32_t epoch = 1; epoch <= config_.schedule.total_epochs; ++epoch) {
            std::size_t cycle = cycle_of_epoch(config_.schedule, epoch);
            if (cycle != active_cycle) {
                const ModelParams* latest =
                    (snapshots && !snapshots->empty()) ? &snapshots->back().params : nullptr;
                sampler = CycleSampler(policy, cycle == SIZE_MAX ? 0 : cycle, latest,
                                       dataset_.vocab.num_entities(), &membership_);
                active_cycle = cycle;
            }

            EpochOutcome outcome = run_epoch(epoch, sampler);
            report.epoch_mean_loss.push_back(outcome.mean_loss);
            report.optimizer_applications += outcome.optimizer_applications;
            report.epochs_run = epoch;

            if (snape && !calendar.empty() &&
                std::find(calendar.begin(), calendar.end(), epoch) != calendar.end()) {
                Snapshot snap;
                snap.params = params_;  // deep copy; later training must not alias it
                snap.final_loss = outcome.mean_loss;
                snap.cycle_index = static_cast<std::uint32_t>(cycle == SIZE_MAX ? 0 : cycle);
                snap.epoch = epoch;
                snapshots->push_back(std::move(snap));
            }

            if (!snape && config_.early_stop.enabled && !dataset_.valid.empty() &&
                epoch % config_.early_stop.eval_every == 0) {
                validation_history.push_back(validation_hits10());
                if (early_stop_check(validation_history, config_.early_stop.relative_delta,
                                     config_.early_stop.patience)) {
                    report.stopped_early = true;
                    break;
                }
            }
        }
    }

    ModelParams take_params() { return std::move(params_); }

private:
    EpochOutcome run_epoch(std::uint32_t epoch, const CycleSampler& sampler) {
        std::vector<std::size_t> order(dataset_.train.size());
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng_);

        EpochOutcome outcome;
        double total_loss = 0.0;
        std::size_t total_pairs = 0;
        const std::size_t n = order.size();
        const std::size_t bs = config_.batch_size;

        for (std::size_t begin = 0; begin < n; begin += bs) {
            std::size_t end = std::min(begin + bs, n);
            std::size_t pairs = end - begin;
            grads_.clear();
            double batch_loss = 0.0;

            for (std::size_t i = begin; i < end; ++i) {
                const Triple& pos = dataset_.train[order[i]];
                NegativeTriple neg = sampler.sample(pos, rng_);
                double pos_score = score(params_, pos);
                double neg_score = score(params_, neg.triple);

                if (config_.loss == LossKind::MarginRanking) {
                    MarginLossResult r = margin_ranking_loss(pos_score, neg_score, config_.margin);
                    batch_loss += r.loss;
                    if (r.d_pos != 0.0) score_grad(params_, pos, r.d_pos, grads_);
                    if (r.d_neg != 0.0) score_grad(params_, neg.triple, r.d_neg, grads_);
                } else {
                    SoftplusLossResult rp = softplus_loss(pos_score, +1);
                    SoftplusLossResult rn = softplus_loss(neg_score, -1);
                    batch_loss += 0.5 * (rp.loss + rn.loss);
                    score_grad(params_, pos, 0.5 * rp.d_score, grads_);
                    score_grad(params_, neg.triple, 0.5 * rn.d_score, grads_);
                }
            }

            if (!std::isfinite(batch_loss)) {
                throw std::runtime_error("non-finite training loss at epoch " +
                                         std::to_string(epoch) + ", batch " +
                                         std::to_string(begin / bs));
            }

            // Mean reduction over the batch.
            grads_.scale(1.0 / double(pairs));
            double lr = config_.per_batch_lr
                            ? lr_at_position(config_.schedule,
                                             double(epoch - 1) + double(begin) / double(n))
                            : lr_at(config_.schedule, epoch);
            optimizer_.step(params_, grads_, lr);
            if (config_.normalize_entities) renormalize_touched();

            total_loss += batch_loss;
            total_pairs += pairs;
            ++outcome.optimizer_applications;
        }

        outcome.mean_loss = total_pairs > 0 ? total_loss / double(total_pairs) : 0.0;
        return outcome;
    }

    void renormalize_touched() {
        for (const auto& [key, row] : grads_.rows()) {
            if (key.first != ParamMatrix::Entity) continue;
            auto r = params_.entity_row(key.second);
            double sq = 0.0;
            for (double v : r) sq += v * v;
            double norm = std::sqrt(sq);
            if (norm > 0.0)
                for (double& v : r) v /= norm;
        }
    }

    double validation_hits10() {
        RankPolicy policy;  // Filtered + Realistic defaults
        Metrics m = evaluate(model_scorer(params_), dataset_.valid, membership_, policy);
        return m.both.hits_at_10;
    }

    const TrainConfig& config_;
    const Dataset& dataset_;
    TripleMembership membership_;
    ModelParams params_;
    Optimizer optimizer_;
    Rng rng_;
    SparseGrad grads_;
};

}  // namespace

TrainResult train(const TrainConfig& config, const Dataset& dataset) {
    config.validate();
    if (dataset.train.empty()) throw std::invalid_argument("train: empty training split");

    auto start = std::chrono::steady_clock::now();
    TrainResult result;
    result.snapshots.schedule = config.schedule;

    if (config.mode == TrainMode::MBase) {
        // Independent low-dimensional models with distinct seeds; fixed
        // lr = 0.0003, Adam, random negatives.
        TrainConfig member = config;
        member.mode = TrainMode::Baseline;
        member.optimizer = OptimizerKind::Adam;
        member.sampler = SamplerPolicy{};  // random
        member.schedule.kind = ScheduleKind::Constant;
        member.schedule.alpha0 = 0.0003;
        member.schedule.cycles = 1;
        member.schedule.warmup_epochs = 0;
        member.early_stop.enabled = false;
        result.snapshots.schedule = member.schedule;

        for (std::uint32_t i = 0; i < config.mbase_models; ++i) {
            member.seed = config.seed + i;
            SingleRun run(member, dataset, member.seed);
            RunReport sub;
            run.run(nullptr, sub);
            result.report.optimizer_applications += sub.optimizer_applications;
            result.report.epochs_run = sub.epochs_run;
            if (result.report.epoch_mean_loss.empty()) {
                result.report.epoch_mean_loss = sub.epoch_mean_loss;
            } else {
                for (std::size_t e = 0; e < sub.epoch_mean_loss.size(); ++e)
                    result.report.epoch_mean_loss[e] += sub.epoch_mean_loss[e];
            }
            Snapshot snap;
            snap.final_loss = sub.epoch_mean_loss.back();
            snap.cycle_index = i;
            snap.epoch = sub.epochs_run;
            snap.params = run.take_params();
            result.snapshots.snapshots.push_back(std::move(snap));
        }
        for (double& v : result.report.epoch_mean_loss) v /= double(config.mbase_models);
    } else {
        SingleRun run(config, dataset, config.seed);
        if (config.mode == TrainMode::SnapE) {
            run.run(&result.snapshots.snapshots, result.report);
        } else {
            run.run(nullptr, result.report);
            Snapshot snap;
            snap.final_loss = result.report.epoch_mean_loss.back();
            snap.cycle_index = 0;
            snap.epoch = result.report.epochs_run;
            snap.params = run.take_params();
            result.snapshots.snapshots.push_back(std::move(snap));
        }
    }

    result.report.train_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

namespace {

constexpr char kMagic[4] = {'S', 'N', 'P', 'E'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_pod(std::istream& in, T& v, const std::string& path) {
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("truncated or corrupt snapshot file: " + path);
}

}  // namespace

void save_model_binary(const ModelParams& params, double final_loss, std::uint32_t cycle_index,
                       std::uint32_t epoch, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write snapshot file: " + path);
    out.write(kMagic, 4);
    write_pod(out, kVersion);
    std::uint8_t kind = static_cast<std::uint8_t>(params.kind);
    write_pod(out, kind);
    write_pod(out, params.dim);
    write_pod(out, params.seed);
    std::uint64_t ne = params.num_entities, nr = params.num_relations;
    write_pod(out, ne);
    write_pod(out, nr);
    write_pod(out, final_loss);
    write_pod(out, cycle_index);
    write_pod(out, epoch);
    out.write(reinterpret_cast<const char*>(params.entity_emb.data()),
              std::streamsize(params.entity_emb.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(params.relation_emb.data()),
              std::streamsize(params.relation_emb.size() * sizeof(double)));
    if (!out) throw std::runtime_error("write failure on snapshot file: " + path);
}

Snapshot load_model_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open snapshot file: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("not a snapshot file: " + path);
    std::uint32_t version;
    read_pod(in, version, path);
    if (version != kVersion)
        throw std::runtime_error("unsupported snapshot version " + std::to_string(version) +
                                 " in " + path);

    Snapshot snap;
    std::uint8_t kind;
    read_pod(in, kind, path);
    if (kind > 3) throw std::runtime_error("corrupt model kind in " + path);
    snap.params.kind = static_cast<ModelKind>(kind);
    read_pod(in, snap.params.dim, path);
    read_pod(in, snap.params.seed, path);
    std::uint64_t ne, nr;
    read_pod(in, ne, path);
    read_pod(in, nr, path);
    snap.params.num_entities = ne;
    snap.params.num_relations = nr;
    read_pod(in, snap.final_loss, path);
    read_pod(in, snap.cycle_index, path);
    read_pod(in, snap.epoch, path);

    snap.params.entity_emb.resize(ne * snap.params.entity_cols());
    snap.params.relation_emb.resize(nr * snap.params.relation_cols());
    in.read(reinterpret_cast<char*>(snap.params.entity_emb.data()),
            std::streamsize(snap.params.entity_emb.size() * sizeof(double)));
    in.read(reinterpret_cast<char*>(snap.params.relation_emb.data()),
            std::streamsize(snap.params.relation_emb.size() * sizeof(double)));
    if (!in) throw std::runtime_error("truncated or corrupt snapshot file: " + path);
    return snap;
}

void save_snapshots(const SnapshotSet& set, const std::string& directory) {
    fs::create_directories(directory);
    std::ofstream manifest(fs::path(directory) / "manifest.txt");
    if (!manifest) throw std::runtime_error("cannot write manifest in " + directory);
    char sched[256];
    std::snprintf(sched, sizeof(sched), "#schedule %s %.17g %.17g %u %u %u\n",
                  to_string(set.schedule.kind), set.schedule.alpha0, set.schedule.eta_min,
                  set.schedule.total_epochs, set.schedule.cycles, set.schedule.warmup_epochs);
    manifest << sched;
    for (std::size_t i = 0; i < set.snapshots.size(); ++i) {
        const Snapshot& s = set.snapshots[i];
        std::string name = "snapshot_" + std::to_string(i) + ".snpe";
        save_model_binary(s.params, s.final_loss, s.cycle_index, s.epoch,
                          (fs::path(directory) / name).string());
        char line[256];
        std::snprintf(line, sizeof(line), "%s %.17g %u %u\n", name.c_str(), s.final_loss,
                      s.cycle_index, s.epoch);
        manifest << line;
    }
}

SnapshotSet load_snapshots(const std::string& directory) {
    fs::path manifest_path = fs::path(directory) / "manifest.txt";
    std::ifstream manifest(manifest_path);
    if (!manifest) throw std::runtime_error("no manifest in " + directory);

    SnapshotSet set;
    std::string line;
    std::vector<std::string> files;
    while (std::getline(manifest, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        if (line.rfind("#schedule", 0) == 0) {
            std::string tag, kind;
            ss >> tag >> kind >> set.schedule.alpha0 >> set.schedule.eta_min >>
                set.schedule.total_epochs >> set.schedule.cycles >> set.schedule.warmup_epochs;
            set.schedule.kind = schedule_kind_from_string(kind);
            continue;
        }
        std::string name;
        ss >> name;
        if (name.empty()) throw std::runtime_error("malformed manifest line in " + directory);
        files.push_back(name);
    }

    // Verify all files exist before loading any model.
    for (const std::string& name : files) {
        if (!fs::exists(fs::path(directory) / name))
            throw std::runtime_error("manifest references missing snapshot file: " + name);
    }
    for (const std::string& name : files)
        set.snapshots.push_back(load_model_binary((fs::path(directory) / name).string()));
    return set;
}

}  // namespace snape
