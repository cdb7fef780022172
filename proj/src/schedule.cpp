#include "snape/schedule.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace snape {

const char* to_string(ScheduleKind kind) {
    switch (kind) {
        case ScheduleKind::Constant: return "Constant";
        case ScheduleKind::CCA: return "CCA";
        case ScheduleKind::MMCCLR: return "MMCCLR";
        case ScheduleKind::DeferredCCA: return "DeferredCCA";
        case ScheduleKind::DeferredMMCCLR: return "DeferredMMCCLR";
    }
    return "?";
}

ScheduleKind schedule_kind_from_string(const std::string& s) {
    if (s == "Constant") return ScheduleKind::Constant;
    if (s == "CCA") return ScheduleKind::CCA;
    if (s == "MMCCLR") return ScheduleKind::MMCCLR;
    if (s == "DeferredCCA") return ScheduleKind::DeferredCCA;
    if (s == "DeferredMMCCLR") return ScheduleKind::DeferredMMCCLR;
    throw std::invalid_argument("unknown schedule kind: " + s);
}

bool is_cyclic(ScheduleKind kind) { return kind != ScheduleKind::Constant; }

bool is_deferred(ScheduleKind kind) {
    return kind == ScheduleKind::DeferredCCA || kind == ScheduleKind::DeferredMMCCLR;
}

void ScheduleConfig::validate() const {
    if (cycles < 1) throw std::invalid_argument("schedule: cycles must be >= 1");
    if (total_epochs < cycles) throw std::invalid_argument("schedule: T must be >= C");
    if (alpha0 <= 0.0) throw std::invalid_argument("schedule: alpha0 must be positive");
    if (eta_min < 0.0 || eta_min >= alpha0)
        throw std::invalid_argument("schedule: requires 0 <= eta_min < alpha0");
    if (warmup_epochs >= total_epochs)
        throw std::invalid_argument("schedule: warmup must be < T");
    if (is_deferred(kind)) {
        if (total_epochs - warmup_epochs < cycles)
            throw std::invalid_argument("schedule: T - k must be >= C");
    } else if (warmup_epochs != 0) {
        throw std::invalid_argument("schedule: warmup only valid for deferred kinds");
    }
}

std::uint32_t ScheduleConfig::cycle_length() const {
    std::uint32_t span = total_epochs - warmup_epochs;
    return (span + cycles - 1) / cycles;
}

namespace {

// Cosine half-wave from `hi` down toward `lo` over a cycle of length L,
// evaluated at within-schedule position t0 in [0 .. span-1].
double cosine_cycle(double hi, double lo, std::uint32_t t0, std::uint32_t cycle_len) {
    std::uint32_t pos = t0 % cycle_len;
    double c = std::cos(std::numbers::pi * double(pos) / double(cycle_len));
    return lo + 0.5 * (hi - lo) * (c + 1.0);
}

}  // namespace

double lr_at(const ScheduleConfig& config, std::uint32_t epoch) {
    config.validate();
    if (epoch < 1 || epoch > config.total_epochs)
        throw std::out_of_range("lr_at: epoch " + std::to_string(epoch) + " outside [1.." +
                                std::to_string(config.total_epochs) + "]");

    switch (config.kind) {
        case ScheduleKind::Constant:
            return config.alpha0;
        case ScheduleKind::CCA:
            return cosine_cycle(config.alpha0, 0.0, epoch - 1, config.cycle_length());
        case ScheduleKind::MMCCLR:
            return cosine_cycle(config.alpha0, config.eta_min, epoch - 1, config.cycle_length());
        case ScheduleKind::DeferredCCA:
            if (epoch <= config.warmup_epochs) return config.alpha0;
            return cosine_cycle(config.alpha0, 0.0, epoch - config.warmup_epochs - 1,
                                config.cycle_length());
        case ScheduleKind::DeferredMMCCLR:
            if (epoch <= config.warmup_epochs) return config.alpha0;
            return cosine_cycle(config.alpha0, config.eta_min,
                                epoch - config.warmup_epochs - 1, config.cycle_length());
    }
    return config.alpha0;
}

double lr_at_position(const ScheduleConfig& config, double position) {
    config.validate();
    if (position < 0.0 || position >= double(config.total_epochs))
        throw std::out_of_range("lr_at_position: position outside [0, T)");
    if (config.kind == ScheduleKind::Constant) return config.alpha0;
    if (is_deferred(config.kind) && position < double(config.warmup_epochs)) return config.alpha0;

    double lo = (config.kind == ScheduleKind::MMCCLR || config.kind == ScheduleKind::DeferredMMCCLR)
                    ? config.eta_min
                    : 0.0;
    double len = double(config.cycle_length());
    double pos = std::fmod(position - double(config.warmup_epochs), len);
    double c = std::cos(std::numbers::pi * pos / len);
    return lo + 0.5 * (config.alpha0 - lo) * (c + 1.0);
}

std::vector<std::uint32_t> snapshot_calendar(const ScheduleConfig& config) {
    config.validate();
    if (!is_cyclic(config.kind)) return {config.total_epochs};

    std::vector<std::uint32_t> epochs;
    std::uint32_t len = config.cycle_length();
    for (std::uint32_t i = 1; i <= config.cycles; ++i) {
        std::uint32_t e = config.warmup_epochs + i * len;
        epochs.push_back(std::min(e, config.total_epochs));
    }
    return epochs;
}

}  // namespace snape
