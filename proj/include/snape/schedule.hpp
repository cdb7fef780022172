#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace snape {

enum class ScheduleKind { Constant, CCA, MMCCLR, DeferredCCA, DeferredMMCCLR };

const char* to_string(ScheduleKind kind);
ScheduleKind schedule_kind_from_string(const std::string& s);

bool is_cyclic(ScheduleKind kind);
bool is_deferred(ScheduleKind kind);

struct ScheduleConfig {
    ScheduleKind kind = ScheduleKind::Constant;
    double alpha0 = 0.1;    // maximum learning rate
    double eta_min = 0.0;   // MMCCLR floor; ignored for CCA
    std::uint32_t total_epochs = 100;   // T
    std::uint32_t cycles = 1;           // C
    std::uint32_t warmup_epochs = 0;    // k, deferred variants only

    void validate() const;
    /// ceil((T-k)/C); the last cycle may be shorter (clipped to T).
    std::uint32_t cycle_length() const;
};

/// Learning rate for epoch t in [1..T]. Deferred variants return alpha0 for
/// t <= k and apply the cyclic formula to t-k otherwise.
double lr_at(const ScheduleConfig& config, std::uint32_t epoch);

/// Continuous-position variant for per-batch stepping: `position` is a
/// zero-based fractional epoch in [0, T). lr_at(cfg, t) equals
/// lr_at_position(cfg, t-1).
double lr_at_position(const ScheduleConfig& config, double position);

/// Epochs at which snapshots are stored: the last epoch of each cycle
/// (the per-cycle learning-rate minima). Constant schedules snapshot only at T.
std::vector<std::uint32_t> snapshot_calendar(const ScheduleConfig& config);

}  // namespace snape
