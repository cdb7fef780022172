#pragma once

#include <optional>
#include <random>
#include <vector>

#include "snape/kg.hpp"
#include "snape/model.hpp"

namespace snape {

enum class SamplerKind { Random, Extended };

struct SamplerPolicy {
    SamplerKind kind = SamplerKind::Random;
    /// First cycle index allowed to draw snapshot-driven negatives. Cycle 0
    /// never can (no snapshot exists yet), so the default is 1.
    std::size_t extended_start_cycle = 1;
    /// Per-cycle fraction of positives that receive a snapshot-driven hard
    /// negative; empty means the default linear ramp (0 until the first
    /// snapshot exists, rising to 1 at the last cycle).
    std::vector<double> ramp;
    /// Entities scored per hard-negative query; pool >= |E| means exhaustive.
    std::size_t candidate_pool = 512;
    /// Strict filtering: also exclude corruptions that are known positives in
    /// the membership index. Off by default; plain corruption filtering only
    /// excludes the source triple itself.
    bool filter_known_positives = false;

    static std::vector<double> default_ramp(std::size_t cycles);
};

enum class CorruptedSlot { Head, Tail };

struct NegativeTriple {
    Triple triple;
    CorruptedSlot slot;
};

using Rng = std::mt19937_64;

/// Uniform slot choice (p = 0.5 head/tail), replacement uniform over entities
/// excluding the original slot value.
NegativeTriple random_corrupt(const Triple& triple, std::size_t num_entities, Rng& rng);

/// Highest-scoring corruption of `slot` under `snapshot`, over a candidate
/// pool drawn uniformly without replacement when smaller than |E|. The
/// positive triple itself is always excluded; when `membership` is non-null,
/// corruptions that are known positives are excluded as well. Ties break
/// toward the lowest entity id. Degenerate pools fall back to random
/// corruption.
NegativeTriple hard_negative(const ModelParams& snapshot, const Triple& triple,
                             CorruptedSlot slot, const TripleMembership* membership,
                             std::size_t candidate_pool, Rng& rng);

/// Per-positive negative sampler for one training cycle: mixes hard negatives
/// from the latest snapshot with random corruptions at the cycle's ramp rate.
class CycleSampler {
public:
    CycleSampler(const SamplerPolicy& policy, std::size_t cycle_index,
                 const ModelParams* latest_snapshot, std::size_t num_entities,
                 const TripleMembership* membership = nullptr);

    NegativeTriple sample(const Triple& positive, Rng& rng) const;
    double hard_fraction() const { return hard_fraction_; }

private:
    const ModelParams* snapshot_;
    std::size_t num_entities_;
    std::size_t candidate_pool_;
    const TripleMembership* membership_;
    double hard_fraction_;
};

}  // namespace snape
