#include "snape/sampling.hpp"

#include <algorithm>
#include <stdexcept>

namespace snape {

std::vector<double> SamplerPolicy::default_ramp(std::size_t cycles) {
    // Cycle 0 has no snapshot; the first post-snapshot cycle starts at 0 and
    // the ramp rises linearly to 1 at the final cycle.
    std::vector<double> ramp(cycles, 0.0);
    if (cycles >= 2) {
        if (cycles == 2) {
            ramp[1] = 1.0;
        } else {
            for (std::size_t i = 1; i < cycles; ++i)
                ramp[i] = double(i - 1) / double(cycles - 2);
        }
    }
    return ramp;
}

NegativeTriple random_corrupt(const Triple& triple, std::size_t num_entities, Rng& rng) {
    if (num_entities < 2)
        throw std::invalid_argument("random_corrupt: need at least 2 entities");

    CorruptedSlot slot =
        std::uniform_int_distribution<int>(0, 1)(rng) == 0 ? CorruptedSlot::Head
                                                           : CorruptedSlot::Tail;
    EntityId original = slot == CorruptedSlot::Head ? triple.head : triple.tail;
    // Uniform over entities excluding the original: draw from |E|-1 and shift.
    EntityId draw = std::uniform_int_distribution<EntityId>(
        0, static_cast<EntityId>(num_entities - 2))(rng);
    EntityId replacement = draw >= original ? draw + 1 : draw;

    Triple corrupted = triple;
    (slot == CorruptedSlot::Head ? corrupted.head : corrupted.tail) = replacement;
    return {corrupted, slot};
}

NegativeTriple hard_negative(const ModelParams& snapshot, const Triple& triple,
                             CorruptedSlot slot, const TripleMembership* membership,
                             std::size_t candidate_pool, Rng& rng) {
    const std::size_t n = snapshot.num_entities;
    EntityId original = slot == CorruptedSlot::Head ? triple.head : triple.tail;

    std::vector<EntityId> pool;
    if (candidate_pool >= n) {
        pool.resize(n);
        for (std::size_t i = 0; i < n; ++i) pool[i] = static_cast<EntityId>(i);
    } else {
        // Partial Fisher-Yates draw of candidate_pool entities without replacement.
        std::vector<EntityId> ids(n);
        for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<EntityId>(i);
        for (std::size_t i = 0; i < candidate_pool; ++i) {
            std::size_t j = std::uniform_int_distribution<std::size_t>(i, n - 1)(rng);
            std::swap(ids[i], ids[j]);
        }
        ids.resize(candidate_pool);
        std::sort(ids.begin(), ids.end());  // lowest-id tie break independent of draw order
        pool = std::move(ids);
    }

    bool found = false;
    EntityId best = 0;
    double best_score = 0.0;
    Triple candidate = triple;
    for (EntityId e : pool) {
        if (e == original) continue;
        (slot == CorruptedSlot::Head ? candidate.head : candidate.tail) = e;
        if (membership != nullptr && membership->contains(candidate)) continue;
        double s = score(snapshot, candidate);
        if (!found || s > best_score) {
            found = true;
            best = e;
            best_score = s;
        }
    }
    if (!found) return random_corrupt(triple, n, rng);

    Triple corrupted = triple;
    (slot == CorruptedSlot::Head ? corrupted.head : corrupted.tail) = best;
    return {corrupted, slot};
}

CycleSampler::CycleSampler(const SamplerPolicy& policy, std::size_t cycle_index,
                           const ModelParams* latest_snapshot, std::size_t num_entities,
                           const TripleMembership* membership)
    : snapshot_(latest_snapshot),
      num_entities_(num_entities),
      candidate_pool_(policy.candidate_pool),
      membership_(policy.filter_known_positives ? membership : nullptr) {
    double f = 0.0;
    if (policy.kind == SamplerKind::Extended && latest_snapshot != nullptr &&
        cycle_index >= policy.extended_start_cycle && cycle_index < policy.ramp.size()) {
        f = std::clamp(policy.ramp[cycle_index], 0.0, 1.0);
    }
    hard_fraction_ = f;
}

NegativeTriple CycleSampler::sample(const Triple& positive, Rng& rng) const {
    bool use_hard = false;
    if (hard_fraction_ > 0.0) {
        use_hard = hard_fraction_ >= 1.0 ||
                   std::uniform_real_distribution<double>(0.0, 1.0)(rng) < hard_fraction_;
    }
    if (!use_hard) return random_corrupt(positive, num_entities_, rng);

    CorruptedSlot slot =
        std::uniform_int_distribution<int>(0, 1)(rng) == 0 ? CorruptedSlot::Head
                                                           : CorruptedSlot::Tail;
    return hard_negative(*snapshot_, positive, slot, membership_, candidate_pool_, rng);
}

}  // namespace snape
