#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "snape/model.hpp"

namespace snape {

enum class CombinerKind { SimpleAverage, LossWeighted, DescendingWeights, Borda };

const char* to_string(CombinerKind kind);
CombinerKind combiner_kind_from_string(const std::string& s);

struct EnsembleConfig {
    std::size_t num_models = 2;  // M most-recent snapshots
    CombinerKind combiner = CombinerKind::LossWeighted;
};

/// (s - min) / (max - min); a constant vector maps to all 0.5.
std::vector<double> minmax_normalize(const std::vector<double>& scores);

/// w_i = max(L) + min(L) - L_i, normalized to sum 1.
std::vector<double> loss_weights(const std::vector<double>& losses);

/// Linear weights M..1 from newest to oldest, normalized to sum 1.
/// weights[0] belongs to the newest snapshot.
std::vector<double> descending_weights(std::size_t num_models);

/// Min-max normalizes each vector, then forms the weighted elementwise sum.
std::vector<double> combine_scores(const std::vector<std::vector<double>>& score_vectors,
                                   const std::vector<double>& weights);

/// Borda count: a candidate at 1-indexed position p in a ranking of N earns
/// N - p points. Output is ordered by descending points; ties break by better
/// best-rank, then by lower candidate id. Inputs must be permutations of 0..N-1.
std::vector<std::uint32_t> borda_aggregate(
    const std::vector<std::vector<std::uint32_t>>& rankings);

/// Snapshot scorer bundle used by ensemble_score_all: parameters plus the
/// snapshot's final training loss, ordered oldest to newest.
struct ScoredSnapshot {
    const ModelParams* params;
    double final_loss;
};

/// Combined score vector over all entities for one (h,r,?) / (?,r,t) query,
/// using the last config.num_models snapshots. For Borda the returned values
/// are Borda points with a fractional tie-break component, so their ordering
/// equals the Borda order.
std::vector<double> ensemble_score_all(const std::vector<ScoredSnapshot>& snapshots,
                                       const EnsembleConfig& config, QuerySide side,
                                       EntityId fixed_entity, RelationId relation);

/// Weights over the last M snapshots (newest-weight-first order is converted
/// to snapshot order oldest..newest). Borda has no weights.
std::vector<double> combiner_weights(const std::vector<ScoredSnapshot>& last_snapshots,
                                     CombinerKind combiner);

}  // namespace snape
