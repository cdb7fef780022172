#pragma once

#include <functional>
#include <string>
#include <unordered_set>
#include <vector>

#include "snape/ensemble.hpp"
#include "snape/kg.hpp"
#include "snape/model.hpp"

namespace snape {

enum class FilterMode { Raw, Filtered };
enum class TieRule { Optimistic, Pessimistic, Realistic };

const char* to_string(FilterMode mode);
const char* to_string(TieRule rule);
FilterMode filter_mode_from_string(const std::string& s);
TieRule tie_rule_from_string(const std::string& s);

struct RankPolicy {
    FilterMode filtering = FilterMode::Filtered;
    TieRule tie_rule = TieRule::Realistic;
};

struct SideMetrics {
    double hits_at_1 = 0.0;
    double hits_at_10 = 0.0;
    double mrr = 0.0;
};

struct Metrics {
    SideMetrics head;  // (?,r,t) queries
    SideMetrics tail;  // (h,r,?) queries
    SideMetrics both;  // averaged over all head+tail queries
    std::size_t query_count = 0;  // total ranked queries (2 per test triple)
    RankPolicy policy;
};

struct CorrelationReport {
    /// corr[i][j] = Pearson correlation of snapshot i and j probe scores.
    std::vector<std::vector<double>> pairwise;
    double average = 0.0;  // over distinct defined pairs
    std::size_t undefined_pairs = 0;  // excluded constant-score pairs
};

/// Scores every entity for one partial query; entry i is the score of entity
/// i in the open slot.
using ScoreFn =
    std::function<std::vector<double>(QuerySide side, EntityId fixed, RelationId relation)>;

ScoreFn model_scorer(const ModelParams& params);
ScoreFn ensemble_scorer(const std::vector<ScoredSnapshot>& snapshots,
                        const EnsembleConfig& config);

/// Rank of `true_entity` among all entities minus `excluded`. Optimistic
/// counts only strictly better competitors; Pessimistic also counts ties;
/// Realistic is their mean.
double rank_of(const std::vector<double>& scores, EntityId true_entity,
               const std::unordered_set<EntityId>& excluded, TieRule tie_rule);

/// Per-triple rank list in evaluation order: tail query then head query for
/// each test triple. Filtered mode excludes other known positives.
std::vector<double> ranks_of(const ScoreFn& scorer, const std::vector<Triple>& test,
                             const TripleMembership& membership, const RankPolicy& policy);

Metrics evaluate(const ScoreFn& scorer, const std::vector<Triple>& test,
                 const TripleMembership& membership, const RankPolicy& policy);

/// Pairwise Pearson correlation of per-triple scores across snapshots.
CorrelationReport score_correlations(const std::vector<ScoredSnapshot>& snapshots,
                                     const std::vector<Triple>& probes);

}  // namespace snape
