#include "snape/ensemble.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace snape {

const char* to_string(CombinerKind kind) {
    switch (kind) {
        case CombinerKind::SimpleAverage: return "SimpleAverage";
        case CombinerKind::LossWeighted: return "LossWeighted";
        case CombinerKind::DescendingWeights: return "DescendingWeights";
        case CombinerKind::Borda: return "Borda";
    }
    return "?";
}

CombinerKind combiner_kind_from_string(const std::string& s) {
    if (s == "SimpleAverage") return CombinerKind::SimpleAverage;
    if (s == "LossWeighted") return CombinerKind::LossWeighted;
    if (s == "DescendingWeights") return CombinerKind::DescendingWeights;
    if (s == "Borda") return CombinerKind::Borda;
    throw std::invalid_argument("unknown combiner: " + s);
}

std::vector<double> minmax_normalize(const std::vector<double>& scores) {
    if (scores.empty()) return {};
    auto [lo_it, hi_it] = std::minmax_element(scores.begin(), scores.end());
    double lo = *lo_it, hi = *hi_it;
    std::vector<double> out(scores.size());
    if (hi == lo) {
        std::fill(out.begin(), out.end(), 0.5);
    } else {
        for (std::size_t i = 0; i < scores.size(); ++i) out[i] = (scores[i] - lo) / (hi - lo);
    }
    return out;
}

namespace {

std::vector<double> normalized(std::vector<double> w) {
    double sum = std::accumulate(w.begin(), w.end(), 0.0);
    if (sum <= 0.0) throw std::invalid_argument("weights must have positive sum");
    for (double& v : w) v /= sum;
    return w;
}

}  // namespace

std::vector<double> loss_weights(const std::vector<double>& losses) {
    if (losses.empty()) throw std::invalid_argument("loss_weights: no losses");
    double lo = *std::min_element(losses.begin(), losses.end());
    double hi = *std::max_element(losses.begin(), losses.end());
    std::vector<double> w(losses.size());
    for (std::size_t i = 0; i < losses.size(); ++i) w[i] = hi + lo - losses[i];
    double sum = std::accumulate(w.begin(), w.end(), 0.0);
    if (sum <= 0.0) {
        // All raw weights can only be non-positive if losses are degenerate;
        // fall back to uniform.
        std::fill(w.begin(), w.end(), 1.0 / double(w.size()));
        return w;
    }
    for (double& v : w) v /= sum;
    return w;
}

std::vector<double> descending_weights(std::size_t num_models) {
    if (num_models == 0) throw std::invalid_argument("descending_weights: M must be >= 1");
    std::vector<double> w(num_models);
    for (std::size_t i = 0; i < num_models; ++i) w[i] = double(num_models - i);
    return normalized(std::move(w));
}

std::vector<double> combine_scores(const std::vector<std::vector<double>>& score_vectors,
                                   const std::vector<double>& weights) {
    if (score_vectors.empty()) throw std::invalid_argument("combine_scores: no score vectors");
    if (score_vectors.size() != weights.size())
        throw std::invalid_argument("combine_scores: weights/vectors count mismatch");
    std::size_t n = score_vectors.front().size();
    std::vector<double> out(n, 0.0);
    for (std::size_t m = 0; m < score_vectors.size(); ++m) {
        if (score_vectors[m].size() != n)
            throw std::invalid_argument("combine_scores: vector length mismatch");
        std::vector<double> norm = minmax_normalize(score_vectors[m]);
        for (std::size_t i = 0; i < n; ++i) out[i] += weights[m] * norm[i];
    }
    return out;
}

namespace {

struct BordaTally {
    std::uint64_t points = 0;
    std::size_t best_rank = SIZE_MAX;  // 1-indexed, lower is better
};

std::vector<BordaTally> borda_tally(const std::vector<std::vector<std::uint32_t>>& rankings) {
    if (rankings.empty()) throw std::invalid_argument("borda: no rankings");
    std::size_t n = rankings.front().size();
    std::vector<BordaTally> tally(n);
    for (const auto& ranking : rankings) {
        if (ranking.size() != n) throw std::invalid_argument("borda: ranking size mismatch");
        std::vector<bool> seen(n, false);
        for (std::size_t pos = 0; pos < n; ++pos) {
            std::uint32_t c = ranking[pos];
            if (c >= n || seen[c]) throw std::invalid_argument("borda: input is not a permutation");
            seen[c] = true;
            tally[c].points += n - (pos + 1);
            tally[c].best_rank = std::min(tally[c].best_rank, pos + 1);
        }
    }
    return tally;
}

}  // namespace

std::vector<std::uint32_t> borda_aggregate(
    const std::vector<std::vector<std::uint32_t>>& rankings) {
    auto tally = borda_tally(rankings);
    std::vector<std::uint32_t> order(tally.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (tally[a].points != tally[b].points) return tally[a].points > tally[b].points;
        if (tally[a].best_rank != tally[b].best_rank)
            return tally[a].best_rank < tally[b].best_rank;
        return a < b;
    });
    return order;
}

std::vector<double> combiner_weights(const std::vector<ScoredSnapshot>& last_snapshots,
                                     CombinerKind combiner) {
    std::size_t m = last_snapshots.size();
    switch (combiner) {
        case CombinerKind::SimpleAverage:
            return std::vector<double>(m, 1.0 / double(m));
        case CombinerKind::LossWeighted: {
            std::vector<double> losses(m);
            for (std::size_t i = 0; i < m; ++i) losses[i] = last_snapshots[i].final_loss;
            return loss_weights(losses);
        }
        case CombinerKind::DescendingWeights: {
            // descending_weights is newest-first; snapshots are oldest..newest.
            std::vector<double> w = descending_weights(m);
            std::reverse(w.begin(), w.end());
            return w;
        }
        case CombinerKind::Borda:
            throw std::invalid_argument("Borda combiner has no score weights");
    }
    throw std::invalid_argument("unknown combiner");
}

std::vector<double> ensemble_score_all(const std::vector<ScoredSnapshot>& snapshots,
                                       const EnsembleConfig& config, QuerySide side,
                                       EntityId fixed_entity, RelationId relation) {
    if (config.num_models == 0 || config.num_models > snapshots.size())
        throw std::invalid_argument("ensemble: M must be in [1, #snapshots]");
    std::vector<ScoredSnapshot> last(snapshots.end() - config.num_models, snapshots.end());

    std::vector<std::vector<double>> vectors;
    vectors.reserve(last.size());
    for (const ScoredSnapshot& s : last)
        vectors.push_back(score_all(*s.params, side, fixed_entity, relation));

    if (config.combiner != CombinerKind::Borda)
        return combine_scores(vectors, combiner_weights(last, config.combiner));

    // Rank each snapshot's scores (descending, ties by lower id), tally Borda
    // points, and emit points plus a sub-unit tie-break term so a plain
    // sort-by-score reproduces the aggregate order.
    std::size_t n = vectors.front().size();
    std::vector<std::vector<std::uint32_t>> rankings;
    rankings.reserve(vectors.size());
    for (const auto& v : vectors) {
        std::vector<std::uint32_t> order(n);
        std::iota(order.begin(), order.end(), 0u);
        std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            if (v[a] != v[b]) return v[a] > v[b];
            return a < b;
        });
        rankings.push_back(std::move(order));
    }
    auto tally = borda_tally(rankings);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double best_rank_term = double(n - tally[i].best_rank) / double(n + 1);
        double id_term = double(n - i) / (double(n + 1) * double(n + 1));
        out[i] = double(tally[i].points) + (best_rank_term + id_term) / 2.0;
    }
    return out;
}

}  // namespace snape
