#include "snape/evaluate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace snape {

const char* to_string(FilterMode mode) { return mode == FilterMode::Raw ? "Raw" : "Filtered"; }

const char* to_string(TieRule rule) {
    switch (rule) {
        case TieRule::Optimistic: return "Optimistic";
        case TieRule::Pessimistic: return "Pessimistic";
        case TieRule::Realistic: return "Realistic";
    }
    return "?";
}

FilterMode filter_mode_from_string(const std::string& s) {
    if (s == "Raw") return FilterMode::Raw;
    if (s == "Filtered") return FilterMode::Filtered;
    throw std::invalid_argument("unknown filter mode: " + s);
}

TieRule tie_rule_from_string(const std::string& s) {
    if (s == "Optimistic") return TieRule::Optimistic;
    if (s == "Pessimistic") return TieRule::Pessimistic;
    if (s == "Realistic") return TieRule::Realistic;
    throw std::invalid_argument("unknown tie rule: " + s);
}

ScoreFn model_scorer(const ModelParams& params) {
    return [&params](QuerySide side, EntityId fixed, RelationId relation) {
        return score_all(params, side, fixed, relation);
    };
}

ScoreFn ensemble_scorer(const std::vector<ScoredSnapshot>& snapshots,
                        const EnsembleConfig& config) {
    return [snapshots, config](QuerySide side, EntityId fixed, RelationId relation) {
        return ensemble_score_all(snapshots, config, side, fixed, relation);
    };
}

double rank_of(const std::vector<double>& scores, EntityId true_entity,
               const std::unordered_set<EntityId>& excluded, TieRule tie_rule) {
    if (true_entity >= scores.size()) throw std::out_of_range("rank_of: true entity out of range");
    if (excluded.count(true_entity)) throw std::invalid_argument("rank_of: true entity excluded");

    double target = scores[true_entity];
    std::size_t better = 0, tied = 0;
    for (EntityId e = 0; e < scores.size(); ++e) {
        if (e == true_entity || excluded.count(e)) continue;
        if (scores[e] > target) ++better;
        else if (scores[e] == target) ++tied;
    }
    double optimistic = double(better) + 1.0;
    double pessimistic = optimistic + double(tied);
    switch (tie_rule) {
        case TieRule::Optimistic: return optimistic;
        case TieRule::Pessimistic: return pessimistic;
        case TieRule::Realistic: return 0.5 * (optimistic + pessimistic);
    }
    return optimistic;
}

namespace {

std::unordered_set<EntityId> filtered_exclusions(const std::vector<EntityId>& known,
                                                 EntityId true_entity) {
    std::unordered_set<EntityId> out;
    for (EntityId e : known)
        if (e != true_entity) out.insert(e);
    return out;
}

SideMetrics metrics_from_ranks(const std::vector<double>& ranks) {
    SideMetrics m;
    for (double r : ranks) {
        if (r <= 1.0) m.hits_at_1 += 1.0;
        if (r <= 10.0) m.hits_at_10 += 1.0;
        m.mrr += 1.0 / r;
    }
    double n = double(ranks.size());
    m.hits_at_1 /= n;
    m.hits_at_10 /= n;
    m.mrr /= n;
    return m;
}

}  // namespace

std::vector<double> ranks_of(const ScoreFn& scorer, const std::vector<Triple>& test,
                             const TripleMembership& membership, const RankPolicy& policy) {
    std::vector<double> ranks;
    ranks.reserve(2 * test.size());
    const std::unordered_set<EntityId> none;
    for (const Triple& t : test) {
        {
            std::vector<double> s = scorer(QuerySide::Tail, t.head, t.relation);
            auto excl = policy.filtering == FilterMode::Filtered
                            ? filtered_exclusions(membership.tails_of(t.head, t.relation), t.tail)
                            : none;
            ranks.push_back(rank_of(s, t.tail, excl, policy.tie_rule));
        }
        {
            std::vector<double> s = scorer(QuerySide::Head, t.tail, t.relation);
            auto excl = policy.filtering == FilterMode::Filtered
                            ? filtered_exclusions(membership.heads_of(t.relation, t.tail), t.head)
                            : none;
            ranks.push_back(rank_of(s, t.head, excl, policy.tie_rule));
        }
    }
    return ranks;
}

Metrics evaluate(const ScoreFn& scorer, const std::vector<Triple>& test,
                 const TripleMembership& membership, const RankPolicy& policy) {
    if (test.empty()) throw std::invalid_argument("evaluate: empty test set");
    std::vector<double> all = ranks_of(scorer, test, membership, policy);

    std::vector<double> tail_ranks, head_ranks;
    tail_ranks.reserve(test.size());
    head_ranks.reserve(test.size());
    for (std::size_t i = 0; i < all.size(); i += 2) {
        tail_ranks.push_back(all[i]);
        head_ranks.push_back(all[i + 1]);
    }

    Metrics m;
    m.policy = policy;
    m.query_count = all.size();
    m.tail = metrics_from_ranks(tail_ranks);
    m.head = metrics_from_ranks(head_ranks);
    m.both = metrics_from_ranks(all);
    return m;
}

CorrelationReport score_correlations(const std::vector<ScoredSnapshot>& snapshots,
                                     const std::vector<Triple>& probes) {
    if (snapshots.size() < 2)
        throw std::invalid_argument("score_correlations: need at least 2 snapshots");
    if (probes.size() < 2)
        throw std::invalid_argument("score_correlations: need at least 2 probe triples");

    std::size_t m = snapshots.size();
    std::vector<std::vector<double>> s(m);
    for (std::size_t i = 0; i < m; ++i) {
        s[i].reserve(probes.size());
        for (const Triple& t : probes) s[i].push_back(score(*snapshots[i].params, t));
    }

    auto mean = [](const std::vector<double>& v) {
        double sum = 0.0;
        for (double x : v) sum += x;
        return sum / double(v.size());
    };

    CorrelationReport report;
    report.pairwise.assign(m, std::vector<double>(m, 1.0));
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < m; ++i) {
        double mi = mean(s[i]);
        for (std::size_t j = i + 1; j < m; ++j) {
            double mj = mean(s[j]);
            double cov = 0.0, vi = 0.0, vj = 0.0;
            for (std::size_t k = 0; k < probes.size(); ++k) {
                double a = s[i][k] - mi, b = s[j][k] - mj;
                cov += a * b;
                vi += a * a;
                vj += b * b;
            }
            if (vi == 0.0 || vj == 0.0) {
                report.pairwise[i][j] = report.pairwise[j][i] =
                    std::numeric_limits<double>::quiet_NaN();
                ++report.undefined_pairs;
                continue;
            }
            double corr = cov / std::sqrt(vi * vj);
            report.pairwise[i][j] = report.pairwise[j][i] = corr;
            total += corr;
            ++pairs;
        }
    }
    report.average = pairs > 0 ? total / double(pairs) : 0.0;
    return report;
}

}  // namespace snape
