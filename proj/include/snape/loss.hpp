#pragma once

#include <string>

namespace snape {

enum class LossKind { MarginRanking, Softplus };

const char* to_string(LossKind kind);
LossKind loss_kind_from_string(const std::string& s);

struct MarginLossResult {
    double loss;
    double d_pos;  // dL/d(pos_score)
    double d_neg;  // dL/d(neg_score)
};

/// Hinge: max(0, margin - pos + neg). Gradients are zero when the hinge is
/// inactive, including at loss == 0 exactly.
MarginLossResult margin_ranking_loss(double pos_score, double neg_score, double margin);

struct SoftplusLossResult {
    double loss;
    double d_score;
};

/// ln(1 + exp(-label*score)) in the overflow-safe form; label is +1 or -1.
SoftplusLossResult softplus_loss(double score, int label);

}  // namespace snape
