#include "snape/loss.hpp"

#include <cmath>
#include <stdexcept>

namespace snape {

const char* to_string(LossKind kind) {
    return kind == LossKind::MarginRanking ? "MarginRanking" : "Softplus";
}

LossKind loss_kind_from_string(const std::string& s) {
    if (s == "MarginRanking") return LossKind::MarginRanking;
    if (s == "Softplus") return LossKind::Softplus;
    throw std::invalid_argument("unknown loss kind: " + s);
}

MarginLossResult margin_ranking_loss(double pos_score, double neg_score, double margin) {
    double loss = margin - pos_score + neg_score;
    if (loss > 0.0) return {loss, -1.0, 1.0};
    return {0.0, 0.0, 0.0};
}

SoftplusLossResult softplus_loss(double score, int label) {
    if (label != 1 && label != -1) throw std::invalid_argument("softplus label must be +1 or -1");
    double x = -double(label) * score;
    // ln(1+e^x) = max(x,0) + log1p(e^{-|x|})
    double loss = std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
    double sigma = 1.0 / (1.0 + std::exp(-x));  // sigma(-label*score)
    return {loss, -double(label) * sigma};
}

}  // namespace snape
