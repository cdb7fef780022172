#include "snape/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace snape {

const char* to_string(OptimizerKind kind) {
    switch (kind) {
        case OptimizerKind::SGD: return "SGD";
        case OptimizerKind::AdaGrad: return "AdaGrad";
        case OptimizerKind::Adam: return "Adam";
    }
    return "?";
}

OptimizerKind optimizer_kind_from_string(const std::string& s) {
    if (s == "SGD") return OptimizerKind::SGD;
    if (s == "AdaGrad" || s == "Adagrad") return OptimizerKind::AdaGrad;
    if (s == "Adam") return OptimizerKind::Adam;
    throw std::invalid_argument("unknown optimizer: " + s);
}

void Optimizer::step(ModelParams& params, const SparseGrad& grads, double lr) {
    if (lr < 0.0) throw std::invalid_argument("negative learning rate");
    ++step_;

    for (const auto& [key, g] : grads.rows()) {
        for (double v : g) {
            if (!std::isfinite(v)) {
                throw std::runtime_error(
                    std::string("non-finite gradient in ") +
                    (key.first == ParamMatrix::Entity ? "entity" : "relation") + " row " +
                    std::to_string(key.second));
            }
        }
        std::span<double> row = key.first == ParamMatrix::Entity
                                    ? params.entity_row(key.second)
                                    : params.relation_row(key.second);
        if (row.size() != g.size()) throw std::runtime_error("gradient/parameter size mismatch");

        switch (kind_) {
            case OptimizerKind::SGD: {
                for (std::size_t i = 0; i < row.size(); ++i) row[i] -= lr * g[i];
                break;
            }
            case OptimizerKind::AdaGrad: {
                auto& acc = accum_[key];
                if (acc.empty()) acc.assign(g.size(), 0.0);
                for (std::size_t i = 0; i < row.size(); ++i) {
                    acc[i] += g[i] * g[i];
                    row[i] -= lr * g[i] / (std::sqrt(acc[i]) + kAdaGradEps);
                }
                break;
            }
            case OptimizerKind::Adam: {
                auto& m = moment1_[key];
                auto& v = accum_[key];
                if (m.empty()) m.assign(g.size(), 0.0);
                if (v.empty()) v.assign(g.size(), 0.0);
                double bc1 = 1.0 - std::pow(kBeta1, double(step_));
                double bc2 = 1.0 - std::pow(kBeta2, double(step_));
                for (std::size_t i = 0; i < row.size(); ++i) {
                    m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * g[i];
                    v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * g[i] * g[i];
                    double mhat = m[i] / bc1;
                    double vhat = v[i] / bc2;
                    row[i] -= lr * mhat / (std::sqrt(vhat) + kAdamEps);
                }
                break;
            }
        }
    }
}

}  // namespace snape
