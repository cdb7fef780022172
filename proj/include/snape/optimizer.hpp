#pragma once

#include <string>
#include <unordered_map>

#include "snape/model.hpp"

namespace snape {

enum class OptimizerKind { SGD, AdaGrad, Adam };

const char* to_string(OptimizerKind kind);
OptimizerKind optimizer_kind_from_string(const std::string& s);

/// Sparse per-row optimizer. AdaGrad/Adam accumulators exist only for rows
/// that have received a gradient (sparse semantics); Adam bias correction
/// uses a single global step counter.
class Optimizer {
public:
    explicit Optimizer(OptimizerKind kind) : kind_(kind) {}

    OptimizerKind kind() const { return kind_; }
    std::uint64_t step_count() const { return step_; }

    /// Applies one update. Only rows present in `grads` change. Throws on a
    /// non-finite gradient, naming the offending row.
    void step(ModelParams& params, const SparseGrad& grads, double lr);

    // Adam hyperparameters (framework defaults).
    static constexpr double kBeta1 = 0.9;
    static constexpr double kBeta2 = 0.999;
    static constexpr double kAdamEps = 1e-8;
    static constexpr double kAdaGradEps = 1e-10;

private:
    struct RowKeyHash {
        std::size_t operator()(const SparseGrad::Key& k) const noexcept {
            return (std::size_t(k.first) << 32) ^ k.second;
        }
    };
    using RowState = std::unordered_map<SparseGrad::Key, std::vector<double>, RowKeyHash>;

    OptimizerKind kind_;
    std::uint64_t step_ = 0;
    RowState accum_;    // AdaGrad squared-gradient sums / Adam second moment
    RowState moment1_;  // Adam first moment
};

}  // namespace snape
