#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "snape/kg.hpp"

namespace snape {

enum class ModelKind { TransE, DistMult, ComplEx, RotatE };

const char* to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& s);

/// True for models whose entity embeddings are complex-valued (stored as
/// interleaved real/imaginary pairs, 2d columns for complex dimension d).
bool is_complex(ModelKind kind);

struct ModelParams {
    ModelKind kind = ModelKind::TransE;
    std::uint32_t dim = 0;  // complex dimension for ComplEx/RotatE
    std::uint64_t seed = 0;
    std::size_t num_entities = 0;
    std::size_t num_relations = 0;
    std::vector<double> entity_emb;    // row-major, num_entities x entity_cols()
    std::vector<double> relation_emb;  // row-major, num_relations x relation_cols()

    std::size_t entity_cols() const { return is_complex(kind) ? 2 * std::size_t(dim) : dim; }
    // RotatE relations are phase vectors of length dim, materialized as
    // unit-modulus rotations at score time.
    std::size_t relation_cols() const { return kind == ModelKind::ComplEx ? 2 * std::size_t(dim) : dim; }

    std::span<const double> entity_row(EntityId e) const {
        return {entity_emb.data() + std::size_t(e) * entity_cols(), entity_cols()};
    }
    std::span<const double> relation_row(RelationId r) const {
        return {relation_emb.data() + std::size_t(r) * relation_cols(), relation_cols()};
    }
    std::span<double> entity_row(EntityId e) {
        return {entity_emb.data() + std::size_t(e) * entity_cols(), entity_cols()};
    }
    std::span<double> relation_row(RelationId r) {
        return {relation_emb.data() + std::size_t(r) * relation_cols(), relation_cols()};
    }
};

/// Which parameter matrix a sparse gradient row belongs to.
enum class ParamMatrix : std::uint8_t { Entity = 0, Relation = 1 };

/// Accumulating map from (matrix, row) to a dense per-row gradient.
class SparseGrad {
public:
    void accumulate(ParamMatrix matrix, std::uint32_t row, std::span<const double> grad);
    void scale(double factor);
    void clear() { rows_.clear(); }
    bool empty() const { return rows_.empty(); }

    using Key = std::pair<ParamMatrix, std::uint32_t>;
    const std::map<Key, std::vector<double>>& rows() const { return rows_; }

private:
    std::map<Key, std::vector<double>> rows_;
};

/// Deterministic Glorot-style uniform init in [-6/sqrt(d), 6/sqrt(d)];
/// RotatE relation phases uniform in [0, 2*pi).
ModelParams init_params(ModelKind kind, std::size_t num_entities, std::size_t num_relations,
                        std::uint32_t dim, std::uint64_t seed);

double score(const ModelParams& params, const Triple& triple);

enum class QuerySide { Tail, Head };  // Tail: (h,r,?); Head: (?,r,t)

/// Scores of all |E| candidate entities substituted into the open slot.
std::vector<double> score_all(const ModelParams& params, QuerySide side,
                              EntityId fixed_entity, RelationId relation);

/// Closed-form d(score)/d(params) for the rows touched by `triple`, scaled by
/// `upstream` = d(loss)/d(score). L2-norm subgradient at zero is 0.
void score_grad(const ModelParams& params, const Triple& triple, double upstream,
                SparseGrad& out);

}  // namespace snape
