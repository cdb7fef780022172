#include "snape/model.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace snape {

const char* to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::TransE: return "TransE";
        case ModelKind::DistMult: return "DistMult";
        case ModelKind::ComplEx: return "ComplEx";
        case ModelKind::RotatE: return "RotatE";
    }
    return "?";
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "TransE") return ModelKind::TransE;
    if (s == "DistMult") return ModelKind::DistMult;
    if (s == "ComplEx") return ModelKind::ComplEx;
    if (s == "RotatE") return ModelKind::RotatE;
    throw std::invalid_argument("unknown model kind: " + s);
}

bool is_complex(ModelKind kind) {
    return kind == ModelKind::ComplEx || kind == ModelKind::RotatE;
}

void SparseGrad::accumulate(ParamMatrix matrix, std::uint32_t row, std::span<const double> grad) {
    auto& dst = rows_[{matrix, row}];
    if (dst.empty()) dst.assign(grad.size(), 0.0);
    if (dst.size() != grad.size()) throw std::invalid_argument("gradient row size mismatch");
    for (std::size_t i = 0; i < grad.size(); ++i) dst[i] += grad[i];
}

void SparseGrad::scale(double factor) {
    for (auto& [key, row] : rows_)
        for (double& v : row) v *= factor;
}

ModelParams init_params(ModelKind kind, std::size_t num_entities, std::size_t num_relations,
                        std::uint32_t dim, std::uint64_t seed) {
    if (num_entities == 0 || num_relations == 0)
        throw std::invalid_argument("init_params: entity and relation counts must be positive");
    if (dim == 0) throw std::invalid_argument("init_params: dim must be >= 1");

    ModelParams p;
    p.kind = kind;
    p.dim = dim;
    p.seed = seed;
    p.num_entities = num_entities;
    p.num_relations = num_relations;
    p.entity_emb.resize(num_entities * p.entity_cols());
    p.relation_emb.resize(num_relations * p.relation_cols());

    std::mt19937_64 rng(seed);
    const double bound = 6.0 / std::sqrt(double(dim));
    std::uniform_real_distribution<double> uni(-bound, bound);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

    for (double& v : p.entity_emb) v = uni(rng);
    if (kind == ModelKind::RotatE) {
        for (double& v : p.relation_emb) v = phase(rng);
    } else {
        for (double& v : p.relation_emb) v = uni(rng);
    }
    return p;
}

namespace {

double transe_score(std::span<const double> h, std::span<const double> r,
                    std::span<const double> t) {
    double sq = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        double d = h[i] + r[i] - t[i];
        sq += d * d;
    }
    return -std::sqrt(sq);
}

double distmult_score(std::span<const double> h, std::span<const double> r,
                      std::span<const double> t) {
    double s = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) s += h[i] * r[i] * t[i];
    return s;
}

// Re<h, r, conj(t)> over interleaved (re, im) pairs.
double complex_score(std::span<const double> h, std::span<const double> r,
                     std::span<const double> t) {
    double s = 0.0;
    for (std::size_t i = 0; i < h.size(); i += 2) {
        double hr = h[i], hi = h[i + 1];
        double rr = r[i], ri = r[i + 1];
        double tr = t[i], ti = t[i + 1];
        s += (hr * rr - hi * ri) * tr + (hr * ri + hi * rr) * ti;
    }
    return s;
}

// -|| h o e^{i*theta} - t ||_2, theta per complex component.
double rotate_score(std::span<const double> h, std::span<const double> theta,
                    std::span<const double> t) {
    double sq = 0.0;
    for (std::size_t k = 0; k < theta.size(); ++k) {
        double c = std::cos(theta[k]), s = std::sin(theta[k]);
        double hr = h[2 * k], hi = h[2 * k + 1];
        double u = hr * c - hi * s - t[2 * k];
        double v = hr * s + hi * c - t[2 * k + 1];
        sq += u * u + v * v;
    }
    return -std::sqrt(sq);
}

void check_triple(const ModelParams& p, const Triple& t) {
    if (t.head >= p.num_entities || t.tail >= p.num_entities || t.relation >= p.num_relations)
        throw std::out_of_range("triple ids out of range for model");
}

}  // namespace

double score(const ModelParams& params, const Triple& triple) {
    check_triple(params, triple);
    auto h = params.entity_row(triple.head);
    auto r = params.relation_row(triple.relation);
    auto t = params.entity_row(triple.tail);
    switch (params.kind) {
        case ModelKind::TransE: return transe_score(h, r, t);
        case ModelKind::DistMult: return distmult_score(h, r, t);
        case ModelKind::ComplEx: return complex_score(h, r, t);
        case ModelKind::RotatE: return rotate_score(h, r, t);
    }
    return 0.0;
}

std::vector<double> score_all(const ModelParams& params, QuerySide side,
                              EntityId fixed_entity, RelationId relation) {
    std::vector<double> out(params.num_entities);
    Triple t;
    t.relation = relation;
    for (EntityId e = 0; e < params.num_entities; ++e) {
        if (side == QuerySide::Tail) {
            t.head = fixed_entity;
            t.tail = e;
        } else {
            t.head = e;
            t.tail = fixed_entity;
        }
        out[e] = score(params, t);
    }
    return out;
}

void score_grad(const ModelParams& params, const Triple& triple, double upstream,
                SparseGrad& out) {
    check_triple(params, triple);
    auto h = params.entity_row(triple.head);
    auto r = params.relation_row(triple.relation);
    auto t = params.entity_row(triple.tail);
    const std::size_t ec = params.entity_cols();
    const std::size_t rc = params.relation_cols();
    std::vector<double> gh(ec, 0.0), gr(rc, 0.0), gt(ec, 0.0);

    switch (params.kind) {
        case ModelKind::TransE: {
            double sq = 0.0;
            std::vector<double> diff(ec);
            for (std::size_t i = 0; i < ec; ++i) {
                diff[i] = h[i] + r[i] - t[i];
                sq += diff[i] * diff[i];
            }
            double n = std::sqrt(sq);
            if (n > 0.0) {
                for (std::size_t i = 0; i < ec; ++i) {
                    double g = -diff[i] / n * upstream;
                    gh[i] = g;
                    gr[i] = g;
                    gt[i] = -g;
                }
            }
            break;
        }
        case ModelKind::DistMult: {
            for (std::size_t i = 0; i < ec; ++i) {
                gh[i] = r[i] * t[i] * upstream;
                gr[i] = h[i] * t[i] * upstream;
                gt[i] = h[i] * r[i] * upstream;
            }
            break;
        }
        case ModelKind::ComplEx: {
            for (std::size_t i = 0; i < ec; i += 2) {
                double hr = h[i], hi = h[i + 1];
                double rr = r[i], ri = r[i + 1];
                double tr = t[i], ti = t[i + 1];
                gh[i] = (rr * tr + ri * ti) * upstream;
                gh[i + 1] = (-ri * tr + rr * ti) * upstream;
                gr[i] = (hr * tr + hi * ti) * upstream;
                gr[i + 1] = (-hi * tr + hr * ti) * upstream;
                gt[i] = (hr * rr - hi * ri) * upstream;
                gt[i + 1] = (hr * ri + hi * rr) * upstream;
            }
            break;
        }
        case ModelKind::RotatE: {
            double sq = 0.0;
            std::vector<double> u(rc), v(rc), rotr(rc), roti(rc);
            for (std::size_t k = 0; k < rc; ++k) {
                double c = std::cos(r[k]), s = std::sin(r[k]);
                double hr = h[2 * k], hi = h[2 * k + 1];
                rotr[k] = hr * c - hi * s;
                roti[k] = hr * s + hi * c;
                u[k] = rotr[k] - t[2 * k];
                v[k] = roti[k] - t[2 * k + 1];
                sq += u[k] * u[k] + v[k] * v[k];
            }
            double n = std::sqrt(sq);
            if (n > 0.0) {
                for (std::size_t k = 0; k < rc; ++k) {
                    double c = std::cos(r[k]), s = std::sin(r[k]);
                    // d(norm)/dx = (u*du + v*dv)/n; score = -norm.
                    gh[2 * k] = -(u[k] * c + v[k] * s) / n * upstream;
                    gh[2 * k + 1] = -(-u[k] * s + v[k] * c) / n * upstream;
                    gr[k] = -(u[k] * (-roti[k]) + v[k] * rotr[k]) / n * upstream;
                    gt[2 * k] = u[k] / n * upstream;
                    gt[2 * k + 1] = v[k] / n * upstream;
                }
            }
            break;
        }
    }

    out.accumulate(ParamMatrix::Entity, triple.head, gh);
    out.accumulate(ParamMatrix::Relation, triple.relation, gr);
    out.accumulate(ParamMatrix::Entity, triple.tail, gt);
}

}  // namespace snape
