#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "snape/model.hpp"

using namespace snape;

namespace {

// Central finite-difference of score w.r.t. one parameter entry.
double fd_grad(ModelParams params, ParamMatrix matrix, std::uint32_t row, std::size_t col,
               const Triple& t, double eps = 1e-5) {
    auto& mat = matrix == ParamMatrix::Entity ? params.entity_emb : params.relation_emb;
    std::size_t cols =
        matrix == ParamMatrix::Entity ? params.entity_cols() : params.relation_cols();
    std::size_t idx = std::size_t(row) * cols + col;
    double saved = mat[idx];
    mat[idx] = saved + eps;
    double up = score(params, t);
    mat[idx] = saved - eps;
    double down = score(params, t);
    mat[idx] = saved;
    return (up - down) / (2 * eps);
}

ModelParams tiny(ModelKind kind, std::uint32_t d, std::uint64_t seed = 1, std::size_t ne = 5,
                 std::size_t nr = 3) {
    return init_params(kind, ne, nr, d, seed);
}

void set_entity(ModelParams& p, EntityId e, std::vector<double> v) {
    auto row = p.entity_row(e);
    REQUIRE(row.size() == v.size());
    std::copy(v.begin(), v.end(), row.begin());
}

void set_relation(ModelParams& p, RelationId r, std::vector<double> v) {
    auto row = p.relation_row(r);
    REQUIRE(row.size() == v.size());
    std::copy(v.begin(), v.end(), row.begin());
}

}  // namespace

TEST_CASE("init_params determinism and shapes") {
    auto a = init_params(ModelKind::DistMult, 10, 4, 8, 42);
    auto b = init_params(ModelKind::DistMult, 10, 4, 8, 42);
    CHECK(a.entity_emb == b.entity_emb);
    CHECK(a.relation_emb == b.relation_emb);

    auto rot = init_params(ModelKind::RotatE, 3, 2, 4, 1);
    CHECK(rot.relation_row(0).size() == 4);
    for (RelationId r = 0; r < 2; ++r)
        for (double v : rot.relation_row(r)) {
            CHECK(v >= 0.0);
            CHECK(v < 2 * 3.14159265358979324);
        }

    auto cx = init_params(ModelKind::ComplEx, 3, 2, 8, 1);
    CHECK(cx.entity_row(0).size() == 16);

    CHECK_THROWS(init_params(ModelKind::TransE, 0, 1, 4, 0));
    CHECK_THROWS(init_params(ModelKind::TransE, 1, 0, 4, 0));
}

TEST_CASE("hand-checked scores") {
    auto te = tiny(ModelKind::TransE, 2);
    set_entity(te, 0, {0, 0});
    set_relation(te, 0, {1, 0});
    set_entity(te, 1, {1, 0});
    CHECK(score(te, {0, 0, 1}) == doctest::Approx(0.0));

    auto dm = tiny(ModelKind::DistMult, 2);
    set_entity(dm, 0, {1, 1});
    set_relation(dm, 0, {1, 1});
    set_entity(dm, 1, {1, 1});
    CHECK(score(dm, {0, 0, 1}) == doctest::Approx(2.0));

    auto cx = tiny(ModelKind::ComplEx, 2);
    set_entity(cx, 0, {1, 0, 1, 0});
    set_relation(cx, 0, {1, 0, 1, 0});
    set_entity(cx, 1, {1, 0, 1, 0});
    CHECK(score(cx, {0, 0, 1}) == doctest::Approx(2.0));

    auto ro = tiny(ModelKind::RotatE, 1);
    set_entity(ro, 0, {1, 0});
    set_relation(ro, 0, {3.14159265358979324});
    set_entity(ro, 1, {1, 0});
    CHECK(score(ro, {0, 0, 1}) == doctest::Approx(-2.0));
}

TEST_CASE("ComplEx with zero imaginary parts equals DistMult on real parts") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uni(-1, 1);
    auto cx = tiny(ModelKind::ComplEx, 4, 9, 6, 2);
    auto dm = tiny(ModelKind::DistMult, 4, 9, 6, 2);
    for (EntityId e = 0; e < 6; ++e) {
        auto c = cx.entity_row(e);
        auto d = dm.entity_row(e);
        for (std::uint32_t k = 0; k < 4; ++k) {
            d[k] = uni(rng);
            c[2 * k] = d[k];
            c[2 * k + 1] = 0.0;
        }
    }
    for (RelationId r = 0; r < 2; ++r) {
        auto c = cx.relation_row(r);
        auto d = dm.relation_row(r);
        for (std::uint32_t k = 0; k < 4; ++k) {
            d[k] = uni(rng);
            c[2 * k] = d[k];
            c[2 * k + 1] = 0.0;
        }
    }
    for (EntityId h = 0; h < 6; ++h)
        for (EntityId t = 0; t < 6; ++t)
            for (RelationId r = 0; r < 2; ++r)
                CHECK(score(cx, {h, r, t}) == doctest::Approx(score(dm, {h, r, t})).epsilon(1e-12));
}

TEST_CASE("RotatE with zero phases is plain entity distance") {
    auto ro = tiny(ModelKind::RotatE, 3, 5, 4, 2);
    for (RelationId r = 0; r < 2; ++r)
        for (double& v : ro.relation_row(r)) v = 0.0;
    for (EntityId h = 0; h < 4; ++h)
        for (EntityId t = 0; t < 4; ++t) {
            auto hv = ro.entity_row(h);
            auto tv = ro.entity_row(t);
            double sq = 0.0;
            for (std::size_t i = 0; i < hv.size(); ++i) sq += (hv[i] - tv[i]) * (hv[i] - tv[i]);
            CHECK(score(ro, {h, 0, t}) == doctest::Approx(-std::sqrt(sq)).epsilon(1e-12));
        }
}

TEST_CASE("score_all matches per-entity score calls") {
    for (ModelKind kind :
         {ModelKind::TransE, ModelKind::DistMult, ModelKind::ComplEx, ModelKind::RotatE}) {
        auto p = tiny(kind, 4, 17, 7, 3);
        auto tail_scores = score_all(p, QuerySide::Tail, 2, 1);
        auto head_scores = score_all(p, QuerySide::Head, 2, 1);
        REQUIRE(tail_scores.size() == 7);
        for (EntityId e = 0; e < 7; ++e) {
            CHECK(tail_scores[e] == score(p, {2, 1, e}));
            CHECK(head_scores[e] == score(p, {e, 1, 2}));
        }
    }
}

TEST_CASE("TransE argmax is the translated entity") {
    auto p = tiny(ModelKind::TransE, 2);
    set_entity(p, 0, {0, 0});
    set_relation(p, 0, {1, 1});
    set_entity(p, 1, {5, 5});
    set_entity(p, 2, {1, 1});  // exactly h + r
    set_entity(p, 3, {-3, 2});
    set_entity(p, 4, {2, 0});
    auto scores = score_all(p, QuerySide::Tail, 0, 0);
    std::size_t argmax = 0;
    for (std::size_t i = 1; i < scores.size(); ++i)
        if (scores[i] > scores[argmax]) argmax = i;
    CHECK(argmax == 2);
}

TEST_CASE("DistMult with zero head scores zero everywhere") {
    auto p = tiny(ModelKind::DistMult, 3);
    set_entity(p, 0, {0, 0, 0});
    for (double v : score_all(p, QuerySide::Tail, 0, 0)) CHECK(v == 0.0);
}

TEST_CASE("analytic gradients match central finite differences") {
    std::mt19937_64 rng(23);
    for (ModelKind kind :
         {ModelKind::TransE, ModelKind::DistMult, ModelKind::ComplEx, ModelKind::RotatE}) {
        auto p = tiny(kind, 8, 99, 12, 4);
        std::uniform_int_distribution<EntityId> ent(0, 11);
        std::uniform_int_distribution<RelationId> rel(0, 3);
        std::uniform_real_distribution<double> up(-2.0, 2.0);

        for (int trial = 0; trial < 100; ++trial) {
            Triple t{ent(rng), rel(rng), ent(rng)};
            double upstream = up(rng);
            if (std::abs(upstream) < 1e-3) upstream = 1.0;
            SparseGrad g;
            score_grad(p, t, upstream, g);
            for (const auto& [key, grad] : g.rows()) {
                for (std::size_t col = 0; col < grad.size(); ++col) {
                    double fd = fd_grad(p, key.first, key.second, col, t) * upstream;
                    // self-loop triples accumulate head+tail into one row; rebuild
                    // the expected value the same way via FD on the shared entry
                    double analytic = grad[col];
                    // both effectively zero: FD noise floor, treat as equal
                    if (std::max(std::abs(fd), std::abs(analytic)) < 1e-7) continue;
                    double denom = std::max({std::abs(fd), std::abs(analytic), 1e-6});
                    CHECK(std::abs(analytic - fd) / denom <= 1e-4);
                }
            }
        }
    }
}

TEST_CASE("upstream zero gives zero gradients") {
    auto p = tiny(ModelKind::ComplEx, 4);
    SparseGrad g;
    score_grad(p, {0, 0, 1}, 0.0, g);
    for (const auto& [key, grad] : g.rows())
        for (double v : grad) CHECK(v == 0.0);
}

TEST_CASE("DistMult head gradient is r*t exactly") {
    auto p = tiny(ModelKind::DistMult, 3, 2, 4, 2);
    SparseGrad g;
    Triple t{0, 1, 2};
    score_grad(p, t, 1.0, g);
    auto r = p.relation_row(1);
    auto tv = p.entity_row(2);
    const auto& gh = g.rows().at({ParamMatrix::Entity, 0});
    for (std::size_t i = 0; i < 3; ++i) CHECK(gh[i] == doctest::Approx(r[i] * tv[i]));
}
