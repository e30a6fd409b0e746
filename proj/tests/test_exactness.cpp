#include <catch_amalgamated.hpp>

#include <random>

#include "galcoh/exactness.hpp"
#include "galcoh/scenarios.hpp"
#include "oracles.hpp"

using namespace galcoh;
using Catch::Matchers::ContainsSubstring;

namespace {

FpMatrix random_matrix(PrimeField f, std::size_t r, std::size_t c, std::mt19937& rng, bool sparse) {
    FpMatrix m(f, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            if (!sparse || rng() % 3 == 0) m.set(i, j, static_cast<std::int64_t>(rng() % f.p()));
    return m;
}

oracle::Mat to_oracle(const FpMatrix& m) { return oracle::from_lib(m); }

/// im f = ker g at the middle of U -f-> V -g-> W, by ranks and composition.
bool oracle_exact(const FpMatrix& f, const FpMatrix& g, int p) {
    const std::size_t v = f.rows();
    const auto fo = to_oracle(f);
    const auto go = to_oracle(g);
    const std::size_t rf = fo.empty() || f.cols() == 0 ? 0 : oracle::rank(fo, f.cols(), p);
    const std::size_t rg = go.empty() || v == 0 ? 0 : oracle::rank(go, v, p);
    bool composes_to_zero = true;
    if (!fo.empty() && !go.empty() && f.cols() > 0) {
        auto gf = oracle::multiply(go, fo, f.cols(), p);
        for (const auto& row : gf)
            for (int x : row) composes_to_zero = composes_to_zero && x == 0;
    }
    return composes_to_zero && rf + rg == v;
}

FpMatrix random_invertible(std::size_t n, std::uint32_t p, std::mt19937& rng) {
    auto [a, a_inv] = oracle::random_invertible(n, static_cast<int>(p), rng);
    return oracle::to_lib(a, static_cast<int>(p), n);
}

} // namespace

TEST_CASE("linear chains: worked examples", "[exactness]") {
    PrimeField f(3);
    const std::size_t n = 3;
    LinearChain iso(f, {0, n, n, 0}, {FpMatrix(f, n, 0), FpMatrix::identity(f, n), FpMatrix(f, 0, n)});
    auto r = verify_exact(iso);
    CHECK(r.exact());
    REQUIRE(r.positions.size() == 2);
    CHECK(r.positions[0].position == 2);
    CHECK(r.positions[1].position == 3);

    LinearChain zero(f, {n, n, n}, {FpMatrix(f, n, n), FpMatrix(f, n, n)});
    auto z = verify_exact(zero);
    CHECK_FALSE(z.exact());
    REQUIRE(z.positions.size() == 1);
    CHECK(z.positions[0].kernel_excess == n);
    CHECK(z.positions[0].image_excess == 0);

    LinearChain idid(f, {n, n, n}, {FpMatrix::identity(f, n), FpMatrix::identity(f, n)});
    auto i = verify_exact(idid);
    CHECK(i.failing_positions() == std::vector<std::size_t>{2});
    CHECK(i.positions[0].image_excess == n);
    CHECK(i.positions[0].kernel_excess == 0);

    // 0 -> F -> F^2 -> F -> 0, inclusion then projection
    LinearChain ses(f, {0, 1, 2, 1, 0},
                    {FpMatrix(f, 1, 0), FpMatrix::from_rows(f, {{1}, {0}}), FpMatrix::from_rows(f, {{0, 1}}),
                     FpMatrix(f, 0, 1)});
    CHECK(verify_exact(ses).exact());
    LinearChain bad(f, {0, 1, 2, 1, 0},
                    {FpMatrix(f, 1, 0), FpMatrix::from_rows(f, {{1}, {0}}), FpMatrix::from_rows(f, {{1, 1}}),
                     FpMatrix(f, 0, 1)});
    CHECK(verify_exact(bad).failing_positions() == std::vector<std::size_t>{3});
}

TEST_CASE("linear chain shape errors", "[exactness]") {
    PrimeField f(2);
    CHECK_THROWS_AS(LinearChain(f, {}, {}), DimensionMismatch);
    CHECK_THROWS_AS(LinearChain(f, {1, 2}, {}), DimensionMismatch);
    CHECK_THROWS_AS(LinearChain(f, {1, 2}, {FpMatrix(f, 1, 2)}), DimensionMismatch);
    CHECK_THROWS_AS(LinearChain(f, {1, 2}, {FpMatrix(PrimeField(3), 2, 1)}), DimensionMismatch);
    CHECK_THROWS_AS(LinearChain(f, {1, 2}, {FpMatrix(f, 2, 1)}, {"only one"}), InvalidArgument);
}

TEST_CASE("exactness agrees with the rank oracle and is self-dual", "[exactness][oracle]") {
    std::mt19937 rng(404);
    for (std::uint32_t p : {2u, 3u, 5u}) {
        PrimeField f(p);
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t len = 3 + rng() % 3;
            std::vector<std::size_t> dims(len);
            for (auto& d : dims) d = rng() % 5;
            std::vector<FpMatrix> maps;
            for (std::size_t i = 0; i + 1 < len; ++i) {
                FpMatrix m = random_matrix(f, dims[i + 1], dims[i], rng, rng() % 2 == 0);
                // half the time force a complex at the previous junction
                if (i > 0 && rng() % 2 == 0) {
                    const Subspace im = image(maps[i - 1]);
                    const Subspace annihilating = kernel(im.basis());
                    if (annihilating.dim() == 0) {
                        m = FpMatrix(f, dims[i + 1], dims[i]);
                    } else {
                        m = random_matrix(f, dims[i + 1], annihilating.dim(), rng, false) * annihilating.basis();
                    }
                }
                maps.push_back(std::move(m));
            }
            LinearChain chain(f, dims, maps);
            auto r = verify_exact(chain);
            auto dual = verify_exact(chain.dual());
            REQUIRE(r.positions.size() == len - 2);
            REQUIRE(dual.positions.size() == len - 2);
            for (std::size_t i = 0; i < r.positions.size(); ++i) {
                const auto& pos = r.positions[i];
                CHECK(pos.exact == oracle_exact(maps[i], maps[i + 1], static_cast<int>(p)));
                const std::size_t mirrored = len + 1 - pos.position;
                const auto& d = dual.positions[mirrored - 2];
                CHECK(d.position == mirrored);
                CHECK(d.exact == pos.exact);
            }
        }
    }
}

TEST_CASE("E-side data invariants are enforced", "[exactness]") {
    PrimeField f(2);
    auto block = CyclicGroupModule::from_blocks(f, {2});
    auto sigma = block.sigma();
    REQUIRE(sigma == FpMatrix::from_rows(f, {{1, 0}, {1, 1}}));
    auto make = [&](CyclicGroupModule m, FpMatrix res, FpMatrix cor) {
        std::map<std::size_t, ESideDegree> d;
        d.emplace(1, ESideDegree{std::move(m), std::move(res), std::move(cor)});
        return ESideData(f, std::move(d));
    };
    CHECK_THROWS_WITH(make(block, FpMatrix::from_rows(f, {{1}, {0}}), FpMatrix::from_rows(f, {{0, 0}})),
                      ContainsSubstring("sigma res != res"));
    CHECK_THROWS_WITH(make(block, FpMatrix::from_rows(f, {{0}, {1}}), FpMatrix::from_rows(f, {{0, 1}})),
                      ContainsSubstring("cor sigma != cor"));
    CHECK_THROWS_WITH(make(block, FpMatrix::from_rows(f, {{0}, {1}}), FpMatrix::from_rows(f, {{0, 0}})),
                      ContainsSubstring("res cor != (sigma - 1)^(p-1)"));
    CHECK_THROWS_WITH(make(CyclicGroupModule::trivial(f, 1), FpMatrix::from_rows(f, {{1, 0}}),
                           FpMatrix::from_rows(f, {{0}, {1}})),
                      ContainsSubstring("cor res != 0"));
    CHECK_THROWS_AS(make(block, FpMatrix(f, 3, 1), FpMatrix(f, 1, 2)), DimensionMismatch);
    CHECK_NOTHROW(make(block, FpMatrix::from_rows(f, {{0}, {1}}), FpMatrix::from_rows(f, {{1, 0}})));

    std::map<std::size_t, ESideDegree> only0;
    only0.emplace(0, ESideDegree{CyclicGroupModule::trivial(f, 1), FpMatrix::from_rows(f, {{1}}),
                                 FpMatrix::from_rows(f, {{0}})});
    CHECK_THROWS_AS(ESideData(f, only0, FpVector(f, 1)), IncompleteData);
    auto q2 = q2_eside_data();
    CHECK_THROWS_AS(ESideData(f, q2.degrees(), FpVector(f, 3)), DimensionMismatch);
    CHECK_THROWS_AS(q2.at(5), IncompleteData);
}

TEST_CASE("Q2 E-side data: four-term sequences, six-term sequence and lemmas", "[exactness]") {
    auto fx = build_q2_fixture();
    const auto& s = fx.scenario;
    const auto& d = *fx.eside;
    for (std::size_t m : {1u, 2u}) {
        auto r = verify_esext_sequence(s, d, m);
        CHECK(r.exact());
        REQUIRE(r.positions.size() == 2);
        CHECK(r.positions[0].label == "H^" + std::to_string(m - 1) + "(F)");
    }
    CHECK(verify_restriction_kernel(s, d, 0).exact());

    auto t1 = verify_trivher_sequence(s, d, 1);
    CHECK(t1.refused);
    CHECK_FALSE(t1.passed());
    auto t2 = verify_trivher_sequence(s, d, 2);
    CHECK_FALSE(t2.refused);
    CHECK(t2.passed());
    auto t2bad = verify_trivher_sequence(s, d, 2, Subspace(s.ring().field(), 1));
    CHECK(t2bad.norm_outside_target);
    CHECK_FALSE(t2bad.passed());
    CHECK_THROWS_AS(verify_trivher_sequence(s, d, 3), IncompleteData);
    CHECK_THROWS_AS(verify_trivher_sequence(s, d, 2, Subspace(s.ring().field(), 3)), DimensionMismatch);

    for (std::size_t n : {1u, 2u}) CHECK(verify_eside_lemmas(s, d, n).ok());
    auto v = verify_eside_data(s, d);
    CHECK(v.ok());
    CHECK(v.esext.size() == 3);
    CHECK(v.lemmas.size() == 2);

    CHECK_THROWS_AS(verify_esext_sequence(s, d, 0), InvalidArgument);
    CHECK_THROWS_AS(verify_esext_sequence(s, d, 3), IncompleteData);
    CHECK_THROWS_AS(verify_eside_lemmas(s, d, 0), InvalidArgument);
}

TEST_CASE("E-side data for the wrong class breaks the four-term sequence", "[exactness]") {
    auto ring = q2_ring();
    auto minus_one = ring->basis_element(1, 0);
    ExtensionScenario s("wrong_a", ring, ring->basis_element(1, 1), minus_one, minus_one, false, 3);
    auto d = q2_eside_data();
    auto r = verify_esext_sequence(s, d, 1);
    CHECK_FALSE(r.exact());
    CHECK(r.failing_positions() == std::vector<std::size_t>{3});
    CHECK_FALSE(verify_eside_data(s, d).ok());
}

TEST_CASE("E-side data against a ring with different dimensions is rejected", "[exactness]") {
    auto s = build_free_example(2, 2, 2);
    REQUIRE(s.ring().h_dim(1) == 4);
    CHECK_THROWS_AS(verify_eside_data(s, q2_eside_data()), DimensionMismatch);
}

TEST_CASE("synthesized E-side data passes every check on the split grid", "[exactness]") {
    for (std::uint32_t p : {2u, 3u, 5u})
        for (std::size_t n = 1; n <= 3; ++n)
            for (std::size_t m = n; m <= 3; ++m)
                for (bool free_side : {true, false}) {
                    auto s = free_side ? build_free_example(p, n, m) : build_trivial_example(p, n, m);
                    auto d = synthesize_eside_data(s, m + 1);
                    auto v = verify_eside_data(s, d);
                    INFO(s.name());
                    CHECK(v.ok());
                    for (std::size_t k = 1; k <= m + 1; ++k) {
                        CHECK(is_free(d.at(k).module) == free_criterion(s, k));
                        CHECK(is_trivial(d.at(k).module) == trivial_criterion(s, k));
                    }
                    if (p == 2) {
                        REQUIRE(d.delta().has_value());
                        bool found = false;
                        for (const auto& c : verify_eside_lemmas(s, d, 1).checks)
                            if (c.name == "delta fixed with cor(delta) = (a)") {
                                found = true;
                                CHECK(c.applicable);
                                CHECK(c.holds);
                            }
                        CHECK(found);
                    }
                }
}

TEST_CASE("a wrong delta fails its lemma", "[exactness]") {
    auto s = build_free_example(2, 1, 2);
    auto d = synthesize_eside_data(s, 2);
    ESideData bad(d.field(), d.degrees(), FpVector(d.field(), d.at(1).module.dim()));
    CHECK_FALSE(verify_eside_lemmas(s, bad, 1).ok());
    CHECK(verify_eside_lemmas(s, d, 1).ok());
}

TEST_CASE("checks are invariant under change of basis in k_nE", "[exactness][property]") {
    std::mt19937 rng(17);
    std::vector<Fixture> fixtures{build_q2_fixture()};
    for (std::uint32_t p : {2u, 3u}) {
        auto s = build_free_example(p, 2, 3);
        fixtures.push_back({s, synthesize_eside_data(s, 4)});
    }
    for (const auto& fx : fixtures) {
        for (int trial = 0; trial < 10; ++trial) {
            std::map<std::size_t, FpMatrix> changes;
            for (const auto& [n, deg] : fx.eside->degrees())
                changes.emplace(n, random_invertible(deg.module.dim(), fx.scenario.p(), rng));
            auto moved = change_basis(*fx.eside, changes);
            auto a = verify_eside_data(fx.scenario, *fx.eside);
            auto b = verify_eside_data(fx.scenario, moved);
            CHECK(a.ok());
            CHECK(b.ok());
            CHECK(a.defect_count() == b.defect_count());
        }
    }
}

TEST_CASE("zero norm and restriction maps break the four-term sequence", "[exactness]") {
    auto s = build_free_example(3, 1, 2);
    auto d = synthesize_eside_data(s, 3);
    REQUIRE(verify_esext_sequence(s, d, 2).exact());
    std::map<std::size_t, ESideDegree> degs = d.degrees();
    const auto lo = degs.at(1);
    PrimeField f(3);
    degs.erase(1);
    degs.emplace(1, ESideDegree{CyclicGroupModule::trivial(f, lo.module.dim()),
                                FpMatrix(f, lo.module.dim(), lo.restriction.cols()),
                                FpMatrix(f, lo.norm.rows(), lo.module.dim())});
    ESideData mutated(f, degs);
    auto at2 = verify_esext_sequence(s, mutated, 2);
    CHECK(at2.failing_positions().front() == 2);
    auto at1 = verify_esext_sequence(s, mutated, 1);
    CHECK(at1.failing_positions() == std::vector<std::size_t>{3});
    CHECK_FALSE(verify_eside_data(s, mutated).ok());
}
