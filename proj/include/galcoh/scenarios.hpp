#ifndef GALCOH_SCENARIOS_HPP
#define GALCOH_SCENARIOS_HPP

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "galcoh/criteria.hpp"
#include "galcoh/exactness.hpp"
#include "galcoh/ring_model.hpp"

namespace galcoh {

namespace detail {

inline RingPtr exterior(PrimeField f, std::size_t m) { return std::make_shared<const ExteriorRingModel>(f, m); }

inline ExtensionScenario split_example(const std::string& kind, std::uint32_t p, std::size_t n, std::size_t m,
                                       bool a_left) {
    if (n < 1 || n > m)
        throw InvalidArgument(kind + ": need 1 <= n <= m, got n = " + std::to_string(n) + ", m = " + std::to_string(m));
    const PrimeField f(p);
    auto ring = std::make_shared<const DirectSumRingModel>(exterior(f, n), exterior(f, m));
    RingElement a = a_left ? ring->left_generator(0) : ring->right_generator(0);
    return ExtensionScenario::with_trivial_units(kind + "(p=" + std::to_string(p) + ",n=" + std::to_string(n) +
                                                     ",m=" + std::to_string(m) + ")",
                                                 ring, std::move(a), p == 2, m + 1);
}

} // namespace detail

/// H^*(F) = Λ(n) ⊕ Λ(m) with (a) the first generator of the left factor.
inline ExtensionScenario build_free_example(std::uint32_t p, std::size_t n, std::size_t m) {
    return detail::split_example("free_example", p, n, m, true);
}

/// H^*(F) = Λ(n) ⊕ Λ(m) with (a) the first generator of the right factor.
inline ExtensionScenario build_trivial_example(std::uint32_t p, std::size_t n, std::size_t m) {
    return detail::split_example("trivial_example", p, n, m, false);
}

/// Exterior algebra on countably many generators, truncated at `cap`.
inline ExtensionScenario build_henselian_example(std::uint32_t p, std::size_t cap) {
    if (cap < 2) throw InvalidArgument("build_henselian_example: cap must be at least 2");
    const PrimeField f(p);
    auto ring = ExteriorRingModel::truncated_infinite(f, cap);
    return ExtensionScenario::with_trivial_units(
        "henselian_example(p=" + std::to_string(p) + ",cap=" + std::to_string(cap) + ")", ring,
        ring->basis_element(1, 0), p == 2, cap);
}

enum class MixedVariant { free, trivial };

/// Λ(n) ⊕ Λ(∞); the free variant puts (a) in the finite factor, the trivial
/// variant in the infinite one.
inline ExtensionScenario build_mixed_infinite_example(std::uint32_t p, std::size_t n, std::size_t cap,
                                                      MixedVariant variant) {
    if (n < 1) throw InvalidArgument("build_mixed_infinite_example: n must be >= 1");
    if (cap < 1) throw InvalidArgument("build_mixed_infinite_example: cap must be >= 1");
    const PrimeField f(p);
    auto ring = std::make_shared<const DirectSumRingModel>(detail::exterior(f, n),
                                                           ExteriorRingModel::truncated_infinite(f, cap));
    const bool free_variant = variant == MixedVariant::free;
    RingElement a = free_variant ? ring->left_generator(0) : ring->right_generator(0);
    return ExtensionScenario::with_trivial_units(std::string("mixed_infinite_") + (free_variant ? "free" : "trivial") +
                                                     "(p=" + std::to_string(p) + ",n=" + std::to_string(n) +
                                                     ",cap=" + std::to_string(cap) + ")",
                                                 ring, std::move(a), p == 2, cap);
}

/// H^*(Q_2) with H^1 = <(-1), (2), (5)>; the only nonzero products of basis
/// classes are (-1,-1) and (2,5) = (5,2).
inline std::shared_ptr<const TableRingModel> q2_ring() {
    const PrimeField f(2);
    std::vector<TableProduct> products{
        {1, 0, 1, 0, {1}},
        {1, 1, 1, 2, {1}},
        {1, 2, 1, 1, {1}},
    };
    return std::make_shared<const TableRingModel>(f, std::vector<std::size_t>{1, 3, 1}, products, "q2");
}

/// One consistent realization of k_0E, k_1E, k_2E for E = Q_2(sqrt(-1)).
/// k_1E has basis (u1, w1, u2, w2) with sigma u = u + w.
inline ESideData q2_eside_data() {
    const PrimeField f(2);
    std::map<std::size_t, ESideDegree> degrees;
    degrees.emplace(0, ESideDegree{CyclicGroupModule::trivial(f, 1), FpMatrix::from_rows(f, {{1}}),
                                   FpMatrix::from_rows(f, {{0}})});
    degrees.emplace(1, ESideDegree{CyclicGroupModule::from_blocks(f, {2, 2}),
                                   FpMatrix::from_rows(f, {{0, 0, 0}, {0, 1, 0}, {0, 0, 0}, {0, 0, 1}}),
                                   FpMatrix::from_rows(f, {{0, 0, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}})});
    degrees.emplace(2, ESideDegree{CyclicGroupModule::trivial(f, 1), FpMatrix::from_rows(f, {{0}}),
                                   FpMatrix::from_rows(f, {{1}})});
    return {f, std::move(degrees)};
}

struct Fixture {
    ExtensionScenario scenario;
    std::optional<ESideData> eside;
};

inline Fixture build_q2_fixture() {
    auto ring = q2_ring();
    RingElement minus_one = ring->basis_element(1, 0);
    ExtensionScenario s("q2", ring, minus_one, minus_one, minus_one, false, 3);
    return {std::move(s), q2_eside_data()};
}

/// The Q_2 ring with (-1) wrongly declared zero. No field has this data;
/// the equivalence suite must reject it.
inline Fixture build_q2_corrupted_fixture() {
    auto ring = q2_ring();
    return {ExtensionScenario::with_trivial_units("q2_corrupted", ring, ring->basis_element(1, 0), false, 3),
            std::nullopt};
}

namespace detail {

/// Vectors of `whole` that extend a basis of `part` to a basis of `part + whole`.
inline std::vector<FpVector> extend_basis(const Subspace& part, const std::vector<FpVector>& whole) {
    std::vector<FpVector> acc = part.basis_vectors();
    std::vector<FpVector> added;
    Subspace span = part;
    for (const auto& v : whole) {
        if (span.contains(v)) continue;
        added.push_back(v);
        acc.push_back(v);
        span = Subspace::span(part.field(), part.ambient_dim(), acc);
    }
    return added;
}

} // namespace detail

/// E-side data for degrees 0..top that satisfies every relation the exactness
/// module checks, assembled from the F-side subspaces C = (a) ∪ H^{n-1} and
/// A = ann_n(a). In degree n,
///   k_nE = F_p[G]^r ⊕ F_p^q ⊕ F_p^t
/// with one free block per vector h_b of a complement of A ∩ C in A,
/// a trivial slot per vector of a complement of C + <h_b> in H^n, and a
/// trivial slot per basis vector of A ∩ C.
/// res kills C, sends h_b to the socle of block b and the complement to its
/// slots; cor sends the generator of block b to h_b and the last t slots
/// onto A ∩ C. For p = 2 with the sum-of-squares flag, delta is a fixed class
/// with cor(delta) = (a) when one exists.
inline ESideData synthesize_eside_data(const ExtensionScenario& s, std::size_t top) {
    const auto& ring = s.ring();
    const PrimeField f = ring.field();
    const std::size_t p = f.p();
    std::map<std::size_t, ESideDegree> degrees;

    for (std::size_t n = 0; n <= top; ++n) {
        const std::size_t h = ring.h_dim(n);
        const Subspace c = n == 0 ? Subspace(f, h) : cup_image(ring, s.a_class(), n);
        const Subspace a = annihilator(ring, s.a_class(), n);
        const Subspace ac = subspace_intersect(a, c);
        const std::vector<FpVector> hs = detail::extend_basis(ac, a.basis_vectors());

        std::vector<FpVector> units;
        for (std::size_t i = 0; i < h; ++i) units.push_back(FpVector::unit(f, h, i));
        std::vector<FpVector> c_and_h = c.basis_vectors();
        c_and_h.insert(c_and_h.end(), hs.begin(), hs.end());
        const std::vector<FpVector> qs = detail::extend_basis(Subspace::span(f, h, c_and_h), units);

        const std::size_t r = hs.size();
        const std::size_t q = qs.size();
        const std::size_t t = ac.dim();
        std::vector<std::size_t> blocks(r, p);
        blocks.insert(blocks.end(), q + t, 1);
        CyclicGroupModule module = CyclicGroupModule::from_blocks(f, blocks);
        const std::size_t e = module.dim();

        // basis of H^n adapted to C ⊕ <h_b> ⊕ <q_k>
        std::vector<FpVector> adapted = c_and_h;
        adapted.insert(adapted.end(), qs.begin(), qs.end());
        const FpMatrix to_adapted = inverse(FpMatrix::from_columns(f, h, adapted));
        FpMatrix place(f, e, h);
        for (std::size_t b = 0; b < r; ++b) place.set(b * p + p - 1, c.dim() + b, 1);
        for (std::size_t k = 0; k < q; ++k) place.set(r * p + k, c.dim() + r + k, 1);
        FpMatrix res = place * to_adapted;

        std::vector<FpVector> cor_cols(e, FpVector(f, h));
        for (std::size_t b = 0; b < r; ++b) cor_cols[b * p] = hs[b];
        const auto ac_basis = ac.basis_vectors();
        for (std::size_t k = 0; k < t; ++k) cor_cols[r * p + q + k] = ac_basis[k];
        FpMatrix cor = FpMatrix::from_columns(f, h, cor_cols);

        degrees.emplace(n, ESideDegree{std::move(module), std::move(res), std::move(cor)});
    }

    std::optional<FpVector> delta;
    if (p == 2 && s.sum_of_squares() && top >= 1) {
        const auto& d1 = degrees.at(1);
        const Subspace fixed = fixed_points(d1.module);
        const FpMatrix fixed_basis = fixed.basis().transposed();
        if (auto x = solve(d1.norm * fixed_basis, s.a_class().coords)) delta = fixed_basis.apply(*x);
    }
    return {f, std::move(degrees), std::move(delta)};
}

/// A named scenario available to the CLI and tests.
struct CatalogueEntry {
    std::string name;
    std::string description;
    std::function<Fixture()> build;
};

inline const std::vector<CatalogueEntry>& fixture_catalogue() {
    static const std::vector<CatalogueEntry> entries{
        {"q2", "F = Q_2, a = -1; tabulated 2-adic Hilbert symbols with E-side data", build_q2_fixture},
        {"q2_corrupted", "Q_2 ring with (-1) declared zero; fails the equivalence suite", build_q2_corrupted_fixture},
        {"free_3_1_2", "Λ(1) ⊕ Λ(2), p = 3, (a) in the left factor",
         [] { return Fixture{build_free_example(3, 1, 2), std::nullopt}; }},
        {"free_3_2_4", "Λ(2) ⊕ Λ(4), p = 3, (a) in the left factor",
         [] { return Fixture{build_free_example(3, 2, 4), std::nullopt}; }},
        {"trivial_2_1_3", "Λ(1) ⊕ Λ(3), p = 2, (a) in the right factor",
         [] { return Fixture{build_trivial_example(2, 1, 3), std::nullopt}; }},
        {"trivial_3_2_3", "Λ(2) ⊕ Λ(3), p = 3, (a) in the right factor",
         [] { return Fixture{build_trivial_example(3, 2, 3), std::nullopt}; }},
        {"henselian_3_8", "Λ(∞) truncated at degree 8, p = 3",
         [] { return Fixture{build_henselian_example(3, 8), std::nullopt}; }},
        {"mixed_free_3_2_6", "Λ(2) ⊕ Λ(∞) truncated at 6, p = 3, (a) in the finite factor",
         [] { return Fixture{build_mixed_infinite_example(3, 2, 6, MixedVariant::free), std::nullopt}; }},
        {"mixed_trivial_2_2_6", "Λ(2) ⊕ Λ(∞) truncated at 6, p = 2, (a) in the infinite factor",
         [] { return Fixture{build_mixed_infinite_example(2, 2, 6, MixedVariant::trivial), std::nullopt}; }},
    };
    return entries;
}

inline Fixture build_fixture(const std::string& name) {
    for (const auto& e : fixture_catalogue())
        if (e.name == name) return e.build();
    throw InvalidArgument("unknown fixture '" + name + "'");
}

} // namespace galcoh

#endif // GALCOH_SCENARIOS_HPP
