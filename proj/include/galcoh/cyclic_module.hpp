#ifndef GALCOH_CYCLIC_MODULE_HPP
#define GALCOH_CYCLIC_MODULE_HPP

// F_p[G]-modules for G cyclic of order p, given by the matrix of a generator.
//
// Since sigma^p = 1 and (x - 1)^p = x^p - 1 in characteristic p, the operator
// sigma - 1 is nilpotent of index at most p. Its Jordan blocks are the
// indecomposable summands; a block of length p is a copy of F_p[G].

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "galcoh/fp_linalg.hpp"

namespace galcoh {

/// Multiset of Jordan block lengths of sigma - 1, sorted in decreasing order.
struct BlockDecomposition {
    std::vector<std::size_t> lengths;

    [[nodiscard]] std::size_t block_count() const noexcept { return lengths.size(); }
    [[nodiscard]] std::size_t total_dim() const noexcept {
        std::size_t s = 0;
        for (auto l : lengths) s += l;
        return s;
    }
    [[nodiscard]] std::size_t count_of_length(std::size_t len) const noexcept {
        return static_cast<std::size_t>(std::count(lengths.begin(), lengths.end(), len));
    }
    [[nodiscard]] bool all_of_length(std::size_t len) const noexcept {
        return std::all_of(lengths.begin(), lengths.end(), [len](std::size_t l) { return l == len; });
    }

    friend bool operator==(const BlockDecomposition&, const BlockDecomposition&) = default;
};

class CyclicGroupModule {
public:
    /// Rejects sigma unless it is square with sigma^p = identity.
    CyclicGroupModule(PrimeField field, FpMatrix sigma) : field_(field), sigma_(std::move(sigma)) {
        if (!(sigma_.field() == field_)) throw DimensionMismatch("CyclicGroupModule: sigma is over a different prime");
        if (!sigma_.is_square()) throw InvalidArgument("CyclicGroupModule: sigma must be square");
        if (!(sigma_.power(field_.p()) == FpMatrix::identity(field_, dim())))
            throw InvalidArgument("CyclicGroupModule: sigma^p is not the identity");
    }

    /// The trivial module of the given dimension (sigma = identity).
    static CyclicGroupModule trivial(PrimeField field, std::size_t dim) {
        return {field, FpMatrix::identity(field, dim)};
    }

    /// F_p[G]^rank, each copy as one Jordan block of length p.
    static CyclicGroupModule free_of_rank(PrimeField field, std::size_t rank) {
        return from_blocks(field, std::vector<std::size_t>(rank, field.p()));
    }

    /// Direct sum of Jordan blocks: on each block sigma = 1 + J with J the
    /// nilpotent shift e_0 -> e_1 -> ... -> e_{l-1} -> 0.
    static CyclicGroupModule from_blocks(PrimeField field, const std::vector<std::size_t>& lengths) {
        std::size_t dim = 0;
        for (auto l : lengths) {
            if (l == 0 || l > field.p()) throw InvalidArgument("CyclicGroupModule::from_blocks: block length out of [1,p]");
            dim += l;
        }
        FpMatrix sigma = FpMatrix::identity(field, dim);
        std::size_t offset = 0;
        for (auto l : lengths) {
            for (std::size_t i = 0; i + 1 < l; ++i) sigma.set(offset + i + 1, offset + i, 1);
            offset += l;
        }
        return {field, std::move(sigma)};
    }

    [[nodiscard]] const PrimeField& field() const noexcept { return field_; }
    [[nodiscard]] std::size_t dim() const noexcept { return sigma_.rows(); }
    [[nodiscard]] const FpMatrix& sigma() const noexcept { return sigma_; }

    /// sigma - 1.
    [[nodiscard]] FpMatrix augmentation() const { return sigma_ - FpMatrix::identity(field_, dim()); }

    /// The norm operator (sigma - 1)^(p-1).
    [[nodiscard]] FpMatrix norm_operator() const { return augmentation().power(field_.p() - 1); }

    /// 1 + sigma + ... + sigma^(p-1), computed by summing powers.
    [[nodiscard]] FpMatrix orbit_sum() const {
        FpMatrix acc(field_, dim(), dim());
        FpMatrix term = FpMatrix::identity(field_, dim());
        for (std::uint32_t i = 0; i < field_.p(); ++i) {
            acc = acc + term;
            term = term * sigma_;
        }
        return acc;
    }

    /// Conjugate module P sigma P^{-1}; P must be invertible.
    [[nodiscard]] CyclicGroupModule conjugated(const FpMatrix& change) const {
        return {field_, change * sigma_ * inverse(change)};
    }

private:
    PrimeField field_;
    FpMatrix sigma_;
};

/// M^G = ker(sigma - 1).
inline Subspace fixed_points(const CyclicGroupModule& m) { return kernel(m.augmentation()); }

/// N M = (sigma - 1)^(p-1) M; cross-checked against the orbit-sum form.
inline Subspace norm_image(const CyclicGroupModule& m) {
    Subspace by_power = image(m.norm_operator());
    Subspace by_sum = image(m.orbit_sum());
    if (!(by_power == by_sum)) throw std::logic_error("norm_image: (sigma-1)^(p-1) and orbit sum disagree");
    return by_power;
}

/// Free iff M^G = N M. The zero module counts as free.
inline bool is_free(const CyclicGroupModule& m) { return fixed_points(m) == norm_image(m); }

/// Trivial iff sigma acts as the identity. The zero module counts as trivial.
inline bool is_trivial(const CyclicGroupModule& m) {
    return m.sigma() == FpMatrix::identity(m.field(), m.dim());
}

/// Block lengths from the rank sequence r_i = rank((sigma - 1)^i):
/// the number of blocks of length at least i + 1 is r_i - r_{i+1}.
inline BlockDecomposition decompose(const CyclicGroupModule& m) {
    const std::size_t p = m.field().p();
    std::vector<std::size_t> ranks;
    ranks.reserve(p + 2);
    ranks.push_back(m.dim());
    const FpMatrix t = m.augmentation();
    FpMatrix power = FpMatrix::identity(m.field(), m.dim());
    for (std::size_t i = 1; i <= p + 1; ++i) {
        power = power * t;
        ranks.push_back(rank(power));
    }
    if (ranks[p] != 0) throw std::logic_error("decompose: sigma - 1 is not nilpotent of index <= p");

    BlockDecomposition out;
    for (std::size_t len = p; len >= 1; --len) {
        const std::size_t at_least_len = ranks[len - 1] - ranks[len];
        const std::size_t at_least_next = ranks[len] - ranks[len + 1];
        out.lengths.insert(out.lengths.end(), at_least_len - at_least_next, len);
    }
    return out;
}

/// dim of the cyclic submodule generated by gamma, i.e. l(gamma).
inline std::size_t cyclic_length(const FpVector& gamma, const CyclicGroupModule& m) {
    if (gamma.size() != m.dim()) throw DimensionMismatch("cyclic_length: vector length does not match module");
    std::vector<FpVector> orbit;
    orbit.reserve(m.field().p());
    FpVector v = gamma;
    for (std::uint32_t i = 0; i < m.field().p(); ++i) {
        orbit.push_back(v);
        v = m.sigma().apply(v);
    }
    const Subspace generated = Subspace::span(m.field(), m.dim(), orbit);
    const std::size_t len = generated.dim();

    if (len > 0) {
        // (sigma-1)^(l-1) <gamma> = <gamma>^G != 0 and (sigma-1)^l <gamma> = 0
        const FpMatrix t = m.augmentation();
        const Subspace top = map_subspace(t.power(len - 1), generated);
        const Subspace fixed_in = subspace_intersect(generated, fixed_points(m));
        if (top.is_zero() || !(top == fixed_in) || !map_subspace(t.power(len), generated).is_zero())
            throw std::logic_error("cyclic_length: cyclic submodule is not uniserial");
    }
    return len;
}

/// dim H^2(G, M) = dim M^G - dim N M; counts the blocks shorter than p.
inline std::size_t h2_dim(const CyclicGroupModule& m) { return fixed_points(m).dim() - norm_image(m).dim(); }

} // namespace galcoh

#endif // GALCOH_CYCLIC_MODULE_HPP
