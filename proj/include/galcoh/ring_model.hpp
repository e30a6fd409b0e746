#ifndef GALCOH_RING_MODEL_HPP
#define GALCOH_RING_MODEL_HPP

// Graded-commutative F_p cohomology ring models.
//
//   ExteriorRingModel   Λ(F_p^m), the mod-p cohomology of a henselian field
//                       C((Γ)) with dim Γ/pΓ = m. A truncated variant stands in
//                       for countably many generators.
//   DirectSumRingModel  positive-degree direct sum of two models with vanishing
//                       cross products (free pro-p products of Galois groups).
//   TableRingModel      explicit structure constants, for fixtures.
//
// Elements carry coordinates in the model's canonical basis of their degree.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "galcoh/fp_linalg.hpp"

namespace galcoh {

/// A natural number, or a marker for "unbounded", or a lower bound when the
/// evaluation could not settle the value.
class InvariantValue {
public:
    enum class Kind { finite, unbounded, at_least };

    static InvariantValue finite(std::size_t n) { return {Kind::finite, n}; }
    static InvariantValue unbounded() { return {Kind::unbounded, 0}; }
    static InvariantValue at_least(std::size_t n) { return {Kind::at_least, n}; }

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] bool is_finite() const noexcept { return kind_ == Kind::finite; }
    [[nodiscard]] bool is_unbounded() const noexcept { return kind_ == Kind::unbounded; }
    [[nodiscard]] bool is_incomplete() const noexcept { return kind_ == Kind::at_least; }
    /// The exact value when finite, the lower bound when incomplete.
    [[nodiscard]] std::size_t value() const noexcept { return value_; }

    [[nodiscard]] std::string to_string() const {
        switch (kind_) {
        case Kind::finite: return std::to_string(value_);
        case Kind::unbounded: return "unbounded";
        case Kind::at_least: return ">=" + std::to_string(value_);
        }
        return {};
    }

    friend bool operator==(const InvariantValue&, const InvariantValue&) = default;

private:
    InvariantValue(Kind k, std::size_t v) : kind_(k), value_(v) {}
    Kind kind_;
    std::size_t value_;
};

struct RingElement {
    std::size_t degree;
    FpVector coords;

    [[nodiscard]] bool is_zero() const noexcept { return coords.is_zero(); }
    friend bool operator==(const RingElement&, const RingElement&) = default;
};

class RingModel {
public:
    explicit RingModel(PrimeField field) : field_(field) {}
    virtual ~RingModel() = default;
    RingModel(const RingModel&) = delete;
    RingModel& operator=(const RingModel&) = delete;

    [[nodiscard]] const PrimeField& field() const noexcept { return field_; }

    /// dim H^n; zero above the top degree.
    [[nodiscard]] virtual std::size_t h_dim(std::size_t n) const = 0;

    /// Largest degree with nonzero cohomology, or nullopt for unbounded models.
    [[nodiscard]] virtual std::optional<std::size_t> top_degree() const = 0;

    /// Models standing in for infinitely generated algebras are flagged unbounded.
    [[nodiscard]] virtual bool unbounded() const { return !top_degree().has_value(); }

    /// Highest degree n at which H^n and H^{n+1} of the model agree with the
    /// algebra it represents, so degree-n criteria are reliable. Unlimited for
    /// exact models.
    [[nodiscard]] virtual std::optional<std::size_t> faithful_degree() const { return std::nullopt; }

    [[nodiscard]] virtual std::string describe() const = 0;

    [[nodiscard]] RingElement cup(const RingElement& x, const RingElement& y) const {
        check(x);
        check(y);
        return {x.degree + y.degree, cup_impl(x, y)};
    }

    [[nodiscard]] RingElement zero(std::size_t degree) const { return {degree, FpVector(field_, h_dim(degree))}; }
    [[nodiscard]] RingElement one() const { return basis_element(0, 0); }

    [[nodiscard]] RingElement basis_element(std::size_t degree, std::size_t index) const {
        return {degree, FpVector::unit(field_, h_dim(degree), index)};
    }

    [[nodiscard]] RingElement element(std::size_t degree, const std::vector<std::int64_t>& coords) const {
        RingElement e{degree, FpVector(field_, std::span<const std::int64_t>(coords))};
        check(e);
        return e;
    }

    void check(const RingElement& x) const {
        if (!(x.coords.field() == field_) || x.coords.size() != h_dim(x.degree))
            throw ModelMismatch("element of degree " + std::to_string(x.degree) + " with " +
                                std::to_string(x.coords.size()) + " coordinates does not belong to " + describe() +
                                " (expected " + std::to_string(h_dim(x.degree)) + ")");
    }

protected:
    /// Product of two elements already validated against this model.
    [[nodiscard]] virtual FpVector cup_impl(const RingElement& x, const RingElement& y) const = 0;

private:
    PrimeField field_;
};

using RingPtr = std::shared_ptr<const RingModel>;

namespace detail {

inline std::uint64_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline int popcount(std::uint32_t x) { return __builtin_popcount(x); }

} // namespace detail

/// Exterior algebra on m degree-1 generators g_0..g_{m-1}. The degree-n basis
/// is the n-element generator subsets in lexicographic order; products are
/// signed merges (signs only matter for p > 2) and repeated generators give 0.
class ExteriorRingModel final : public RingModel {
public:
    static constexpr std::size_t max_generators = 16;

    ExteriorRingModel(PrimeField field, std::size_t generators) : ExteriorRingModel(field, generators, false) {}

    /// Stand-in for the exterior algebra on countably many generators. Holds
    /// cap + 1 generators so every degree up to cap is represented faithfully.
    static std::shared_ptr<const ExteriorRingModel> truncated_infinite(PrimeField field, std::size_t cap) {
        if (cap == 0) throw InvalidArgument("truncated_infinite: cap must be positive");
        return std::shared_ptr<const ExteriorRingModel>(new ExteriorRingModel(field, cap + 1, true));
    }

    [[nodiscard]] std::size_t generators() const noexcept { return m_; }
    /// For truncated models, the degree cap the truncation was built for.
    [[nodiscard]] std::optional<std::size_t> cap() const {
        return truncated_ ? std::optional<std::size_t>(m_ - 1) : std::nullopt;
    }

    [[nodiscard]] std::size_t h_dim(std::size_t n) const override {
        return n <= m_ ? basis_[n].size() : 0;
    }
    [[nodiscard]] std::optional<std::size_t> top_degree() const override {
        return truncated_ ? std::nullopt : std::optional<std::size_t>(m_);
    }
    [[nodiscard]] std::optional<std::size_t> faithful_degree() const override { return cap(); }

    [[nodiscard]] std::string describe() const override {
        return truncated_ ? "truncated_infinite(p=" + std::to_string(field().p()) + ", cap=" + std::to_string(m_ - 1) + ")"
                          : "exterior(p=" + std::to_string(field().p()) + ", m=" + std::to_string(m_) + ")";
    }

    /// Generator subset (bitmask) of a degree-n basis element.
    [[nodiscard]] std::uint32_t monomial(std::size_t degree, std::size_t index) const { return basis_.at(degree).at(index); }

    [[nodiscard]] std::size_t index_of(std::uint32_t mask) const {
        const auto n = static_cast<std::size_t>(detail::popcount(mask));
        const auto& row = basis_.at(n);
        auto it = std::lower_bound(row.begin(), row.end(), mask, lex_less);
        return static_cast<std::size_t>(it - row.begin());
    }

protected:
    [[nodiscard]] FpVector cup_impl(const RingElement& x, const RingElement& y) const override {
        const auto& f = field();
        const std::size_t deg = x.degree + y.degree;
        FpVector out(f, h_dim(deg));
        if (deg > m_) return out;
        for (std::size_t i = 0; i < x.coords.size(); ++i) {
            const Residue xi = x.coords[i];
            if (xi == 0) continue;
            const std::uint32_t s = basis_[x.degree][i];
            for (std::size_t j = 0; j < y.coords.size(); ++j) {
                const Residue yj = y.coords[j];
                if (yj == 0) continue;
                const std::uint32_t t = basis_[y.degree][j];
                if (s & t) continue;
                Residue c = f.mul(xi, yj);
                if (merge_is_odd(s, t)) c = f.neg(c);
                const std::size_t k = index_of(s | t);
                out.set(k, f.add(out[k], c));
            }
        }
        return out;
    }

private:
    ExteriorRingModel(PrimeField field, std::size_t generators, bool truncated)
        : RingModel(field), m_(generators), truncated_(truncated) {
        if (generators > max_generators)
            throw InvalidArgument("ExteriorRingModel: at most " + std::to_string(max_generators) + " generators");
        basis_.resize(m_ + 1);
        for (std::uint32_t mask = 0; mask < (1U << m_); ++mask)
            basis_[static_cast<std::size_t>(detail::popcount(mask))].push_back(mask);
        for (auto& row : basis_) std::sort(row.begin(), row.end(), lex_less);
    }

    /// Lexicographic order of subsets listed in increasing order.
    static bool lex_less(std::uint32_t a, std::uint32_t b) {
        while (a && b) {
            const int la = __builtin_ctz(a);
            const int lb = __builtin_ctz(b);
            if (la != lb) return la < lb;
            a &= a - 1;
            b &= b - 1;
        }
        return a == 0 && b != 0;
    }

    /// Parity of the shuffle sorting s followed by t: pairs (u in s, v in t) with u > v.
    static bool merge_is_odd(std::uint32_t s, std::uint32_t t) {
        int inversions = 0;
        for (std::uint32_t rest = t; rest; rest &= rest - 1) {
            const int v = __builtin_ctz(rest);
            inversions += detail::popcount(s >> (v + 1));
        }
        return (inversions & 1) != 0;
    }

    std::size_t m_;
    bool truncated_;
    std::vector<std::vector<std::uint32_t>> basis_;
};

/// H^0 = F_p shared; H^n = H^n(left) ⊕ H^n(right) for n >= 1, left block first.
/// Products of positive-degree classes from opposite summands vanish.
class DirectSumRingModel final : public RingModel {
public:
    DirectSumRingModel(RingPtr left, RingPtr right)
        : RingModel(left->field()), left_(std::move(left)), right_(std::move(right)) {
        if (!(left_->field() == right_->field())) throw DimensionMismatch("DirectSumRingModel: summands over different primes");
        if (left_->h_dim(0) != 1 || right_->h_dim(0) != 1)
            throw InvalidArgument("DirectSumRingModel: summands must have one-dimensional H^0");
    }

    [[nodiscard]] const RingPtr& left() const noexcept { return left_; }
    [[nodiscard]] const RingPtr& right() const noexcept { return right_; }

    [[nodiscard]] std::size_t h_dim(std::size_t n) const override {
        return n == 0 ? 1 : left_->h_dim(n) + right_->h_dim(n);
    }
    [[nodiscard]] std::optional<std::size_t> top_degree() const override {
        auto l = left_->top_degree();
        auto r = right_->top_degree();
        if (!l || !r) return std::nullopt;
        return std::max(*l, *r);
    }
    [[nodiscard]] std::optional<std::size_t> faithful_degree() const override {
        auto l = left_->faithful_degree();
        auto r = right_->faithful_degree();
        if (l && r) return std::min(*l, *r);
        return l ? l : r;
    }
    [[nodiscard]] std::string describe() const override {
        return "direct_sum(" + left_->describe() + ", " + right_->describe() + ")";
    }

    /// Degree-1 class of the i-th generator of the left summand.
    [[nodiscard]] RingElement left_generator(std::size_t i) const {
        if (i >= left_->h_dim(1)) throw InvalidArgument("left_generator: index out of range");
        return basis_element(1, i);
    }
    [[nodiscard]] RingElement right_generator(std::size_t i) const {
        if (i >= right_->h_dim(1)) throw InvalidArgument("right_generator: index out of range");
        return basis_element(1, left_->h_dim(1) + i);
    }

    /// Assemble a positive-degree class from its two components.
    [[nodiscard]] RingElement combine(const RingElement& l, const RingElement& r) const {
        left_->check(l);
        right_->check(r);
        if (l.degree != r.degree || l.degree == 0) throw InvalidArgument("combine: components must share a positive degree");
        FpVector v(field(), h_dim(l.degree));
        for (std::size_t i = 0; i < l.coords.size(); ++i) v.set(i, l.coords[i]);
        for (std::size_t i = 0; i < r.coords.size(); ++i) v.set(l.coords.size() + i, r.coords[i]);
        return {l.degree, std::move(v)};
    }

    [[nodiscard]] std::pair<RingElement, RingElement> split(const RingElement& x) const {
        check(x);
        if (x.degree == 0) throw InvalidArgument("restriction_components: degree 0 is not split");
        const std::size_t nl = left_->h_dim(x.degree);
        RingElement l = left_->zero(x.degree);
        RingElement r = right_->zero(x.degree);
        for (std::size_t i = 0; i < nl; ++i) l.coords.set(i, x.coords[i]);
        for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords.set(i, x.coords[nl + i]);
        return {std::move(l), std::move(r)};
    }

protected:
    [[nodiscard]] FpVector cup_impl(const RingElement& x, const RingElement& y) const override {
        if (x.degree == 0) return y.coords.scaled(x.coords[0]);
        if (y.degree == 0) return x.coords.scaled(y.coords[0]);
        auto [xl, xr] = split(x);
        auto [yl, yr] = split(y);
        return combine(left_->cup(xl, yl), right_->cup(xr, yr)).coords;
    }

private:
    RingPtr left_;
    RingPtr right_;
};

/// One structure constant: basis(left_degree, left_index) ∪ basis(right_degree, right_index) = value.
struct TableProduct {
    std::size_t left_degree;
    std::size_t left_index;
    std::size_t right_degree;
    std::size_t right_index;
    std::vector<std::int64_t> value;
};

/// Explicit multiplication table. H^0 = F_p with the unit implicit; products of
/// positive-degree basis elements not listed are zero. Construction checks
/// graded commutativity on all basis pairs and associativity on all triples.
class TableRingModel final : public RingModel {
public:
    TableRingModel(PrimeField field, std::vector<std::size_t> dims, const std::vector<TableProduct>& products,
                   std::string name = "table")
        : RingModel(field), dims_(std::move(dims)), name_(std::move(name)) {
        if (dims_.empty() || dims_[0] != 1) throw InvalidArgument("TableRingModel: H^0 must be one-dimensional");
        while (dims_.size() > 1 && dims_.back() == 0) dims_.pop_back();
        for (const auto& e : products) {
            if (e.left_degree == 0 || e.right_degree == 0)
                throw InvalidArgument("TableRingModel: products with H^0 are fixed by the unit");
            if (e.left_index >= h_dim(e.left_degree) || e.right_index >= h_dim(e.right_degree))
                throw InvalidArgument("TableRingModel: basis index out of range");
            const std::size_t deg = e.left_degree + e.right_degree;
            if (e.value.size() != h_dim(deg))
                throw InvalidArgument("TableRingModel: product value has " + std::to_string(e.value.size()) +
                                      " coordinates, H^" + std::to_string(deg) + " has dimension " +
                                      std::to_string(h_dim(deg)));
            auto key = std::make_tuple(e.left_degree, e.left_index, e.right_degree, e.right_index);
            if (table_.count(key)) throw InvalidArgument("TableRingModel: duplicate product entry");
            table_.emplace(key, FpVector(field, std::span<const std::int64_t>(e.value)));
        }
        validate();
    }

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] const std::vector<std::size_t>& dims() const noexcept { return dims_; }

    [[nodiscard]] std::size_t h_dim(std::size_t n) const override { return n < dims_.size() ? dims_[n] : 0; }
    [[nodiscard]] std::optional<std::size_t> top_degree() const override { return dims_.size() - 1; }
    [[nodiscard]] std::string describe() const override { return "table(" + name_ + ")"; }

    /// Listed structure constants in key order.
    [[nodiscard]] std::vector<TableProduct> products() const {
        std::vector<TableProduct> out;
        for (const auto& [key, v] : table_) {
            auto [ld, li, rd, ri] = key;
            std::vector<std::int64_t> value(v.entries().begin(), v.entries().end());
            out.push_back({ld, li, rd, ri, std::move(value)});
        }
        return out;
    }

protected:
    [[nodiscard]] FpVector cup_impl(const RingElement& x, const RingElement& y) const override {
        const auto& f = field();
        const std::size_t deg = x.degree + y.degree;
        if (x.degree == 0) return y.coords.scaled(x.coords[0]);
        if (y.degree == 0) return x.coords.scaled(y.coords[0]);
        FpVector out(f, h_dim(deg));
        if (out.size() == 0) return out;
        for (std::size_t i = 0; i < x.coords.size(); ++i) {
            if (x.coords[i] == 0) continue;
            for (std::size_t j = 0; j < y.coords.size(); ++j) {
                if (y.coords[j] == 0) continue;
                auto it = table_.find(std::make_tuple(x.degree, i, y.degree, j));
                if (it == table_.end()) continue;
                out += it->second.scaled(f.mul(x.coords[i], y.coords[j]));
            }
        }
        return out;
    }

private:
    void validate() const {
        const auto& f = field();
        const std::size_t top = dims_.size() - 1;
        for (std::size_t d1 = 1; d1 <= top; ++d1) {
            for (std::size_t d2 = 1; d1 + d2 <= top; ++d2) {
                for (std::size_t i = 0; i < h_dim(d1); ++i) {
                    for (std::size_t j = 0; j < h_dim(d2); ++j) {
                        const auto xy = cup(basis_element(d1, i), basis_element(d2, j)).coords;
                        auto yx = cup(basis_element(d2, j), basis_element(d1, i)).coords;
                        if ((d1 * d2) % 2 == 1) yx = yx.scaled(f.neg(1));
                        if (!(xy == yx))
                            throw InvalidArgument("TableRingModel: not graded-commutative at (" + std::to_string(d1) +
                                                  "," + std::to_string(i) + ")x(" + std::to_string(d2) + "," +
                                                  std::to_string(j) + ")");
                    }
                }
            }
        }
        for (std::size_t d1 = 1; d1 <= top; ++d1)
            for (std::size_t d2 = 1; d1 + d2 <= top; ++d2)
                for (std::size_t d3 = 1; d1 + d2 + d3 <= top; ++d3)
                    for (std::size_t i = 0; i < h_dim(d1); ++i)
                        for (std::size_t j = 0; j < h_dim(d2); ++j)
                            for (std::size_t k = 0; k < h_dim(d3); ++k) {
                                const auto x = basis_element(d1, i);
                                const auto y = basis_element(d2, j);
                                const auto z = basis_element(d3, k);
                                if (!(cup(cup(x, y), z) == cup(x, cup(y, z))))
                                    throw InvalidArgument("TableRingModel: product is not associative");
                            }
    }

    std::vector<std::size_t> dims_;
    std::string name_;
    std::map<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>, FpVector> table_;
};

/// Matrix of x ↦ a ∪ x from H^n to H^{n + deg a}.
inline FpMatrix multiplication_matrix(const RingModel& ring, const RingElement& a, std::size_t n) {
    ring.check(a);
    std::vector<FpVector> columns;
    const std::size_t target = ring.h_dim(n + a.degree);
    columns.reserve(ring.h_dim(n));
    for (std::size_t j = 0; j < ring.h_dim(n); ++j) columns.push_back(ring.cup(a, ring.basis_element(n, j)).coords);
    return FpMatrix::from_columns(ring.field(), target, columns);
}

inline std::size_t h_dim(const RingModel& ring, std::size_t n) { return ring.h_dim(n); }

inline RingElement cup(const RingModel& ring, const RingElement& x, const RingElement& y) { return ring.cup(x, y); }

/// a ∪ H^{n - deg a} as a subspace of H^n; the zero subspace when n < deg a.
inline Subspace cup_image(const RingModel& ring, const RingElement& a, std::size_t n) {
    ring.check(a);
    if (n < a.degree) return Subspace(ring.field(), ring.h_dim(n));
    return image(multiplication_matrix(ring, a, n - a.degree));
}

/// ann_n(a) = {x in H^n : a ∪ x = 0}.
inline Subspace annihilator(const RingModel& ring, const RingElement& a, std::size_t n) {
    return kernel(multiplication_matrix(ring, a, n));
}

inline InvariantValue cohomological_dimension(const RingModel& ring) {
    if (ring.unbounded()) return InvariantValue::unbounded();
    auto top = ring.top_degree();
    std::size_t n = *top;
    while (n > 0 && ring.h_dim(n) == 0) --n;
    return InvariantValue::finite(n);
}

inline std::pair<RingElement, RingElement> restriction_components(const DirectSumRingModel& ring, const RingElement& x) {
    return ring.split(x);
}

inline RingElement element_from_generator(const RingModel& ring, std::size_t index) {
    if (index >= ring.h_dim(1))
        throw InvalidArgument("element_from_generator: index " + std::to_string(index) + " out of range for " +
                              ring.describe());
    return ring.basis_element(1, index);
}

} // namespace galcoh

#endif // GALCOH_RING_MODEL_HPP
