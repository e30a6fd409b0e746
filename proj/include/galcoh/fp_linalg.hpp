#ifndef GALCOH_FP_LINALG_HPP
#define GALCOH_FP_LINALG_HPP

// Exact linear algebra over a prime field F_p.
//
// Matrices are dense and row-major. Subspaces are stored by a basis in
// reduced row-echelon form, so two equal subspaces compare equal entry by
// entry. Every operation is a pure function of its arguments.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "galcoh/error.hpp"

namespace galcoh {

using Residue = std::uint32_t;

/// The prime field F_p. Primality is checked by trial division.
class PrimeField {
public:
    static constexpr std::uint32_t max_prime = 65521;

    explicit PrimeField(std::uint32_t p) : p_(p) {
        if (!is_prime(p) || p > max_prime) {
            throw InvalidArgument("PrimeField: " + std::to_string(p) + " is not a supported prime");
        }
    }

    [[nodiscard]] std::uint32_t p() const noexcept { return p_; }

    [[nodiscard]] Residue reduce(std::int64_t x) const noexcept {
        auto r = x % static_cast<std::int64_t>(p_);
        return static_cast<Residue>(r < 0 ? r + p_ : r);
    }
    [[nodiscard]] Residue add(Residue a, Residue b) const noexcept {
        Residue s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    [[nodiscard]] Residue sub(Residue a, Residue b) const noexcept { return a >= b ? a - b : a + p_ - b; }
    [[nodiscard]] Residue neg(Residue a) const noexcept { return a == 0 ? 0 : p_ - a; }
    [[nodiscard]] Residue mul(Residue a, Residue b) const noexcept {
        return static_cast<Residue>((static_cast<std::uint64_t>(a) * b) % p_);
    }
    [[nodiscard]] Residue inv(Residue a) const {
        if (a == 0) throw InvalidArgument("PrimeField: zero has no inverse");
        // Fermat: a^(p-2)
        return pow(a, p_ - 2);
    }
    [[nodiscard]] Residue pow(Residue a, std::uint64_t e) const noexcept {
        Residue result = 1 % p_;
        Residue base = a % p_;
        while (e > 0) {
            if (e & 1U) result = mul(result, base);
            base = mul(base, base);
            e >>= 1U;
        }
        return result;
    }

    static constexpr bool is_prime(std::uint32_t n) noexcept {
        if (n < 2) return false;
        for (std::uint32_t d = 2; d * d <= n; ++d) {
            if (n % d == 0) return false;
        }
        return true;
    }

    friend bool operator==(const PrimeField&, const PrimeField&) = default;

private:
    std::uint32_t p_;
};

/// A vector of residues mod p.
class FpVector {
public:
    FpVector(PrimeField field, std::size_t length) : field_(field), entries_(length, 0) {}

    FpVector(PrimeField field, std::span<const std::int64_t> values) : field_(field) {
        entries_.reserve(values.size());
        for (auto v : values) entries_.push_back(field.reduce(v));
    }

    FpVector(PrimeField field, std::initializer_list<std::int64_t> values)
        : FpVector(field, std::span<const std::int64_t>(values.begin(), values.size())) {}

    static FpVector unit(PrimeField field, std::size_t length, std::size_t index) {
        FpVector v(field, length);
        if (index >= length) throw InvalidArgument("FpVector::unit: index out of range");
        v.entries_[index] = 1;
        return v;
    }

    [[nodiscard]] const PrimeField& field() const noexcept { return field_; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] Residue operator[](std::size_t i) const { return entries_[i]; }
    [[nodiscard]] std::span<const Residue> entries() const noexcept { return entries_; }

    void set(std::size_t i, std::int64_t value) { entries_.at(i) = field_.reduce(value); }

    [[nodiscard]] bool is_zero() const noexcept {
        return std::all_of(entries_.begin(), entries_.end(), [](Residue r) { return r == 0; });
    }

    FpVector& operator+=(const FpVector& o) {
        check_compatible(o);
        for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] = field_.add(entries_[i], o.entries_[i]);
        return *this;
    }
    FpVector& operator-=(const FpVector& o) {
        check_compatible(o);
        for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] = field_.sub(entries_[i], o.entries_[i]);
        return *this;
    }
    [[nodiscard]] FpVector scaled(Residue c) const {
        FpVector out(*this);
        for (auto& e : out.entries_) e = field_.mul(e, c);
        return out;
    }

    friend FpVector operator+(FpVector a, const FpVector& b) { return a += b; }
    friend FpVector operator-(FpVector a, const FpVector& b) { return a -= b; }
    friend bool operator==(const FpVector&, const FpVector&) = default;

    friend std::ostream& operator<<(std::ostream& os, const FpVector& v) {
        os << '(';
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
        return os << ')';
    }

private:
    void check_compatible(const FpVector& o) const {
        if (!(field_ == o.field_) || entries_.size() != o.entries_.size()) {
            throw DimensionMismatch("FpVector: incompatible operands");
        }
    }

    PrimeField field_;
    std::vector<Residue> entries_;
};

/// Dense row-major matrix over F_p. Zero rows or columns are allowed.
class FpMatrix {
public:
    FpMatrix(PrimeField field, std::size_t rows, std::size_t cols)
        : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    /// Builds from nested rows; all rows must have length `cols`.
    FpMatrix(PrimeField field, std::size_t rows, std::size_t cols,
             const std::vector<std::vector<std::int64_t>>& values)
        : FpMatrix(field, rows, cols) {
        if (values.size() != rows) throw DimensionMismatch("FpMatrix: row count mismatch");
        for (std::size_t r = 0; r < rows; ++r) {
            if (values[r].size() != cols) throw DimensionMismatch("FpMatrix: column count mismatch");
            for (std::size_t c = 0; c < cols; ++c) data_[r * cols + c] = field.reduce(values[r][c]);
        }
    }

    static FpMatrix from_rows(PrimeField field, const std::vector<std::vector<std::int64_t>>& values) {
        std::size_t cols = values.empty() ? 0 : values.front().size();
        return FpMatrix(field, values.size(), cols, values);
    }

    static FpMatrix identity(PrimeField field, std::size_t n) {
        FpMatrix m(field, n, n);
        for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1;
        return m;
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    static FpMatrix from_columns(PrimeField field, std::size_t rows, const std::vector<FpVector>& columns) {
        FpMatrix m(field, rows, columns.size());
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (columns[c].size() != rows) throw DimensionMismatch("FpMatrix::from_columns: length mismatch");
            for (std::size_t r = 0; r < rows; ++r) m.data_[r * m.cols_ + c] = columns[c][r];
        }
        return m;
    }

    static FpMatrix from_row_vectors(PrimeField field, std::size_t cols, const std::vector<FpVector>& rows) {
        FpMatrix m(field, rows.size(), cols);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != cols) throw DimensionMismatch("FpMatrix::from_row_vectors: length mismatch");
            for (std::size_t c = 0; c < cols; ++c) m.data_[r * cols + c] = rows[r][c];
        }
        return m;
    }

    [[nodiscard]] const PrimeField& field() const noexcept { return field_; }
    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }

    [[nodiscard]] Residue at(std::size_t r, std::size_t c) const { return data_.at(r * cols_ + c); }
    void set(std::size_t r, std::size_t c, std::int64_t value) { data_.at(r * cols_ + c) = field_.reduce(value); }

    [[nodiscard]] FpVector row(std::size_t r) const {
        FpVector v(field_, cols_);
        for (std::size_t c = 0; c < cols_; ++c) v.set(c, data_[r * cols_ + c]);
        return v;
    }
    [[nodiscard]] FpVector column(std::size_t c) const {
        FpVector v(field_, rows_);
        for (std::size_t r = 0; r < rows_; ++r) v.set(r, data_[r * cols_ + c]);
        return v;
    }

    [[nodiscard]] bool is_zero() const noexcept {
        return std::all_of(data_.begin(), data_.end(), [](Residue r) { return r == 0; });
    }

    [[nodiscard]] FpMatrix transposed() const {
        FpMatrix t(field_, cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t.data_[c * rows_ + r] = data_[r * cols_ + c];
        return t;
    }

    [[nodiscard]] FpVector apply(const FpVector& v) const {
        if (v.size() != cols_ || !(v.field() == field_)) throw DimensionMismatch("FpMatrix::apply: shape mismatch");
        FpVector out(field_, rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            std::uint64_t acc = 0;
            for (std::size_t c = 0; c < cols_; ++c) {
                acc += static_cast<std::uint64_t>(data_[r * cols_ + c]) * v[c];
                if ((c & 0xFF) == 0xFF) acc %= field_.p();
            }
            out.set(r, static_cast<std::int64_t>(acc % field_.p()));
        }
        return out;
    }

    friend FpMatrix operator*(const FpMatrix& a, const FpMatrix& b) {
        if (a.cols_ != b.rows_ || !(a.field_ == b.field_)) throw DimensionMismatch("FpMatrix: product shape mismatch");
        FpMatrix out(a.field_, a.rows_, b.cols_);
        const auto p = a.field_.p();
        std::vector<std::uint64_t> acc(b.cols_);
        for (std::size_t r = 0; r < a.rows_; ++r) {
            std::fill(acc.begin(), acc.end(), 0);
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const std::uint64_t x = a.data_[r * a.cols_ + k];
                if (x == 0) continue;
                for (std::size_t c = 0; c < b.cols_; ++c) acc[c] = (acc[c] + x * b.data_[k * b.cols_ + c]) % p;
            }
            for (std::size_t c = 0; c < b.cols_; ++c) out.data_[r * b.cols_ + c] = static_cast<Residue>(acc[c]);
        }
        return out;
    }

    friend FpMatrix operator+(const FpMatrix& a, const FpMatrix& b) { return a.combine(b, false); }
    friend FpMatrix operator-(const FpMatrix& a, const FpMatrix& b) { return a.combine(b, true); }

    [[nodiscard]] FpMatrix power(std::uint64_t e) const {
        if (!is_square()) throw DimensionMismatch("FpMatrix::power: matrix is not square");
        FpMatrix result = identity(field_, rows_);
        FpMatrix base = *this;
        while (e > 0) {
            if (e & 1U) result = result * base;
            e >>= 1U;
            if (e > 0) base = base * base;
        }
        return result;
    }

    /// Rows of `top` followed by rows of `bottom`.
    static FpMatrix stack(const FpMatrix& top, const FpMatrix& bottom) {
        if (top.cols_ != bottom.cols_ || !(top.field_ == bottom.field_))
            throw DimensionMismatch("FpMatrix::stack: column mismatch");
        FpMatrix out(top.field_, top.rows_ + bottom.rows_, top.cols_);
        std::copy(top.data_.begin(), top.data_.end(), out.data_.begin());
        std::copy(bottom.data_.begin(), bottom.data_.end(), out.data_.begin() + static_cast<std::ptrdiff_t>(top.data_.size()));
        return out;
    }

    [[nodiscard]] std::vector<std::vector<std::int64_t>> to_nested() const {
        std::vector<std::vector<std::int64_t>> out(rows_, std::vector<std::int64_t>(cols_));
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) out[r][c] = data_[r * cols_ + c];
        return out;
    }

    friend bool operator==(const FpMatrix&, const FpMatrix&) = default;

    friend std::ostream& operator<<(std::ostream& os, const FpMatrix& m) {
        os << '[';
        for (std::size_t r = 0; r < m.rows_; ++r) {
            os << (r ? "; " : "");
            for (std::size_t c = 0; c < m.cols_; ++c) os << (c ? " " : "") << m.at(r, c);
        }
        return os << ']';
    }

private:
    friend struct EchelonAccess;

    [[nodiscard]] FpMatrix combine(const FpMatrix& b, bool subtract) const {
        if (rows_ != b.rows_ || cols_ != b.cols_ || !(field_ == b.field_))
            throw DimensionMismatch("FpMatrix: sum shape mismatch");
        FpMatrix out(field_, rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i)
            out.data_[i] = subtract ? field_.sub(data_[i], b.data_[i]) : field_.add(data_[i], b.data_[i]);
        return out;
    }

    PrimeField field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Residue> data_;
};

/// Result of Gauss-Jordan elimination: the reduced matrix and its pivot columns.
struct Echelon {
    FpMatrix reduced;
    std::vector<std::size_t> pivots;

    [[nodiscard]] std::size_t rank() const noexcept { return pivots.size(); }
};

struct EchelonAccess {
    static std::vector<Residue>& data(FpMatrix& m) { return m.data_; }
};

/// Reduced row-echelon form with pivot columns strictly increasing; zero rows
/// are kept at the bottom so the shape is unchanged.
inline Echelon echelon(const FpMatrix& m) {
    Echelon out{m, {}};
    const auto& f = m.field();
    auto& d = EchelonAccess::data(out.reduced);
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    auto at = [&](std::size_t r, std::size_t c) -> Residue& { return d[r * cols + c]; };

    std::size_t pivot_row = 0;
    for (std::size_t c = 0; c < cols && pivot_row < rows; ++c) {
        std::size_t r = pivot_row;
        while (r < rows && at(r, c) == 0) ++r;
        if (r == rows) continue;
        if (r != pivot_row) {
            for (std::size_t k = 0; k < cols; ++k) std::swap(at(r, k), at(pivot_row, k));
        }
        const Residue inv = f.inv(at(pivot_row, c));
        if (inv != 1) {
            for (std::size_t k = c; k < cols; ++k) at(pivot_row, k) = f.mul(at(pivot_row, k), inv);
        }
        for (std::size_t other = 0; other < rows; ++other) {
            if (other == pivot_row) continue;
            const Residue factor = at(other, c);
            if (factor == 0) continue;
            for (std::size_t k = c; k < cols; ++k)
                at(other, k) = f.sub(at(other, k), f.mul(factor, at(pivot_row, k)));
        }
        out.pivots.push_back(c);
        ++pivot_row;
    }
    return out;
}

inline FpMatrix rref(const FpMatrix& m) { return echelon(m).reduced; }

inline std::size_t rank(const FpMatrix& m) { return echelon(m).rank(); }

/// A linear subspace of F_p^n held by its canonical (reduced row-echelon) basis.
class Subspace {
public:
    /// The zero subspace of F_p^ambient.
    Subspace(PrimeField field, std::size_t ambient) : basis_(field, 0, ambient) {}

    /// Row space of `generators`.
    static Subspace row_space(const FpMatrix& generators) {
        Echelon e = echelon(generators);
        Subspace s(generators.field(), generators.cols());
        FpMatrix basis(generators.field(), e.rank(), generators.cols());
        for (std::size_t r = 0; r < e.rank(); ++r)
            for (std::size_t c = 0; c < generators.cols(); ++c) basis.set(r, c, e.reduced.at(r, c));
        s.basis_ = std::move(basis);
        s.pivots_ = std::move(e.pivots);
        return s;
    }

    static Subspace span(PrimeField field, std::size_t ambient, const std::vector<FpVector>& vectors) {
        return row_space(FpMatrix::from_row_vectors(field, ambient, vectors));
    }

    static Subspace full(PrimeField field, std::size_t ambient) {
        return row_space(FpMatrix::identity(field, ambient));
    }

    [[nodiscard]] const PrimeField& field() const noexcept { return basis_.field(); }
    [[nodiscard]] std::size_t ambient_dim() const noexcept { return basis_.cols(); }
    [[nodiscard]] std::size_t dim() const noexcept { return basis_.rows(); }
    [[nodiscard]] bool is_zero() const noexcept { return dim() == 0; }
    [[nodiscard]] bool is_full() const noexcept { return dim() == ambient_dim(); }
    [[nodiscard]] const FpMatrix& basis() const noexcept { return basis_; }
    [[nodiscard]] const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

    [[nodiscard]] std::vector<FpVector> basis_vectors() const {
        std::vector<FpVector> out;
        out.reserve(dim());
        for (std::size_t r = 0; r < dim(); ++r) out.push_back(basis_.row(r));
        return out;
    }

    /// Remainder of `v` after elimination against the echelon basis.
    [[nodiscard]] FpVector reduce(const FpVector& v) const {
        check_vector(v);
        FpVector rem = v;
        const auto& f = field();
        for (std::size_t r = 0; r < dim(); ++r) {
            const Residue c = rem[pivots_[r]];
            if (c == 0) continue;
            for (std::size_t k = 0; k < ambient_dim(); ++k)
                rem.set(k, f.sub(rem[k], f.mul(c, basis_.at(r, k))));
        }
        return rem;
    }

    [[nodiscard]] bool contains(const FpVector& v) const { return reduce(v).is_zero(); }

    /// True iff `other` is a subspace of this one.
    [[nodiscard]] bool contains(const Subspace& other) const {
        check_same(other);
        for (std::size_t r = 0; r < other.dim(); ++r) {
            if (!contains(other.basis_.row(r))) return false;
        }
        return true;
    }

    /// Coordinates of `v` with respect to the canonical basis; `v` must lie in the subspace.
    [[nodiscard]] std::vector<Residue> coordinates(const FpVector& v) const {
        if (!contains(v)) throw InvalidArgument("Subspace::coordinates: vector not in subspace");
        std::vector<Residue> out(dim());
        for (std::size_t r = 0; r < dim(); ++r) out[r] = v[pivots_[r]];
        return out;
    }

    /// Orthogonal complement under the standard bilinear pairing.
    [[nodiscard]] Subspace complement() const;

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.basis_ == b.basis_;
    }

    friend std::ostream& operator<<(std::ostream& os, const Subspace& s) {
        return os << "Subspace(dim " << s.dim() << " in " << s.ambient_dim() << ", " << s.basis_ << ')';
    }

    void check_same(const Subspace& other) const {
        if (ambient_dim() != other.ambient_dim() || !(field() == other.field()))
            throw DimensionMismatch("Subspace: ambient spaces differ (" + std::to_string(ambient_dim()) + " vs " +
                                    std::to_string(other.ambient_dim()) + ")");
    }

private:
    void check_vector(const FpVector& v) const {
        if (v.size() != ambient_dim() || !(v.field() == field()))
            throw DimensionMismatch("Subspace: vector length " + std::to_string(v.size()) + " does not match ambient " +
                                    std::to_string(ambient_dim()));
    }

    FpMatrix basis_;
    std::vector<std::size_t> pivots_;
};

/// Null space {v : m v = 0} as a subspace of F_p^cols.
inline Subspace kernel(const FpMatrix& m) {
    const auto& f = m.field();
    Echelon e = echelon(m);
    const std::size_t n = m.cols();
    std::vector<bool> is_pivot(n, false);
    for (auto c : e.pivots) is_pivot[c] = true;

    std::vector<FpVector> gens;
    for (std::size_t free_col = 0; free_col < n; ++free_col) {
        if (is_pivot[free_col]) continue;
        FpVector v(f, n);
        v.set(free_col, 1);
        for (std::size_t r = 0; r < e.rank(); ++r) v.set(e.pivots[r], f.neg(e.reduced.at(r, free_col)));
        gens.push_back(std::move(v));
    }
    return Subspace::span(f, n, gens);
}

/// Column space of `m` as a subspace of F_p^rows.
inline Subspace image(const FpMatrix& m) { return Subspace::row_space(m.transposed()); }

inline Subspace Subspace::complement() const { return kernel(basis_); }

inline Subspace subspace_sum(const Subspace& u, const Subspace& v) {
    u.check_same(v);
    return Subspace::row_space(FpMatrix::stack(u.basis(), v.basis()));
}

/// u ∩ v as the common solution set of the equations cutting out u and v.
inline Subspace subspace_intersect(const Subspace& u, const Subspace& v) {
    u.check_same(v);
    const Subspace u_eqs = u.complement();
    const Subspace v_eqs = v.complement();
    return kernel(FpMatrix::stack(u_eqs.basis(), v_eqs.basis()));
}

/// True iff v ⊆ u.
inline bool subspace_contains(const Subspace& u, const Subspace& v) { return u.contains(v); }

/// Inverse of a square matrix; throws if singular.
inline FpMatrix inverse(const FpMatrix& m) {
    if (!m.is_square()) throw DimensionMismatch("inverse: matrix is not square");
    const std::size_t n = m.rows();
    FpMatrix aug(m.field(), n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug.set(r, c, m.at(r, c));
        aug.set(r, n + r, 1);
    }
    Echelon e = echelon(aug);
    if (e.rank() < n || (n > 0 && e.pivots[n - 1] != n - 1)) throw InvalidArgument("inverse: matrix is singular");
    FpMatrix out(m.field(), n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) out.set(r, c, e.reduced.at(r, n + c));
    return out;
}

/// Image of a subspace under a linear map.
inline Subspace map_subspace(const FpMatrix& m, const Subspace& s) {
    if (m.cols() != s.ambient_dim()) throw DimensionMismatch("map_subspace: shape mismatch");
    return image(m * s.basis().transposed());
}

/// Preimage {v : m v ∈ s}.
inline Subspace preimage(const FpMatrix& m, const Subspace& s) {
    if (m.rows() != s.ambient_dim()) throw DimensionMismatch("preimage: shape mismatch");
    // v ↦ (equations of s) · m v
    return kernel(s.complement().basis() * m);
}

/// Some x with m x = b, or nullopt when b is outside the column space.
inline std::optional<FpVector> solve(const FpMatrix& m, const FpVector& b) {
    if (b.size() != m.rows()) throw DimensionMismatch("solve: right-hand side length mismatch");
    const std::size_t n = m.cols();
    FpMatrix aug(m.field(), m.rows(), n + 1);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < n; ++c) aug.set(r, c, m.at(r, c));
        aug.set(r, n, b[r]);
    }
    Echelon e = echelon(aug);
    FpVector x(m.field(), n);
    for (std::size_t r = 0; r < e.rank(); ++r) {
        if (e.pivots[r] == n) return std::nullopt;
        x.set(e.pivots[r], e.reduced.at(r, n));
    }
    return x;
}

} // namespace galcoh

#endif // GALCOH_FP_LINALG_HPP
