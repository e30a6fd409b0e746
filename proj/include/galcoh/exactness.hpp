#ifndef GALCOH_EXACTNESS_HPP
#define GALCOH_EXACTNESS_HPP

// Exactness of chains of F_p-linear maps, and checks of the sequences and
// lemma conclusions relating H^*(F) to user-supplied E-side data.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "galcoh/criteria.hpp"
#include "galcoh/cyclic_module.hpp"
#include "galcoh/fp_linalg.hpp"
#include "galcoh/ring_model.hpp"

namespace galcoh {

/// V_0 -> V_1 -> ... -> V_k with maps[i] : V_i -> V_{i+1} (a dims[i+1] x dims[i] matrix).
class LinearChain {
public:
    LinearChain(PrimeField field, std::vector<std::size_t> dims, std::vector<FpMatrix> maps,
                std::vector<std::string> labels = {})
        : field_(field), dims_(std::move(dims)), maps_(std::move(maps)), labels_(std::move(labels)) {
        if (dims_.empty() || maps_.size() + 1 != dims_.size())
            throw DimensionMismatch("LinearChain: need exactly one more space than maps");
        for (std::size_t i = 0; i < maps_.size(); ++i) {
            const auto& m = maps_[i];
            if (!(m.field() == field_) || m.cols() != dims_[i] || m.rows() != dims_[i + 1])
                throw DimensionMismatch("LinearChain: map " + std::to_string(i + 1) + " is " + std::to_string(m.rows()) +
                                        "x" + std::to_string(m.cols()) + ", expected " + std::to_string(dims_[i + 1]) +
                                        "x" + std::to_string(dims_[i]));
        }
        if (labels_.empty()) {
            for (std::size_t i = 0; i < dims_.size(); ++i) labels_.push_back("V" + std::to_string(i + 1));
        }
        if (labels_.size() != dims_.size()) throw InvalidArgument("LinearChain: one label per space");
    }

    [[nodiscard]] const PrimeField& field() const noexcept { return field_; }
    [[nodiscard]] const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    [[nodiscard]] const std::vector<FpMatrix>& maps() const noexcept { return maps_; }
    [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }

    /// Transposed maps in reverse order: V_k^* -> ... -> V_0^*.
    [[nodiscard]] LinearChain dual() const {
        std::vector<std::size_t> d(dims_.rbegin(), dims_.rend());
        std::vector<FpMatrix> m;
        for (auto it = maps_.rbegin(); it != maps_.rend(); ++it) m.push_back(it->transposed());
        std::vector<std::string> l;
        for (auto it = labels_.rbegin(); it != labels_.rend(); ++it) l.push_back(*it + "*");
        return {field_, std::move(d), std::move(m), std::move(l)};
    }

private:
    PrimeField field_;
    std::vector<std::size_t> dims_;
    std::vector<FpMatrix> maps_;
    std::vector<std::string> labels_;
};

/// Exactness at one interior space. Positions are 1-based space indices.
struct PositionResult {
    std::size_t position;
    std::string label;
    bool exact;
    std::size_t kernel_excess;  // dim ker(out) - dim(im(in) ∩ ker(out))
    std::size_t image_excess;   // dim im(in) - dim(im(in) ∩ ker(out))
};

struct ExactnessResult {
    std::vector<PositionResult> positions;

    [[nodiscard]] bool exact() const {
        for (const auto& p : positions)
            if (!p.exact) return false;
        return true;
    }
    [[nodiscard]] std::vector<std::size_t> failing_positions() const {
        std::vector<std::size_t> out;
        for (const auto& p : positions)
            if (!p.exact) out.push_back(p.position);
        return out;
    }
};

inline ExactnessResult verify_exact(const LinearChain& chain) {
    ExactnessResult r;
    const auto& maps = chain.maps();
    for (std::size_t i = 1; i + 1 < chain.dims().size(); ++i) {
        const Subspace im = image(maps[i - 1]);
        const Subspace ker = kernel(maps[i]);
        const std::size_t common = subspace_intersect(im, ker).dim();
        r.positions.push_back({i + 1, chain.labels()[i], im == ker, ker.dim() - common, im.dim() - common});
    }
    return r;
}

/// E-side data at one degree: k_nE as a module, res = i_E : H^n(F) -> k_nE and
/// cor = N_{E/F} : k_nE -> H^n(F).
struct ESideDegree {
    CyclicGroupModule module;
    FpMatrix restriction;
    FpMatrix norm;
};

/// Per-degree E-side data plus an optional class delta in k_1E.
///
/// Construction enforces, at every degree:
///   sigma res = res          (F-classes are G-fixed)
///   cor sigma = cor
///   res cor = (sigma - 1)^(p-1)
///   cor res = 0              (cor res = multiplication by p)
class ESideData {
public:
    ESideData(PrimeField field, std::map<std::size_t, ESideDegree> degrees, std::optional<FpVector> delta = std::nullopt)
        : field_(field), degrees_(std::move(degrees)), delta_(std::move(delta)) {
        for (const auto& [n, d] : degrees_) validate(n, d);
        if (delta_) {
            auto it = degrees_.find(1);
            if (it == degrees_.end()) throw IncompleteData("ESideData: delta needs degree-1 data");
            if (delta_->size() != it->second.module.dim())
                throw DimensionMismatch("ESideData: delta does not lie in k_1E");
        }
    }

    [[nodiscard]] const PrimeField& field() const noexcept { return field_; }
    [[nodiscard]] const std::map<std::size_t, ESideDegree>& degrees() const noexcept { return degrees_; }
    [[nodiscard]] const std::optional<FpVector>& delta() const noexcept { return delta_; }
    [[nodiscard]] bool has(std::size_t n) const { return degrees_.count(n) != 0; }

    [[nodiscard]] const ESideDegree& at(std::size_t n) const {
        auto it = degrees_.find(n);
        if (it == degrees_.end()) throw IncompleteData("ESideData: no data for degree " + std::to_string(n));
        return it->second;
    }

private:
    void validate(std::size_t n, const ESideDegree& d) const {
        const std::string where = "ESideData degree " + std::to_string(n) + ": ";
        const std::size_t e = d.module.dim();
        if (!(d.module.field() == field_)) throw DimensionMismatch(where + "module over a different prime");
        if (d.restriction.rows() != e || d.norm.cols() != e || d.norm.rows() != d.restriction.cols())
            throw DimensionMismatch(where + "res/cor shapes do not match k_nE and H^n(F)");
        const FpMatrix& sigma = d.module.sigma();
        if (!(sigma * d.restriction == d.restriction)) throw InvalidArgument(where + "sigma res != res");
        if (!(d.norm * sigma == d.norm)) throw InvalidArgument(where + "cor sigma != cor");
        if (!(d.restriction * d.norm == d.module.norm_operator()))
            throw InvalidArgument(where + "res cor != (sigma - 1)^(p-1)");
        if (!(d.norm * d.restriction).is_zero()) throw InvalidArgument(where + "cor res != 0");
    }

    PrimeField field_;
    std::map<std::size_t, ESideDegree> degrees_;
    std::optional<FpVector> delta_;
};

/// Re-express E-side data in new bases of the k_nE: for each listed degree the
/// invertible P sends old coordinates to new ones. Unlisted degrees are kept.
inline ESideData change_basis(const ESideData& d, const std::map<std::size_t, FpMatrix>& changes) {
    std::map<std::size_t, ESideDegree> out;
    for (const auto& [n, deg] : d.degrees()) {
        auto it = changes.find(n);
        if (it == changes.end()) {
            out.emplace(n, deg);
            continue;
        }
        const FpMatrix& p = it->second;
        const FpMatrix p_inv = inverse(p);
        out.emplace(n, ESideDegree{deg.module.conjugated(p), p * deg.restriction, deg.norm * p_inv});
    }
    std::optional<FpVector> delta = d.delta();
    if (delta) {
        auto it = changes.find(1);
        if (it != changes.end()) delta = it->second.apply(*delta);
    }
    return {d.field(), std::move(out), std::move(delta)};
}

namespace detail {

inline void check_shapes(const ExtensionScenario& s, const ESideData& d, std::size_t n) {
    const auto& deg = d.at(n);
    if (deg.restriction.cols() != s.ring().h_dim(n))
        throw DimensionMismatch("E-side data at degree " + std::to_string(n) + " expects dim H^n(F) = " +
                                std::to_string(deg.restriction.cols()) + ", model has " +
                                std::to_string(s.ring().h_dim(n)));
}

} // namespace detail

/// k_{m-1}E --cor--> H^{m-1}(F) --(a) u--> H^m(F) --res--> k_mE, exact at both middle terms.
inline ExactnessResult verify_esext_sequence(const ExtensionScenario& s, const ESideData& d, std::size_t m) {
    if (m == 0) throw InvalidArgument("verify_esext_sequence: m must be >= 1");
    if (!d.has(m - 1) || !d.has(m))
        throw IncompleteData("verify_esext_sequence: need E-side data in degrees " + std::to_string(m - 1) + " and " +
                             std::to_string(m));
    detail::check_shapes(s, d, m - 1);
    detail::check_shapes(s, d, m);
    const auto& lo = d.at(m - 1);
    const auto& hi = d.at(m);
    const auto& ring = s.ring();
    LinearChain chain(ring.field(), {lo.module.dim(), ring.h_dim(m - 1), ring.h_dim(m), hi.module.dim()},
                      {lo.norm, multiplication_matrix(ring, s.a_class(), m - 1), hi.restriction},
                      {"k_" + std::to_string(m - 1) + "E", "H^" + std::to_string(m - 1) + "(F)",
                       "H^" + std::to_string(m) + "(F)", "k_" + std::to_string(m) + "E"});
    return verify_exact(chain);
}

/// H^{m-1}(F) --(a) u--> H^m(F) --res--> k_mE, exact in the middle; the right
/// half of the four-term sequence, usable without degree m-1 data (for m = 0
/// the left term is zero and the check is injectivity of res).
inline ExactnessResult verify_restriction_kernel(const ExtensionScenario& s, const ESideData& d, std::size_t m) {
    detail::check_shapes(s, d, m);
    const auto& ring = s.ring();
    const auto& top = d.at(m);
    const std::size_t h_prev = m == 0 ? 0 : ring.h_dim(m - 1);
    FpMatrix mult = m == 0 ? FpMatrix(ring.field(), ring.h_dim(0), 0) : multiplication_matrix(ring, s.a_class(), m - 1);
    LinearChain chain(ring.field(), {h_prev, ring.h_dim(m), top.module.dim()}, {std::move(mult), top.restriction},
                      {m == 0 ? std::string("0") : "H^" + std::to_string(m - 1) + "(F)", "H^" + std::to_string(m) + "(F)",
                       "k_" + std::to_string(m) + "E"});
    return verify_exact(chain);
}

struct SequenceCheck {
    bool refused = false;
    std::string reason;
    ExactnessResult exactness;
    /// Set when cor does not land in the final term.
    bool norm_outside_target = false;

    [[nodiscard]] bool passed() const { return !refused && !norm_outside_target && exactness.exact(); }
};

/// 0 -> ann_{m-1}(a) -> H^{m-1} --(a) u--> H^m --res--> k_mE --cor--> (a) u ann_{m-1}((a) u (xi)) -> 0,
/// asserted only when H^m(E) is a trivial module. `final_term` replaces the
/// last nonzero term when given.
inline SequenceCheck verify_trivher_sequence(const ExtensionScenario& s, const ESideData& d, std::size_t m,
                                             const std::optional<Subspace>& final_term = std::nullopt) {
    SequenceCheck out;
    if (m == 0) throw InvalidArgument("verify_trivher_sequence: m must be >= 1");
    if (!trivial_criterion(s, m)) {
        out.refused = true;
        out.reason = "H^" + std::to_string(m) + "(E) is not a trivial module; the six-term sequence is not asserted";
        return out;
    }
    if (!d.has(m)) throw IncompleteData("verify_trivher_sequence: need E-side data in degree " + std::to_string(m));
    detail::check_shapes(s, d, m);
    const auto& ring = s.ring();
    const auto& f = ring.field();
    const auto& top = d.at(m);
    const FpMatrix mult = multiplication_matrix(ring, s.a_class(), m - 1);

    const Subspace ann_prev = annihilator(ring, s.a_class(), m - 1);
    const Subspace target =
        final_term ? *final_term : map_subspace(mult, annihilator(ring, s.a_xi(), m - 1));
    if (target.ambient_dim() != ring.h_dim(m)) throw DimensionMismatch("verify_trivher_sequence: final term not in H^m");

    // cor in coordinates of the final term
    FpMatrix norm_in_target(f, target.dim(), top.module.dim());
    for (std::size_t j = 0; j < top.module.dim(); ++j) {
        const FpVector col = top.norm.column(j);
        if (!target.contains(col)) {
            out.norm_outside_target = true;
            continue;
        }
        const auto coords = target.coordinates(col);
        for (std::size_t i = 0; i < coords.size(); ++i) norm_in_target.set(i, j, coords[i]);
    }

    const std::size_t h_prev = ring.h_dim(m - 1);
    const std::string ms = std::to_string(m);
    const std::string ps = std::to_string(m - 1);
    LinearChain chain(f, {0, ann_prev.dim(), h_prev, ring.h_dim(m), top.module.dim(), target.dim(), 0},
                      {FpMatrix(f, ann_prev.dim(), 0), ann_prev.basis().transposed(), mult, top.restriction,
                       norm_in_target, FpMatrix(f, 0, target.dim())},
                      {"0", "ann_" + ps + "(a)", "H^" + ps + "(F)", "H^" + ms + "(F)", "k_" + ms + "E",
                       "(a) u ann_" + ps + "(a,xi)", "0"});
    out.exactness = verify_exact(chain);
    return out;
}

/// One lemma conclusion checked against E-side data.
struct LemmaCheck {
    std::string name;
    bool applicable;
    bool holds;
    std::string detail;
};

struct LemmaReport {
    std::size_t degree;
    std::vector<LemmaCheck> checks;

    [[nodiscard]] bool ok() const {
        for (const auto& c : checks)
            if (c.applicable && !c.holds) return false;
        return true;
    }
};

inline LemmaReport verify_eside_lemmas(const ExtensionScenario& s, const ESideData& d, std::size_t n) {
    if (n == 0) throw InvalidArgument("verify_eside_lemmas: degree must be >= 1");
    detail::check_shapes(s, d, n);
    const auto& ring = s.ring();
    const auto& deg = d.at(n);
    const auto& mod = deg.module;
    LemmaReport r{n, {}};

    const Subspace fixed = fixed_points(mod);
    const Subspace nimg = norm_image(mod);
    const Subspace res_cor = image(deg.restriction * deg.norm);
    const Subspace res_img = image(deg.restriction);
    const Subspace cor_img = image(deg.norm);
    const Subspace ann_prev = annihilator(ring, s.a_class(), n - 1);
    const Subspace cupim = cup_image(ring, s.a_class(), n);
    const bool p2 = s.p() == 2;

    // Module verdicts from the data against the F-side criteria.
    {
        const bool free_data = is_free(mod);
        const bool free_f = free_criterion(s, n);
        r.checks.push_back({"freeness: data agrees with criterion", true, free_data == free_f,
                            std::string("module ") + (free_data ? "free" : "not free") + ", criterion " +
                                (free_f ? "free" : "not free")});
        const bool triv_data = is_trivial(mod);
        const bool triv_f = trivial_criterion(s, n);
        r.checks.push_back({"triviality: data agrees with criterion", true, triv_data == triv_f,
                            std::string("module ") + (triv_data ? "trivial" : "not trivial") + ", criterion " +
                                (triv_f ? "trivial" : "not trivial")});
    }

    // (k_nE)^G = res cor k_nE = (sigma-1)^(p-1) k_nE = res H^n(F)
    {
        bool hyp = false;
        if (!p2) {
            hyp = ann_prev.is_full();
        } else {
            const Subspace ann_prev_am1 = annihilator(ring, s.a_minus_one(), n - 1);
            hyp = ann_prev == ann_prev_am1 && subspace_sum(cor_img, cupim).is_full();
        }
        const bool holds = fixed == res_cor && res_cor == nimg && nimg == res_img;
        r.checks.push_back({"fixed points are norms", hyp, holds,
                            "dims: fixed " + std::to_string(fixed.dim()) + ", res cor " + std::to_string(res_cor.dim()) +
                                ", N " + std::to_string(nimg.dim()) + ", res " + std::to_string(res_img.dim())});
    }

    // res((xi) u H^{n-1}) = res cor k_nE = 0  implies  sigma = 1 on k_nE
    {
        const Subspace xi_img = cup_image(ring, s.xi_class(), n);
        const bool xi_part = p2 || map_subspace(deg.restriction, xi_img).is_zero();
        const bool hyp = xi_part && res_cor.is_zero();
        r.checks.push_back({"all of k_nE is fixed", hyp, is_trivial(mod),
                            "fixed " + std::to_string(fixed.dim()) + " of " + std::to_string(mod.dim())});
    }

    if (p2) {
        // (a) u ann_{n-1}(a,-1) ⊆ cor k_nE
        const Subspace lhs = map_subspace(multiplication_matrix(ring, s.a_class(), n - 1),
                                          annihilator(ring, s.a_minus_one(), n - 1));
        r.checks.push_back({"(a) u ann_{n-1}(a,-1) inside cor k_nE", true, cor_img.contains(lhs),
                            "dim lhs " + std::to_string(lhs.dim()) + ", dim cor image " + std::to_string(cor_img.dim())});
    }

    // free H^n(E) with heredity hypotheses: res injective and cor surjective
    {
        const bool hyp = (s.p() != 2 || s.sum_of_squares()) && is_free(mod);
        const bool injective = kernel(deg.restriction).is_zero();
        const bool surjective = cor_img.is_full();
        r.checks.push_back({"free degree: res injective, cor surjective", hyp, injective && surjective,
                            std::string("res ") + (injective ? "injective" : "not injective") + ", cor " +
                                (surjective ? "surjective" : "not surjective")});
    }

    if (n == 1 && d.delta()) {
        const FpVector& delta = *d.delta();
        const bool fixed_delta = mod.sigma().apply(delta) == delta;
        const bool norm_is_a = deg.norm.apply(delta) == s.a_class().coords;
        const bool hyp = p2 && s.sum_of_squares();
        r.checks.push_back({"delta fixed with cor(delta) = (a)", hyp, fixed_delta && norm_is_a,
                            std::string(fixed_delta ? "fixed" : "not fixed") + ", cor(delta) " +
                                (norm_is_a ? "= (a)" : "!= (a)")});
    }
    return r;
}

/// Every check that E-side data admits: the four-term sequence at each m with
/// data in degrees m-1 and m (its right half when only degree m is given), the
/// six-term sequence where it is asserted, and the lemma conclusions at each
/// positive degree.
struct ESideVerification {
    std::vector<std::pair<std::size_t, ExactnessResult>> esext;
    std::vector<std::pair<std::size_t, SequenceCheck>> trivher;
    std::vector<LemmaReport> lemmas;

    [[nodiscard]] std::size_t defect_count() const {
        std::size_t n = 0;
        for (const auto& [m, e] : esext) n += e.failing_positions().size();
        for (const auto& [m, t] : trivher)
            if (!t.refused && !t.passed()) ++n;
        for (const auto& l : lemmas)
            for (const auto& c : l.checks)
                if (c.applicable && !c.holds) ++n;
        return n;
    }
    [[nodiscard]] bool ok() const { return defect_count() == 0; }
};

inline ESideVerification verify_eside_data(const ExtensionScenario& s, const ESideData& d) {
    ESideVerification v;
    for (const auto& [n, deg] : d.degrees()) {
        detail::check_shapes(s, d, n);
        if (n >= 1 && d.has(n - 1))
            v.esext.emplace_back(n, verify_esext_sequence(s, d, n));
        else
            v.esext.emplace_back(n, verify_restriction_kernel(s, d, n));
    }
    for (const auto& [n, deg] : d.degrees()) {
        if (n == 0) continue;
        v.trivher.emplace_back(n, verify_trivher_sequence(s, d, n));
        v.lemmas.push_back(verify_eside_lemmas(s, d, n));
    }
    return v;
}

} // namespace galcoh

#endif // GALCOH_EXACTNESS_HPP
