#ifndef GALCOH_CRITERIA_HPP
#define GALCOH_CRITERIA_HPP

// Degree-by-degree freeness and triviality verdicts for H^n(E) as an
// F_p[Gal(E/F)]-module, E = F(a^{1/p}), evaluated entirely on the F side.
//
// Free at degree n:
//   p > 2   ann_{n-1}(a) = H^{n-1}(F)
//   p = 2   H^n(F) = ann_n(a) ⊕ (a) ∪ H^{n-1}(F)
// Trivial at degree n:
//   p > 2   (xi) ∪ H^{n-1} ⊆ (a) ∪ H^{n-1}  and  ann_n(a) = (a) ∪ H^{n-1}
//   p = 2   ann_n(a) ⊆ (a) ∪ ann_{n-1}((a) ∪ (-1))

#include <algorithm>
#include <cstddef>
#include <future>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "galcoh/fp_linalg.hpp"
#include "galcoh/ring_model.hpp"

namespace galcoh {

/// H^*(F) together with the classes (a), (xi_p), (-1) that determine E/F.
class ExtensionScenario {
public:
    ExtensionScenario(std::string name, RingPtr ring, RingElement a_class, RingElement xi_class,
                      RingElement minus_one_class, bool sum_of_squares, std::size_t degree_cap)
        : name_(std::move(name)),
          ring_(std::move(ring)),
          a_(std::move(a_class)),
          xi_(std::move(xi_class)),
          minus_one_(std::move(minus_one_class)),
          sum_of_squares_(sum_of_squares),
          degree_cap_(degree_cap) {
        if (!ring_) throw InvalidArgument("ExtensionScenario: missing ring model");
        for (const RingElement* e : {&a_, &xi_, &minus_one_}) {
            if (e->degree != 1) throw InvalidArgument("ExtensionScenario: distinguished classes must have degree 1");
            ring_->check(*e);
        }
        if (a_.is_zero()) throw InvalidArgument("ExtensionScenario: (a) must be nonzero, otherwise E/F has degree < p");
        if (p() == 2 && !(xi_ == minus_one_))
            throw InvalidArgument("ExtensionScenario: for p = 2 the classes (xi_2) and (-1) coincide");
        if (degree_cap_ == 0) throw InvalidArgument("ExtensionScenario: degree cap must be positive");
        if (auto faithful = ring_->faithful_degree(); faithful && degree_cap_ > *faithful)
            throw InvalidArgument("ExtensionScenario: degree cap " + std::to_string(degree_cap_) +
                                  " exceeds the faithful range " + std::to_string(*faithful) + " of " +
                                  ring_->describe());
    }

    /// Convenience: (xi) = (-1) = 0, the situation of every C((Γ))-based model.
    static ExtensionScenario with_trivial_units(std::string name, RingPtr ring, RingElement a_class,
                                                bool sum_of_squares, std::size_t degree_cap) {
        auto zero = ring->zero(1);
        return {std::move(name), std::move(ring), std::move(a_class), zero, zero, sum_of_squares, degree_cap};
    }

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] const RingModel& ring() const noexcept { return *ring_; }
    [[nodiscard]] const RingPtr& ring_ptr() const noexcept { return ring_; }
    [[nodiscard]] std::uint32_t p() const noexcept { return ring_->field().p(); }
    [[nodiscard]] const RingElement& a_class() const noexcept { return a_; }
    [[nodiscard]] const RingElement& xi_class() const noexcept { return xi_; }
    [[nodiscard]] const RingElement& minus_one_class() const noexcept { return minus_one_; }
    [[nodiscard]] bool sum_of_squares() const noexcept { return sum_of_squares_; }
    [[nodiscard]] std::size_t degree_cap() const noexcept { return degree_cap_; }

    /// The degree-2 class (a) ∪ (-1).
    [[nodiscard]] RingElement a_minus_one() const { return ring_->cup(a_, minus_one_); }
    /// The degree-2 class (a) ∪ (xi).
    [[nodiscard]] RingElement a_xi() const { return ring_->cup(a_, xi_); }

private:
    std::string name_;
    RingPtr ring_;
    RingElement a_;
    RingElement xi_;
    RingElement minus_one_;
    bool sum_of_squares_;
    std::size_t degree_cap_;
};

/// Subspaces that back the verdicts at one degree.
struct DegreeWitnesses {
    Subspace ann_prev;        // ann_{n-1}(a) ⊆ H^{n-1}
    Subspace ann;             // ann_n(a) ⊆ H^n
    Subspace cup_image;       // (a) ∪ H^{n-1} ⊆ H^n
    Subspace xi_cup_image;    // (xi) ∪ H^{n-1} ⊆ H^n
    Subspace trivial_target;  // right-hand side of the triviality containment
};

struct DegreeVerdict {
    std::size_t degree;
    bool free_verdict;
    bool trivial_verdict;
    std::size_t h_dim_prev;
    std::size_t h_dim;
    DegreeWitnesses witnesses;
};

inline DegreeWitnesses degree_witnesses(const ExtensionScenario& s, std::size_t n) {
    if (n == 0) throw InvalidArgument("criteria are stated for degrees n >= 1");
    const auto& ring = s.ring();
    DegreeWitnesses w{annihilator(ring, s.a_class(), n - 1), annihilator(ring, s.a_class(), n),
                      cup_image(ring, s.a_class(), n), cup_image(ring, s.xi_class(), n),
                      Subspace(ring.field(), ring.h_dim(n))};
    if (s.p() == 2) {
        // (a) ∪ ann_{n-1}((a) ∪ (-1))
        const Subspace inner = annihilator(ring, s.a_minus_one(), n - 1);
        w.trivial_target = map_subspace(multiplication_matrix(ring, s.a_class(), n - 1), inner);
    } else {
        w.trivial_target = w.cup_image;
    }
    return w;
}

inline bool free_from_witnesses(const ExtensionScenario& s, const DegreeWitnesses& w) {
    if (s.p() != 2) return w.ann_prev.is_full();
    return subspace_intersect(w.ann, w.cup_image).is_zero() && subspace_sum(w.ann, w.cup_image).is_full();
}

inline bool trivial_from_witnesses(const ExtensionScenario& s, const DegreeWitnesses& w) {
    if (s.p() != 2) return w.cup_image.contains(w.xi_cup_image) && w.ann == w.cup_image;
    return w.trivial_target.contains(w.ann);
}

inline bool free_criterion(const ExtensionScenario& s, std::size_t n) {
    return free_from_witnesses(s, degree_witnesses(s, n));
}

inline bool trivial_criterion(const ExtensionScenario& s, std::size_t n) {
    return trivial_from_witnesses(s, degree_witnesses(s, n));
}

inline DegreeVerdict evaluate_degree(const ExtensionScenario& s, std::size_t n) {
    DegreeWitnesses w = degree_witnesses(s, n);
    const bool f = free_from_witnesses(s, w);
    const bool t = trivial_from_witnesses(s, w);
    return {n, f, t, s.ring().h_dim(n - 1), s.ring().h_dim(n), std::move(w)};
}

/// Verdicts for degrees 1..degree_cap. With jobs > 1 the degrees are split
/// across worker threads; the result does not depend on the split.
inline std::vector<DegreeVerdict> evaluate_degrees(const ExtensionScenario& s, unsigned jobs = 1) {
    const std::size_t cap = s.degree_cap();
    std::vector<std::optional<DegreeVerdict>> slots(cap);
    if (jobs <= 1) {
        for (std::size_t n = 1; n <= cap; ++n) slots[n - 1] = evaluate_degree(s, n);
    } else {
        std::vector<std::future<void>> workers;
        for (unsigned w = 0; w < jobs; ++w) {
            workers.push_back(std::async(std::launch::async, [&, w] {
                for (std::size_t n = 1 + w; n <= cap; n += jobs) slots[n - 1] = evaluate_degree(s, n);
            }));
        }
        for (auto& f : workers) f.get();
    }
    std::vector<DegreeVerdict> out;
    out.reserve(cap);
    for (auto& v : slots) out.push_back(std::move(*v));
    return out;
}

/// Verdicts beyond the degree cap, known in closed form from the exterior
/// annihilator law ann_n(a) = (a) ∪ H^{n-1} when a lives in one exterior factor.
struct ClosedFormTail {
    bool free_stable;         // free for all n >= free_from; otherwise never free again
    std::size_t free_from;
    bool trivial_stable;
    std::size_t trivial_from;
    std::string rule;
};

namespace detail {

inline const ExteriorRingModel* as_exterior(const RingModel& r) { return dynamic_cast<const ExteriorRingModel*>(&r); }

} // namespace detail

/// Only for unbounded models with (xi) = (-1) = 0 and (a) supported in a single
/// exterior factor; nullopt whenever the rule is not known to apply.
inline std::optional<ClosedFormTail> closed_form_tail(const ExtensionScenario& s) {
    const auto& ring = s.ring();
    if (!ring.unbounded() || !s.xi_class().is_zero() || !s.minus_one_class().is_zero()) return std::nullopt;

    if (detail::as_exterior(ring)) {
        // ann_n(a) = (a) ∪ H^{n-1} ⊊ H^n for every n: never free, always trivial.
        return ClosedFormTail{false, 0, true, 1, "exterior: ann_n(a) = (a) u H^{n-1} != H^n for all n"};
    }
    const auto* sum = dynamic_cast<const DirectSumRingModel*>(&ring);
    if (!sum) return std::nullopt;
    const auto* left = detail::as_exterior(*sum->left());
    const auto* right = detail::as_exterior(*sum->right());
    if (!left || !right) return std::nullopt;

    auto [a_left, a_right] = sum->split(s.a_class());
    if (!a_left.is_zero() && !a_right.is_zero()) return std::nullopt;
    const ExteriorRingModel* carrier = a_left.is_zero() ? right : left;
    const ExteriorRingModel* other = a_left.is_zero() ? left : right;

    ClosedFormTail tail{};
    if (carrier->unbounded()) {
        tail.free_stable = false;
    } else {
        tail.free_stable = true;
        tail.free_from = *carrier->top_degree() + 1;
    }
    if (other->unbounded()) {
        tail.trivial_stable = false;
    } else {
        tail.trivial_stable = true;
        tail.trivial_from = *other->top_degree() + 1;
    }
    tail.rule = std::string("direct sum, (a) in ") + (a_left.is_zero() ? "right" : "left") +
                " factor: ann_n(a) = (a) u H^{n-1}(carrier) + H^n(other)";
    return tail;
}

namespace detail {

/// sup of the degrees whose verdict is false, given evaluated verdicts and
/// what is known past the cap.
template <class Pick>
InvariantValue last_failure(const ExtensionScenario& s, const std::vector<DegreeVerdict>& verdicts, Pick pick,
                            bool& tail_contradiction, bool for_free) {
    std::size_t last = 0;
    for (const auto& v : verdicts)
        if (!pick(v)) last = v.degree;
    const std::size_t cap = s.degree_cap();
    tail_contradiction = false;

    if (!s.ring().unbounded()) {
        const std::size_t cd = cohomological_dimension(s.ring()).value();
        return cap >= cd + 1 ? InvariantValue::finite(last) : InvariantValue::at_least(last);
    }
    auto tail = closed_form_tail(s);
    if (!tail) return InvariantValue::at_least(last);
    const bool stable = for_free ? tail->free_stable : tail->trivial_stable;
    const std::size_t from = for_free ? tail->free_from : tail->trivial_from;
    if (!stable) {
        // the rule says every degree fails; evaluated degrees must agree
        for (const auto& v : verdicts)
            if (pick(v)) tail_contradiction = true;
        return InvariantValue::unbounded();
    }
    for (const auto& v : verdicts)
        if (v.degree >= from && !pick(v)) tail_contradiction = true;
    if (cap + 1 < from) return InvariantValue::at_least(last);
    return InvariantValue::finite(last);
}

} // namespace detail

inline InvariantValue compute_cf(const ExtensionScenario& s, const std::vector<DegreeVerdict>& verdicts) {
    bool contradiction = false;
    return detail::last_failure(s, verdicts, [](const DegreeVerdict& v) { return v.free_verdict; }, contradiction, true);
}

inline InvariantValue compute_ct(const ExtensionScenario& s, const std::vector<DegreeVerdict>& verdicts) {
    bool contradiction = false;
    return detail::last_failure(s, verdicts, [](const DegreeVerdict& v) { return v.trivial_verdict; }, contradiction, false);
}

inline InvariantValue compute_cf(const ExtensionScenario& s) { return compute_cf(s, evaluate_degrees(s)); }
inline InvariantValue compute_ct(const ExtensionScenario& s) { return compute_ct(s, evaluate_degrees(s)); }
inline InvariantValue compute_cd(const ExtensionScenario& s) { return cohomological_dimension(s.ring()); }

struct NamedCondition {
    std::string name;
    bool value;
};

/// A family of conditions proven equivalent; `agree` is false on any split.
struct EquivalenceGroup {
    std::string name;
    std::vector<NamedCondition> conditions;
    bool agree = true;
};

struct EquivalenceSuiteResult {
    std::size_t degree;
    std::vector<EquivalenceGroup> groups;
    /// Proven implications between groups that failed on this input.
    std::vector<std::string> broken_implications;

    [[nodiscard]] bool consistent() const {
        return broken_implications.empty() &&
               std::all_of(groups.begin(), groups.end(), [](const EquivalenceGroup& g) { return g.agree; });
    }
};

namespace detail {

inline EquivalenceGroup make_group(std::string name, std::vector<NamedCondition> conds) {
    EquivalenceGroup g{std::move(name), std::move(conds), true};
    for (const auto& c : g.conditions)
        if (c.value != g.conditions.front().value) g.agree = false;
    return g;
}

} // namespace detail

/// Evaluates the equivalent forms of the freeness theorem and its corollaries
/// at degree n. E-side maps are replaced by their F-side images:
/// ker(res) = (a) ∪ H^{n-1} and cor H^n(E) = ann_n(a).
inline EquivalenceSuiteResult equivalence_suite_thm1(const ExtensionScenario& s, std::size_t n) {
    if (n == 0) throw InvalidArgument("equivalence_suite_thm1: degree must be >= 1");
    const auto& ring = s.ring();
    const RingElement& a = s.a_class();
    EquivalenceSuiteResult out{n, {}, {}};

    const FpMatrix mult_prev = multiplication_matrix(ring, a, n - 1);  // H^{n-1} -> H^n
    const Subspace ann_prev = annihilator(ring, a, n - 1);
    const bool ann_prev_full = ann_prev.is_full();
    const bool res_injective = image(mult_prev).is_zero();
    const bool cor_surjective = rank(mult_prev) == 0;
    const Subspace ann_prev_axi = annihilator(ring, s.a_xi(), n - 1);
    const bool injsur2 = ann_prev_full && ann_prev == ann_prev_axi && ann_prev_axi.is_full();

    out.groups.push_back(detail::make_group(
        "norm-surjectivity",
        {{"H^{n-1} = ann_{n-1}(a)", ann_prev_full},
         {"H^{n-1} = ann_{n-1}(a) = ann_{n-1}(a,xi)", injsur2},
         {"res: H^n(F) -> H^n(E) injective [(a) u H^{n-1} = 0]", res_injective},
         {"cor: H^{n-1}(E) -> H^{n-1}(F) surjective [rank of (a) u - is 0]", cor_surjective}}));

    const bool free_now = free_criterion(s, n);
    if (s.p() != 2) {
        out.groups.push_back(detail::make_group("freeness (p > 2)",
                                                {{"H^n(E) free", free_now},
                                                 {"H^{n-1} = ann_{n-1}(a)", ann_prev_full},
                                                 {"res injective", res_injective},
                                                 {"cor surjective", cor_surjective}}));
    } else {
        const Subspace ann = annihilator(ring, a, n);
        const Subspace cupim = cup_image(ring, a, n);
        const Subspace ann_prev_am1 = annihilator(ring, s.a_minus_one(), n - 1);
        const bool first_clause = ann_prev == ann_prev_am1;
        // cor H^n(E) = ann_n(a) by exactness of the four-term sequence at k_n F
        const Subspace norm_image_f = kernel(multiplication_matrix(ring, a, n));
        const bool c2 = first_clause && subspace_sum(norm_image_f, cupim).is_full();
        const bool c3 = first_clause && subspace_sum(ann, cupim).is_full();
        const bool c4 = subspace_intersect(ann, cupim).is_zero() && subspace_sum(ann, cupim).is_full();
        out.groups.push_back(detail::make_group(
            "freeness (p = 2)",
            {{"H^n(E) free", free_now},
             {"ann_{n-1}(a) = ann_{n-1}(a,-1) and H^n = cor H^n(E) + (a) u H^{n-1}", c2},
             {"ann_{n-1}(a) = ann_{n-1}(a,-1) and H^n = ann_n(a) + (a) u H^{n-1}", c3},
             {"H^n = ann_n(a) (+) (a) u H^{n-1}", c4}}));
        // ann_{n-1}(a) = H^{n-1} forces freeness from degree n on
        if (ann_prev_full && !free_now) out.broken_implications.push_back("ann_{n-1}(a) = H^{n-1} but H^n(E) not free");
    }
    return out;
}

struct HeredityReport {
    bool free_required;  // p > 2 or a is a sum of two squares
    std::vector<std::size_t> free_violations;     // degrees n with free(n-1) true, free(n) false
    std::vector<std::size_t> trivial_violations;
    std::vector<std::size_t> norm_violations;     // ann_{n-1}(a) = H^{n-1} not inherited
    std::vector<std::size_t> h1_violations;       // H^1(E) free where it never can be

    [[nodiscard]] bool free_monotone() const { return free_violations.empty(); }
    [[nodiscard]] bool trivial_monotone() const { return trivial_violations.empty(); }
    /// Non-monotone freeness is tolerated when heredity is not guaranteed.
    [[nodiscard]] bool free_nonmonotone_permitted() const { return !free_required && !free_violations.empty(); }
    [[nodiscard]] bool ok() const {
        return trivial_violations.empty() && norm_violations.empty() && h1_violations.empty() &&
               (!free_required || free_violations.empty());
    }
};

inline HeredityReport hereditary_check(const ExtensionScenario& s, const std::vector<DegreeVerdict>& verdicts) {
    HeredityReport r{s.p() != 2 || s.sum_of_squares(), {}, {}, {}, {}};
    bool seen_free = false;
    bool seen_trivial = false;
    bool seen_norm = false;
    for (const auto& v : verdicts) {
        if (seen_free && !v.free_verdict) r.free_violations.push_back(v.degree);
        if (seen_trivial && !v.trivial_verdict) r.trivial_violations.push_back(v.degree);
        const bool norm = v.witnesses.ann_prev.is_full();
        if (seen_norm && !norm) r.norm_violations.push_back(v.degree);
        seen_free = seen_free || v.free_verdict;
        seen_trivial = seen_trivial || v.trivial_verdict;
        seen_norm = seen_norm || norm;
    }
    if (!verdicts.empty() && verdicts.front().degree == 1 && verdicts.front().free_verdict &&
        (s.p() != 2 || s.minus_one_class().is_zero()))
        r.h1_violations.push_back(1);
    return r;
}

inline HeredityReport hereditary_check(const ExtensionScenario& s) { return hereditary_check(s, evaluate_degrees(s)); }

struct CriteriaReport {
    std::vector<DegreeVerdict> verdicts;
    InvariantValue cf = InvariantValue::finite(0);
    InvariantValue ct = InvariantValue::finite(0);
    InvariantValue cd = InvariantValue::finite(0);
    std::optional<ClosedFormTail> tail;
    HeredityReport heredity;
    std::vector<EquivalenceSuiteResult> equivalences;
    std::vector<std::string> consistency_failures;

    [[nodiscard]] bool complete() const { return !cf.is_incomplete() && !ct.is_incomplete(); }
    [[nodiscard]] bool consistent() const { return consistency_failures.empty(); }
};

inline CriteriaReport evaluate(const ExtensionScenario& s, unsigned jobs = 1) {
    CriteriaReport r;
    r.verdicts = evaluate_degrees(s, jobs);
    bool free_contra = false;
    bool trivial_contra = false;
    r.cf = detail::last_failure(s, r.verdicts, [](const DegreeVerdict& v) { return v.free_verdict; }, free_contra, true);
    r.ct = detail::last_failure(s, r.verdicts, [](const DegreeVerdict& v) { return v.trivial_verdict; }, trivial_contra,
                                false);
    r.cd = compute_cd(s);
    r.tail = closed_form_tail(s);
    r.heredity = hereditary_check(s, r.verdicts);

    for (std::size_t n = 1; n <= s.degree_cap(); ++n) {
        auto eq = equivalence_suite_thm1(s, n);
        if (!eq.consistent()) r.consistency_failures.push_back("equivalent conditions disagree at degree " + std::to_string(n));
        r.equivalences.push_back(std::move(eq));
    }
    if (free_contra) r.consistency_failures.push_back("free verdicts contradict the closed-form tail");
    if (trivial_contra) r.consistency_failures.push_back("trivial verdicts contradict the closed-form tail");
    if (!r.heredity.ok()) r.consistency_failures.push_back("hereditary property violated");
    if (r.cd.is_finite()) {
        if (r.cf.is_finite() && r.cf.value() > r.cd.value()) r.consistency_failures.push_back("cf exceeds cd");
        if (r.ct.is_finite() && r.ct.value() > r.cd.value()) r.consistency_failures.push_back("ct exceeds cd");
    }
    return r;
}

} // namespace galcoh

#endif // GALCOH_CRITERIA_HPP
