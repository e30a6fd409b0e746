#include <chrono>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

#include "galcoh/io.hpp"
#include "oracles.hpp"

using namespace galcoh;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int id, const Outcome& o) {
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << o.detail << std::endl;
    if (!o.pass) ++failures;
}

template <class Fn>
void run(int id, Fn fn) {
    try {
        report(id, fn());
    } catch (const std::exception& e) {
        report(id, {false, std::string("exception: ") + e.what()});
    }
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << std::fixed << x;
    return os.str();
}

Outcome split_grid(bool free_side) {
    const auto t0 = Clock::now();
    std::size_t cases = 0;
    std::vector<std::string> bad;
    for (std::uint32_t p : {2u, 3u, 5u})
        for (std::size_t n = 1; n <= 5; ++n)
            for (std::size_t m = n; m <= 5; ++m) {
                auto s = free_side ? build_free_example(p, n, m) : build_trivial_example(p, n, m);
                auto r = evaluate(s);
                const InvariantValue& c = free_side ? r.cf : r.ct;
                ++cases;
                if (!(c == InvariantValue::finite(n)) || !(r.cd == InvariantValue::finite(m)))
                    bad.push_back(s.name() + " gave " + (free_side ? "cf=" : "ct=") + c.to_string() +
                                  " cd=" + r.cd.to_string());
            }
    const double secs = seconds_since(t0);
    std::string detail = std::to_string(cases - bad.size()) + "/" + std::to_string(cases) + " grid points with " +
                         (free_side ? "cf" : "ct") + " = n and cd = m in " + fmt(secs) + " s";
    if (!bad.empty()) detail += "; first mismatch: " + bad.front();
    if (secs >= 10.0) detail += "; exceeded 10 s";
    return {bad.empty() && secs < 10.0, detail};
}

Outcome q2_case() {
    auto fx = build_q2_fixture();
    const bool d1 = free_criterion(fx.scenario, 1);
    const bool d2 = free_criterion(fx.scenario, 2);
    auto h = hereditary_check(fx.scenario);
    const bool pass = d1 && !d2 && h.free_nonmonotone_permitted() && h.ok();
    return {pass, std::string("free verdicts degree 1 = ") + (d1 ? "true" : "false") + ", degree 2 = " +
                      (d2 ? "true" : "false") + "; non-monotone freeness " +
                      (h.free_nonmonotone_permitted() ? "flagged as permitted" : "not flagged")};
}

Outcome infinite_cases() {
    std::vector<std::string> bad;
    std::size_t checks = 0;
    for (std::uint32_t p : {2u, 3u, 5u}) {
        auto h = evaluate(build_henselian_example(p, 8));
        ++checks;
        bool all_false = true;
        for (const auto& v : h.verdicts) all_false = all_false && !v.free_verdict;
        if (!h.cf.is_unbounded() || !all_false || h.verdicts.size() != 8)
            bad.push_back("henselian p=" + std::to_string(p) + " cf=" + h.cf.to_string());
        for (std::size_t n = 1; n <= 3; ++n) {
            for (auto variant : {MixedVariant::free, MixedVariant::trivial}) {
                auto s = build_mixed_infinite_example(p, n, 8, variant);
                auto r = evaluate(s);
                ++checks;
                const InvariantValue& c = variant == MixedVariant::free ? r.cf : r.ct;
                if (!(c == InvariantValue::finite(n)) || !r.cd.is_unbounded())
                    bad.push_back(s.name() + " gave " + c.to_string() + ", cd " + r.cd.to_string());
            }
        }
    }
    std::string detail = std::to_string(checks - bad.size()) + "/" + std::to_string(checks) +
                         " infinite scenarios match (henselian cf unbounded, all free verdicts false through cap 8; "
                         "mixed cf = n or ct = n with cd unbounded)";
    if (!bad.empty()) detail += "; first mismatch: " + bad.front();
    return {bad.empty(), detail};
}

Outcome module_oracle() {
    const auto t0 = Clock::now();
    std::mt19937 rng(20240601);
    std::size_t total = 0;
    std::size_t disagreements = 0;
    for (std::uint32_t p : {2u, 3u, 5u}) {
        for (int i = 0; i < 400; ++i) {
            auto known = oracle::random_known_module(static_cast<int>(p), 24, rng);
            CyclicGroupModule m(PrimeField(p), oracle::to_lib(known.sigma, static_cast<int>(p), known.sigma.size()));
            const bool all_p = std::all_of(known.lengths.begin(), known.lengths.end(), [&](auto l) { return l == p; });
            const bool all_1 = std::all_of(known.lengths.begin(), known.lengths.end(), [](auto l) { return l == 1; });
            const bool free = is_free(m);
            const bool ok = free == all_p && (h2_dim(m) == 0) == all_p && is_trivial(m) == all_1 &&
                            decompose(m).lengths == known.lengths;
            ++total;
            if (!ok) ++disagreements;
        }
    }
    const double secs = seconds_since(t0);
    return {disagreements == 0 && total >= 1000 && secs < 30.0,
            std::to_string(disagreements) + " disagreements over " + std::to_string(total) +
                " random modules (dim <= 24, p in {2,3,5}) in " + fmt(secs) + " s"};
}

Outcome annihilator_law() {
    std::size_t checks = 0;
    std::size_t mismatches = 0;
    for (std::uint32_t p : {2u, 3u, 5u}) {
        const PrimeField f(p);
        for (std::size_t m = 1; m <= 5; ++m) {
            ExteriorRingModel ring(f, m);
            for (std::size_t g = 0; g < m; ++g) {
                RingElement a = element_from_generator(ring, g);
                for (std::size_t n = 0; n <= m + 1; ++n) {
                    std::vector<std::uint32_t> src;
                    std::vector<std::uint32_t> dst;
                    for (std::size_t i = 0; i < ring.h_dim(n); ++i) src.push_back(ring.monomial(n, i));
                    for (std::size_t i = 0; i < ring.h_dim(n + 1); ++i) dst.push_back(ring.monomial(n + 1, i));
                    std::vector<FpVector> kernel_vectors;
                    if (!src.empty()) {
                        const auto mult = oracle::generator_multiplication(g, src, dst, static_cast<int>(p));
                        for (const auto& v : oracle::kernel_basis(mult, src.size(), static_cast<int>(p))) {
                            FpVector x(f, src.size());
                            for (std::size_t i = 0; i < v.size(); ++i) x.set(i, v[i]);
                            kernel_vectors.push_back(x);
                        }
                    }
                    const Subspace brute = Subspace::span(f, src.size(), kernel_vectors);
                    const Subspace ann = annihilator(ring, a, n);
                    const Subspace cup = cup_image(ring, a, n);
                    ++checks;
                    if (!(ann == cup) || !(ann == brute)) ++mismatches;
                }
            }
        }
    }
    return {mismatches == 0, std::to_string(mismatches) + " mismatches over " + std::to_string(checks) +
                                 " (p, m, generator, degree) cases of ann_n(a) = (a) u H^{n-1}"};
}

std::vector<io::ScenarioInput> bundled_scenarios(std::vector<std::string>& names) {
    std::vector<io::ScenarioInput> out;
    std::vector<std::filesystem::path> paths;
    for (const auto& entry : std::filesystem::directory_iterator(GALCOH_EXAMPLES_DIR)) paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end());
    for (const auto& path : paths) {
        if (path.extension() != ".json") continue;
        io::Json doc = io::load_file(path.string());
        if (!doc.is_object() || !doc.contains("schema") || doc["schema"] != io::scenario_schema) continue;
        try {
            out.push_back(io::parse_scenario(doc));
            names.push_back(path.filename().string());
        } catch (const io::InputError&) {
            // intentionally malformed examples are exercised by the CLI tests
        }
    }
    for (const auto& e : fixture_catalogue()) {
        Fixture fx = e.build();
        out.push_back({std::move(fx.scenario), std::move(fx.eside), io::Json()});
        names.push_back("fixture:" + e.name);
    }
    return out;
}

bool is_corrupted(const std::string& name) { return name.find("corrupted") != std::string::npos; }

Outcome equivalence_suites() {
    std::vector<std::string> names;
    auto scenarios = bundled_scenarios(names);
    std::size_t suites = 0;
    std::vector<std::string> bad;
    bool corrupted_rejected = false;
    bool corrupted_seen = false;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        const auto& s = scenarios[i].scenario;
        if (is_corrupted(names[i])) {
            corrupted_seen = true;
            corrupted_rejected = io::scenario_report(scenarios[i]).exit_code == io::exit_inconsistent;
            continue;
        }
        for (std::size_t n = 1; n <= s.degree_cap(); ++n) {
            ++suites;
            if (!equivalence_suite_thm1(s, n).consistent()) bad.push_back(names[i] + " degree " + std::to_string(n));
        }
    }
    std::string detail = std::to_string(suites - bad.size()) + "/" + std::to_string(suites) + " suites consistent over " +
                         std::to_string(scenarios.size()) + " bundled scenarios; corrupted fixture " +
                         (corrupted_rejected ? "rejected with exit code 3" : "NOT rejected");
    if (!bad.empty()) detail += "; first disagreement: " + bad.front();
    return {bad.empty() && corrupted_seen && corrupted_rejected, detail};
}

Outcome heredity() {
    std::vector<std::string> names;
    auto scenarios = bundled_scenarios(names);
    std::size_t checked = 0;
    std::size_t violations = 0;
    std::string first;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        if (is_corrupted(names[i])) continue;
        const auto& s = scenarios[i].scenario;
        auto h = hereditary_check(s);
        ++checked;
        std::size_t v = h.trivial_violations.size();
        if (h.free_required) v += h.free_violations.size();
        if (v > 0 && first.empty()) first = names[i];
        violations += v;
    }
    std::string detail = std::to_string(violations) + " heredity violations over " + std::to_string(checked) +
                         " bundled scenarios";
    if (!first.empty()) detail += "; first in " + first;
    return {violations == 0, detail};
}

// ---------------------------------------------------------------- criterion 8

FpMatrix random_invertible(PrimeField f, std::size_t n, std::mt19937& rng) {
    auto [a, a_inv] = oracle::random_invertible(n, static_cast<int>(f.p()), rng);
    return oracle::to_lib(a, static_cast<int>(f.p()), n);
}

/// Searches for an invertible phi on k_nE with phi sigma = sigma' phi,
/// phi res = res' and cor' phi = cor, by solving the linear conditions and
/// sampling the affine solution space.
bool isomorphic_degree(const ESideDegree& a, const ESideDegree& b, std::mt19937& rng) {
    const PrimeField f = a.module.field();
    const std::size_t e = a.module.dim();
    const std::size_t h = a.restriction.cols();
    if (b.module.dim() != e || b.restriction.cols() != h) return false;
    const std::size_t nv = e * e;
    auto var = [e](std::size_t r, std::size_t c) { return r * e + c; };
    std::vector<FpVector> rows;
    std::vector<std::int64_t> rhs;
    auto add = [&](FpVector row, std::int64_t value) {
        rows.push_back(std::move(row));
        rhs.push_back(value);
    };
    const FpMatrix& s1 = a.module.sigma();
    const FpMatrix& s2 = b.module.sigma();
    for (std::size_t r = 0; r < e; ++r)
        for (std::size_t c = 0; c < e; ++c) {
            FpVector row(f, nv);
            for (std::size_t k = 0; k < e; ++k) {
                row.set(var(r, k), static_cast<std::int64_t>(row[var(r, k)]) + s1.at(k, c));
                row.set(var(k, c), static_cast<std::int64_t>(row[var(k, c)]) - static_cast<std::int64_t>(s2.at(r, k)));
            }
            add(std::move(row), 0);
        }
    for (std::size_t r = 0; r < e; ++r)
        for (std::size_t c = 0; c < h; ++c) {
            FpVector row(f, nv);
            for (std::size_t k = 0; k < e; ++k)
                row.set(var(r, k), static_cast<std::int64_t>(row[var(r, k)]) + a.restriction.at(k, c));
            add(std::move(row), b.restriction.at(r, c));
        }
    for (std::size_t r = 0; r < h; ++r)
        for (std::size_t c = 0; c < e; ++c) {
            FpVector row(f, nv);
            for (std::size_t k = 0; k < e; ++k)
                row.set(var(k, c), static_cast<std::int64_t>(row[var(k, c)]) + b.norm.at(r, k));
            add(std::move(row), a.norm.at(r, c));
        }
    const FpMatrix system = FpMatrix::from_row_vectors(f, nv, rows);
    FpVector target(f, rows.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) target.set(i, rhs[i]);
    auto particular = solve(system, target);
    if (!particular) return false;
    const auto homogeneous = kernel(system).basis_vectors();
    for (int attempt = 0; attempt < 200; ++attempt) {
        FpVector x = *particular;
        if (attempt > 0)
            for (const auto& v : homogeneous) x += v.scaled(static_cast<Residue>(rng() % f.p()));
        FpMatrix phi(f, e, e);
        for (std::size_t r = 0; r < e; ++r)
            for (std::size_t c = 0; c < e; ++c) phi.set(r, c, x[var(r, c)]);
        if (rank(phi) == e) return true;
    }
    return false;
}

struct MutationTally {
    std::size_t fixtures = 0;
    std::size_t chains = 0;
    std::size_t chain_failures = 0;
    std::size_t trials = 0;
    std::size_t detected = 0;
    std::size_t isomorphic_misses = 0;
    std::size_t other_misses = 0;
};

void mutation_round(const ExtensionScenario& s, const ESideData& data, MutationTally& t, std::mt19937& rng) {
    ++t.fixtures;
    if (!verify_eside_data(s, data).ok()) ++t.chain_failures;
    const PrimeField f = data.field();
    for (const auto& [m, hi] : data.degrees()) {
        if (m == 0 || !data.has(m - 1)) continue;
        const auto& lo = data.at(m - 1);
        const std::size_t total = lo.module.dim() + s.ring().h_dim(m - 1) + s.ring().h_dim(m) + hi.module.dim();
        if (total > 12) continue;
        ++t.chains;
        if (!verify_esext_sequence(s, data, m).exact()) ++t.chain_failures;
        for (int which = 0; which < 2; ++which) {
            const std::size_t degree = which == 0 ? m - 1 : m;
            const FpMatrix& original = which == 0 ? lo.norm : hi.restriction;
            for (std::size_t r = 0; r < original.rows(); ++r)
                for (std::size_t c = 0; c < original.cols(); ++c)
                    for (std::uint32_t delta = 1; delta < f.p(); ++delta) {
                        FpMatrix changed = original;
                        changed.set(r, c, static_cast<std::int64_t>(original.at(r, c)) + delta);
                        ++t.trials;
                        auto degrees = data.degrees();
                        auto& target = degrees.at(degree);
                        (which == 0 ? target.norm : target.restriction) = changed;
                        std::optional<ESideData> mutated;
                        bool caught = false;
                        try {
                            mutated.emplace(f, degrees, data.delta());
                            caught = !verify_eside_data(s, *mutated).ok();
                        } catch (const Error&) {
                            caught = true;
                        }
                        if (caught) {
                            ++t.detected;
                        } else if (isomorphic_degree(data.at(degree), mutated->at(degree), rng)) {
                            ++t.isomorphic_misses;
                        } else {
                            ++t.other_misses;
                        }
                    }
        }
    }
}

Outcome mutation_sensitivity() {
    const auto t0 = Clock::now();
    std::vector<Fixture> fixtures;
    for (std::uint32_t p : {2u, 3u, 5u})
        for (std::size_t n = 1; n <= 3; ++n)
            for (std::size_t m = n; m <= 3; ++m)
                for (auto s : {build_free_example(p, n, m), build_trivial_example(p, n, m)})
                    fixtures.push_back({s, synthesize_eside_data(s, s.degree_cap())});
    fixtures.push_back(build_q2_fixture());

    std::mt19937 rng(8);
    MutationTally tally;
    for (const auto& fx : fixtures) {
        mutation_round(fx.scenario, *fx.eside, tally, rng);
        std::map<std::size_t, FpMatrix> changes;
        for (const auto& [n, deg] : fx.eside->degrees())
            changes.emplace(n, random_invertible(fx.eside->field(), deg.module.dim(), rng));
        mutation_round(fx.scenario, change_basis(*fx.eside, changes), tally, rng);
    }
    const std::size_t missed = tally.isomorphic_misses + tally.other_misses;
    const double rate = tally.trials == 0 ? 0.0 : 100.0 * static_cast<double>(tally.detected) / tally.trials;
    const bool pass = tally.chain_failures == 0 && tally.trials >= 500 && missed == 0;
    std::string detail = std::to_string(tally.chains) + " four-term chains over " + std::to_string(tally.fixtures) +
                         " consistent fixtures (total dim <= 12), " + std::to_string(tally.chain_failures) +
                         " failing; mutation detection " + std::to_string(tally.detected) + "/" +
                         std::to_string(tally.trials) + " (" + fmt(rate) + "%); undetected: " +
                         std::to_string(tally.isomorphic_misses) + " isomorphic to the original data, " +
                         std::to_string(tally.other_misses) + " non-isomorphic; " + fmt(seconds_since(t0)) + " s";
    return {pass, detail};
}

} // namespace

int main() {
    run(1, [] { return split_grid(true); });
    run(2, [] { return split_grid(false); });
    run(3, q2_case);
    run(4, infinite_cases);
    run(5, module_oracle);
    run(6, annihilator_law);
    run(7, equivalence_suites);
    run(8, mutation_sensitivity);
    run(9, heredity);
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
