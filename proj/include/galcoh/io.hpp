#ifndef GALCOH_IO_HPP
#define GALCOH_IO_HPP

// JSON input schemas (scenario, module, chain) and report documents.
// Reports are built with insertion-ordered objects so that equal inputs give
// byte-identical output.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "galcoh/criteria.hpp"
#include "galcoh/cyclic_module.hpp"
#include "galcoh/exactness.hpp"
#include "galcoh/ring_model.hpp"
#include "galcoh/scenarios.hpp"

namespace galcoh::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* scenario_schema = "galcoh-scenario/1";
inline constexpr const char* module_schema = "galcoh-module/1";
inline constexpr const char* chain_schema = "galcoh-chain/1";
inline constexpr const char* report_schema = "galcoh-report/1";

/// Malformed input; `where` is a JSON pointer into the document, or a
/// line/column position for syntax errors.
class InputError : public Error {
public:
    InputError(std::string where, const std::string& what)
        : Error(where.empty() ? what : where + ": " + what), where_(std::move(where)), message_(what) {}
    [[nodiscard]] const std::string& where() const noexcept { return where_; }
    [[nodiscard]] const std::string& message() const noexcept { return message_; }

private:
    std::string where_;
    std::string message_;
};

inline Json parse_text(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(source, std::string("invalid JSON (") + e.what() + ")");
    }
}

inline Json load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str(), path);
}

namespace detail {

inline std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
inline std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

inline const Json& require(const Json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) throw InputError(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw InputError(child(path, key), "missing required field");
    return *it;
}

inline std::int64_t as_int(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) throw InputError(path, "expected an integer");
    return j.get<std::int64_t>();
}

inline std::size_t as_size(const Json& j, const std::string& path) {
    const auto v = as_int(j, path);
    if (v < 0) throw InputError(path, "expected a non-negative integer");
    return static_cast<std::size_t>(v);
}

inline PrimeField as_prime(const Json& j, const std::string& path) {
    const auto v = as_int(j, path);
    if (v < 2 || v > PrimeField::max_prime || !PrimeField::is_prime(static_cast<std::uint32_t>(v)))
        throw InputError(path, std::to_string(v) + " is not a supported prime");
    return PrimeField(static_cast<std::uint32_t>(v));
}

inline void check_schema(const Json& doc, const char* expected, const std::string& path) {
    const Json& s = require(doc, "schema", path);
    if (!s.is_string() || s.get<std::string>() != expected)
        throw InputError(child(path, "schema"), std::string("expected \"") + expected + "\"");
}

inline std::vector<std::int64_t> as_int_vector(const Json& j, std::size_t length, const std::string& path) {
    if (!j.is_array()) throw InputError(path, "expected an array of integers");
    if (j.size() != length)
        throw InputError(path, "expected " + std::to_string(length) + " entries, found " + std::to_string(j.size()));
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_int(j[i], child(path, i)));
    return out;
}

/// Row-major nested array with the given shape; a matrix without rows is [].
inline FpMatrix as_matrix(const Json& j, PrimeField f, std::size_t rows, std::size_t cols, const std::string& path) {
    if (!j.is_array()) throw InputError(path, "expected a matrix (array of rows)");
    if (j.size() != rows)
        throw InputError(path, "expected " + std::to_string(rows) + " rows, found " + std::to_string(j.size()));
    std::vector<std::vector<std::int64_t>> values;
    for (std::size_t r = 0; r < rows; ++r) values.push_back(as_int_vector(j[r], cols, child(path, r)));
    return FpMatrix(f, rows, cols, values);
}

/// Square matrix whose size is read from the data.
inline FpMatrix as_square_matrix(const Json& j, PrimeField f, const std::string& path) {
    if (!j.is_array()) throw InputError(path, "expected a square matrix");
    return as_matrix(j, f, j.size(), j.size(), path);
}

inline Json matrix_json(const FpMatrix& m) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m.at(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json vector_json(const FpVector& v) {
    Json out = Json::array();
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

inline Json subspace_json(const Subspace& s) {
    return Json{{"dim", s.dim()}, {"ambient_dim", s.ambient_dim()}, {"basis", matrix_json(s.basis())}};
}

inline Json invariant_json(const InvariantValue& v) {
    if (v.is_finite()) return v.value();
    return v.to_string();
}

inline RingPtr parse_model(const Json& j, PrimeField f, const std::string& path);

inline std::shared_ptr<const TableRingModel> parse_table(const Json& j, PrimeField f, const std::string& path) {
    if (j.contains("fixture")) {
        const Json& name = j["fixture"];
        if (!name.is_string()) throw InputError(child(path, "fixture"), "expected a fixture name");
        if (name.get<std::string>() != "q2") throw InputError(child(path, "fixture"), "unknown table fixture");
        if (f.p() != 2) throw InputError(path, "the q2 table is defined over F_2");
        return q2_ring();
    }
    const Json& dims_j = require(j, "dims", path);
    if (!dims_j.is_array()) throw InputError(child(path, "dims"), "expected an array of dimensions");
    std::vector<std::size_t> dims;
    for (std::size_t i = 0; i < dims_j.size(); ++i) dims.push_back(as_size(dims_j[i], child(child(path, "dims"), i)));
    std::vector<TableProduct> products;
    if (j.contains("products")) {
        const Json& ps = j["products"];
        const std::string ppath = child(path, "products");
        if (!ps.is_array()) throw InputError(ppath, "expected an array of products");
        for (std::size_t k = 0; k < ps.size(); ++k) {
            const std::string epath = child(ppath, k);
            const Json& left = require(ps[k], "left", epath);
            const Json& right = require(ps[k], "right", epath);
            auto l = as_int_vector(left, 2, child(epath, "left"));
            auto r = as_int_vector(right, 2, child(epath, "right"));
            for (auto v : {l[0], l[1], r[0], r[1]})
                if (v < 0) throw InputError(epath, "degrees and indices must be non-negative");
            const std::size_t deg = static_cast<std::size_t>(l[0] + r[0]);
            const std::size_t target = deg < dims.size() ? dims[deg] : 0;
            products.push_back({static_cast<std::size_t>(l[0]), static_cast<std::size_t>(l[1]),
                                static_cast<std::size_t>(r[0]), static_cast<std::size_t>(r[1]),
                                as_int_vector(require(ps[k], "value", epath), target, child(epath, "value"))});
        }
    }
    std::string name = "table";
    if (j.contains("name") && j["name"].is_string()) name = j["name"].get<std::string>();
    try {
        return std::make_shared<const TableRingModel>(f, dims, products, name);
    } catch (const Error& e) {
        throw InputError(path, e.what());
    }
}

inline RingPtr parse_model(const Json& j, PrimeField f, const std::string& path) {
    if (!j.is_object() || j.size() != 1)
        throw InputError(path, "model must have exactly one of exterior, direct_sum, table, truncated_infinite");
    const auto& [kind, body] = *j.items().begin();
    const std::string bpath = child(path, kind);
    try {
        if (kind == "exterior") return std::make_shared<const ExteriorRingModel>(f, as_size(require(body, "m", bpath), child(bpath, "m")));
        if (kind == "truncated_infinite")
            return ExteriorRingModel::truncated_infinite(f, as_size(require(body, "cap", bpath), child(bpath, "cap")));
        if (kind == "table") return parse_table(body, f, bpath);
        if (kind == "direct_sum") {
            if (body.contains("m1") || body.contains("m2")) {
                if (body.contains("left") || body.contains("right"))
                    throw InputError(bpath, "use either m1/m2 or left/right, not both");
                auto m1 = as_size(require(body, "m1", bpath), child(bpath, "m1"));
                auto m2 = as_size(require(body, "m2", bpath), child(bpath, "m2"));
                return std::make_shared<const DirectSumRingModel>(std::make_shared<const ExteriorRingModel>(f, m1),
                                                                  std::make_shared<const ExteriorRingModel>(f, m2));
            }
            return std::make_shared<const DirectSumRingModel>(parse_model(require(body, "left", bpath), f, child(bpath, "left")),
                                                              parse_model(require(body, "right", bpath), f, child(bpath, "right")));
        }
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        throw InputError(bpath, e.what());
    }
    throw InputError(path, "unknown model kind '" + kind + "'");
}

inline RingElement parse_class(const Json& j, const RingModel& ring, const std::string& path) {
    if (j.is_string()) {
        const std::string choice = j.get<std::string>();
        const auto* sum = dynamic_cast<const DirectSumRingModel*>(&ring);
        if (choice == "first_generator") return element_from_generator(ring, 0);
        if (choice == "left_generator" || choice == "right_generator") {
            if (!sum) throw InputError(path, "'" + choice + "' needs a direct_sum model");
            try {
                return choice == "left_generator" ? sum->left_generator(0) : sum->right_generator(0);
            } catch (const Error& e) {
                throw InputError(path, e.what());
            }
        }
        if (choice == "zero") return ring.zero(1);
        throw InputError(path, "unknown symbolic class '" + choice + "'");
    }
    return ring.element(1, as_int_vector(j, ring.h_dim(1), path));
}

inline ESideData parse_eside_inline(const Json& j, const RingModel& ring, const std::string& path) {
    const PrimeField f = ring.field();
    const Json& degs = require(j, "degrees", path);
    const std::string dpath = child(path, "degrees");
    if (!degs.is_array()) throw InputError(dpath, "expected an array of degree entries");
    std::map<std::size_t, ESideDegree> degrees;
    for (std::size_t k = 0; k < degs.size(); ++k) {
        const std::string epath = child(dpath, k);
        const std::size_t n = as_size(require(degs[k], "degree", epath), child(epath, "degree"));
        if (degrees.count(n)) throw InputError(epath, "degree " + std::to_string(n) + " listed twice");
        const std::size_t h = ring.h_dim(n);
        FpMatrix sigma = as_square_matrix(require(degs[k], "sigma", epath), f, child(epath, "sigma"));
        const std::size_t e = sigma.rows();
        FpMatrix res = as_matrix(require(degs[k], "restriction", epath), f, e, h, child(epath, "restriction"));
        FpMatrix cor = as_matrix(require(degs[k], "norm", epath), f, h, e, child(epath, "norm"));
        try {
            degrees.emplace(n, ESideDegree{CyclicGroupModule(f, std::move(sigma)), std::move(res), std::move(cor)});
        } catch (const Error& ex) {
            throw InputError(child(epath, "sigma"), ex.what());
        }
    }
    std::optional<FpVector> delta;
    if (j.contains("delta")) {
        auto it = degrees.find(1);
        if (it == degrees.end()) throw InputError(child(path, "delta"), "delta needs degree-1 data");
        delta = FpVector(f, as_int_vector(j["delta"], it->second.module.dim(), child(path, "delta")));
    }
    try {
        return ESideData(f, std::move(degrees), std::move(delta));
    } catch (const Error& e) {
        throw InputError(path, e.what());
    }
}

} // namespace detail

/// A parsed scenario file.
struct ScenarioInput {
    ExtensionScenario scenario;
    std::optional<ESideData> eside;
    Json model_spec;
};

/// Model descriptor of a ring, in the form parse_model reads.
inline Json model_json(const RingModel& ring) {
    if (const auto* ext = dynamic_cast<const ExteriorRingModel*>(&ring)) {
        if (auto cap = ext->cap()) return Json{{"truncated_infinite", {{"cap", *cap}}}};
        return Json{{"exterior", {{"m", ext->generators()}}}};
    }
    if (const auto* sum = dynamic_cast<const DirectSumRingModel*>(&ring))
        return Json{{"direct_sum", {{"left", model_json(*sum->left())}, {"right", model_json(*sum->right())}}}};
    if (const auto* table = dynamic_cast<const TableRingModel*>(&ring)) {
        Json products = Json::array();
        for (const auto& e : table->products()) {
            products.push_back(Json{{"left", {e.left_degree, e.left_index}},
                                    {"right", {e.right_degree, e.right_index}},
                                    {"value", e.value}});
        }
        return Json{{"table", {{"name", table->name()}, {"dims", table->dims()}, {"products", products}}}};
    }
    throw InvalidArgument("model_json: unsupported ring model " + ring.describe());
}

inline Json eside_json(const ESideData& d) {
    Json degrees = Json::array();
    for (const auto& [n, deg] : d.degrees()) {
        degrees.push_back(Json{{"degree", n},
                               {"sigma", detail::matrix_json(deg.module.sigma())},
                               {"restriction", detail::matrix_json(deg.restriction)},
                               {"norm", detail::matrix_json(deg.norm)}});
    }
    Json out{{"degrees", degrees}};
    if (d.delta()) out["delta"] = detail::vector_json(*d.delta());
    return out;
}

/// Scenario file contents for a built scenario; reading it back gives the same scenario.
inline Json scenario_json(const ExtensionScenario& s, const std::optional<ESideData>& eside = std::nullopt) {
    Json out{{"schema", scenario_schema},
             {"name", s.name()},
             {"p", s.p()},
             {"model", model_json(s.ring())},
             {"a_class", detail::vector_json(s.a_class().coords)},
             {"xi_class", detail::vector_json(s.xi_class().coords)},
             {"minus_one_class", detail::vector_json(s.minus_one_class().coords)},
             {"sum_of_squares", s.sum_of_squares()},
             {"degree_cap", s.degree_cap()}};
    if (eside) out["eside"] = eside_json(*eside);
    return out;
}

inline ScenarioInput parse_scenario(const Json& doc) {
    const std::string root;
    detail::check_schema(doc, scenario_schema, root);

    if (doc.contains("fixture")) {
        const Json& name = doc["fixture"];
        if (!name.is_string()) throw InputError("/fixture", "expected a fixture name");
        try {
            Fixture fx = build_fixture(name.get<std::string>());
            Json spec = model_json(fx.scenario.ring());
            return {std::move(fx.scenario), std::move(fx.eside), std::move(spec)};
        } catch (const Error& e) {
            throw InputError("/fixture", e.what());
        }
    }

    const PrimeField f = detail::as_prime(detail::require(doc, "p", root), "/p");
    const Json& model_spec = detail::require(doc, "model", root);
    RingPtr ring = detail::parse_model(model_spec, f, "/model");

    RingElement a = detail::parse_class(detail::require(doc, "a_class", root), *ring, "/a_class");
    RingElement xi = doc.contains("xi_class") ? detail::parse_class(doc["xi_class"], *ring, "/xi_class") : ring->zero(1);
    RingElement m1 = doc.contains("minus_one_class")
                         ? detail::parse_class(doc["minus_one_class"], *ring, "/minus_one_class")
                         : (f.p() == 2 ? xi : ring->zero(1));
    bool sos = f.p() == 2;
    if (doc.contains("sum_of_squares")) {
        if (!doc["sum_of_squares"].is_boolean()) throw InputError("/sum_of_squares", "expected true or false");
        sos = doc["sum_of_squares"].get<bool>();
    }
    std::size_t cap = 0;
    if (doc.contains("degree_cap")) {
        cap = detail::as_size(doc["degree_cap"], "/degree_cap");
    } else if (auto faithful = ring->faithful_degree()) {
        cap = *faithful;
    } else {
        cap = cohomological_dimension(*ring).value() + 1;
    }
    std::string name = "scenario";
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) throw InputError("/name", "expected a string");
        name = doc["name"].get<std::string>();
    }

    std::optional<ExtensionScenario> scenario;
    try {
        scenario.emplace(name, ring, a, xi, m1, sos, cap);
    } catch (const Error& e) {
        throw InputError("", e.what());
    }

    std::optional<ESideData> eside;
    if (doc.contains("eside")) {
        const Json& e = doc["eside"];
        if (e.is_string()) {
            const std::string ref = e.get<std::string>();
            if (ref == "synthesize") {
                eside = synthesize_eside_data(*scenario, std::min<std::size_t>(cap, 12));
            } else if (ref == "q2") {
                if (!(ring->describe() == "table(q2)")) throw InputError("/eside", "q2 E-side data needs the q2 table");
                eside = q2_eside_data();
            } else {
                throw InputError("/eside", "unknown E-side reference '" + ref + "'");
            }
        } else {
            eside = detail::parse_eside_inline(e, *ring, "/eside");
        }
    }
    return {std::move(*scenario), std::move(eside), model_spec};
}

inline ScenarioInput load_scenario(const std::string& path) {
    try {
        return parse_scenario(load_file(path));
    } catch (const InputError& e) {
        if (e.where().rfind(path, 0) == 0) throw;
        throw InputError(path + (e.where().empty() ? "" : ":" + e.where()), e.message());
    }
}

struct ModuleInput {
    CyclicGroupModule module;
    std::vector<FpVector> vectors;
};

inline ModuleInput parse_module(const Json& doc) {
    detail::check_schema(doc, module_schema, "");
    const PrimeField f = detail::as_prime(detail::require(doc, "p", ""), "/p");
    FpMatrix sigma = detail::as_square_matrix(detail::require(doc, "sigma", ""), f, "/sigma");
    std::optional<CyclicGroupModule> m;
    try {
        m.emplace(f, std::move(sigma));
    } catch (const Error& e) {
        throw InputError("/sigma", e.what());
    }
    std::vector<FpVector> vectors;
    if (doc.contains("vectors")) {
        const Json& vs = doc["vectors"];
        if (!vs.is_array()) throw InputError("/vectors", "expected an array of vectors");
        for (std::size_t i = 0; i < vs.size(); ++i)
            vectors.emplace_back(f, detail::as_int_vector(vs[i], m->dim(), "/vectors/" + std::to_string(i)));
    }
    return {std::move(*m), std::move(vectors)};
}

inline LinearChain parse_chain(const Json& doc) {
    detail::check_schema(doc, chain_schema, "");
    const PrimeField f = detail::as_prime(detail::require(doc, "p", ""), "/p");
    const Json& dims_j = detail::require(doc, "dims", "");
    if (!dims_j.is_array() || dims_j.empty()) throw InputError("/dims", "expected a non-empty array of dimensions");
    std::vector<std::size_t> dims;
    for (std::size_t i = 0; i < dims_j.size(); ++i) dims.push_back(detail::as_size(dims_j[i], "/dims/" + std::to_string(i)));
    const Json& maps_j = detail::require(doc, "maps", "");
    if (!maps_j.is_array() || maps_j.size() + 1 != dims.size())
        throw InputError("/maps", "expected " + std::to_string(dims.size() - 1) + " maps");
    std::vector<FpMatrix> maps;
    for (std::size_t i = 0; i < maps_j.size(); ++i)
        maps.push_back(detail::as_matrix(maps_j[i], f, dims[i + 1], dims[i], "/maps/" + std::to_string(i)));
    std::vector<std::string> labels;
    if (doc.contains("labels")) {
        const Json& ls = doc["labels"];
        if (!ls.is_array() || ls.size() != dims.size()) throw InputError("/labels", "expected one label per space");
        for (std::size_t i = 0; i < ls.size(); ++i) {
            if (!ls[i].is_string()) throw InputError("/labels/" + std::to_string(i), "expected a string");
            labels.push_back(ls[i].get<std::string>());
        }
    }
    return {f, std::move(dims), std::move(maps), std::move(labels)};
}

// ---------------------------------------------------------------- reports

inline Json verdict_json(const DegreeVerdict& v) {
    const auto& w = v.witnesses;
    return Json{{"degree", v.degree},
                {"h_dim_prev", v.h_dim_prev},
                {"h_dim", v.h_dim},
                {"free", v.free_verdict},
                {"trivial", v.trivial_verdict},
                {"witnesses",
                 {{"ann_prev", detail::subspace_json(w.ann_prev)},
                  {"ann", detail::subspace_json(w.ann)},
                  {"cup_image", detail::subspace_json(w.cup_image)},
                  {"xi_cup_image", detail::subspace_json(w.xi_cup_image)},
                  {"trivial_target", detail::subspace_json(w.trivial_target)}}}};
}

inline Json equivalence_json(const EquivalenceSuiteResult& r) {
    Json groups = Json::array();
    for (const auto& g : r.groups) {
        Json conds = Json::array();
        for (const auto& c : g.conditions) conds.push_back(Json{{"condition", c.name}, {"value", c.value}});
        groups.push_back(Json{{"group", g.name}, {"agree", g.agree}, {"conditions", conds}});
    }
    return Json{{"degree", r.degree},
                {"consistent", r.consistent()},
                {"groups", groups},
                {"broken_implications", r.broken_implications}};
}

inline Json heredity_json(const HeredityReport& h) {
    return Json{{"free_heredity_required", h.free_required},
                {"free_monotone", h.free_monotone()},
                {"free_violations", h.free_violations},
                {"free_nonmonotone_permitted", h.free_nonmonotone_permitted()},
                {"trivial_monotone", h.trivial_monotone()},
                {"trivial_violations", h.trivial_violations},
                {"norm_surjectivity_violations", h.norm_violations},
                {"h1_free_violations", h.h1_violations},
                {"ok", h.ok()}};
}

inline Json exactness_json(const ExactnessResult& r) {
    Json positions = Json::array();
    for (const auto& p : r.positions) {
        positions.push_back(Json{{"position", p.position},
                                 {"space", p.label},
                                 {"exact", p.exact},
                                 {"kernel_excess", p.kernel_excess},
                                 {"image_excess", p.image_excess}});
    }
    return Json{{"exact", r.exact()}, {"positions", positions}};
}

inline Json eside_verification_json(const ESideVerification& v) {
    Json esext = Json::array();
    for (const auto& [m, e] : v.esext) {
        Json entry = exactness_json(e);
        entry["m"] = m;
        esext.push_back(std::move(entry));
    }
    Json trivher = Json::array();
    for (const auto& [m, t] : v.trivher) {
        Json entry{{"m", m}, {"refused", t.refused}};
        if (t.refused) {
            entry["reason"] = t.reason;
        } else {
            entry["cor_outside_final_term"] = t.norm_outside_target;
            entry["exactness"] = exactness_json(t.exactness);
            entry["passed"] = t.passed();
        }
        trivher.push_back(std::move(entry));
    }
    Json lemmas = Json::array();
    for (const auto& l : v.lemmas) {
        Json checks = Json::array();
        for (const auto& c : l.checks)
            checks.push_back(Json{{"check", c.name}, {"applicable", c.applicable}, {"holds", c.holds}, {"detail", c.detail}});
        lemmas.push_back(Json{{"degree", l.degree}, {"ok", l.ok()}, {"checks", checks}});
    }
    return Json{{"four_term_sequences", esext},
                {"six_term_sequences", trivher},
                {"lemmas", lemmas},
                {"defects", v.defect_count()},
                {"ok", v.ok()}};
}

inline Json scenario_echo(const ExtensionScenario& s) {
    return Json{{"name", s.name()},
                {"p", s.p()},
                {"model", s.ring().describe()},
                {"a_class", detail::vector_json(s.a_class().coords)},
                {"xi_class", detail::vector_json(s.xi_class().coords)},
                {"minus_one_class", detail::vector_json(s.minus_one_class().coords)},
                {"sum_of_squares", s.sum_of_squares()},
                {"degree_cap", s.degree_cap()}};
}

enum ExitCode : int { exit_ok = 0, exit_incomplete = 1, exit_input = 2, exit_inconsistent = 3 };

struct Report {
    Json document;
    int exit_code = exit_ok;
};

inline Json status_json(bool complete, const std::vector<std::string>& failures, int code) {
    return Json{{"complete", complete}, {"consistent", failures.empty()}, {"consistency_failures", failures},
                {"exit_code", code}};
}

inline Report scenario_report(const ScenarioInput& in, unsigned jobs = 1) {
    const auto& s = in.scenario;
    CriteriaReport r = evaluate(s, jobs);
    Json doc{{"schema", report_schema}, {"kind", "scenario"}, {"scenario", scenario_echo(s)}};

    Json verdicts = Json::array();
    for (const auto& v : r.verdicts) verdicts.push_back(verdict_json(v));
    doc["verdicts"] = verdicts;
    doc["invariants"] = Json{{"cf", detail::invariant_json(r.cf)}, {"ct", detail::invariant_json(r.ct)},
                             {"cd", detail::invariant_json(r.cd)}};
    if (r.tail) {
        doc["closed_form_tail"] = Json{{"rule", r.tail->rule},
                                       {"free_stable", r.tail->free_stable},
                                       {"free_from", r.tail->free_stable ? Json(r.tail->free_from) : Json(nullptr)},
                                       {"trivial_stable", r.tail->trivial_stable},
                                       {"trivial_from", r.tail->trivial_stable ? Json(r.tail->trivial_from) : Json(nullptr)}};
    } else {
        doc["closed_form_tail"] = nullptr;
    }
    doc["heredity"] = heredity_json(r.heredity);
    Json eq = Json::array();
    for (const auto& e : r.equivalences) eq.push_back(equivalence_json(e));
    doc["equivalence_suite"] = eq;

    std::vector<std::string> failures = r.consistency_failures;
    if (in.eside) {
        ESideVerification v = verify_eside_data(s, *in.eside);
        doc["eside"] = eside_verification_json(v);
        if (!v.ok()) failures.push_back("E-side data violates " + std::to_string(v.defect_count()) + " proven relations");
    } else {
        doc["eside"] = nullptr;
    }
    const int code = !failures.empty() ? exit_inconsistent : (!r.complete() ? exit_incomplete : exit_ok);
    doc["status"] = status_json(r.complete(), failures, code);
    return {std::move(doc), code};
}

inline Report criteria_report(const ScenarioInput& in, std::size_t degree) {
    const auto& s = in.scenario;
    if (degree == 0) throw InputError("--degree", "criteria are stated for degrees >= 1");
    if (auto faithful = s.ring().faithful_degree(); faithful && degree > *faithful)
        throw InputError("--degree", "degree " + std::to_string(degree) + " is beyond the faithful range " +
                                         std::to_string(*faithful) + " of " + s.ring().describe());
    DegreeVerdict v = evaluate_degree(s, degree);
    EquivalenceSuiteResult eq = equivalence_suite_thm1(s, degree);
    std::vector<std::string> failures;
    if (!eq.consistent()) failures.push_back("equivalent conditions disagree at degree " + std::to_string(degree));
    const int code = failures.empty() ? exit_ok : exit_inconsistent;
    Json doc{{"schema", report_schema},
             {"kind", "criteria"},
             {"scenario", scenario_echo(s)},
             {"verdict", verdict_json(v)},
             {"equivalence_suite", equivalence_json(eq)},
             {"status", status_json(true, failures, code)}};
    return {std::move(doc), code};
}

inline Report module_report(const ModuleInput& in) {
    const auto& m = in.module;
    BlockDecomposition blocks = decompose(m);
    Json lengths = Json::array();
    for (auto l : blocks.lengths) lengths.push_back(l);
    Json vectors = Json::array();
    for (const auto& v : in.vectors)
        vectors.push_back(Json{{"vector", detail::vector_json(v)}, {"cyclic_length", cyclic_length(v, m)}});
    Json doc{{"schema", report_schema},
             {"kind", "module"},
             {"p", m.field().p()},
             {"dim", m.dim()},
             {"fixed_points", detail::subspace_json(fixed_points(m))},
             {"norm_image", detail::subspace_json(norm_image(m))},
             {"blocks", lengths},
             {"free", is_free(m)},
             {"trivial", is_trivial(m)},
             {"h2_dim", h2_dim(m)},
             {"vectors", vectors},
             {"status", status_json(true, {}, exit_ok)}};
    return {std::move(doc), exit_ok};
}

inline Report chain_report(const LinearChain& chain) {
    Json doc{{"schema", report_schema},
             {"kind", "chain"},
             {"p", chain.field().p()},
             {"dims", chain.dims()},
             {"labels", chain.labels()},
             {"exactness", exactness_json(verify_exact(chain))},
             {"status", status_json(true, {}, exit_ok)}};
    return {std::move(doc), exit_ok};
}

inline Report eside_report(const ScenarioInput& in) {
    if (!in.eside) throw InputError("/eside", "scenario has no E-side data to verify");
    ESideVerification v = verify_eside_data(in.scenario, *in.eside);
    std::vector<std::string> failures;
    if (!v.ok()) failures.push_back("E-side data violates " + std::to_string(v.defect_count()) + " proven relations");
    const int code = failures.empty() ? exit_ok : exit_inconsistent;
    Json doc{{"schema", report_schema},
             {"kind", "eside"},
             {"scenario", scenario_echo(in.scenario)},
             {"eside", eside_verification_json(v)},
             {"status", status_json(true, failures, code)}};
    return {std::move(doc), code};
}

inline Report fixtures_report() {
    Json list = Json::array();
    for (const auto& e : fixture_catalogue()) {
        Fixture fx = e.build();
        list.push_back(Json{{"name", e.name},
                            {"description", e.description},
                            {"model", fx.scenario.ring().describe()},
                            {"has_eside", fx.eside.has_value()}});
    }
    Json doc{{"schema", report_schema}, {"kind", "fixtures"}, {"fixtures", list}, {"status", status_json(true, {}, exit_ok)}};
    return {std::move(doc), exit_ok};
}

// ---------------------------------------------------------------- text rendering

namespace detail {

inline std::string scalar_text(const Json& j) {
    if (j.is_string()) return j.get<std::string>();
    return j.dump();
}

inline void render(std::ostringstream& os, const Json& j, const std::string& indent) {
    for (const auto& [key, value] : j.items()) {
        const bool compact = value.is_array() && std::all_of(value.begin(), value.end(), [](const Json& x) {
                                 return x.is_primitive() || (x.is_array() && std::all_of(x.begin(), x.end(),
                                                                                        [](const Json& y) { return y.is_primitive(); }));
                             });
        if (value.is_object()) {
            os << indent << key << ":\n";
            render(os, value, indent + "  ");
        } else if (value.is_array() && !compact) {
            os << indent << key << ":\n";
            for (std::size_t i = 0; i < value.size(); ++i) {
                if (value[i].is_object()) {
                    os << indent << "  -\n";
                    render(os, value[i], indent + "    ");
                } else {
                    os << indent << "  - " << scalar_text(value[i]) << '\n';
                }
            }
        } else {
            os << indent << key << ": " << scalar_text(value) << '\n';
        }
    }
}

} // namespace detail

/// Indented key/value rendering of a report, in document order.
inline std::string to_text(const Json& doc) {
    std::ostringstream os;
    detail::render(os, doc, "");
    return os.str();
}

inline std::string to_json_text(const Json& doc) { return doc.dump(2) + "\n"; }

} // namespace galcoh::io

#endif // GALCOH_IO_HPP
