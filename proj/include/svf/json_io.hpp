#pragma once

// JSON schemas "sv/1" for inputs and reports. Integers that do not fit in
// 64 bits travel as decimal strings, rationals as "num/den". Objects are
// read strictly: unknown keys are parse errors.

#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "svf/galois.hpp"
#include "svf/gauge.hpp"
#include "svf/geometry.hpp"
#include "svf/special_values.hpp"

namespace svf {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "sv/1";

namespace json_detail {

inline void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& what) {
    if (!j.is_object()) fail(ErrorKind::parse, what + " must be a JSON object");
    for (const auto& [k, v] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || k == a;
        if (!ok) fail(ErrorKind::parse, what + ": unknown key \"" + k + "\"");
    }
    if (j.contains("schema") && j.at("schema") != kSchema) fail(ErrorKind::parse, what + ": unsupported schema");
}

inline const Json& require(const Json& j, const char* key, const std::string& what) {
    if (!j.contains(key)) fail(ErrorKind::parse, what + ": missing key \"" + key + "\"");
    return j.at(key);
}

inline long get_long(const Json& j, const std::string& what) {
    if (!j.is_number_integer()) fail(ErrorKind::parse, what + " must be an integer");
    return j.get<long>();
}

} // namespace json_detail

inline Json to_json(const mpz_class& x) {
    if (x.fits_slong_p()) return Json(x.get_si());
    return Json(x.get_str());
}

inline mpz_class mpz_from_json(const Json& j) {
    if (j.is_number_integer()) return mpz_class(j.get<long>());
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        mpz_class x;
        if (s.empty() || x.set_str(s, 10) != 0) fail(ErrorKind::parse, "not an integer: \"" + s + "\"");
        return x;
    }
    fail(ErrorKind::parse, "expected an integer, got " + j.dump());
}

inline Json to_json(const mpq_class& x) {
    if (x.get_den() == 1) return to_json(mpz_class(x.get_num()));
    return Json(x.get_str());
}

inline mpq_class mpq_from_json(const Json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        mpq_class x;
        if (s.empty() || x.set_str(s, 10) != 0 || x.get_den() == 0) fail(ErrorKind::parse, "not a rational: \"" + s + "\"");
        x.canonicalize();
        return x;
    }
    return mpq_class(mpz_from_json(j));
}

// --- p-adic elements ---------------------------------------------------

/// {"p":5,"val":-1,"digits":[4,3,0,...],"prec":32}; for a > 1 "digits" holds
/// one little-endian digit list per power of the generator. Zeros are
/// {"p":5,"zero":"exact"} or {"p":5,"zero":"indistinguishable","val":k}.
inline Json to_json(const QqElement& x) {
    const auto& ctx = x.context();
    Json j;
    j["p"] = ctx->p();
    if (ctx->degree() > 1) j["a"] = ctx->degree();
    if (x.is_exact_zero()) {
        j["zero"] = "exact";
        return j;
    }
    if (x.is_indistinguishable_from_zero()) {
        j["zero"] = "indistinguishable";
        j["val"] = x.abs_prec();
        return j;
    }
    const long prec = x.rel_prec();
    auto digits_of = [&](mpz_class c) {
        Json d = Json::array();
        for (long i = 0; i < prec; ++i) {
            d.push_back(mpz_class(c % ctx->p()).get_si());
            c /= ctx->p();
        }
        return d;
    };
    j["val"] = x.valuation();
    if (ctx->degree() == 1) {
        j["digits"] = digits_of(x.unit()[0]);
    } else {
        Json all = Json::array();
        for (const auto& c : x.unit()) all.push_back(digits_of(c));
        j["digits"] = all;
    }
    j["prec"] = prec;
    return j;
}

/// Plain integers and rationals are accepted at relative precision prec.
inline QqElement qq_from_json(const QqContextPtr& ctx, const Json& j, long prec) {
    using namespace json_detail;
    if (!j.is_object()) {
        const mpq_class x = mpq_from_json(j);
        if (x == 0) return QqElement::zero(ctx);
        return QqElement::from_rational(ctx, x, prec);
    }
    check_keys(j, {"p", "a", "val", "digits", "prec", "zero"}, "p-adic element");
    if (get_long(require(j, "p", "p-adic element"), "p") != ctx->p()) fail(ErrorKind::parse, "p-adic element over the wrong prime");
    if (j.contains("a") && get_long(j.at("a"), "a") != static_cast<long>(ctx->degree()))
        fail(ErrorKind::parse, "p-adic element over the wrong extension");
    if (j.contains("zero")) {
        const Json& z = j.at("zero");
        if (z == "exact") return QqElement::zero(ctx);
        if (z == "indistinguishable") return QqElement::zero_to(ctx, get_long(require(j, "val", "zero"), "val"));
        fail(ErrorKind::parse, "zero must be \"exact\" or \"indistinguishable\"");
    }
    const long val = get_long(require(j, "val", "p-adic element"), "val");
    const long rel = get_long(require(j, "prec", "p-adic element"), "prec");
    if (rel < 1 || rel > 100000) fail(ErrorKind::parse, "prec must be positive");
    const Json& d = require(j, "digits", "p-adic element");
    auto from_digits = [&](const Json& list) {
        if (!list.is_array() || static_cast<long>(list.size()) != rel)
            fail(ErrorKind::parse, "digit list length must equal prec");
        mpz_class c = 0, pw = 1;
        for (const auto& x : list) {
            const long v = get_long(x, "digit");
            if (v < 0 || v >= ctx->p()) fail(ErrorKind::parse, "digit out of range");
            c += pw * v;
            pw *= ctx->p();
        }
        return c;
    };
    Coeffs c;
    if (ctx->degree() == 1) {
        c.push_back(from_digits(d));
    } else {
        if (!d.is_array() || d.size() != ctx->degree()) fail(ErrorKind::parse, "need one digit list per basis element");
        for (const auto& list : d) c.push_back(from_digits(list));
    }
    bool unit = false;
    for (const auto& x : c) unit = unit || x % ctx->p() != 0;
    if (!unit) fail(ErrorKind::parse, "leading digit must be nonzero; shift the valuation instead");
    return QqElement::from_coeffs(ctx, val, std::move(c), rel);
}

template <class T, class F>
Json matrix_to_json(const Matrix<T>& m, F&& f) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(f(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

template <class T, class F>
Matrix<T> matrix_from_json(const Json& j, F&& f, const std::string& what) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) fail(ErrorKind::parse, what + " must be a nonempty array of rows");
    const std::size_t n = j.size(), m = j[0].size();
    Matrix<T> out(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        if (!j[i].is_array() || j[i].size() != m) fail(ErrorKind::parse, what + " rows must have equal length");
        for (std::size_t k = 0; k < m; ++k) out(i, k) = f(j[i][k]);
    }
    return out;
}

inline Json to_json(const QqMatrix& m) {
    return matrix_to_json(m, [](const QqElement& x) { return to_json(x); });
}
inline Json to_json(const IntMatrix& m) {
    return matrix_to_json(m, [](const mpz_class& x) { return to_json(x); });
}
inline Json to_json(const RatMatrix& m) {
    return matrix_to_json(m, [](const mpq_class& x) { return to_json(x); });
}

inline IntMatrix int_matrix_from_json(const Json& j, const std::string& what) {
    return matrix_from_json<mpz_class>(j, [](const Json& x) { return mpz_from_json(x); }, what);
}
inline RatMatrix rat_matrix_from_json(const Json& j, const std::string& what) {
    return matrix_from_json<mpq_class>(j, [](const Json& x) { return mpq_from_json(x); }, what);
}
inline QqMatrix qq_matrix_from_json(const QqContextPtr& ctx, const Json& j, long prec, const std::string& what) {
    return matrix_from_json<QqElement>(j, [&](const Json& x) { return qq_from_json(ctx, x, prec); }, what);
}

template <class T>
Json poly_to_json(const std::vector<T>& f) {
    Json a = Json::array();
    for (const auto& c : f) a.push_back(to_json(c));
    return a;
}

inline IntPoly int_poly_from_json(const Json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) fail(ErrorKind::parse, what + " must be a nonempty coefficient list");
    IntPoly f;
    for (const auto& c : j) f.push_back(mpz_from_json(c));
    return f;
}

inline Json to_json(const std::map<long, long>& m) {
    Json o = Json::object();
    for (auto [k, v] : m) o[std::to_string(k)] = v;
    return o;
}

inline std::map<long, long> long_map_from_json(const Json& j, const std::string& what) {
    if (!j.is_object()) fail(ErrorKind::parse, what + " must be an object");
    std::map<long, long> m;
    for (const auto& [k, v] : j.items()) {
        std::size_t used = 0;
        long key = 0;
        try {
            key = std::stol(k, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != k.size() || k.empty()) fail(ErrorKind::parse, what + ": key \"" + k + "\" is not an integer");
        m[key] = json_detail::get_long(v, what);
    }
    return m;
}

inline Json vertices_to_json(const std::vector<PolygonVertex>& v) {
    Json a = Json::array();
    for (const auto& [x, y] : v) a.push_back(Json::array({x, to_json(y)}));
    return a;
}

// --- crystals ----------------------------------------------------------

struct CrystalInput {
    Isocrystal crystal;
    std::optional<Lattice> lattice;
};

/// {"p":5,"a":1,"rank":2,"matrix":[[...]],"lattice":[[...]]}; the lattice is
/// spanned by the columns and defaults to the standard one.
inline CrystalInput crystal_from_json(const Json& j, long prec) {
    using namespace json_detail;
    check_keys(j, {"schema", "name", "p", "a", "rank", "matrix", "lattice"}, "crystal");
    const long p = get_long(require(j, "p", "crystal"), "p");
    const long a = j.contains("a") ? get_long(j.at("a"), "a") : 1;
    if (!fp::is_prime(p)) fail(ErrorKind::parse, "crystal: p must be prime");
    if (a < 1 || a > 16) fail(ErrorKind::parse, "crystal: a must lie in 1..16");
    auto ctx = QqContext::make(p, static_cast<unsigned>(a), std::max(2 * prec, prec + 32));
    QqMatrix m = qq_matrix_from_json(ctx, require(j, "matrix", "crystal"), prec, "matrix");
    if (!m.square()) fail(ErrorKind::parse, "crystal matrix must be square");
    if (j.contains("rank") && get_long(j.at("rank"), "rank") != static_cast<long>(m.rows()))
        fail(ErrorKind::parse, "crystal rank does not match the matrix");
    CrystalInput in{Isocrystal{ctx, std::move(m)}, std::nullopt};
    if (j.contains("lattice")) {
        QqMatrix l = qq_matrix_from_json(ctx, j.at("lattice"), prec, "lattice");
        if (!l.square() || l.rows() != in.crystal.rank()) fail(ErrorKind::parse, "lattice must be a square basis of the space");
        in.lattice = Lattice(std::move(l));
    }
    return in;
}

inline Json to_json(const SlopeProfile& s) {
    Json a = Json::array();
    for (const auto& seg : s.segments) a.push_back({{"slope", to_json(seg.slope)}, {"multiplicity", seg.length}});
    return a;
}

// --- varieties and packages --------------------------------------------

inline VarietyKind kind_from_name(const std::string& s) {
    for (auto k : {VarietyKind::point, VarietyKind::projective, VarietyKind::affine, VarietyKind::torus, VarietyKind::elliptic,
                   VarietyKind::product, VarietyKind::complement})
        if (kind_name(k) == s) return k;
    fail(ErrorKind::parse, "unknown variety kind \"" + s + "\"");
}

namespace json_detail {

inline VarietySpec spec_from_json(const Json& j, std::optional<std::pair<long, unsigned>> field, int depth) {
    if (depth > 8) fail(ErrorKind::parse, "variety nested too deeply");
    check_keys(j, {"schema", "name", "kind", "p", "a", "n", "coeffs", "parts", "base", "points", "hyperplane", "twist"}, "variety");
    VarietySpec s;
    s.kind = kind_from_name(require(j, "kind", "variety").get<std::string>());
    if (j.contains("p")) {
        s.p = get_long(j.at("p"), "p");
        s.a = j.contains("a") ? static_cast<unsigned>(get_long(j.at("a"), "a")) : 1;
    } else if (field) {
        s.p = field->first;
        s.a = field->second;
    } else {
        fail(ErrorKind::parse, "variety: missing key \"p\"");
    }
    if (j.contains("n")) s.n = get_long(j.at("n"), "n");
    else if (s.kind == VarietyKind::projective || s.kind == VarietyKind::affine || s.kind == VarietyKind::torus) s.n = 1;
    if (j.contains("coeffs")) {
        const Json& c = j.at("coeffs");
        if (!c.is_array()) fail(ErrorKind::parse, "coeffs must be an array");
        for (const auto& x : c) s.coeffs.push_back(get_long(x, "coefficient"));
        if (s.coeffs.size() == 2) s.coeffs = {0, 0, 0, s.coeffs[0], s.coeffs[1]}; // short form a4 a6
    }
    const std::pair<long, unsigned> here{s.p, s.a};
    if (j.contains("parts")) {
        if (!j.at("parts").is_array()) fail(ErrorKind::parse, "parts must be an array");
        for (const auto& part : j.at("parts")) s.parts.push_back(spec_from_json(part, here, depth + 1));
    }
    if (j.contains("base")) s.parts.push_back(spec_from_json(j.at("base"), here, depth + 1));
    if (j.contains("points")) s.removed_points = get_long(j.at("points"), "points");
    if (j.contains("hyperplane")) {
        if (!j.at("hyperplane").is_boolean()) fail(ErrorKind::parse, "hyperplane must be a boolean");
        s.removed_hyperplane = j.at("hyperplane").get<bool>();
    }
    if (j.contains("twist")) s.twist = int_matrix_from_json(j.at("twist"), "twist");
    return s;
}

} // namespace json_detail

inline VarietySpec variety_from_json(const Json& j) {
    VarietySpec s = json_detail::spec_from_json(j, std::nullopt, 0);
    validate(s);
    return s;
}

inline Json to_json(const VarietySpec& s) {
    Json j;
    j["kind"] = kind_name(s.kind);
    j["p"] = s.p;
    j["a"] = s.a;
    switch (s.kind) {
    case VarietyKind::projective:
    case VarietyKind::affine:
    case VarietyKind::torus: j["n"] = s.n; break;
    case VarietyKind::elliptic: j["coeffs"] = s.coeffs; break;
    case VarietyKind::product: {
        Json parts = Json::array();
        for (const auto& part : s.parts) parts.push_back(to_json(part));
        j["parts"] = parts;
        break;
    }
    case VarietyKind::complement:
        j["base"] = to_json(s.parts.at(0));
        if (s.removed_hyperplane) j["hyperplane"] = true;
        else j["points"] = s.removed_points;
        break;
    case VarietyKind::point: break;
    }
    if (s.twist) j["twist"] = to_json(*s.twist);
    return j;
}

inline Json to_json(const CohomologyPackage& pkg) {
    Json j;
    j["schema"] = kSchema;
    j["kind"] = "package";
    j["name"] = pkg.name;
    j["p"] = pkg.p;
    j["a"] = pkg.a;
    j["padic_only"] = pkg.padic_only;
    Json degrees = Json::array();
    for (const auto& [n, d] : pkg.degrees) {
        Json e;
        e["degree"] = n;
        e["charpoly"] = poly_to_json(d.charpoly);
        if (d.semilinear) e["semilinear"] = to_json(*d.semilinear);
        if (d.linear) e["linear"] = to_json(*d.linear);
        if (d.hodge) e["hodge"] = to_json(*d.hodge);
        e["unipotent"] = d.unipotent;
        if (d.weight) e["weight"] = *d.weight;
        degrees.push_back(e);
    }
    j["degrees"] = degrees;
    return j;
}

inline CohomologyPackage package_from_json(const Json& j) {
    using namespace json_detail;
    check_keys(j, {"schema", "kind", "name", "p", "a", "padic_only", "degrees"}, "package");
    if (j.contains("kind") && j.at("kind") != "package") fail(ErrorKind::parse, "not a package");
    CohomologyPackage pkg;
    if (j.contains("name")) pkg.name = j.at("name").get<std::string>();
    pkg.p = get_long(require(j, "p", "package"), "p");
    const long a = j.contains("a") ? get_long(j.at("a"), "a") : 1;
    if (a < 1 || a > 16) fail(ErrorKind::parse, "package: a must lie in 1..16");
    pkg.a = static_cast<unsigned>(a);
    if (j.contains("padic_only")) pkg.padic_only = j.at("padic_only").get<bool>();
    const Json& degrees = require(j, "degrees", "package");
    if (!degrees.is_array()) fail(ErrorKind::parse, "degrees must be an array");
    for (const auto& e : degrees) {
        check_keys(e, {"degree", "charpoly", "semilinear", "linear", "hodge", "unipotent", "weight"}, "degree");
        const long n = get_long(require(e, "degree", "degree"), "degree");
        if (pkg.degrees.count(n)) fail(ErrorKind::parse, "degree " + std::to_string(n) + " given twice");
        DegreeData d;
        d.charpoly = int_poly_from_json(require(e, "charpoly", "degree"), "charpoly");
        trim_poly(d.charpoly);
        if (d.charpoly.empty()) fail(ErrorKind::parse, "charpoly must be nonzero");
        if (e.contains("semilinear")) d.semilinear = int_matrix_from_json(e.at("semilinear"), "semilinear");
        if (e.contains("linear")) d.linear = int_matrix_from_json(e.at("linear"), "linear");
        if (d.semilinear && d.linear) fail(ErrorKind::parse, "give either a semilinear or a linear matrix");
        if (e.contains("hodge")) d.hodge = long_map_from_json(e.at("hodge"), "hodge");
        if (e.contains("unipotent")) d.unipotent = get_long(e.at("unipotent"), "unipotent");
        if (d.unipotent < 0) fail(ErrorKind::parse, "unipotent exponent must be non-negative");
        if (e.contains("weight")) d.weight = get_long(e.at("weight"), "weight");
        pkg.degrees[n] = std::move(d);
    }
    check_package(pkg);
    return pkg;
}

// --- Gamma-modules -----------------------------------------------------

/// {"ring":"Zl","l":3,"rank":2,"gamma":[[...]],"torsion":[{"e":2,"unit":...}]};
/// "ring":"Zp" with key "p" selects the residue characteristic.
inline GammaModule gamma_from_json(const Json& j) {
    using namespace json_detail;
    check_keys(j, {"schema", "name", "ring", "l", "p", "rank", "gamma", "torsion"}, "module");
    GammaModule m;
    const std::string ring = require(j, "ring", "module").get<std::string>();
    if (ring == "Zl") {
        m.prime = get_long(require(j, "l", "module"), "l");
    } else if (ring == "Zp") {
        m.prime = get_long(require(j, "p", "module"), "p");
        m.padic = true;
    } else {
        fail(ErrorKind::parse, "ring must be \"Zl\" or \"Zp\"");
    }
    const long rank = j.contains("rank") ? get_long(j.at("rank"), "rank") : -1;
    if (j.contains("gamma") && !(j.at("gamma").is_array() && j.at("gamma").empty())) {
        m.gamma = rat_matrix_from_json(j.at("gamma"), "gamma");
    }
    if (rank >= 0 && static_cast<std::size_t>(rank) != m.gamma.rows()) fail(ErrorKind::parse, "module rank does not match gamma");
    if (j.contains("torsion")) {
        if (!j.at("torsion").is_array()) fail(ErrorKind::parse, "torsion must be an array");
        for (const auto& t : j.at("torsion")) {
            check_keys(t, {"e", "unit"}, "torsion component");
            m.torsion.push_back({get_long(require(t, "e", "torsion"), "e"), mpz_from_json(require(t, "unit", "torsion"))});
        }
    }
    validate(m);
    return m;
}

inline Json to_json(const GammaModule& m) {
    Json j;
    j["schema"] = kSchema;
    j["ring"] = m.padic ? "Zp" : "Zl";
    j[m.padic ? "p" : "l"] = m.prime;
    j["rank"] = m.rank();
    j["gamma"] = m.rank() == 0 ? Json::array() : to_json(m.gamma);
    Json t = Json::array();
    for (const auto& c : m.torsion) t.push_back({{"e", c.exponent}, {"unit", to_json(c.unit)}});
    j["torsion"] = t;
    return j;
}

inline Json to_json(const ModuleStructure& s) { return {{"free_rank", s.free_rank}, {"torsion", s.torsion}}; }

// --- reports -----------------------------------------------------------

inline Json to_json(const VerificationReport& rep) {
    Json j;
    j["schema"] = kSchema;
    j["kind"] = "verification";
    j["name"] = rep.name;
    j["route"] = rep.route;
    j["prime"] = rep.prime;
    j["p"] = rep.p;
    j["a"] = rep.a;
    j["r"] = rep.r;
    j["synthetic"] = rep.synthetic;
    Json degrees = Json::array();
    for (const auto& d : rep.degrees) {
        Json e;
        e["degree"] = d.degree;
        e["multiplicity"] = d.multiplicity;
        e["semisimple"] = d.semisimple;
        e["semisimple_reason"] = d.semisimple_reason;
        e["value"] = to_json(d.value);
        e["value_valuation"] = d.value_valuation;
        if (rep.route == "p-adic") {
            e["slope_deficit"] = to_json(d.slope_deficit);
            e["unipotent"] = d.unipotent;
        }
        e["z"] = prime_power(rep.prime, d.z_exponent);
        e["z_exponent"] = d.z_exponent;
        if (d.z_module_exponent) e["z_module_exponent"] = *d.z_module_exponent;
        degrees.push_back(e);
    }
    j["degrees"] = degrees;
    j["ext_ranks"] = to_json(rep.ext_ranks);
    j["rank_alternating_sum"] = rep.rank_alternating_sum;
    j["rho_analytic"] = rep.rho_analytic;
    j["rho_cohomological"] = rep.rho_cohomological;
    j["leading_coefficient"] = to_json(rep.leading);
    j["leading_abs_inverse"] = prime_power(rep.prime, rep.leading_exponent);
    j["leading_exponent"] = rep.leading_exponent;
    j["chi"] = prime_power(rep.prime, rep.chi_exponent);
    j["chi_exponent"] = rep.chi_exponent;
    if (rep.hodge_chi) j["hodge_correction"] = *rep.hodge_chi;
    if (rep.tilde_chi) j["slope_correction"] = to_json(*rep.tilde_chi);
    if (rep.hodge_matches_tilde) j["hodge_matches_slope"] = *rep.hodge_matches_tilde;
    Json ids = Json::array();
    for (const auto& c : rep.identities) ids.push_back({{"name", c.name}, {"holds", c.holds}, {"lhs", c.lhs}, {"rhs", c.rhs}});
    j["identities"] = ids;
    j["ok"] = rep.ok();
    if (rep.route == "p-adic") {
        Json audit;
        audit["precision"] = rep.precision;
        audit["guard_digits"] = kGuardDigits;
        Json digits = Json::object();
        for (const auto& d : rep.degrees)
            if (d.certified_digits < kInfinity) digits[std::to_string(d.degree)] = d.certified_digits;
        audit["certified_digits"] = digits;
        j["precision_audit"] = audit;
    }
    return j;
}

// --- rendering -----------------------------------------------------------

/// Indented like dump(2), but arrays of scalars stay on one line.
inline void render(const Json& j, std::string& out, int indent = 0) {
    const auto scalar_array = [](const Json& a) {
        for (const auto& x : a)
            if (x.is_structured()) return false;
        return true;
    };
    const std::string pad(static_cast<std::size_t>(indent + 2), ' '), close(static_cast<std::size_t>(indent), ' ');
    if (j.is_object() && !j.empty()) {
        out += "{\n";
        std::size_t k = 0;
        for (const auto& [key, v] : j.items()) {
            out += pad + Json(key).dump() + ": ";
            render(v, out, indent + 2);
            out += ++k < j.size() ? ",\n" : "\n";
        }
        out += close + "}";
    } else if (j.is_array() && !j.empty() && !scalar_array(j)) {
        out += "[\n";
        for (std::size_t k = 0; k < j.size(); ++k) {
            out += pad;
            render(j[k], out, indent + 2);
            out += k + 1 < j.size() ? ",\n" : "\n";
        }
        out += close + "]";
    } else if (j.is_array() && !j.empty()) {
        out += "[";
        for (std::size_t k = 0; k < j.size(); ++k) out += (k ? ", " : "") + j[k].dump();
        out += "]";
    } else {
        out += j.dump();
    }
}

inline std::string render(const Json& j) {
    std::string out;
    render(j, out);
    return out + "\n";
}

} // namespace svf
