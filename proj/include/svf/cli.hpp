#pragma once

// Command-line front end. run() never throws: library errors become exit
// codes and an error record on standard output.
//
//   0 ok, 1 identity mismatch, 2 parse or validation error,
//   3 hypothesis failed, 4 precision exhausted

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "svf/corpus.hpp"
#include "svf/json_io.hpp"

namespace svf {

inline int exit_code(ErrorKind k) {
    switch (k) {
    case ErrorKind::hypothesis_failed:
    case ErrorKind::multiple_root:
    case ErrorKind::multiple_root_at_one: return 3;
    case ErrorKind::precision_exhausted: return 4;
    default: return 2;
    }
}

namespace cli_detail {

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::parse, "cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        fail(ErrorKind::parse, path + ": " + e.what());
    }
}

/// A file path, or the name of a built-in example.
inline std::pair<VarietySpec, std::string> load_variety(const std::string& arg) {
    if (!std::filesystem::exists(arg)) {
        if (const auto* e = find_corpus(arg)) return {e->spec, e->name};
        fail(ErrorKind::parse, "no such file or corpus entry: " + arg);
    }
    const Json j = read_json_file(arg);
    VarietySpec s = variety_from_json(j);
    std::string name = j.contains("name") ? j.at("name").get<std::string>() : kind_name(s.kind);
    return {s, name};
}

inline Json header(const char* kind) {
    Json j;
    j["schema"] = kSchema;
    j["kind"] = kind;
    return j;
}

struct Options {
    std::string input;
    std::string variety;
    std::string package;
    std::optional<long> r;
    std::optional<long> ell;
    long prec = kDefaultPrecision;
    bool prec_given = false;
    unsigned long budget = kDefaultBudget;
    std::optional<long> truncation;
    std::vector<std::string> corpus_args;
};

inline long checked_prec(const Options& o) {
    if (o.prec < 1 || o.prec > 4096) fail(ErrorKind::parse, "--prec must lie in 1..4096");
    return o.prec;
}

inline int cmd_slopes(const Options& o, std::ostream& out) {
    const long prec = checked_prec(o);
    const CrystalInput in = crystal_from_json(read_json_file(o.input), prec);
    const auto& e = in.crystal;
    const SlopeProfile prof = slope_profile_with_factors(e);
    Json j = header("slopes");
    j["p"] = e.ctx->p();
    j["a"] = e.a();
    j["rank"] = e.rank();
    j["precision"] = prec;
    j["charpoly"] = poly_to_json(charpoly(linearize(e)));
    j["slopes"] = to_json(prof);
    j["newton"] = vertices_to_json(newton_vertices(prof));
    Json factors = Json::array();
    for (std::size_t i = 0; i < prof.factors.size(); ++i)
        factors.push_back({{"slope", to_json(prof.segments[i].slope)}, {"charpoly", poly_to_json(prof.factors[i])}});
    j["factors"] = factors;
    out << render(j);
    return 0;
}

inline int cmd_gauge(const Options& o, std::ostream& out) {
    const long prec = checked_prec(o);
    const CrystalInput in = crystal_from_json(read_json_file(o.input), prec);
    const VirtualCrystal vc(in.crystal, in.lattice ? *in.lattice : Lattice::standard(in.crystal.ctx, in.crystal.rank(), prec));
    const FGaugeWindow g = hodge(vc);
    const GaugeAxioms ax = check_gauge_axioms(vc, g);
    const SlopeGaugeReport sg = slope_gauge_check(vc, g);
    Json j = header("gauge");
    j["p"] = in.crystal.ctx->p();
    j["a"] = in.crystal.a();
    j["rank"] = in.crystal.rank();
    j["precision"] = prec;
    j["window"] = {{"i_min", g.i_min}, {"i_max", g.i_max}};
    Json filt = Json::array();
    for (long i = g.i_min; i <= g.i_max; ++i) filt.push_back({{"i", i}, {"basis", to_json(g.at(i).basis())}});
    j["filtration"] = filt;
    j["hodge_numbers"] = to_json(sg.hodge_numbers);
    j["slope_buckets"] = to_json(sg.slope_buckets);
    j["newton"] = vertices_to_json(sg.newton);
    j["hodge"] = vertices_to_json(sg.hodge);
    j["axioms"] = {{"p_step", ax.p_step}, {"exhaustive", ax.exhaustive}, {"frobenius_onto", ax.frobenius_onto}};
    j["newton_above_hodge"] = sg.newton_above_hodge;
    j["endpoints_equal"] = sg.endpoints_equal;
    const bool ok = ax.all() && sg.ok();
    j["ok"] = ok;
    out << render(j);
    return ok ? 0 : 1;
}

inline int cmd_zeta(const Options& o, std::ostream& out) {
    long terms = o.truncation ? *o.truncation : (o.prec_given ? o.prec : 10);
    if (terms < 1 || terms > 64) fail(ErrorKind::parse, "--truncation must lie in 1..64");
    const auto [spec, name] = load_variety(o.variety);
    const CohomologyPackage pkg = package(spec, o.budget);
    const RationalFunction z = assemble(pkg.charpolys());
    const auto counts = point_counts(spec, static_cast<unsigned>(terms), o.budget);
    const RatPoly series = z.series(static_cast<std::size_t>(terms) + 1);
    const RatPoly euler = euler_product_series(euler_data_from_counts(spec, counts),
                                               static_cast<std::size_t>(terms) + 1);
    // N_e from the logarithmic derivative of the package: N_e = sum_j (-1)^j tr(F^e | H^j)
    std::vector<mpq_class> from_pkg(static_cast<std::size_t>(terms) + 1, 0);
    for (const auto& [jdeg, d] : pkg.degrees) {
        const auto sums = inverse_root_power_sums(to_rat(d.charpoly), static_cast<std::size_t>(terms));
        for (long e = 1; e <= terms; ++e) from_pkg[e] += (jdeg % 2 == 0 ? 1 : -1) * sums[e];
    }
    // a constant twist T weights every F_{q^e}-point by tr((T^a)^e)
    std::vector<mpz_class> weighted = counts;
    if (spec.twist) {
        IntMatrix ta = *spec.twist;
        for (unsigned i = 1; i < spec.a; ++i) ta = ta * *spec.twist;
        IntMatrix pw = ta;
        for (long e = 1; e <= terms; ++e) {
            mpz_class tr = 0;
            for (std::size_t i = 0; i < pw.rows(); ++i) tr += pw(i, i);
            weighted[e - 1] *= tr;
            pw = pw * ta;
        }
    }
    bool counts_match = true;
    for (long e = 1; e <= terms; ++e) counts_match = counts_match && from_pkg[e] == weighted[e - 1];
    Json j = header("zeta");
    j["name"] = name;
    j["variety"] = to_json(spec);
    j["q"] = to_json(spec.q());
    j["truncation"] = terms;
    j["counts"] = poly_to_json(counts);
    if (spec.twist) j["weighted_counts"] = poly_to_json(weighted);
    j["closed_points"] = poly_to_json(closed_points(counts));
    Json factors = Json::object();
    for (const auto& [d, f] : pkg.charpolys()) factors[std::to_string(d)] = poly_to_json(f);
    j["factors"] = factors;
    j["zeta"] = z.to_string();
    j["numerator"] = poly_to_json(z.numerator);
    j["denominator"] = poly_to_json(z.denominator);
    j["series"] = poly_to_json(series);
    j["euler_series"] = poly_to_json(euler);
    j["euler_match"] = series == euler;
    j["counts_match"] = counts_match;
    out << render(j);
    return series == euler && counts_match ? 0 : 1;
}

inline int cmd_zf(const Options& o, std::ostream& out) {
    const GammaModule m = gamma_from_json(read_json_file(o.input));
    const auto [inv, coinv] = invariants_coinvariants(m);
    const ZfValue a = z_of_f_snf(m);
    const ZfValue b = z_of_f_polynomial(m);
    Json j = header("zf");
    j["module"] = to_json(m);
    j["invariants"] = to_json(inv);
    j["coinvariants"] = to_json(coinv);
    j["eigenvalue_one_multiplicity"] = eigenvalue_one_multiplicity(m);
    j["snf"] = {{"z", prime_power(m.prime, a.exponent)},
                {"exponent", a.exponent},
                {"kernel_length", a.kernel_length},
                {"cokernel_length", a.cokernel_length}};
    j["polynomial"] = {{"z", prime_power(m.prime, b.exponent)}, {"exponent", b.exponent}};
    j["agree"] = a.exponent == b.exponent;
    out << render(j);
    return a.exponent == b.exponent ? 0 : 1;
}

inline int cmd_verify(const Options& o, std::ostream& out) {
    if (o.package.empty() == o.variety.empty()) fail(ErrorKind::parse, "verify needs exactly one of --package and --variety");
    if (!o.r) fail(ErrorKind::parse, "verify needs --r");
    const long prec = checked_prec(o);
    CohomologyPackage pkg;
    if (!o.package.empty()) {
        pkg = package_from_json(read_json_file(o.package));
    } else {
        const auto [spec, name] = load_variety(o.variety);
        pkg = package(spec, o.budget);
        pkg.name = name;
    }
    const VerificationReport rep = o.ell ? verify_elladic(pkg, *o.r, *o.ell) : verify_padic(pkg, *o.r, prec);
    out << render(to_json(rep));
    return rep.ok() ? 0 : 1;
}

inline int cmd_corpus(const Options& o, std::ostream& out, unsigned long budget) {
    if (o.corpus_args.empty()) fail(ErrorKind::parse, "corpus needs an action: list or show NAME");
    const std::string& action = o.corpus_args[0];
    if (action == "list") {
        if (o.corpus_args.size() != 1) fail(ErrorKind::parse, "corpus list takes no arguments");
        Json j = header("corpus");
        Json entries = Json::array();
        for (const auto& e : corpus())
            entries.push_back({{"name", e.name}, {"description", e.description}, {"variety", to_json(e.spec)}});
        j["entries"] = entries;
        out << render(j);
        return 0;
    }
    if (action == "show") {
        if (o.corpus_args.size() != 2) fail(ErrorKind::parse, "corpus show needs exactly one name");
        const auto* e = find_corpus(o.corpus_args[1]);
        if (!e) fail(ErrorKind::parse, "no corpus entry named " + o.corpus_args[1]);
        CohomologyPackage pkg = package(e->spec, budget);
        pkg.name = e->name;
        Json j = header("corpus-entry");
        j["name"] = e->name;
        j["description"] = e->description;
        j["variety"] = to_json(e->spec);
        j["package"] = to_json(pkg);
        out << render(j);
        return 0;
    }
    fail(ErrorKind::parse, "unknown corpus action \"" + action + "\"");
}

} // namespace cli_detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    using namespace cli_detail;
    Options o;
    CLI::App app{"Special values of zeta functions: slopes, gauges, z(f) and identity checks", "svf"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    auto* slopes = app.add_subcommand("slopes", "slope profile of an isocrystal");
    slopes->add_option("--input", o.input, "isocrystal JSON")->required();
    slopes->add_option("--prec", o.prec, "relative precision in p-adic digits");

    auto* gauge = app.add_subcommand("gauge", "Hodge filtration of a virtual crystal");
    gauge->add_option("--input", o.input, "isocrystal JSON with optional lattice")->required();
    gauge->add_option("--prec", o.prec, "relative precision in p-adic digits");

    auto* zeta = app.add_subcommand("zeta", "zeta function of a variety and its Euler product");
    zeta->add_option("--variety", o.variety, "variety JSON or corpus name")->required();
    zeta->add_option("--truncation", o.truncation, "series order (default 10)");
    auto* zeta_prec = zeta->add_option("--prec", o.prec, "series order when --truncation is absent");
    zeta->add_option("--budget", o.budget, "field elements enumerated per extension");

    auto* zf = app.add_subcommand("zf", "z(f) of a Gamma-module by both routes");
    auto* zf_input = zf->add_option("--input", o.input, "Gamma-module JSON");
    zf->add_option("--gamma", o.input, "alias of --input")->excludes(zf_input);

    auto* verify = app.add_subcommand("verify", "check the special-value identities at t = q^-r");
    verify->add_option("--package", o.package, "cohomology package JSON");
    verify->add_option("--variety", o.variety, "variety JSON or corpus name");
    verify->add_option("--r", o.r, "twist r")->required();
    verify->add_option("--ell", o.ell, "verify l-adically at this prime");
    verify->add_option("--prec", o.prec, "relative precision of the p-adic audit");
    verify->add_option("--budget", o.budget, "field elements enumerated per extension");

    auto* corp = app.add_subcommand("corpus", "built-in examples: list | show NAME");
    corp->add_option("action", o.corpus_args, "list, or show NAME");
    corp->add_option("--budget", o.budget, "field elements enumerated per extension");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    o.prec_given = zeta_prec->count() > 0;

    try {
        if (slopes->parsed()) return cmd_slopes(o, out);
        if (gauge->parsed()) return cmd_gauge(o, out);
        if (zeta->parsed()) return cmd_zeta(o, out);
        if (zf->parsed()) {
            if (o.input.empty()) fail(ErrorKind::parse, "zf needs --input");
            return cmd_zf(o, out);
        }
        if (verify->parsed()) return cmd_verify(o, out);
        if (corp->parsed()) return cmd_corpus(o, out, o.budget);
    } catch (const Error& e) {
        Json j = header("error");
        j["error"] = std::string(to_string(e.kind()));
        j["message"] = e.what();
        out << render(j);
        err << "svf: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const Json::exception& e) {
        Json j = header("error");
        j["error"] = "parse-error";
        j["message"] = e.what();
        out << render(j);
        err << "svf: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace svf
