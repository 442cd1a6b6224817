#pragma once

/**
 * @file cli.hpp
 * @brief Job dispatch and report rendering behind the `ultraspec` command.
 *
 * Every command reads one JSON spec file and produces a report, rendered as
 * JSON or as aligned text. Exit codes: 0 success, 1 verify found a
 * violation, 2 parse or validation failure, 3 mathematical error.
 */

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ultraspec/c0space.hpp"
#include "ultraspec/error.hpp"
#include "ultraspec/gelfand.hpp"
#include "ultraspec/io.hpp"
#include "ultraspec/kfield.hpp"
#include "ultraspec/lt_subalgebra.hpp"
#include "ultraspec/nstar_measure.hpp"
#include "ultraspec/operators.hpp"
#include "ultraspec/random.hpp"
#include "ultraspec/verify.hpp"

namespace ultraspec::cli {

using io::json;

enum exit_code : int { ok = 0, violation = 1, invalid = 2, math = 3 };

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> all{"gelfand",    "inverse-gelfand", "measure",    "integrate",
                                              "scalar-integrate", "matrix",    "resolvent",  "spectrum",
                                              "membership", "classify",        "decompose",  "verify"};
    return all;
}

struct JobParams {
    std::size_t dim = 8;
    int precision = kDefaultPrecision;
    std::uint64_t seed = kDefaultSeed;
};

struct Report {
    json body;
    bool violation = false;
};

namespace detail {

inline FamilyPtr family_of(const json& in) {
    return in.contains("family") ? io::family_from_json(in["family"], "/family") : OrthonormalFamily::canonical();
}

inline SpectralOperator with_family(const SpectralOperator& h, const FamilyPtr& fam) {
    try {
        return {h.alpha(), h.lambda(), fam};
    } catch (const error& e) {
        throw error(errc::parse_error, std::string("/family: ") + e.what());
    }
}

inline json operator_report(const SpectralOperator& h, const JobParams& p) {
    json j;
    j["operator"] = h.to_string();
    j["spec"] = io::to_json(h);
    j["norm_valuation"] = io::to_json(op_norm(h));
    j["matrix"] = io::to_json(to_matrix(h, p.dim, p.precision));
    return j;
}

inline void merge(json& into, const json& from) {
    for (auto it = from.begin(); it != from.end(); ++it) into[it.key()] = it.value();
}

inline json table_json(const ValueTable& t) { return io::to_json(t); }

inline ValueTable table_of(const json& in) { return io::value_table_from_json(io::detail::field(in, "table", ""), "/table"); }

inline Vector lambda_of(const json& in) { return io::vector_from_json(io::detail::field(in, "lambda", ""), "/lambda"); }

inline NStarFunction function_of(const json& in) {
    return io::function_from_json(io::detail::field(in, "function", ""), "/function");
}

inline SpectralOperator operator_of(const json& in) {
    return io::operator_from_json(io::detail::field(in, "operator", ""), "/operator");
}

inline Clopen clopen_of(const json& in) {
    return in.contains("clopen") ? io::clopen_from_json(in["clopen"], "/clopen") : Clopen::whole();
}

inline json run_gelfand(const json& in, const JobParams&) {
    const SpectralOperator h = operator_of(in);
    json r;
    r["operator"] = h.to_string();
    r["transform"] = io::to_json(gelfand_transform(h));
    json chars = json::array();
    chars.push_back(json{{"point", "inf"}, {"value", io::to_json(character(h, NStarPoint::infinity()))}});
    for (const auto& [n, _] : h.lambda().entries())
        chars.push_back(json{{"point", n}, {"value", io::to_json(character(h, NStarPoint::at(n)))}});
    r["characters"] = chars;
    r["norm_valuation"] = io::to_json(op_norm(h));
    r["spectral_norm_valuation"] = io::to_json(spectral_norm(h));
    return r;
}

inline json run_inverse_gelfand(const json& in, const JobParams& p) {
    const NStarFunction f = function_of(in);
    json r;
    r["function"] = io::to_json(f);
    r["function_norm_valuation"] = io::to_json(f.sup_norm());
    merge(r, operator_report(inverse_gelfand(f, family_of(in)), p));
    return r;
}

inline json run_measure(const json& in, const JobParams& p) {
    const Clopen c = io::clopen_from_json(io::detail::field(in, "clopen", ""), "/clopen");
    json r;
    r["clopen"] = c.to_string();
    merge(r, operator_report(measure(c, family_of(in)), p));
    return r;
}

inline json run_integrate(const json& in, const JobParams& p) {
    const FamilyPtr fam = family_of(in);
    json r;
    if (in.contains("table")) {
        const Vector lambda = lambda_of(in);
        r["domain"] = "sigma";
        r["lambda"] = io::to_json(lambda);
        r["table"] = io::to_json(table_of(in));
        merge(r, operator_report(sigma_integrate(table_of(in), lambda, fam), p));
        return r;
    }
    const NStarFunction f = function_of(in);
    const Clopen c = clopen_of(in);
    const SpectralOperator exact = integrate(f, c, fam);
    r["domain"] = c.to_string();
    merge(r, operator_report(exact, p));
    if (in.contains("partition")) {
        const TaggedPartition part = io::partition_from_json(in["partition"], "/partition");
        const SpectralOperator sum = riemann_sum(f, part, fam);
        r["riemann_sum"] = sum.to_string();
        r["riemann_error_valuation"] = io::to_json(op_norm(sum - exact));
    }
    json errs = json::array();
    for (const auto& part : refinement_chain(f, c)) errs.push_back(io::to_json(op_norm(riemann_sum(f, part, fam) - exact)));
    r["refinement_error_valuations"] = errs;
    return r;
}

inline json run_scalar_integrate(const json& in, const JobParams& p) {
    const Vector x = io::vector_from_json(io::detail::field(in, "x", ""), "/x");
    const Vector y = io::vector_from_json(io::detail::field(in, "y", ""), "/y");
    const ScalarMeasureView view(x, y, family_of(in));
    const Clopen c = clopen_of(in);
    json r;
    r["clopen"] = c.to_string();
    r["measure_value"] = io::to_json(scalar_measure_value(view, c, p.precision));
    if (in.contains("function")) r["integral"] = io::to_json(scalar_integrate(view, function_of(in), p.precision));
    return r;
}

inline json run_matrix(const json& in, const JobParams& p) {
    const NStarFunction f = function_of(in);
    const MatrixRep rep = matrix_rep(f, family_of(in), p.dim, p.precision);
    json r;
    r["dim"] = rep.dim;
    r["function_norm_valuation"] = io::to_json(f.sup_norm());
    r["matrix_norm_valuation"] = io::to_json(rep.norm());
    r["matrix"] = io::to_json(rep.entries);
    return r;
}

inline json run_resolvent(const json& in, const JobParams& p) {
    const Scalar z = io::scalar_from_json(io::detail::field(in, "z", ""), "/z");
    const Vector lambda = lambda_of(in);
    json r;
    r["z"] = io::to_json(z);
    r["lambda"] = io::to_json(lambda);
    r["precision"] = p.precision;
    merge(r, operator_report(resolvent(z, lambda, family_of(in), p.precision), p));
    return r;
}

inline json run_spectrum(const json& in, const JobParams&) {
    const Vector lambda = lambda_of(in);
    const Spectrum s = spectrum_of(lambda);
    json r = io::to_json(s);
    r["contains_zero"] = true;
    r["idempotent_count"] = predicted_idempotents(lambda).size();
    return r;
}

inline json run_membership(const json& in, const JobParams&) {
    const SpectralOperator h = operator_of(in);
    const Vector lambda = lambda_of(in);
    const MembershipResult m = membership(h, lambda);
    json r;
    r["operator"] = h.to_string();
    r["member"] = m.member;
    if (m.factored) r["function_on_spectrum"] = io::to_json(*m.factored);
    if (m.violation)
        r["violation"] = json{{"points", json::array({io::to_json(m.violation->first), io::to_json(m.violation->second)})},
                              {"values", json::array({io::to_json(character(h, m.violation->first)),
                                                      io::to_json(character(h, m.violation->second))})}};
    return r;
}

inline json run_classify(const json& in, const JobParams&) {
    json r;
    if (in.contains("operator")) {
        const Idempotent e = classify_idempotent(operator_of(in));
        r["operator"] = e.as_operator.to_string();
        r["form"] = e.to_string();
        if (in.contains("lambda")) r["member"] = membership(e.as_operator, lambda_of(in)).member;
        return r;
    }
    const Vector lambda = lambda_of(in);
    json list = json::array();
    for (const auto& e : predicted_idempotents(lambda)) list.push_back(json{{"form", e.to_string()}, {"operator", e.as_operator.to_string()}});
    r["lambda"] = io::to_json(lambda);
    r["idempotents"] = list;
    return r;
}

inline json run_decompose(const json& in, const JobParams&) {
    const MatrixOperator m = io::matrix_from_json(io::detail::field(in, "matrix", ""), "/matrix");
    const SpectralOperator h = eigendecompose(m);
    json r;
    r["operator"] = h.to_string();
    r["lambda"] = io::to_json(h.lambda());
    r["family"] = io::to_json(h.family());
    r["eigenvalues"] = io::to_json(spectrum_of(h.lambda()))["eigenvalues"];
    r["norm_valuation"] = io::to_json(operator_norm(m));
    json classes = json::object();
    for (auto cls : {OperatorClass::A0, OperatorClass::A1, OperatorClass::compact}) {
        const ClassCertificate c = certify_class(m, cls);
        classes[std::string(class_name(cls))] = c.finite_check && c.decaying ? "decaying" : "finite";
    }
    r["classes"] = classes;
    return r;
}

inline VerifyInputs verify_inputs(const json& in) {
    VerifyInputs v;
    auto each = [&](const char* key, auto&& fn) {
        if (!in.contains(key)) return;
        const json& list = in[key];
        if (!list.is_array()) io::detail::fail(std::string("/") + key, "expected a list");
        for (std::size_t i = 0; i < list.size(); ++i) fn(list[i], "/" + std::string(key) + "/" + std::to_string(i));
    };
    each("scalars", [&](const json& j, const std::string& w) { v.scalars.push_back(io::scalar_from_json(j, w)); });
    each("vectors", [&](const json& j, const std::string& w) { v.vectors.push_back(io::vector_from_json(j, w)); });
    each("matrices", [&](const json& j, const std::string& w) { v.matrices.push_back(io::matrix_from_json(j, w)); });
    each("operators", [&](const json& j, const std::string& w) { v.operators.push_back(io::operator_from_json(j, w)); });
    each("functions", [&](const json& j, const std::string& w) { v.functions.push_back(io::function_from_json(j, w)); });
    each("clopens", [&](const json& j, const std::string& w) { v.clopens.push_back(io::clopen_from_json(j, w)); });
    each("lambdas", [&](const json& j, const std::string& w) { v.lambdas.push_back(io::vector_from_json(j, w)); });
    return v;
}

inline Report run_verify_job(const json& in, const JobParams& p) {
    VerifyOptions opts;
    opts.seed = p.seed;
    opts.precision = p.precision;
    const auto results = run_verify(verify_inputs(in), opts);
    Report rep;
    json suites = json::array();
    std::size_t failed = 0;
    for (const auto& s : results) {
        json row{{"suite", s.name}, {"cases", s.cases}, {"status", s.passed() ? "pass" : "FAIL"}};
        if (!s.passed()) {
            row["failures"] = s.failures;
            row["witness"] = s.witness;
            ++failed;
        }
        suites.push_back(std::move(row));
    }
    rep.body["seed"] = p.seed;
    rep.body["suites"] = suites;
    rep.body["failed"] = failed;
    rep.violation = failed > 0;
    return rep;
}

} // namespace detail

/// Runs one command on an already parsed spec document.
inline Report run(const std::string& command, const json& in, const JobParams& p) {
    if (!in.is_object()) throw error(errc::parse_error, "/: expected a JSON object");
    if (p.dim == 0) throw error(errc::parse_error, "--dim must be positive");
    Report rep;
    if (command == "verify") {
        rep = detail::run_verify_job(in, p);
    } else {
        using Fn = json (*)(const json&, const JobParams&);
        static const std::vector<std::pair<std::string, Fn>> table{
            {"gelfand", detail::run_gelfand},       {"inverse-gelfand", detail::run_inverse_gelfand},
            {"measure", detail::run_measure},       {"integrate", detail::run_integrate},
            {"scalar-integrate", detail::run_scalar_integrate}, {"matrix", detail::run_matrix},
            {"resolvent", detail::run_resolvent},   {"spectrum", detail::run_spectrum},
            {"membership", detail::run_membership}, {"classify", detail::run_classify},
            {"decompose", detail::run_decompose},
        };
        auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == command; });
        if (it == table.end()) throw error(errc::parse_error, "unknown command \"" + command + "\"");
        rep.body = it->second(in, p);
    }
    json out;
    out["command"] = command;
    detail::merge(out, rep.body);
    rep.body = std::move(out);
    return rep;
}

namespace detail {

inline bool is_flat(const json& j) { return !j.is_array() && !j.is_object(); }

inline std::string cell(const json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

inline bool is_matrix(const json& j) {
    if (!j.is_array() || j.empty()) return false;
    for (const auto& row : j)
        if (!row.is_array() || !std::all_of(row.begin(), row.end(), is_flat)) return false;
    return true;
}

inline void render(std::ostream& os, const json& j, std::size_t indent);

inline void render_value(std::ostream& os, const json& v, std::size_t indent) {
    const std::string pad(indent, ' ');
    if (is_flat(v)) {
        os << cell(v) << '\n';
    } else if (v.is_array() && std::all_of(v.begin(), v.end(), is_flat)) {
        os << '[';
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << cell(v[i]);
        os << "]\n";
    } else if (is_matrix(v)) {
        std::vector<std::size_t> width;
        for (const auto& row : v)
            for (std::size_t k = 0; k < row.size(); ++k) {
                if (width.size() <= k) width.push_back(0);
                width[k] = std::max(width[k], cell(row[k]).size());
            }
        os << '\n';
        for (const auto& row : v) {
            os << pad << "  ";
            for (std::size_t k = 0; k < row.size(); ++k) {
                const std::string c = cell(row[k]);
                os << (k ? "  " : "") << std::string(width[k] - c.size(), ' ') << c;
            }
            os << '\n';
        }
    } else if (v.is_array()) {
        os << '\n';
        for (const auto& item : v) {
            if (item.is_object()) {
                os << pad << "  -\n";
                render(os, item, indent + 4);
            } else {
                os << pad << "  - ";
                render_value(os, item, indent + 4);
            }
        }
    } else {
        os << '\n';
        render(os, v, indent + 2);
    }
}

inline void render(std::ostream& os, const json& j, std::size_t indent) {
    std::size_t width = 0;
    for (auto it = j.begin(); it != j.end(); ++it) width = std::max(width, it.key().size());
    for (auto it = j.begin(); it != j.end(); ++it) {
        os << std::string(indent, ' ') << it.key() << std::string(width - it.key().size() + 2, ' ');
        render_value(os, it.value(), indent);
    }
}

/// Verify gets a table instead of the generic layout.
inline void render_verify(std::ostream& os, const json& j) {
    std::size_t width = 0;
    for (const auto& s : j["suites"]) width = std::max(width, s["suite"].get<std::string>().size());
    os << "seed " << j["seed"].dump() << '\n';
    for (const auto& s : j["suites"]) {
        const std::string name = s["suite"].get<std::string>();
        os << (s["status"] == "pass" ? "pass  " : "FAIL  ") << name << std::string(width - name.size() + 2, ' ')
           << s["cases"].dump() << " cases\n";
        if (s.contains("witness")) {
            std::istringstream lines(s["witness"].get<std::string>());
            for (std::string line; std::getline(lines, line);) os << "      " << line << '\n';
        }
    }
    os << j["suites"].size() << " suites, " << j["failed"].dump() << " failed\n";
}

} // namespace detail

inline std::string render_text(const json& body) {
    std::ostringstream os;
    if (body.value("command", "") == "verify")
        detail::render_verify(os, body);
    else
        detail::render(os, body, 0);
    return os.str();
}

inline std::string render(const json& body, const std::string& format) {
    return format == "json" ? body.dump(2) + "\n" : render_text(body);
}

/// Full command-line entry point; returns the process exit code.
inline int main(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Exact operator theory on c0 over Q((t))", "ultraspec"};
    std::string command, input, output, format = "text";
    JobParams params;
    params.seed = seed_from_env();
    app.add_option("command", command, "Command to run")->required()->check(CLI::IsMember(commands()));
    app.add_option("--input", input, "JSON spec file");
    app.add_option("--dim", params.dim, "Truncation dimension N")->check(CLI::PositiveNumber);
    app.add_option("--prec", params.precision, "Precision P: results are exact modulo t^P")->check(CLI::NonNegativeNumber);
    app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--output", output, "Write the report here instead of stdout");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_code::invalid;
    }

    try {
        json in = json::object();
        if (!input.empty()) {
            std::ifstream f(input);
            if (!f) throw error(errc::parse_error, "cannot read " + input);
            std::stringstream buf;
            buf << f.rdbuf();
            in = io::parse_document(buf.str());
        } else if (command != "verify") {
            throw error(errc::parse_error, "--input is required for " + command);
        }
        const Report rep = run(command, in, params);
        const std::string text = render(rep.body, format);
        if (output.empty()) {
            out << text;
        } else {
            std::ofstream f(output);
            if (!f) throw error(errc::parse_error, "cannot write " + output);
            f << text;
        }
        return rep.violation ? exit_code::violation : exit_code::ok;
    } catch (const error& e) {
        err << "error: " << e.what() << '\n';
        return is_math_error(e.code()) ? exit_code::math : exit_code::invalid;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::invalid;
    }
}

} // namespace ultraspec::cli
