#pragma once

/**
 * @file io.hpp
 * @brief JSON encodings of the library's objects.
 *
 * Scalars are strings in the `1/2*t^-1 + 3 + O(t^5)` syntax (plain JSON
 * integers are accepted on input). Vectors are dense lists of scalars with
 * trailing zeros implied; matrices are row-major lists of rows.
 */

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "ultraspec/c0space.hpp"
#include "ultraspec/gelfand.hpp"
#include "ultraspec/kfield.hpp"
#include "ultraspec/lt_subalgebra.hpp"
#include "ultraspec/nstar_measure.hpp"
#include "ultraspec/operators.hpp"

namespace ultraspec::io {

using json = nlohmann::ordered_json;

namespace detail {

[[noreturn]] inline void fail(const std::string& where, const std::string& msg) {
    throw error(errc::parse_error, (where.empty() ? std::string("/") : where) + ": " + msg);
}

inline const json& field(const json& j, const std::string& key, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(where, "missing field \"" + key + "\"");
    return *it;
}

inline std::size_t index_value(const json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<long long>() < 1) fail(where, "expected a positive integer index");
    return j.get<std::size_t>();
}

} // namespace detail

inline Scalar scalar_from_json(const json& j, const std::string& where = "") {
    if (j.is_number_integer()) return Scalar(j.get<long>());
    if (!j.is_string()) detail::fail(where, "expected a scalar string");
    try {
        return parse_scalar(j.get<std::string>());
    } catch (const error& e) {
        detail::fail(where, e.message());
    }
}

inline json to_json(const Scalar& s) { return s.to_string(); }

inline Vector vector_from_json(const json& j, const std::string& where = "") {
    if (!j.is_array()) detail::fail(where, "expected a list of scalars");
    std::vector<Scalar> dense;
    for (std::size_t i = 0; i < j.size(); ++i) dense.push_back(scalar_from_json(j[i], where + "/" + std::to_string(i)));
    return Vector::from_dense(dense);
}

inline json to_json(const Vector& v) {
    json a = json::array();
    for (std::size_t i = 1; i <= v.max_index(); ++i) a.push_back(to_json(v[i]));
    return a;
}

inline MatrixOperator matrix_from_json(const json& j, const std::string& where = "") {
    if (!j.is_array()) detail::fail(where, "expected a list of rows");
    std::vector<std::vector<Scalar>> rows;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string w = where + "/" + std::to_string(i);
        if (!j[i].is_array()) detail::fail(w, "expected a row");
        if (j[i].size() != j.size()) detail::fail(w, "matrix is not square");
        std::vector<Scalar> row;
        for (std::size_t k = 0; k < j[i].size(); ++k) row.push_back(scalar_from_json(j[i][k], w + "/" + std::to_string(k)));
        rows.push_back(std::move(row));
    }
    return MatrixOperator::from_rows(rows);
}

inline json to_json(const MatrixOperator& m) {
    json a = json::array();
    for (const auto& row : m.rows()) {
        json r = json::array();
        for (const auto& s : row) r.push_back(to_json(s));
        a.push_back(std::move(r));
    }
    return a;
}

inline FamilyPtr family_from_json(const json& j, const std::string& where = "") {
    if (j.is_string()) {
        if (j.get<std::string>() != "canonical") detail::fail(where, "unknown family \"" + j.get<std::string>() + "\"");
        return OrthonormalFamily::canonical();
    }
    if (!j.is_array()) detail::fail(where, "expected \"canonical\" or a list of vectors");
    std::vector<Vector> members;
    for (std::size_t i = 0; i < j.size(); ++i) members.push_back(vector_from_json(j[i], where + "/" + std::to_string(i)));
    try {
        return OrthonormalFamily::from_members(std::move(members));
    } catch (const error& e) {
        detail::fail(where, e.what());
    }
}

inline json to_json(const FamilyPtr& f) {
    if (f->is_canonical()) return "canonical";
    json a = json::array();
    for (const auto& m : f->members()) a.push_back(to_json(m));
    return a;
}

inline SpectralOperator operator_from_json(const json& j, const std::string& where = "") {
    if (!j.is_object()) detail::fail(where, "expected an operator object");
    Scalar alpha = j.contains("alpha") ? scalar_from_json(j["alpha"], where + "/alpha") : Scalar{};
    Vector lambda = j.contains("lambda") ? vector_from_json(j["lambda"], where + "/lambda") : Vector{};
    FamilyPtr fam = j.contains("family") ? family_from_json(j["family"], where + "/family") : OrthonormalFamily::canonical();
    try {
        return {alpha, lambda, fam};
    } catch (const error& e) {
        detail::fail(where, e.what());
    }
}

inline json to_json(const SpectralOperator& h) {
    return json{{"alpha", to_json(h.alpha())}, {"lambda", to_json(h.lambda())}, {"family", to_json(h.family())}};
}

inline Clopen clopen_from_json(const json& j, const std::string& where = "");

/// Also accepts {"indicator": clopen} for eta_C.
inline NStarFunction function_from_json(const json& j, const std::string& where = "") {
    if (!j.is_object()) detail::fail(where, "expected a function object");
    if (j.contains("indicator")) return indicator(clopen_from_json(j["indicator"], where + "/indicator"));
    Scalar inf = j.contains("at_infinity") ? scalar_from_json(j["at_infinity"], where + "/at_infinity") : Scalar{};
    Vector d = j.contains("deviations") ? vector_from_json(j["deviations"], where + "/deviations") : Vector{};
    return {inf, d};
}

inline json to_json(const NStarFunction& f) {
    return json{{"at_infinity", to_json(f.at_infinity())}, {"deviations", to_json(f.deviations())}};
}

inline Clopen clopen_from_json(const json& j, const std::string& where) {
    if (!j.is_object() || j.size() != 1 || (!j.contains("finite") && !j.contains("cofinite")))
        detail::fail(where, "expected {\"finite\":[...]} or {\"cofinite\":[...]}");
    const bool finite = j.contains("finite");
    const json& list = finite ? j["finite"] : j["cofinite"];
    const std::string w = where + (finite ? "/finite" : "/cofinite");
    if (!list.is_array()) detail::fail(w, "expected a list of indices");
    std::set<std::size_t> base;
    for (std::size_t i = 0; i < list.size(); ++i) base.insert(detail::index_value(list[i], w + "/" + std::to_string(i)));
    return finite ? Clopen::finite(std::move(base)) : Clopen::cofinite(std::move(base));
}

inline json to_json(const Clopen& c) {
    json a = json::array();
    for (auto n : c.base()) a.push_back(n);
    return json{{c.is_finite() ? "finite" : "cofinite", a}};
}

inline NStarPoint point_from_json(const json& j, const std::string& where) {
    if (j.is_string() && j.get<std::string>() == "inf") return NStarPoint::infinity();
    return NStarPoint::at(detail::index_value(j, where));
}

inline json to_json(const NStarPoint& p) {
    if (p.is_infinity()) return "inf";
    return *p.index;
}

inline TaggedPartition partition_from_json(const json& j, const std::string& where = "") {
    if (!j.is_array()) detail::fail(where, "expected a list of tagged pieces");
    TaggedPartition p;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string w = where + "/" + std::to_string(i);
        p.pieces.push_back({clopen_from_json(detail::field(j[i], "piece", w), w + "/piece"),
                            point_from_json(detail::field(j[i], "tag", w), w + "/tag")});
    }
    return p;
}

inline json to_json(const TaggedPartition& p) {
    json a = json::array();
    for (const auto& [piece, tag] : p.pieces) a.push_back(json{{"piece", to_json(piece)}, {"tag", to_json(tag)}});
    return a;
}

inline ValueTable value_table_from_json(const json& j, const std::string& where = "") {
    ValueTable t;
    t.at_zero = scalar_from_json(detail::field(j, "at_zero", where), where + "/at_zero");
    const json& vals = detail::field(j, "values", where);
    if (!vals.is_array()) detail::fail(where + "/values", "expected a list");
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const std::string w = where + "/values/" + std::to_string(i);
        t.values.emplace_back(scalar_from_json(detail::field(vals[i], "eigenvalue", w), w + "/eigenvalue"),
                              scalar_from_json(detail::field(vals[i], "value", w), w + "/value"));
    }
    return t;
}

inline json to_json(const ValueTable& t) {
    json vals = json::array();
    for (const auto& [e, v] : t.values) vals.push_back(json{{"eigenvalue", to_json(e)}, {"value", to_json(v)}});
    return json{{"at_zero", to_json(t.at_zero)}, {"values", vals}};
}

inline json to_json(const NormValue& n) {
    if (n.is_zero_norm()) return "inf";
    if (n.is_integral()) return n.valuation();
    return n.to_string();
}

inline json to_json(const Spectrum& s) {
    json classes = json::array();
    for (const auto& c : s.classes) classes.push_back(json{{"eigenvalue", to_json(c.value)}, {"indices", c.indices}});
    json eig = json::array();
    for (const auto& e : s.eigenvalues()) eig.push_back(to_json(e));
    return json{{"eigenvalues", eig}, {"classes", classes}};
}

inline json to_json(const Idempotent& e) {
    return json{{"form", e.form == Idempotent::Form::sum_of_p ? "SumOfP" : "IdMinusSumOfP"},
                {"indices", e.indices},
                {"operator", to_json(e.as_operator)}};
}

/// Parses a whole document; syntax errors carry nlohmann's line/column text.
inline json parse_document(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw error(errc::parse_error, e.what());
    }
}

} // namespace ultraspec::io
