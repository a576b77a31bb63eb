#pragma once

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "popcheck/inequalities.hpp"
#include "popcheck/means.hpp"
#include "popcheck/search.hpp"

namespace popcheck::report {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Every double is printed with 17 significant digits, which round-trips
/// exactly. Non-finite values become null.
inline std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    std::string s(buf);
    // Keep JSON readers from seeing an integer literal for a float field.
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

namespace detail {

inline void write(std::ostringstream& os, const Json& j, int indent, int depth) {
    const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
    const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
    const char* nl = indent > 0 ? "\n" : "";
    const char* sep = indent > 0 ? ": " : ":";
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << '{' << nl;
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) os << ',' << nl;
            first = false;
            os << pad << Json(it.key()).dump() << sep;
            write(os, it.value(), indent, depth + 1);
        }
        os << nl << close_pad << '}';
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            os << "[]";
            return;
        }
        os << '[';
        bool first = true;
        for (const auto& v : j) {
            if (!first) os << ", ";
            first = false;
            write(os, v, indent, depth + 1);
        }
        os << ']';
        return;
    }
    case Json::value_t::number_float: os << format_double(j.get<double>()); return;
    default: os << j.dump(); return;
    }
}

} // namespace detail

inline std::string to_text(const Json& j, int indent = 2) {
    std::ostringstream os;
    detail::write(os, j, indent, 0);
    return os.str();
}

inline Json triple_json(const Triple& t) { return Json::array({t.x, t.y, t.z}); }

inline Json vector_json(const std::vector<double>& v) {
    Json out = Json::array();
    for (double x : v) out.push_back(x);
    return out;
}

/// Top-level schema shared by every command:
/// {schema_version, command, inequality_id, inputs, lhs, rhs, residual,
///  verdict, tolerance, hypothesis_flags, witness, timing_ms}
inline Json base(const std::string& command, const std::string& inequality_id, Json inputs) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["inequality_id"] = inequality_id;
    j["inputs"] = std::move(inputs);
    j["lhs"] = nullptr;
    j["rhs"] = nullptr;
    j["residual"] = nullptr;
    j["verdict"] = nullptr;
    j["tolerance"] = nullptr;
    j["hypothesis_flags"] = Json::array();
    j["witness"] = nullptr;
    j["timing_ms"] = 0.0;
    return j;
}

inline void fill_residual(Json& j, const ineq::ResidualReport& r) {
    j["inequality_id"] = r.inequality_id;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["residual"] = r.residual;
    j["verdict"] = ineq::to_string(r.verdict);
    j["tolerance"] = r.tolerance;
    j["hypothesis_flags"] = r.hypothesis_flags;
    j["witness"] = vector_json(r.point);
}

inline ineq::ResidualReport residual_from_json(const Json& j) {
    ineq::ResidualReport r;
    r.inequality_id = j.at("inequality_id").get<std::string>();
    r.lhs = j.at("lhs").get<double>();
    r.rhs = j.at("rhs").get<double>();
    r.residual = j.at("residual").get<double>();
    r.verdict = j.at("verdict").get<std::string>() == "holds" ? ineq::Outcome::holds
                                                               : ineq::Outcome::violated;
    r.tolerance = j.at("tolerance").get<double>();
    r.hypothesis_flags = j.at("hypothesis_flags").get<std::vector<std::string>>();
    r.point = j.at("witness").get<std::vector<double>>();
    return r;
}

inline void fill_certificate(Json& j, const search::Certificate& c) {
    j["inequality_id"] = c.inequality_id;
    j["lhs"] = c.lhs;
    j["rhs"] = c.rhs;
    j["residual"] = c.residual;
    j["verdict"] = search::to_string(c.status);
    j["tolerance"] = c.tolerance;
    j["hypothesis_flags"] = c.hypothesis_flags;
    j["witness"] = triple_json(c.point);
    j["certificate"] = {{"status", search::to_string(c.status)},
                        {"scanned_min", c.scanned_min},
                        {"scanned_witness", triple_json(c.scanned_witness)},
                        {"nodes_evaluated", c.nodes_evaluated},
                        {"nodes_skipped", c.nodes_skipped},
                        {"refinements", c.refinements}};
}

inline const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols = {
        "schema_version", "command", "inequality_id",    "inputs",  "lhs",      "rhs",
        "residual",       "verdict", "tolerance", "hypothesis_flags", "witness", "timing_ms"};
    return cols;
}

inline std::string csv_field(const Json& v) {
    std::string s;
    if (v.is_null()) return "";
    if (v.is_number_float()) return format_double(v.get<double>());
    if (v.is_string()) {
        s = v.get<std::string>();
    } else {
        s = to_text(v, 0);
    }
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + '"';
}

inline std::string csv_header() {
    std::string out;
    for (const auto& c : csv_columns()) out += (out.empty() ? "" : ",") + c;
    return out;
}

/// One CSV row with the same fields as the JSON schema.
inline std::string csv_row(const Json& j) {
    std::string out;
    bool first = true;
    for (const auto& c : csv_columns()) {
        if (!first) out += ',';
        first = false;
        out += j.contains(c) ? csv_field(j.at(c)) : "";
    }
    return out;
}

} // namespace popcheck::report
