#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "dkc/report.hpp"

namespace dkc::cli {

using ordered_json = nlohmann::ordered_json;

/// null, integer, real, boolean or text; null stands for an invalid sweep cell.
using Cell = std::variant<std::monostate, long long, double, bool, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Document {
    ordered_json meta = ordered_json::object();
    Table table;
    std::vector<VerificationReport> reports;
};

inline ordered_json to_json(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> ordered_json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>)
                return nullptr;
            else if constexpr (std::is_same_v<T, double>)
                return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
            else
                return v;
        },
        cell);
}

inline ordered_json to_json(const VerificationReport& r) {
    ordered_json j = ordered_json::object();
    j["check"] = r.check;
    j["residual_max"] = to_json(Cell{r.residual_max});
    j["residual_rms"] = to_json(Cell{r.residual_rms});
    j["tolerance"] = to_json(Cell{r.tolerance});
    j["passed"] = r.passed;
    j["context"] = ordered_json::object();
    for (const auto& [k, v] : r.context) j["context"][k] = v;
    return j;
}

inline std::string render_json(const Document& doc) {
    ordered_json root = ordered_json::object();
    root["meta"] = doc.meta;
    root["rows"] = ordered_json::array();
    for (const auto& row : doc.table.rows) {
        ordered_json obj = ordered_json::object();
        for (std::size_t i = 0; i < doc.table.columns.size(); ++i) obj[doc.table.columns[i]] = to_json(row[i]);
        root["rows"].push_back(std::move(obj));
    }
    root["reports"] = ordered_json::array();
    for (const auto& r : doc.reports) root["reports"].push_back(to_json(r));
    return root.dump(2) + "\n";
}

inline std::string csv_real(double x) {
    if (!std::isfinite(x)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

inline std::string csv_cell(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>)
                return "";
            else if constexpr (std::is_same_v<T, double>)
                return csv_real(v);
            else if constexpr (std::is_same_v<T, bool>)
                return v ? "true" : "false";
            else if constexpr (std::is_same_v<T, long long>)
                return std::to_string(v);
            else
                return csv_escape(v);
        },
        cell);
}

inline void append_csv_line(std::string& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += fields[i];
    }
    out += '\n';
}

/// Data table, then a blank line and the report table (check, residuals, tolerance, passed, context).
inline std::string render_csv(const Document& doc) {
    std::string out;
    std::vector<std::string> header;
    for (const auto& c : doc.table.columns) header.push_back(csv_escape(c));
    append_csv_line(out, header);
    for (const auto& row : doc.table.rows) {
        std::vector<std::string> fields;
        for (const auto& cell : row) fields.push_back(csv_cell(cell));
        append_csv_line(out, fields);
    }
    out += '\n';
    append_csv_line(out, {"check", "residual_max", "residual_rms", "tolerance", "passed", "context"});
    for (const auto& r : doc.reports) {
        std::string context;
        for (const auto& [k, v] : r.context) {
            if (!context.empty()) context += ';';
            context += k + "=" + v;
        }
        append_csv_line(out, {csv_escape(r.check), csv_real(r.residual_max), csv_real(r.residual_rms),
                              csv_real(r.tolerance), r.passed ? "true" : "false", csv_escape(context)});
    }
    return out;
}

} // namespace dkc::cli
