#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "grassmann/subspace.hpp"

namespace grassmann {

// ---------------------------------------------------------------------------
// Configuration documents.
//
// Schema: {"n": int, "m": int,
//          "subspaces": [{"id": str, "frame": [[[re, im] x n] x m]}],
//          "tolerances": {"ortho_tol"?, "eq_tol"?, "deg_tol"?}}
// A frame row is one basis vector of length n; complex entries are [re, im]
// pairs. Rows are the transpose of the internal column convention.
// ---------------------------------------------------------------------------

struct ParseOptions {
    bool orthonormalize = false;       // accept non-orthonormal rows and fix them
    std::optional<double> eq_tol_override;
};

namespace detail {

inline double json_number(const nlohmann::json& j, const std::string& where) {
    if (!j.is_number()) throw SchemaError(where + ": expected a number");
    return j.get<double>();
}

inline Complex json_complex(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2)
        throw SchemaError(where + ": expected a [re, im] pair");
    return Complex(json_number(j[0], where + "/0"), json_number(j[1], where + "/1"));
}

}  // namespace detail

inline Configuration parse_config_json(const nlohmann::json& doc,
                                       const ParseOptions& opts = {}) {
    if (!doc.is_object()) throw SchemaError("/: expected an object");
    if (!doc.contains("n") || !doc["n"].is_number_integer())
        throw SchemaError("/n: expected an integer");
    if (!doc.contains("m") || !doc["m"].is_number_integer())
        throw SchemaError("/m: expected an integer");
    const int n = doc["n"].get<int>();
    const int m = doc["m"].get<int>();
    if (n < 1 || m < 1 || m > n) throw SchemaError("/n, /m: need 1 <= m <= n");

    Configuration config;
    if (doc.contains("tolerances")) {
        const auto& t = doc["tolerances"];
        if (!t.is_object()) throw SchemaError("/tolerances: expected an object");
        if (t.contains("ortho_tol"))
            config.tol.ortho_tol = detail::json_number(t["ortho_tol"], "/tolerances/ortho_tol");
        if (t.contains("eq_tol"))
            config.tol.eq_tol = detail::json_number(t["eq_tol"], "/tolerances/eq_tol");
        if (t.contains("deg_tol"))
            config.tol.deg_tol = detail::json_number(t["deg_tol"], "/tolerances/deg_tol");
    }
    if (opts.eq_tol_override) config.tol.eq_tol = *opts.eq_tol_override;
    config.tol.validate();

    if (!doc.contains("subspaces") || !doc["subspaces"].is_array() || doc["subspaces"].empty())
        throw SchemaError("/subspaces: expected a non-empty array");

    for (std::size_t s = 0; s < doc["subspaces"].size(); ++s) {
        const auto& entry = doc["subspaces"][s];
        std::string where = "/subspaces/" + std::to_string(s);
        if (!entry.is_object()) throw SchemaError(where + ": expected an object");
        std::string id = entry.contains("id") && entry["id"].is_string()
                             ? entry["id"].get<std::string>()
                             : ("S" + std::to_string(s));
        if (!entry.contains("frame") || !entry["frame"].is_array() ||
            entry["frame"].size() != static_cast<std::size_t>(m))
            throw SchemaError(where + "/frame: subspace '" + id + "' needs " +
                              std::to_string(m) + " rows");
        CMatrix frame(n, m);
        for (int row = 0; row < m; ++row) {
            const auto& jrow = entry["frame"][static_cast<std::size_t>(row)];
            std::string row_where = where + "/frame/" + std::to_string(row);
            if (!jrow.is_array() || jrow.size() != static_cast<std::size_t>(n))
                throw SchemaError(row_where + ": subspace '" + id + "' row needs " +
                                  std::to_string(n) + " entries");
            for (int col = 0; col < n; ++col)
                frame(col, row) = detail::json_complex(jrow[static_cast<std::size_t>(col)],
                                                       row_where + "/" + std::to_string(col));
        }
        if (opts.orthonormalize) {
            config.subspaces.push_back(orthonormalize(frame, config.tol));
        } else {
            try {
                config.subspaces.push_back(subspace_from_frame(frame, config.tol));
            } catch (const NotOrthonormal& e) {
                throw NotOrthonormal("subspace '" + id + "': " + e.what() +
                                     " (pass --orthonormalize to accept)");
            }
        }
        config.labels.push_back(std::move(id));
    }
    config.validate();
    return config;
}

inline Configuration parse_config_file(const std::string& path, const ParseOptions& opts = {}) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return parse_config_json(doc, opts);
}

// ---------------------------------------------------------------------------
// Deterministic JSON emission. All floating-point numbers print with 17
// significant digits (%.17g), which round-trips doubles exactly and keeps
// golden outputs byte-stable.
// ---------------------------------------------------------------------------

inline std::string format_double_17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void dump_json_17(const nlohmann::ordered_json& j, std::string& out, int indent,
                         int depth) {
    auto pad = [&](int d) { out.append(static_cast<std::size_t>(indent * d), ' '); };
    switch (j.type()) {
        case nlohmann::ordered_json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            std::size_t count = 0;
            for (auto it = j.begin(); it != j.end(); ++it, ++count) {
                pad(depth + 1);
                out += nlohmann::ordered_json(it.key()).dump();
                out += ": ";
                dump_json_17(it.value(), out, indent, depth + 1);
                if (count + 1 < j.size()) out += ",";
                out += "\n";
            }
            pad(depth);
            out += "}";
            break;
        }
        case nlohmann::ordered_json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                break;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                pad(depth + 1);
                dump_json_17(j[i], out, indent, depth + 1);
                if (i + 1 < j.size()) out += ",";
                out += "\n";
            }
            pad(depth);
            out += "]";
            break;
        }
        case nlohmann::ordered_json::value_t::number_float:
            out += format_double_17(j.get<double>());
            break;
        default:
            out += j.dump();
            break;
    }
}

inline std::string dump_json_17(const nlohmann::ordered_json& j, int indent = 2) {
    std::string out;
    dump_json_17(j, out, indent, 0);
    out += "\n";
    return out;
}

inline nlohmann::ordered_json complex_to_json(const Complex& z) {
    return nlohmann::ordered_json::array({z.real(), z.imag()});
}

inline nlohmann::ordered_json matrix_to_json(const CMatrix& mat) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Eigen::Index r = 0; r < mat.rows(); ++r) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (Eigen::Index c = 0; c < mat.cols(); ++c) row.push_back(complex_to_json(mat(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline nlohmann::ordered_json real_matrix_to_json(const RMatrix& mat) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Eigen::Index r = 0; r < mat.rows(); ++r) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (Eigen::Index c = 0; c < mat.cols(); ++c) row.push_back(mat(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline nlohmann::ordered_json vector_to_json(const RVector& v) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

/// Emit a configuration in the input schema (frame rows = basis vectors).
inline nlohmann::ordered_json config_to_json(const Configuration& config) {
    nlohmann::ordered_json doc;
    doc["n"] = config.n();
    doc["m"] = config.m();
    nlohmann::ordered_json subs = nlohmann::ordered_json::array();
    for (int s = 0; s < config.size(); ++s) {
        nlohmann::ordered_json entry;
        entry["id"] = config.labels.empty() ? ("S" + std::to_string(s)) : config.labels[s];
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (int row = 0; row < config.m(); ++row) {
            nlohmann::ordered_json jrow = nlohmann::ordered_json::array();
            for (int col = 0; col < config.n(); ++col)
                jrow.push_back(complex_to_json(config.subspaces[s].frame(col, row)));
            rows.push_back(std::move(jrow));
        }
        entry["frame"] = std::move(rows);
        subs.push_back(std::move(entry));
    }
    doc["subspaces"] = std::move(subs);
    return doc;
}

}  // namespace grassmann
