/**
 * @file io.hpp
 * @brief JSON file formats for kernels, envelopes and covariance elements, and the
 *        CSV / JSON report formats of inversion runs.
 *
 * Kernel:      {"group": "Z^2", "dim": 2,
 *               "entries": [{"s": [1, 0], "t": [0, 0], "matrix": [[re, im], ...]}, ...]}
 * Covariance:  same layout with "x" / "y" in place of "s" / "t".
 * Envelope:    {"group": "Z^2", "values": [{"s": [1, 0], "value": 0.5}, ...]}
 *
 * Matrices are row-major lists of d * d [re, im] pairs. Entries are written in sorted
 * support order, so equal objects serialize to identical bytes.
 */
#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "wiener/covariance.hpp"
#include "wiener/lab.hpp"

namespace wiener {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace io {

using json = nlohmann::json;

inline json point_to_json(const GroupPoint& p) { return json(p.coords); }

inline GroupPoint point_from_json(const Group& g, const json& j)
{
    if (!j.is_array()) throw ParseError("group point must be an integer array");
    std::vector<std::int64_t> c;
    for (const auto& v : j) {
        if (!v.is_number_integer()) throw ParseError("group point coordinates must be integers");
        c.push_back(v.get<std::int64_t>());
    }
    GroupPoint p(std::move(c));
    try {
        g.validate(p);
    } catch (const DimensionMismatch& e) {
        throw ParseError(e.what());
    }
    return p;
}

inline json block_to_json(const Block& m)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back({m(i, j).real(), m(i, j).imag()});
    return out;
}

inline Block block_from_json(const json& j, int dim)
{
    if (!j.is_array() || j.size() != static_cast<std::size_t>(dim * dim))
        throw ParseError("matrix must be a list of " + std::to_string(dim * dim) + " [re, im] pairs");
    Block m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int k = 0; k < dim; ++k) {
            const json& z = j[static_cast<std::size_t>(i * dim + k)];
            if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
                throw ParseError("matrix entries must be [re, im] pairs");
            m(i, k) = Complex(z[0].get<double>(), z[1].get<double>());
        }
    return m;
}

namespace detail {

inline Group group_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("group") || !j["group"].is_string()) throw ParseError("missing \"group\"");
    try {
        return Group::parse(j["group"].get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

inline int dim_from_json(const json& j)
{
    if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<int>() < 1)
        throw ParseError("\"dim\" must be a positive integer");
    return j["dim"].get<int>();
}

template <class Algebra>
json entries_to_json(const Algebra& a, const char* first, const char* second)
{
    json entries = json::array();
    for (const auto& [key, m] : a.entries())
        entries.push_back({{first, point_to_json(key.first)}, {second, point_to_json(key.second)}, {"matrix", block_to_json(m)}});
    return {{"group", a.group().to_string()}, {"dim", a.dim()}, {"entries", std::move(entries)}};
}

template <class Algebra>
Algebra entries_from_json(const json& j, const char* first, const char* second)
{
    const Group g = group_from_json(j);
    Algebra a(g, dim_from_json(j));
    if (!j.contains("entries") || !j["entries"].is_array()) throw ParseError("missing \"entries\" array");
    for (const auto& e : j["entries"]) {
        if (!e.is_object() || !e.contains(first) || !e.contains(second) || !e.contains("matrix"))
            throw ParseError(std::string("each entry needs \"") + first + "\", \"" + second + "\" and \"matrix\"");
        a.add(point_from_json(g, e[first]), point_from_json(g, e[second]), block_from_json(e["matrix"], a.dim()));
    }
    return a;
}

} // namespace detail

inline json to_json(const Kernel& k) { return detail::entries_to_json(k, "s", "t"); }
inline Kernel kernel_from_json(const json& j) { return detail::entries_from_json<Kernel>(j, "s", "t"); }

inline json to_json(const CovarianceElement& f) { return detail::entries_to_json(f, "x", "y"); }
inline CovarianceElement covariance_from_json(const json& j) { return detail::entries_from_json<CovarianceElement>(j, "x", "y"); }

inline json to_json(const Envelope& beta)
{
    json values = json::array();
    for (const auto& [s, v] : beta.values()) values.push_back({{"s", point_to_json(s)}, {"value", v}});
    return {{"group", beta.group().to_string()}, {"values", std::move(values)}};
}

inline Envelope envelope_from_json(const json& j)
{
    Envelope beta(detail::group_from_json(j));
    if (!j.contains("values") || !j["values"].is_array()) throw ParseError("missing \"values\" array");
    for (const auto& e : j["values"]) {
        if (!e.is_object() || !e.contains("s") || !e.contains("value") || !e["value"].is_number())
            throw ParseError("each envelope record needs \"s\" and a numeric \"value\"");
        try {
            beta.set(point_from_json(beta.group(), e["s"]), e["value"].get<double>());
        } catch (const std::invalid_argument& ex) {
            throw ParseError(ex.what());
        }
    }
    return beta;
}

inline json parse_text(const std::string& text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
}

inline json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

inline void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

inline void write_json_file(const std::string& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

/// One row per (radius, word length) with the largest envelope value in that bucket.
inline std::string decay_csv(const DecayReport& report)
{
    std::ostringstream out;
    out.precision(17);
    out << "radius,word_length,envelope_value\n";
    for (const auto& [r, beta] : report.envelope_by_radius) {
        std::map<int, double> bucket;
        for (const auto& [s, v] : beta.values()) {
            double& b = bucket[beta.group().word_length(s)];
            b = std::max(b, v);
        }
        for (const auto& [len, v] : bucket) out << r << ',' << len << ',' << v << '\n';
    }
    return out.str();
}

inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json decay_summary(const DecayReport& report)
{
    return {{"stabilized", report.stabilized},
            {"stabilization_distance", finite_or_null(report.stabilization_distance)},
            {"inner_radius", report.inner_radius},
            {"fitted_rate", finite_or_null(report.fitted_rate)},
            {"r2", finite_or_null(report.r2)},
            {"l1_partial_sums", report.l1_partial_sums},
            {"residual", finite_or_null(report.residual)}};
}

} // namespace io
} // namespace wiener
