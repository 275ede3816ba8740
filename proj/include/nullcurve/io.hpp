#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nullcurve/curve_source.hpp"
#include "nullcurve/errors.hpp"
#include "nullcurve/minkowski.hpp"
#include "nullcurve/shape.hpp"

namespace nullcurve {

/// 17 significant digits: round-trip exact for 64-bit floats.
inline std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace detail {

inline double parse_field(const std::string& field, size_t line_no)
{
    try {
        size_t used = 0;
        const double v = std::stod(field, &used);
        if (used != field.size())
            throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(line_no) + ": bad number '" + field + "'");
    }
}

} // namespace detail

/// Reads a curve table: header "t,x0,x1,x2,x3", one sample per row, t strictly increasing.
inline SampledCurve read_curve_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot open '" + path + "'");

    std::string line;
    size_t line_no = 0;
    std::vector<double> ts;
    std::vector<Vec4> xs;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line_no == 1) {
            if (line != "t,x0,x1,x2,x3")
                throw Error(ErrorCode::ParseError,
                            "line 1: expected header 't,x0,x1,x2,x3', got '" + line + "'");
            continue;
        }
        std::stringstream ss(line);
        std::string field;
        std::vector<double> row;
        while (std::getline(ss, field, ','))
            row.push_back(detail::parse_field(field, line_no));
        if (row.size() != 5)
            throw Error(ErrorCode::ParseError,
                        "line " + std::to_string(line_no) + ": expected 5 fields, got "
                        + std::to_string(row.size()));
        ts.push_back(row[0]);
        xs.emplace_back(row[1], row[2], row[3], row[4]);
    }
    if (ts.size() < 10)
        throw Error(ErrorCode::ParseError,
                    "curve file needs at least 10 samples, got " + std::to_string(ts.size()));
    return SampledCurve(std::move(ts), std::move(xs));
}

inline void write_curve_csv(const std::string& path, const std::vector<double>& t,
                            const std::vector<Vec4>& x)
{
    if (t.size() != x.size())
        throw Error(ErrorCode::InvalidParams, "column lengths differ");
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
    out << "t,x0,x1,x2,x3\n";
    for (size_t i = 0; i < t.size(); ++i) {
        out << format_double(t[i]);
        for (int k = 0; k < 4; ++k)
            out << ',' << format_double(x[i][k]);
        out << '\n';
    }
    if (!out)
        throw Error(ErrorCode::IoError, "write failed for '" + path + "'");
}

/// Signature JSON: {"sigma": [...], "kappa_tilde": [...], "tau_tilde": [...]}.
inline ShapeSignature read_signature_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("bad JSON in '") + path + "': " + e.what());
    }
    ShapeSignature sig;
    try {
        sig.sigma = j.at("sigma").get<std::vector<double>>();
        sig.kappa_tilde = j.at("kappa_tilde").get<std::vector<double>>();
        sig.tau_tilde = j.at("tau_tilde").get<std::vector<double>>();
    } catch (const std::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("bad signature file: ") + e.what());
    }
    if (sig.sigma.size() != sig.kappa_tilde.size() || sig.sigma.size() != sig.tau_tilde.size())
        throw Error(ErrorCode::ParseError, "signature arrays have different lengths");
    for (size_t i = 0; i + 1 < sig.sigma.size(); ++i)
        if (!(sig.sigma[i] < sig.sigma[i + 1]))
            throw Error(ErrorCode::ParseError, "sigma values must be strictly increasing");
    return sig;
}

inline void write_signature_json(const std::string& path, const ShapeSignature& sig)
{
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
    // emit numbers through format_double to keep the 17-digit contract
    auto emit = [&out](const char* name, const std::vector<double>& v, bool last) {
        out << "  \"" << name << "\": [";
        for (size_t i = 0; i < v.size(); ++i)
            out << (i ? ", " : "") << format_double(v[i]);
        out << (last ? "]\n" : "],\n");
    };
    out << "{\n";
    emit("sigma", sig.sigma, false);
    emit("kappa_tilde", sig.kappa_tilde, false);
    emit("tau_tilde", sig.tau_tilde, true);
    out << "}\n";
    if (!out)
        throw Error(ErrorCode::IoError, "write failed for '" + path + "'");
}

} // namespace nullcurve
