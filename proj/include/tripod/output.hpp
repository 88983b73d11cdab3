#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tripod/config.hpp"
#include "tripod/spectra.hpp"

namespace tripod {

// shortest decimal that parses back to the same double
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

namespace detail {

inline void csv_field(std::string& row, double v) {
    if (!std::isnan(v)) row += format_double(v);  // NaN renders as empty
}

inline void json_field(std::string& row, const char* key, double v) {
    row += '"';
    row += key;
    row += "\":";
    row += std::isnan(v) ? "null" : format_double(v);
}

} // namespace detail

inline std::string csv_header(bool unwrapped) {
    std::string h = "delta1,T_p,R_p,phi_plus,phi_minus,dphi_plus,dphi_minus,"
                    "s00,s11,s22,s33,physical,converged";
    if (unwrapped) h += ",phi_plus_unwrapped";
    return h;
}

inline std::string csv_row(const SpectrumPoint& pt, bool unwrapped) {
    std::string row;
    detail::csv_field(row, pt.delta1);
    row += ',';
    detail::csv_field(row, pt.t_p);
    row += ',';
    detail::csv_field(row, pt.r_p);
    row += ',';
    detail::csv_field(row, pt.phi_plus);
    row += ',';
    detail::csv_field(row, pt.phi_minus);
    row += ',';
    detail::csv_field(row, pt.dphi_plus);
    row += ',';
    detail::csv_field(row, pt.dphi_minus);
    row += ',';
    detail::csv_field(row, pt.s00);
    row += ',';
    detail::csv_field(row, pt.s11);
    row += ',';
    detail::csv_field(row, pt.s22);
    row += ',';
    detail::csv_field(row, pt.s33);
    row += ',';
    row += pt.physical ? '1' : '0';
    row += ',';
    row += pt.converged ? '1' : '0';
    if (unwrapped) {
        row += ',';
        detail::csv_field(row, pt.phi_plus_unwrapped);
    }
    return row;
}

inline std::string jsonl_row(const SpectrumPoint& pt, bool unwrapped) {
    std::string r = "{";
    detail::json_field(r, "delta1", pt.delta1);
    r += ',';
    detail::json_field(r, "T_p", pt.t_p);
    r += ',';
    detail::json_field(r, "R_p", pt.r_p);
    r += ',';
    detail::json_field(r, "phi_plus", pt.phi_plus);
    r += ',';
    detail::json_field(r, "phi_minus", pt.phi_minus);
    r += ',';
    detail::json_field(r, "dphi_plus", pt.dphi_plus);
    r += ',';
    detail::json_field(r, "dphi_minus", pt.dphi_minus);
    r += ',';
    detail::json_field(r, "s00", pt.s00);
    r += ',';
    detail::json_field(r, "s11", pt.s11);
    r += ',';
    detail::json_field(r, "s22", pt.s22);
    r += ',';
    detail::json_field(r, "s33", pt.s33);
    r += ",\"physical\":";
    r += pt.physical ? "true" : "false";
    r += ",\"converged\":";
    r += pt.converged ? "true" : "false";
    if (unwrapped) {
        r += ',';
        detail::json_field(r, "phi_plus_unwrapped", pt.phi_plus_unwrapped);
    }
    r += '}';
    return r;
}

inline std::string spectrum_to_string(const std::vector<SpectrumPoint>& pts,
                                      OutputSpec::Format format, bool unwrapped) {
    std::string out;
    if (format == OutputSpec::Format::csv) {
        out += csv_header(unwrapped);
        out += '\n';
        for (const auto& pt : pts) {
            out += csv_row(pt, unwrapped);
            out += '\n';
        }
    } else {
        for (const auto& pt : pts) {
            out += jsonl_row(pt, unwrapped);
            out += '\n';
        }
    }
    return out;
}

// probes that the destination accepts a new file; leaves nothing behind
inline void check_writable(const std::string& path) {
    if (path.empty()) throw std::runtime_error("output path is empty");
    std::string probe = path + ".tmp";
    std::ofstream f(probe, std::ios::binary);
    if (!f) throw std::runtime_error("output path '" + path + "' is not writable");
    f.close();
    std::remove(probe.c_str());
}

// whole-file write via temp and rename: readers never see a partial file and
// failures leave no debris
inline void atomic_write(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open '" + tmp + "' for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        f.flush();
        if (!f) {
            f.close();
            std::remove(tmp.c_str());
            throw std::runtime_error("write to '" + tmp + "' failed");
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("cannot move temporary file onto '" + path + "'");
    }
}

inline void write_spectrum(const std::vector<SpectrumPoint>& pts, const OutputSpec& spec,
                           bool unwrapped) {
    atomic_write(spec.path, spectrum_to_string(pts, spec.format, unwrapped));
}

} // namespace tripod
