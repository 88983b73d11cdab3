#pragma once

#include <atomic>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "tripod/params.hpp"
#include "tripod/populations.hpp"
#include "tripod/propagation.hpp"

namespace tripod {

inline constexpr double undefined_value = std::numeric_limits<double>::quiet_NaN();

// one sweep sample; NaN marks undefined entries (below-floor phases, shifts
// without a converged on/off pair, values lost to a per-point failure)
struct SpectrumPoint {
    double delta1 = 0;
    double t_p = undefined_value, r_p = undefined_value;
    double phi_plus = undefined_value, phi_minus = undefined_value;
    double dphi_plus = undefined_value, dphi_minus = undefined_value;
    double s00 = undefined_value, s11 = undefined_value;
    double s22 = undefined_value, s33 = undefined_value;
    bool physical = false;
    bool converged = false;
    int iterations_on = 0, iterations_off = 0;
    double phi_plus_unwrapped = undefined_value;  // filled by unwrap_sweep
};

// intensity transmission and reflection of one beam relative to its
// incident amplitude
inline std::pair<double, double> transmission_reflection(const FieldProfile& f,
                                                         cplx omega0, Side side) {
    if (!(std::abs(omega0) > 0))
        throw std::invalid_argument("transmission_reflection: zero incident amplitude");
    const auto& plus = side == Side::probe ? f.p_plus : f.t_plus;
    const auto& minus = side == Side::probe ? f.p_minus : f.t_minus;
    double t = std::norm(plus.back() / omega0);
    double r = std::norm(minus.front() / omega0);
    return {t, r};
}

// principal-value phases of the transmitted and reflected components; the
// reflected phase is undefined (NaN) when the backward amplitude sits below
// floor_rel times the incident amplitude
inline std::pair<double, double> phases(const FieldProfile& f, Side side, cplx omega0,
                                        double floor_rel = 1e-12) {
    const auto& plus = side == Side::probe ? f.p_plus : f.t_plus;
    const auto& minus = side == Side::probe ? f.p_minus : f.t_minus;
    double phi_plus = std::arg(plus.back());
    double phi_minus = std::abs(minus.front()) >= floor_rel * std::abs(omega0)
                           ? std::arg(minus.front())
                           : undefined_value;
    return {phi_plus, phi_minus};
}

// wrap to the principal interval (-pi, pi]
inline double wrap_angle(double x) {
    double y = std::fmod(x + pi, 2.0 * pi);
    if (y <= 0.0) y += 2.0 * pi;
    return y - pi;
}

// trigger-induced phase shifts: on-phase minus off-phase, wrapped; NaN in
// propagates to NaN out
inline std::pair<double, double> kerr_shift(std::pair<double, double> phi_on,
                                            std::pair<double, double> phi_off) {
    auto diff = [](double a, double b) {
        if (std::isnan(a) || std::isnan(b)) return undefined_value;
        return wrap_angle(a - b);
    };
    return {diff(phi_on.first, phi_off.first), diff(phi_on.second, phi_off.second)};
}

enum class TriggerMode { on, off, both };

inline const char* to_string(TriggerMode m) {
    switch (m) {
        case TriggerMode::on: return "on";
        case TriggerMode::off: return "off";
        default: return "both";
    }
}
inline const char* to_string(PopulationMode m) {
    return m == PopulationMode::balanced ? "balanced" : "computed";
}

// single-detuning evaluation; trigger both runs the on and off solves and
// forms the shifts, on/off run one solve with matching populations
inline SpectrumPoint compute_point(const SystemParams& p, double delta1, TriggerMode tm,
                                   PopulationMode pm, const SolveOptions& opt = {}) {
    DetuningSet D = detunings(p, delta1);
    SpectrumPoint pt;
    pt.delta1 = delta1;

    bool want_on = tm != TriggerMode::off;
    bool want_off = tm != TriggerMode::on;
    Populations pops_on, pops_off;
    if (want_on) pops_on = compute_populations(p, D, true, pm, opt.pop_coupling);
    if (want_off) pops_off = compute_populations(p, D, false, pm, opt.pop_coupling);

    std::pair<double, double> phi_on{undefined_value, undefined_value};
    std::pair<double, double> phi_off{undefined_value, undefined_value};
    bool conv_on = true, conv_off = true;

    if (want_on) {
        auto [profile, rep] = self_consistent_solve(p, delta1, true, pops_on, opt);
        auto [t, r] = transmission_reflection(profile, p.omega_p0, Side::probe);
        phi_on = phases(profile, Side::probe, p.omega_p0);
        pt.t_p = t;
        pt.r_p = r;
        pt.phi_plus = phi_on.first;
        pt.phi_minus = phi_on.second;
        pt.iterations_on = rep.iterations;
        conv_on = rep.converged;
    }
    if (want_off) {
        auto [profile, rep] = self_consistent_solve(p, delta1, false, pops_off, opt);
        phi_off = phases(profile, Side::probe, p.omega_p0);
        if (!want_on) {
            auto [t, r] = transmission_reflection(profile, p.omega_p0, Side::probe);
            pt.t_p = t;
            pt.r_p = r;
            pt.phi_plus = phi_off.first;
            pt.phi_minus = phi_off.second;
        }
        pt.iterations_off = rep.iterations;
        conv_off = rep.converged;
    }
    if (tm == TriggerMode::both && conv_on && conv_off) {
        auto [dp, dm] = kerr_shift(phi_on, phi_off);
        pt.dphi_plus = dp;
        pt.dphi_minus = dm;
    }

    const Populations& shown = want_on ? pops_on : pops_off;
    pt.s00 = shown.s00;
    pt.s11 = shown.s11;
    pt.s22 = shown.s22;
    pt.s33 = shown.s33;
    pt.physical = (!want_on || pops_on.physical) && (!want_off || pops_off.physical);
    pt.converged = conv_on && conv_off;
    return pt;
}

// never-throwing variant for sweep workers: a failed point keeps its grid
// position and carries lowered flags instead of aborting the sweep
inline SpectrumPoint compute_point_flagged(const SystemParams& p, double delta1,
                                           TriggerMode tm, PopulationMode pm,
                                           const SolveOptions& opt,
                                           std::string* error_out = nullptr) {
    try {
        return compute_point(p, delta1, tm, pm, opt);
    } catch (const std::exception& e) {
        if (error_out) *error_out = e.what();
        SpectrumPoint pt;
        pt.delta1 = delta1;
        pt.physical = false;
        pt.converged = false;
        return pt;
    }
}

inline std::vector<double> linspace(double start, double stop, int points) {
    if (points < 1) throw std::invalid_argument("linspace: points must be >= 1");
    std::vector<double> g(points);
    if (points == 1) {
        g[0] = start;
        return g;
    }
    for (int i = 0; i < points; ++i)
        g[i] = start + (stop - start) * i / (points - 1);
    return g;
}

struct SweepResult {
    std::vector<SpectrumPoint> points;
    std::vector<std::string> errors;  // per-point failure messages, if any
};

// deterministic parallel map over the detuning grid; results keep grid order
// regardless of thread scheduling
inline SweepResult sweep(const SystemParams& p, const std::vector<double>& grid,
                         TriggerMode tm, PopulationMode pm, const SolveOptions& opt = {},
                         int threads = 1) {
    if (grid.empty()) throw std::invalid_argument("sweep: empty detuning grid");
    SweepResult out;
    out.points.resize(grid.size());
    std::vector<std::string> errs(grid.size());

    int n_threads = std::max(1, std::min<int>(threads, static_cast<int>(grid.size())));
    if (n_threads == 1) {
        for (size_t i = 0; i < grid.size(); ++i)
            out.points[i] = compute_point_flagged(p, grid[i], tm, pm, opt, &errs[i]);
    } else {
        std::atomic<size_t> next{0};
        auto worker = [&] {
            for (size_t i = next.fetch_add(1); i < grid.size(); i = next.fetch_add(1))
                out.points[i] = compute_point_flagged(p, grid[i], tm, pm, opt, &errs[i]);
        };
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (size_t i = 0; i < grid.size(); ++i)
        if (!errs[i].empty())
            out.errors.push_back("delta1 = " + std::to_string(grid[i]) + ": " + errs[i]);
    return out;
}

// continuity unwrapping of the transmitted phase along the sweep, written
// into phi_plus_unwrapped; NaN phases break and restart the continuity chain
inline void unwrap_sweep(std::vector<SpectrumPoint>& pts) {
    double offset = 0.0;
    double prev = undefined_value;
    for (auto& pt : pts) {
        if (std::isnan(pt.phi_plus)) {
            pt.phi_plus_unwrapped = undefined_value;
            prev = undefined_value;
            continue;
        }
        if (!std::isnan(prev)) offset += wrap_angle(pt.phi_plus - prev) - (pt.phi_plus - prev);
        else offset = 0.0;
        pt.phi_plus_unwrapped = pt.phi_plus + offset;
        prev = pt.phi_plus;
    }
}

} // namespace tripod
