#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tripod/params.hpp"
#include "tripod/populations.hpp"
#include "tripod/susceptibility.hpp"

namespace tripod {

// counter-propagating envelope pairs for both weak beams on a shared grid
struct FieldProfile {
    std::vector<double> z;  // metres, 0..length inclusive, uniform
    std::vector<cplx> p_plus, p_minus, t_plus, t_minus;  // [MHz]
};

inline FieldProfile constant_profile(const SystemParams& p, int n, bool trigger_on) {
    if (n < 2) throw std::invalid_argument("profile grid needs at least 2 nodes");
    FieldProfile f;
    f.z.resize(n);
    for (int i = 0; i < n; ++i) f.z[i] = p.length * i / (n - 1);
    f.p_plus.assign(n, p.omega_p0);
    f.p_minus.assign(n, 0.0);
    f.t_plus.assign(n, trigger_on ? p.omega_t0 : 0.0);
    f.t_minus.assign(n, 0.0);
    return f;
}

// local coupling of one beam's forward/backward envelopes: the mean response
// X drives both components, the grating harmonics Y, Z exchange them
struct CouplingMatrixXYZ {
    cplx x, y, z;
    double s_own2, s_oth2;  // |own+|^2+|own-|^2 and same for the other beam
};

inline CouplingMatrixXYZ assemble_xyz(const SusceptibilityCoeffs& co, cplx own_p,
                                      cplx own_m, cplx oth_p, cplx oth_m) {
    using std::conj;
    using std::real;
    double ss = std::norm(own_p) + std::norm(own_m);
    double so = std::norm(oth_p) + std::norm(oth_m);
    CouplingMatrixXYZ m;
    m.s_own2 = ss;
    m.s_oth2 = so;
    m.x = co.chi1[0] + co.cross3[0] * so + co.self3[0] * ss
        + 2.0 * co.cross3[1] * real(oth_p * conj(oth_m))
        + 2.0 * co.self3[1] * real(own_p * conj(own_m));
    m.y = co.chi1[1] + co.cross3[1] * so + co.self3[1] * ss
        + co.cross3[0] * oth_p * conj(oth_m) + co.cross3[2] * oth_m * conj(oth_p)
        + co.self3[0] * own_p * conj(own_m) + co.self3[2] * own_m * conj(own_p);
    m.z = co.chi1[1] + co.cross3[1] * so + co.self3[1] * ss
        + co.cross3[0] * conj(oth_p) * oth_m + co.cross3[2] * conj(oth_m) * oth_p
        + co.self3[0] * conj(own_p) * own_m + co.self3[2] * conj(own_m) * own_p;
    return m;
}

// carrier-induced phase advance per metre of the envelope [rad/m]
inline double phase_wavenumber(const SystemParams& p, double delta) {
    return 2.0 * pi * (delta - p.delta_omega1) / c_m_per_us;
}

// response-to-wavenumber conversion omega1/(2c) [rad/m per unit chi]
inline double response_wavenumber(const SystemParams& p) {
    return carrier_omega1(p) / (2.0 * c_m_per_us);
}

// right-hand side of the coupled envelope equations at one position
inline std::pair<cplx, cplx> envelope_rhs(cplx plus, cplx minus,
                                          const CouplingMatrixXYZ& m, double kphase,
                                          double kchi) {
    cplx i(0.0, 1.0);
    cplx a = i * (kphase + kchi * m.x);
    return {a * plus + i * kchi * m.y * minus, -a * minus - i * kchi * m.z * plus};
}

namespace detail {

// frozen-field coefficients a, b, c of u' = a u + b v, v' = -a v + c u,
// precomputed at the nodes and (by cubic interpolation of the envelopes)
// at the half-step points
struct BeamCoeffs {
    std::vector<cplx> a, b, c;     // nodes, size n
    std::vector<cplx> ah, bh, ch;  // half steps, size n-1
    double h;                      // step [m]
};

inline BeamCoeffs beam_coeffs(const SusceptibilityCoeffs& co, const FieldProfile& fr,
                              Side side, const SystemParams& p, double delta) {
    const auto& own_p = side == Side::probe ? fr.p_plus : fr.t_plus;
    const auto& own_m = side == Side::probe ? fr.p_minus : fr.t_minus;
    const auto& oth_p = side == Side::probe ? fr.t_plus : fr.p_plus;
    const auto& oth_m = side == Side::probe ? fr.t_minus : fr.p_minus;
    size_t n = fr.z.size();
    double kphase = phase_wavenumber(p, delta);
    double kchi = response_wavenumber(p);
    cplx i(0.0, 1.0);

    BeamCoeffs bc;
    bc.h = p.length / static_cast<double>(n - 1);
    bc.a.resize(n);
    bc.b.resize(n);
    bc.c.resize(n);
    bc.ah.resize(n - 1);
    bc.bh.resize(n - 1);
    bc.ch.resize(n - 1);
    for (size_t j = 0; j < n; ++j) {
        CouplingMatrixXYZ m = assemble_xyz(co, own_p[j], own_m[j], oth_p[j], oth_m[j]);
        bc.a[j] = i * (kphase + kchi * m.x);
        bc.b[j] = i * kchi * m.y;
        bc.c[j] = -i * kchi * m.z;
    }
    // cubic 4-node midpoint stencils keep the half-step coefficient error at the
    // integrator's own truncation order; linear averaging caps the whole scheme
    // at second order in the step
    auto mid = [n](const std::vector<cplx>& f, size_t j) {
        if (n < 4) return 0.5 * (f[j] + f[j + 1]);
        if (j == 0) return (5.0 * f[0] + 15.0 * f[1] - 5.0 * f[2] + f[3]) / 16.0;
        if (j + 2 == n)
            return (f[n - 4] - 5.0 * f[n - 3] + 15.0 * f[n - 2] + 5.0 * f[n - 1]) / 16.0;
        return (-f[j - 1] + 9.0 * f[j] + 9.0 * f[j + 1] - f[j + 2]) / 16.0;
    };
    for (size_t j = 0; j + 1 < n; ++j) {
        CouplingMatrixXYZ m = assemble_xyz(co, mid(own_p, j), mid(own_m, j),
                                           mid(oth_p, j), mid(oth_m, j));
        bc.ah[j] = i * (kphase + kchi * m.x);
        bc.bh[j] = i * kchi * m.y;
        bc.ch[j] = -i * kchi * m.z;
    }
    return bc;
}

inline void check_finite(cplx u, cplx v, double z) {
    if (std::isfinite(u.real()) && std::isfinite(u.imag()) && std::isfinite(v.real()) &&
        std::isfinite(v.imag()))
        return;
    throw std::runtime_error("envelope integration diverged at z = " + std::to_string(z) +
                             " m (|plus| = " + std::to_string(std::abs(u)) +
                             ", |minus| = " + std::to_string(std::abs(v)) + ")");
}

// classical 4th-order step sequence, entry node -> exit node
inline void rk4_forward(cplx u0, cplx v0, const BeamCoeffs& bc, std::vector<cplx>& up,
                        std::vector<cplx>& um, double length) {
    size_t n = bc.a.size();
    up.resize(n);
    um.resize(n);
    cplx u = u0, v = v0;
    up[0] = u;
    um[0] = v;
    double h2 = 0.5 * bc.h, h6 = bc.h / 6.0;
    for (size_t j = 0; j + 1 < n; ++j) {
        cplx a0 = bc.a[j], b0 = bc.b[j], c0 = bc.c[j];
        cplx a1 = bc.ah[j], b1 = bc.bh[j], c1 = bc.ch[j];
        cplx a2 = bc.a[j + 1], b2 = bc.b[j + 1], c2 = bc.c[j + 1];
        cplx k1u = a0 * u + b0 * v, k1v = -a0 * v + c0 * u;
        cplx tu = u + h2 * k1u, tv = v + h2 * k1v;
        cplx k2u = a1 * tu + b1 * tv, k2v = -a1 * tv + c1 * tu;
        tu = u + h2 * k2u;
        tv = v + h2 * k2v;
        cplx k3u = a1 * tu + b1 * tv, k3v = -a1 * tv + c1 * tu;
        tu = u + bc.h * k3u;
        tv = v + bc.h * k3v;
        cplx k4u = a2 * tu + b2 * tv, k4v = -a2 * tv + c2 * tu;
        u += h6 * (k1u + 2.0 * (k2u + k3u) + k4u);
        v += h6 * (k1v + 2.0 * (k2v + k3v) + k4v);
        up[j + 1] = u;
        um[j + 1] = v;
        check_finite(u, v, length * (j + 1) / (n - 1));
    }
}

// same node sampling walked from the exit face down to the entry face
inline void rk4_backward(cplx uL, cplx vL, const BeamCoeffs& bc, std::vector<cplx>& up,
                         std::vector<cplx>& um, double length) {
    size_t n = bc.a.size();
    up.resize(n);
    um.resize(n);
    cplx u = uL, v = vL;
    up[n - 1] = u;
    um[n - 1] = v;
    double h2 = 0.5 * bc.h, h6 = bc.h / 6.0;
    for (size_t j = n - 1; j > 0; --j) {
        cplx a0 = bc.a[j], b0 = bc.b[j], c0 = bc.c[j];
        cplx a1 = bc.ah[j - 1], b1 = bc.bh[j - 1], c1 = bc.ch[j - 1];
        cplx a2 = bc.a[j - 1], b2 = bc.b[j - 1], c2 = bc.c[j - 1];
        cplx k1u = a0 * u + b0 * v, k1v = -a0 * v + c0 * u;
        cplx tu = u - h2 * k1u, tv = v - h2 * k1v;
        cplx k2u = a1 * tu + b1 * tv, k2v = -a1 * tv + c1 * tu;
        tu = u - h2 * k2u;
        tv = v - h2 * k2v;
        cplx k3u = a1 * tu + b1 * tv, k3v = -a1 * tv + c1 * tu;
        tu = u - bc.h * k3u;
        tv = v - bc.h * k3v;
        cplx k4u = a2 * tu + b2 * tv, k4v = -a2 * tv + c2 * tu;
        u -= h6 * (k1u + 2.0 * (k2u + k3u) + k4u);
        v -= h6 * (k1v + 2.0 * (k2v + k3v) + k4v);
        up[j - 1] = u;
        um[j - 1] = v;
        check_finite(u, v, length * (j - 1) / (n - 1));
    }
}

} // namespace detail

// one beam's (plus, minus) envelope pair over the grid
struct BeamSolution {
    std::vector<cplx> plus, minus;
    double exit_backward = 0.0;  // |minus| at the exit face of the assembled solution
};

// forward initial-value integration of the frozen-field linear system
inline BeamSolution integrate_ivp(cplx plus0, cplx minus0, const FieldProfile& frozen,
                                  const SusceptibilityCoeffs& co, double delta, Side side,
                                  const SystemParams& p) {
    detail::BeamCoeffs bc = detail::beam_coeffs(co, frozen, side, p, delta);
    BeamSolution s;
    detail::rk4_forward(plus0, minus0, bc, s.plus, s.minus, p.length);
    s.exit_backward = std::abs(s.minus.back());
    return s;
}

enum class BvpMethod {
    backward,   // single basis from the exit face; no cancellation
    superpose   // two forward bases combined at the exit face
};

// boundary-value solve: plus(0) = omega0, minus(exit) = 0
inline BeamSolution solve_bvp(cplx omega0, const FieldProfile& frozen,
                              const SusceptibilityCoeffs& co, double delta, Side side,
                              const SystemParams& p,
                              BvpMethod method = BvpMethod::backward) {
    detail::BeamCoeffs bc = detail::beam_coeffs(co, frozen, side, p, delta);
    BeamSolution s;
    if (method == BvpMethod::backward) {
        // a basis starting (1, 0) at the exit face spans exactly the
        // solutions with no incoming backward wave; scaling it to the entry
        // amplitude involves no subtraction, so decaying solutions keep
        // full relative accuracy even in opaque parameter regions
        detail::rk4_backward(1.0, 0.0, bc, s.plus, s.minus, p.length);
        cplx at_entry = s.plus.front();
        if (!(std::abs(at_entry) > 0.0) || !std::isfinite(std::abs(at_entry)))
            throw std::runtime_error("boundary-value solve: degenerate basis, zero "
                                     "entry amplitude after backward integration");
        cplx scale = omega0 / at_entry;
        for (auto& v : s.plus) v *= scale;
        for (auto& v : s.minus) v *= scale;
        // minus.back() is exactly zero: the basis started (1, 0) there
        s.exit_backward = 0.0;
        return s;
    }
    BeamSolution b1, b2;
    detail::rk4_forward(omega0, 0.0, bc, b1.plus, b1.minus, p.length);
    detail::rk4_forward(0.0, 1.0, bc, b2.plus, b2.minus, p.length);
    size_t last = b1.plus.size() - 1;
    double scale = 0.0;
    for (size_t j = 0; j <= last; ++j)
        scale = std::max({scale, std::abs(b2.plus[j]), std::abs(b2.minus[j])});
    if (std::abs(b2.minus[last]) < 1e-12 * std::max(scale, 1.0))
        throw std::runtime_error("boundary-value solve: degenerate basis, backward "
                                 "component vanishes at the exit face");
    cplx lam = -b1.minus[last] / b2.minus[last];
    s.plus.resize(last + 1);
    s.minus.resize(last + 1);
    for (size_t j = 0; j <= last; ++j) {
        s.plus[j] = b1.plus[j] + lam * b2.plus[j];
        s.minus[j] = b1.minus[j] + lam * b2.minus[j];
    }
    s.exit_backward = std::abs(s.minus[last]);
    return s;
}

struct SolveOptions {
    double tol = 1e-8;            // relative sup-norm change per iteration
    int max_iter = 50;
    int grid_points = 2001;
    double damping = 0.5;         // under-relaxation of the frozen-field update
    BvpMethod bvp = BvpMethod::backward;
    bool recompute_populations = false;  // refresh populations from evolving fields
    CouplingIntensity pop_coupling = CouplingIntensity::mean_square;
};

struct SolveReport {
    int iterations = 0;
    double final_residual = std::numeric_limits<double>::infinity();
    bool converged = false;
    std::vector<double> bvp_residuals;  // per-iteration relative exit-face residual
    std::vector<double> update_trace;   // per-iteration relative update size
};

namespace detail {

inline double damped_update(std::vector<cplx>& frozen, const std::vector<cplx>& raw,
                            double damping) {
    double change = 0.0;
    for (size_t j = 0; j < frozen.size(); ++j) {
        cplx next = (1.0 - damping) * frozen[j] + damping * raw[j];
        change = std::max(change, std::abs(next - frozen[j]));
        frozen[j] = next;
    }
    return change;
}

inline double mean_intensity(const std::vector<cplx>& plus, const std::vector<cplx>& minus) {
    double acc = 0.0;
    for (size_t j = 0; j < plus.size(); ++j) acc += std::norm(plus[j]) + std::norm(minus[j]);
    return acc / static_cast<double>(plus.size());
}

} // namespace detail

// alternate frozen-field boundary-value solves of probe and trigger until the
// damped update stalls below tolerance; the returned envelopes are the last
// raw solves (exact solutions of the final frozen fields, not the damped
// averages, so boundary conditions hold to machine precision)
inline std::pair<FieldProfile, SolveReport> self_consistent_solve(
    const SystemParams& p, double delta1, bool trigger_on, const Populations& pops,
    const SolveOptions& opt = {}) {
    if (!(std::abs(p.omega_p0) > 0))
        throw std::invalid_argument("self-consistent solve: zero incident probe amplitude");
    if (opt.grid_points < 2)
        throw std::invalid_argument("self-consistent solve: grid_points must be >= 2");
    if (!(opt.damping > 0.0) || opt.damping > 1.0)
        throw std::invalid_argument("self-consistent solve: damping must be in (0, 1]");
    if (opt.max_iter < 1)
        throw std::invalid_argument("self-consistent solve: max_iter must be >= 1");

    DetuningSet D = detunings(p, delta1);
    Populations cur = pops;
    SusceptibilityCoeffs co_p = fourier_coeffs(p, D, cur, Side::probe);
    bool run_trigger = trigger_on && std::abs(p.omega_t0) > 0;
    SusceptibilityCoeffs co_t;
    if (run_trigger) co_t = fourier_coeffs(p, D, cur, Side::trigger);

    FieldProfile frozen = constant_profile(p, opt.grid_points, trigger_on);
    BeamSolution raw_p, raw_t;
    SolveReport rep;
    double res = std::numeric_limits<double>::infinity();

    for (int it = 1; it <= opt.max_iter; ++it) {
        rep.iterations = it;
        if (opt.recompute_populations && it > 1) {
            double P = detail::mean_intensity(frozen.p_plus, frozen.p_minus);
            double T = trigger_on ? detail::mean_intensity(frozen.t_plus, frozen.t_minus) : 0.0;
            PopulationCoeffs pc =
                population_coeffs_from_intensities(p, D, P, T, coupling_sq(p, opt.pop_coupling));
            try {
                cur = solve_populations_closed(pc);
            } catch (const std::runtime_error&) {
                cur = solve_populations_linear(pc);
            }
            co_p = fourier_coeffs(p, D, cur, Side::probe);
            if (run_trigger) co_t = fourier_coeffs(p, D, cur, Side::trigger);
        }

        raw_p = solve_bvp(p.omega_p0, frozen, co_p, delta1, Side::probe, p, opt.bvp);
        double dp = std::max(detail::damped_update(frozen.p_plus, raw_p.plus, opt.damping),
                             detail::damped_update(frozen.p_minus, raw_p.minus, opt.damping))
                    / std::abs(p.omega_p0);
        double bres = raw_p.exit_backward / std::abs(p.omega_p0);

        double dt = 0.0;
        if (run_trigger) {
            raw_t = solve_bvp(p.omega_t0, frozen, co_t, p.delta3, Side::trigger, p, opt.bvp);
            dt = std::max(detail::damped_update(frozen.t_plus, raw_t.plus, opt.damping),
                          detail::damped_update(frozen.t_minus, raw_t.minus, opt.damping))
                 / std::abs(p.omega_t0);
            bres = std::max(bres, raw_t.exit_backward / std::abs(p.omega_t0));
        }

        res = std::max(dp, dt);
        rep.bvp_residuals.push_back(bres);
        rep.update_trace.push_back(res);
        if (res <= opt.tol) break;
    }

    rep.final_residual = res;
    rep.converged = res <= opt.tol;

    FieldProfile out;
    out.z = std::move(frozen.z);
    out.p_plus = std::move(raw_p.plus);
    out.p_minus = std::move(raw_p.minus);
    if (run_trigger) {
        out.t_plus = std::move(raw_t.plus);
        out.t_minus = std::move(raw_t.minus);
    } else {
        out.t_plus = std::move(frozen.t_plus);
        out.t_minus = std::move(frozen.t_minus);
    }
    return {std::move(out), std::move(rep)};
}

} // namespace tripod
