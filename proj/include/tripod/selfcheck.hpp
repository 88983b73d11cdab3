#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "tripod/lattice_kernels.hpp"
#include "tripod/params.hpp"
#include "tripod/populations.hpp"
#include "tripod/quadrature.hpp"
#include "tripod/susceptibility.hpp"

namespace tripod {

struct CheckResult {
    std::string name;
    bool pass = false;
    double worst = 0.0;   // worst error observed
    double limit = 0.0;   // tolerance it was held against
    std::string note;
};

// closed-form lattice kernel moments against direct periodic quadrature.
// Draw moduli start at 0.05 so the smallest true moment (|mu|/2)^3 stays
// far above the quadrature noise floor and the relative comparison is
// meaningful; small-|mu| behaviour is covered by series unit tests.
inline CheckResult check_lattice_kernels(int n_draws = 50, unsigned seed = 20240811,
                                         double tol = 1e-9, int npts = 4096) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> radius(0.05, 0.9);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
    CheckResult res{"lattice kernel moments vs quadrature", true, 0.0, tol, ""};
    for (int d = 0; d < n_draws; ++d) {
        double r = radius(rng), th = angle(rng);
        cplx mu = std::polar(r, th);
        for (int n = 0; n <= 3; ++n) {
            cplx q1 = cosine_moment([&](double x) { return 1.0 / (1.0 + mu * std::cos(x)); },
                                    n, npts);
            cplx q2 = cosine_moment(
                [&](double x) {
                    cplx den = 1.0 + mu * std::cos(x);
                    return 1.0 / (den * den);
                },
                n, npts);
            double e1 = std::abs(lattice_f1(n, mu) - q1) / std::abs(q1);
            double e2 = std::abs(lattice_f2(n, mu) - q2) / std::abs(q2);
            res.worst = std::max({res.worst, e1, e2});
        }
    }
    res.pass = res.worst < tol;
    res.note = std::to_string(n_draws) + " draws, orders 0..3";
    return res;
}

namespace detail {

inline SystemParams random_physical_params(std::mt19937& rng) {
    auto uni = [&](double a, double b) {
        return std::uniform_real_distribution<double>(a, b)(rng);
    };
    SystemParams p;
    p.omega_c_plus = uni(1.0, 6.0);
    p.omega_c_minus = uni(0.0, 4.0);
    p.omega_p0 = uni(0.1, 1.0);
    p.omega_t0 = uni(0.1, 1.0);
    p.delta2 = uni(3.0, 10.0);
    p.delta3 = p.delta2 * uni(0.9, 1.1);
    double g0 = uni(0.3, 1.0);
    p.gamma10 = p.gamma20 = p.gamma30 = g0;
    double gu = uni(0.2, 0.8);
    p.gamma11 = p.gamma22 = p.gamma33 = gu;
    double gl = uni(1e-5, 1e-2);
    p.gamma12 = p.gamma13 = p.gamma23 = gl;
    return p;
}

} // namespace detail

// closed-form population solution against the generic linear solve on random
// physical parameter draws, plus unit total and the single-beam limit
inline CheckResult check_population_solvers(int n_draws = 200, unsigned seed = 7151,
                                            double tol = 1e-9) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d1_draw(-2.0, 12.0);
    CheckResult res{"population closed form vs linear solve", true, 0.0, tol, ""};

    int used = 0, attempts = 0;
    double worst_total = 0.0;
    while (used < n_draws && attempts < n_draws * 50) {
        ++attempts;
        SystemParams p = detail::random_physical_params(rng);
        double d1 = d1_draw(rng);
        PopulationCoeffs c = population_coeffs(p, detunings(p, d1), true);
        if (std::abs(closed_form_denominator(c)) <= 1e-8) continue;  // near-degenerate draw
        ++used;
        Populations a = solve_populations_closed(c);
        Populations b = solve_populations_linear(c);
        double diff = std::max({std::abs(a.s00 - b.s00), std::abs(a.s11 - b.s11),
                                std::abs(a.s22 - b.s22), std::abs(a.s33 - b.s33)});
        double total = std::max(std::abs(a.s00 + a.s11 + a.s22 + a.s33 - 1.0),
                                std::abs(b.s00 + b.s11 + b.s22 + b.s33 - 1.0));
        res.worst = std::max(res.worst, diff);
        worst_total = std::max(worst_total, total);
        if (diff >= tol || total >= 1e-10) res.pass = false;
    }
    if (used < n_draws) {
        res.pass = false;
        res.note = "only " + std::to_string(used) + " usable draws";
        return res;
    }

    // no trigger, no lower-level relaxation: everything settles in level 3
    SystemParams p;
    p.gamma12 = p.gamma13 = p.gamma23 = 0.0;
    Populations s = solve_populations_closed(population_coeffs(p, detunings(p, 6.0), false));
    double trap = std::abs(s.s33 - 1.0);
    if (trap >= 1e-10) res.pass = false;
    res.note = std::to_string(n_draws) + " draws, worst unit-total error " +
               std::to_string(worst_total) + ", single-beam limit gap " + std::to_string(trap);
    return res;
}

// closed-form harmonic coefficients against quadrature of the pointwise
// response over one coupling-lattice period, both beams
inline CheckResult check_fourier_oracle(const SystemParams& p,
                                        const std::vector<double>& detuning_grid,
                                        double tol = 1e-8, int npts = 4096) {
    CheckResult res{"response harmonics vs pointwise quadrature", true, 0.0, tol, ""};
    for (double d1 : detuning_grid) {
        DetuningSet D = detunings(p, d1);
        Populations s = compute_populations(p, D, true, PopulationMode::computed);
        for (Side side : {Side::probe, Side::trigger}) {
            SusceptibilityCoeffs co = fourier_coeffs(p, D, s, side);
            std::vector<cplx> c1(npts), cs(npts), cc(npts);
            double sc2 = mean_coupling_sq(p);
            double cross2 = 2.0 * p.omega_c_plus * p.omega_c_minus;
            for (int k = 0; k < npts; ++k) {
                double x = 2.0 * pi * k / npts;
                TaylorChi t = taylor_chi(p, D, s, side, sc2 + cross2 * std::cos(x));
                c1[k] = t.chi1;
                cs[k] = t.chi3_self;
                cc[k] = t.chi3_cross;
            }
            for (int n = 0; n < 3; ++n) {
                cplx q1 = 0.0, qs = 0.0, qc = 0.0;
                for (int k = 0; k < npts; ++k) {
                    double w = std::cos(n * 2.0 * pi * k / npts);
                    q1 += c1[k] * w;
                    qs += cs[k] * w;
                    qc += cc[k] * w;
                }
                q1 /= npts;
                qs /= npts;
                qc /= npts;
                res.worst = std::max({res.worst, std::abs(co.chi1[n] - q1) / std::abs(q1),
                                      std::abs(co.self3[n] - qs) / std::abs(qs),
                                      std::abs(co.cross3[n] - qc) / std::abs(qc)});
            }
        }
    }
    res.pass = res.worst < tol;
    res.note = std::to_string(detuning_grid.size()) + " detunings, both beams, orders 0..2";
    return res;
}

inline std::vector<CheckResult> run_self_checks() {
    return {check_lattice_kernels(), check_population_solvers()};
}

} // namespace tripod
