#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include "tripod/params.hpp"

namespace tripod {

// coefficients of the steady-state balance equations among the four level
// populations; all real, built from imaginary parts of inverse response
// denominators.  xi is the ratio of lower-level relaxation to upper decay.
struct PopulationCoeffs {
    double alpha, alpha1;    // probe-driven pumping out of / into level 1
    double beta, beta1;      // trigger-driven pumping out of / into level 3
    double gamma_c, delta_c; // coupling-mediated return paths
    double epsilon_c;        // coupling-driven depletion of level 2
    double xi;               // lower-level relaxation / upper decay
};

struct Populations {
    double s00 = 0, s11 = 0, s22 = 0, s33 = 0;
    bool physical = false;
    double worst_violation = 0;  // largest distance outside [0,1], 0 if none
    enum class Method { closed_form, linear_solve, prescribed } method = Method::closed_form;
};

namespace detail {

inline void require_uniform_rates(const SystemParams& p) {
    auto close = [](double a, double b) {
        return std::abs(a - b) <= 1e-12 * std::max({std::abs(a), std::abs(b), 1e-300});
    };
    if (p.gamma11 <= 0 || p.gamma22 <= 0 || p.gamma33 <= 0)
        throw std::domain_error("population coefficients: upper-level decays must be > 0");
    if (!close(p.gamma12, p.gamma13) || !close(p.gamma12, p.gamma23))
        throw std::domain_error("population coefficients: xi undefined, lower-level "
                                "relaxations gamma12/gamma13/gamma23 differ");
    if (!close(p.gamma11, p.gamma22) || !close(p.gamma11, p.gamma33))
        throw std::domain_error("population coefficients: xi undefined, upper-level "
                                "decays gamma11/gamma22/gamma33 differ");
}

} // namespace detail

// core form taking the probe/trigger intensities P, T and the coupling
// intensity W explicitly (all MHz^2)
inline PopulationCoeffs population_coeffs_from_intensities(
    const SystemParams& p, const DetuningSet& D, double P, double T, double W) {
    detail::require_uniform_rates(p);
    using std::conj;
    using std::imag;
    cplx dden = conj(D.d20) + P / D.d12 + T / D.d32;

    PopulationCoeffs c{};
    c.alpha = 2.0 / p.gamma11 * P * imag(1.0 / (conj(D.d10) - W / conj(D.d12)));
    c.alpha1 = 2.0 / p.gamma11 * P * W *
               imag(1.0 / (conj(dden) * (conj(D.d10) * conj(D.d12) - W)));
    c.beta = 2.0 / p.gamma33 * T * imag(1.0 / (conj(D.d30) - W / conj(D.d32)));
    c.beta1 = 2.0 / p.gamma33 * T * W *
              imag(1.0 / (conj(dden) * (conj(D.d30) * conj(D.d32) - W)));
    c.gamma_c = 2.0 / p.gamma22 * W * P * imag(1.0 / (dden * (D.d10 * D.d12 - W)));
    c.delta_c = 2.0 / p.gamma22 * W * T * imag(1.0 / (dden * (D.d30 * D.d32 - W)));
    c.epsilon_c = 2.0 / p.gamma22 * W *
                  (imag(1.0 / dden)
                   - W * P * imag(1.0 / (D.d12 * dden * dden * (D.d10 * D.d12 - W)))
                   - W * T * imag(1.0 / (D.d32 * dden * dden * (D.d30 * D.d32 - W))));
    c.xi = p.gamma12 / p.gamma11;
    return c;
}

// standard form: incident amplitudes, trigger switchable, mean coupling
// intensity unless told otherwise
inline PopulationCoeffs population_coeffs(
    const SystemParams& p, const DetuningSet& D, bool trigger_on,
    CouplingIntensity which = CouplingIntensity::mean_square) {
    double P = p.omega_p0 * p.omega_p0;
    double T = trigger_on ? p.omega_t0 * p.omega_t0 : 0.0;
    return population_coeffs_from_intensities(p, D, P, T, coupling_sq(p, which));
}

inline Populations validate_populations(Populations s) {
    double worst = 0.0;
    bool finite = true;
    for (double v : {s.s00, s.s11, s.s22, s.s33}) {
        finite = finite && std::isfinite(v);
        if (v < 0) worst = std::max(worst, -v);
        if (v > 1) worst = std::max(worst, v - 1);
    }
    s.worst_violation = finite ? worst : std::numeric_limits<double>::infinity();
    s.physical = finite && worst <= 1e-9;
    return s;
}

inline double closed_form_denominator(const PopulationCoeffs& c) {
    double a = c.alpha, a1 = c.alpha1, b = c.beta, b1 = c.beta1;
    double g = c.gamma_c, d = c.delta_c, e = c.epsilon_c, x = c.xi;
    return b1 * (d - g) + b * (e - g + 4 * a1 * g) + a1 * (b + g - d)
         + (2 * b - d + 4 * e + 4 * b * e - 3 * g + 2 * a1 * (1 - b + 3 * g + d)
            + b1 * (2 + 4 * g + 4 * d)) * x
         + 2 * (3 - 2 * a1 - 2 * b1 + b + g + d + 2 * e) * x * x
         + a * (b - d + e + 4 * b * e + b1 * (1 + 4 * d - 2 * x) + 3 * x
                + 2 * x * (b + d + 3 * e + x));
}

// closed-form solution; s00 completes the unit total exactly
inline Populations solve_populations_closed(const PopulationCoeffs& c,
                                            double m_floor = 1e-14) {
    double a = c.alpha, a1 = c.alpha1, b = c.beta, b1 = c.beta1;
    double g = c.gamma_c, d = c.delta_c, e = c.epsilon_c, x = c.xi;
    double m = closed_form_denominator(c);
    if (std::abs(m) < m_floor)
        throw std::runtime_error("populations: closed-form denominator " +
                                 std::to_string(m) + " below floor (near-degenerate balance)");
    Populations s;
    s.s11 = ((1 + a) * (b1 * d + b * e) + (3 + 2 * a + b) * e * x + b1 * (-a + d + g) * x
             + a1 * (-d + 3 * x + 2 * (d + g) * x + b * (1 + g + x))) / m;
    s.s22 = ((-1 + a1) * b * g
             + ((-1 + b1) * d + b * (2 - a1 + e) + g * (-3 + 2 * a1 + b1)) * x
             + 2 * (3 - a1 - b1 + b + d + g + e) * x * x
             + a * ((-1 + b1) * d + (3 - b1) * x + 2 * x * (d + e + x)
                    + b * (1 + e + 2 * x))) / m;
    s.s33 = (-b1 * g + a1 * (1 + b) * (g - x) + ((1 + b) * e + b1 * (2 + d + g)) * x
             + a * ((1 + b) * e + b1 * (1 + d + x))) / m;
    s.s00 = 1.0 - s.s11 - s.s22 - s.s33;
    s.method = Populations::Method::closed_form;
    return validate_populations(s);
}

// independent route: generic 4x4 elimination on the balance equations
//   s00 = a (s11 - s00) - a1 (s22 - s00) + x (s11 - s33)
//   s00 = b (s33 - s00) - b1 (s22 - s00) + 2 x s33
//   s00 = g (s11 - s00) + d (s33 - s00) + e (s22 - s00) - x (s11 + s33)
//   s00 + s11 + s22 + s33 = 1
inline Populations solve_populations_linear(const PopulationCoeffs& c) {
    double a = c.alpha, a1 = c.alpha1, b = c.beta, b1 = c.beta1;
    double g = c.gamma_c, d = c.delta_c, e = c.epsilon_c, x = c.xi;
    double m[4][5] = {
        {1 + a - a1, -a - x, a1, x, 0.0},
        {1 + b - b1, 0.0, b1, -b - 2 * x, 0.0},
        {1 + g + d + e, -g + x, -e, -d + x, 0.0},
        {1.0, 1.0, 1.0, 1.0, 1.0},
    };
    double max_entry = 0.0;
    for (auto& row : m)
        for (int j = 0; j < 4; ++j) max_entry = std::max(max_entry, std::abs(row[j]));
    double min_pivot = max_entry;
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (piv != col)
            for (int j = col; j < 5; ++j) std::swap(m[col][j], m[piv][j]);
        double p = m[col][col];
        min_pivot = std::min(min_pivot, std::abs(p));
        if (std::abs(p) < 1e-14 * max_entry)
            throw std::runtime_error(
                "populations: balance matrix singular (pivot/max ratio " +
                std::to_string(std::abs(p) / max_entry) + ")");
        for (int r = col + 1; r < 4; ++r) {
            double f = m[r][col] / p;
            for (int j = col; j < 5; ++j) m[r][j] -= f * m[col][j];
        }
    }
    double sol[4];
    for (int r = 3; r >= 0; --r) {
        double acc = m[r][4];
        for (int j = r + 1; j < 4; ++j) acc -= m[r][j] * sol[j];
        sol[r] = acc / m[r][r];
    }
    Populations s;
    s.s00 = sol[0];
    s.s11 = sol[1];
    s.s22 = sol[2];
    s.s33 = sol[3];
    s.method = Populations::Method::linear_solve;
    return validate_populations(s);
}

inline Populations balanced_populations() {
    Populations s;
    s.s00 = 0.0;
    s.s11 = 0.5;
    s.s22 = 0.0;
    s.s33 = 0.5;
    s.method = Populations::Method::prescribed;
    return validate_populations(s);
}

enum class PopulationMode { computed, balanced };

// closed form with linear-solve fallback when the denominator degenerates;
// unphysical values are flagged, never clamped
inline Populations compute_populations(
    const SystemParams& p, const DetuningSet& D, bool trigger_on, PopulationMode mode,
    CouplingIntensity which = CouplingIntensity::mean_square) {
    if (mode == PopulationMode::balanced) return balanced_populations();
    PopulationCoeffs c = population_coeffs(p, D, trigger_on, which);
    try {
        return solve_populations_closed(c);
    } catch (const std::runtime_error&) {
        return solve_populations_linear(c);
    }
}

} // namespace tripod
