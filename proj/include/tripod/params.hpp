#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "tripod/constants.hpp"

namespace tripod {

using cplx = std::complex<double>;

// Four-level medium driven by a quasi-standing coupling wave: a weak probe
// and a weak trigger each couple one populated lower level to the shared
// upper level.  All rates, Rabi amplitudes and detunings carry one common
// frequency unit (MHz); lengths are metres.  Absolute units enter only
// through chi_prefactor and the carrier wave numbers.
struct SystemParams {
    double omega_c_plus = 4.0;       // forward coupling Rabi amplitude [MHz]
    double omega_c_minus = 2.0;      // backward coupling Rabi amplitude [MHz]
    double omega_p0 = 0.67;          // incident probe Rabi amplitude [MHz]
    double omega_t0 = 0.67;          // incident trigger Rabi amplitude [MHz]
    double delta2 = 6.67;            // coupling beam detuning [MHz]
    double delta3 = 1.002 * 6.67;    // trigger beam detuning [MHz]

    double gamma10 = 0.67;           // probe coherence decay [MHz]
    double gamma20 = 0.67;           // coupling coherence decay [MHz]
    double gamma30 = 0.67;           // trigger coherence decay [MHz]
    double gamma11 = 0.44;           // upper-level decay into level 1 [MHz]
    double gamma22 = 0.44;           // upper-level decay into level 2 [MHz]
    double gamma33 = 0.44;           // upper-level decay into level 3 [MHz]
    double gamma12 = 6.67e-4;        // lower-level relaxation 1<->2 [MHz]
    double gamma13 = 6.67e-4;        // lower-level relaxation 1<->3 [MHz]
    double gamma23 = 6.67e-4;        // lower-level relaxation 2<->3 [MHz]

    double density = 1.3e19;         // atom number density [m^-3]
    double dipole_p = 8e-30;         // probe transition dipole moment [C m]
    double dipole_t = 8e-30;         // trigger transition dipole moment [C m]
    double length = 1.06e-3;         // medium length [m]
    double lambda_p = 780e-9;        // probe carrier wavelength [m]
    double delta_omega1 = 0.0;       // probe/coupling carrier offset [MHz]
};

inline SystemParams default_params() { return SystemParams{}; }

// copy with the coherence decays derived from the simplified relaxation
// model: each upper-level coherence decays at half the total upper decay
inline SystemParams with_derived_coherence_decay(SystemParams p) {
    double half_total = 0.5 * (p.gamma11 + p.gamma22 + p.gamma33);
    p.gamma10 = p.gamma20 = p.gamma30 = half_total;
    return p;
}

// probe carrier angular frequency [rad/us]
inline double carrier_omega1(const SystemParams& p) {
    return 2.0 * pi * c_m_per_us / p.lambda_p;
}

// coupling carrier angular frequency [rad/us] and wave number [rad/m]
inline double carrier_omega2(const SystemParams& p) {
    return carrier_omega1(p) + 2.0 * pi * p.delta_omega1;
}
inline double coupling_wavenumber(const SystemParams& p) {
    return carrier_omega2(p) / c_m_per_us;
}

// dimensionless susceptibility per inverse MHz of response denominator:
// N d^2 / (hbar eps0), expressed in the same cyclic-frequency unit as the
// detunings so that chi = prefactor * (population) * (MHz) / (MHz^2)
inline double chi_prefactor(const SystemParams& p, double dipole) {
    return p.density * dipole * dipole / (hbar * eps0 * 2.0 * pi) * 1e-6;
}

// |Omega_c^+|^2 + |Omega_c^-|^2, the spatial mean of the coupling intensity
inline double mean_coupling_sq(const SystemParams& p) {
    return p.omega_c_plus * p.omega_c_plus + p.omega_c_minus * p.omega_c_minus;
}

// which coupling intensity feeds the population equations
enum class CouplingIntensity { mean_square, coherent_sum_square, forward_only };

inline double coupling_sq(const SystemParams& p, CouplingIntensity which) {
    switch (which) {
        case CouplingIntensity::coherent_sum_square: {
            double s = p.omega_c_plus + p.omega_c_minus;
            return s * s;
        }
        case CouplingIntensity::forward_only:
            return p.omega_c_plus * p.omega_c_plus;
        case CouplingIntensity::mean_square:
        default:
            return mean_coupling_sq(p);
    }
}

// hard constraint violations throw; soft ones come back as warnings
inline std::vector<std::string> validate_params(const SystemParams& p) {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("params: ") + what);
    };
    require(p.gamma10 >= 0 && p.gamma20 >= 0 && p.gamma30 >= 0,
            "coherence decays gamma10/gamma20/gamma30 must be >= 0");
    require(p.gamma11 >= 0 && p.gamma22 >= 0 && p.gamma33 >= 0,
            "upper-level decays gamma11/gamma22/gamma33 must be >= 0");
    require(p.gamma12 >= 0 && p.gamma13 >= 0 && p.gamma23 >= 0,
            "lower-level relaxations gamma12/gamma13/gamma23 must be >= 0");
    require(p.density >= 0, "density must be >= 0");
    require(p.length > 0, "length must be > 0");
    require(p.lambda_p > 0, "lambda must be > 0");
    require(std::isfinite(p.omega_c_plus) && std::isfinite(p.omega_c_minus) &&
                std::isfinite(p.omega_p0) && std::isfinite(p.omega_t0),
            "field amplitudes must be finite");

    std::vector<std::string> warnings;
    double weak = p.omega_p0 * p.omega_p0 + p.omega_t0 * p.omega_t0;
    double strong = mean_coupling_sq(p);
    if (!(weak < strong))
        warnings.push_back("probe/trigger intensity not below coupling intensity; "
                           "the perturbative expansion may not apply");
    return warnings;
}

// complex detunings: upper-level entries delta_j + i gamma_j0, lower-level
// entries delta_j - delta_k + i gamma_jk
struct DetuningSet {
    cplx d10, d20, d30;
    cplx d12, d13, d23;
    cplx d21, d31, d32;
};

inline DetuningSet detunings(const SystemParams& p, double delta1) {
    DetuningSet d;
    d.d10 = {delta1, p.gamma10};
    d.d20 = {p.delta2, p.gamma20};
    d.d30 = {p.delta3, p.gamma30};
    d.d12 = {delta1 - p.delta2, p.gamma12};
    d.d13 = {delta1 - p.delta3, p.gamma13};
    d.d23 = {p.delta2 - p.delta3, p.gamma23};
    d.d21 = {p.delta2 - delta1, p.gamma12};
    d.d31 = {p.delta3 - delta1, p.gamma13};
    d.d32 = {p.delta3 - p.delta2, p.gamma23};
    return d;
}

} // namespace tripod
