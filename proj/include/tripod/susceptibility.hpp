#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "tripod/lattice_kernels.hpp"
#include "tripod/params.hpp"
#include "tripod/populations.hpp"

namespace tripod {

enum class Side { probe, trigger };

// detunings, populations and prefactor as seen from one weak beam:
// a = the lower level this beam empties, o = the other weak beam's level,
// b = the coupling beam's lower level, 0 = the shared upper level
struct SideView {
    cplx a0;      // own optical transition
    cplx ab;      // own two-photon combination with the coupling level
    cplx ao;      // own combination with the other beam's level
    cplx bo;      // coupling level vs other beam's level
    cplx o0;      // other beam's optical transition
    cplx ob;      // other beam's two-photon combination
    cplx d20;     // coupling optical transition
    double saa;   // population of the own lower level
    double soo;   // population of the other lower level
    double k;     // chi prefactor for this beam's dipole
};

inline SideView side_view(const SystemParams& p, const DetuningSet& D,
                          const Populations& s, Side side) {
    if (side == Side::probe)
        return {D.d10, D.d12, D.d13, D.d23, D.d30, D.d32, D.d20,
                s.s11, s.s33, chi_prefactor(p, p.dipole_p)};
    return {D.d30, D.d32, D.d31, D.d21, D.d10, D.d12, D.d20,
            s.s33, s.s11, chi_prefactor(p, p.dipole_t)};
}

// first- and third-order response at one local coupling intensity
struct TaylorChi {
    cplx chi1;        // linear response
    cplx chi3_self;   // self-phase third-order response [MHz^-2]
    cplx chi3_cross;  // cross-phase third-order response [MHz^-2]
};

inline TaylorChi taylor_chi(const SystemParams& p, const DetuningSet& D,
                            const Populations& s, Side side, double local_coupling_sq,
                            double denom_floor = 1e-12) {
    using std::conj;
    SideView v = side_view(p, D, s, side);
    double W = local_coupling_sq;
    cplx den_a = v.a0 * v.ab - W;
    cplx den_o = v.o0 * v.ob - W;
    if (std::abs(den_a) < denom_floor || std::abs(den_o) < denom_floor)
        throw std::runtime_error("taylor_chi: dressed-state resonance, response "
                                 "denominator below floor");
    TaylorChi t;
    t.chi1 = -v.k * v.saa * v.ab / den_a;
    t.chi3_self = v.k * (v.saa / conj(v.d20)) * W / (den_a * den_a);
    t.chi3_cross = -v.k * ((v.ab / v.ao) * (1.0 / den_a)
                               * (v.saa * v.ab / den_a
                                  + v.soo * v.bo / (-conj(v.o0) * v.bo - W))
                           - (v.soo / conj(v.d20)) * W / (den_a * den_o));
    return t;
}

// intermediates of the harmonic expansion over the coupling lattice
struct LatticeGeometry {
    double s_c2;          // mean coupling intensity
    cplx cross;           // forward x backward coupling amplitude product
    cplx a, b;            // own-kernel pole weight and kernel argument
    cplx c_coef, d_coef;  // other-kernel pole weight and kernel argument
    cplx nu, nu_prime;    // own-response pole strengths
    cplx eta, eta_prime;  // cross-response pole strengths
};

inline LatticeGeometry lattice_geometry(const SystemParams& p, const SideView& v,
                                        double denom_floor = 1e-9) {
    using std::conj;
    LatticeGeometry g;
    g.s_c2 = mean_coupling_sq(p);
    g.cross = p.omega_c_plus * p.omega_c_minus;
    cplx den_a = g.s_c2 - v.a0 * v.ab;
    cplx den_c = g.s_c2 + conj(v.o0) * v.bo;
    cplx den_eta = conj(v.o0) * v.bo + v.a0 * v.ab;
    cplx den_etap = v.o0 * v.ob - v.a0 * v.ab;
    for (cplx den : {den_a, den_c, den_eta, den_etap})
        if (std::abs(den) < denom_floor)
            throw std::runtime_error("lattice geometry: degenerate response "
                                     "denominator (coincident beam detunings)");
    g.a = 1.0 / den_a;
    g.b = 2.0 * g.cross * g.a;
    g.c_coef = 1.0 / den_c;
    g.d_coef = 2.0 * g.cross * g.c_coef;
    g.nu_prime = v.saa * g.a * g.a;
    g.nu = v.ab * v.ab / v.ao * g.nu_prime;
    g.eta = -(v.soo * v.ab * v.bo / v.ao) / den_eta;
    g.eta_prime = (v.soo / conj(v.d20)) / den_etap;
    return g;
}

// harmonic content of one beam's response over the coupling lattice:
// index n holds the coefficient of cos(2 n k2 z), n = 0..2, in the mean
// normalization (n >= 1 coefficients are NOT doubled)
struct SusceptibilityCoeffs {
    std::array<cplx, 3> chi1;    // linear response harmonics
    std::array<cplx, 3> self3;   // self-phase response harmonics
    std::array<cplx, 3> cross3;  // cross-phase response harmonics
    cplx b_mu, d_mu;             // kernel arguments used (diagnostics)
};

inline SusceptibilityCoeffs fourier_coeffs(const SystemParams& p, const DetuningSet& D,
                                           const Populations& s, Side side) {
    using std::conj;
    SideView v = side_view(p, D, s, side);
    LatticeGeometry g = lattice_geometry(p, v);
    cplx B = g.b, Dm = g.d_coef;
    cplx Cs = conj(g.c_coef), Ds = conj(Dm);
    double sc2 = g.s_c2;
    cplx cr = g.cross;

    SusceptibilityCoeffs co;
    co.b_mu = B;
    co.d_mu = Dm;
    for (int n = 0; n < 3; ++n) {
        co.chi1[n] = v.k * v.saa * g.a * v.ab * lattice_f1(n, B);

        cplx self_lattice = sc2 * lattice_f2(n, B);
        if (n == 0)
            self_lattice += 2.0 * cr * lattice_f2(1, B);
        else
            self_lattice += cr * (lattice_f2(n - 1, B) + lattice_f2(n + 1, B));
        co.self3[n] = v.k * g.nu_prime / conj(v.d20) * self_lattice;

        cplx t = g.nu * lattice_f2(n, B);
        t -= g.eta * (g.a * lattice_f1(n, B) - g.c_coef * lattice_f1(n, Dm));
        t += g.eta_prime * sc2 * (g.a * lattice_f1(n, B) - Cs * lattice_f1(n, Ds));
        if (n == 0)
            t += g.eta_prime * 2.0 * cr * (g.a * lattice_f1(1, B) - Cs * lattice_f1(1, Ds));
        else
            t += g.eta_prime * cr *
                 (g.a * (lattice_f1(n - 1, B) + lattice_f1(n + 1, B))
                  - Cs * (lattice_f1(n - 1, Ds) + lattice_f1(n + 1, Ds)));
        co.cross3[n] = -v.k * t;
    }
    return co;
}

} // namespace tripod
