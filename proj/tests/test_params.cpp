#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "test_util.hpp"
#include "tripod/tripod.hpp"

using namespace tripod;
using testutil::rel_err;

TEST_CASE("default parameters and derived scales") {
    SystemParams p = default_params();
    REQUIRE(p.omega_c_plus == 4.0);
    REQUIRE(p.omega_c_minus == 2.0);
    REQUIRE(p.delta3 == 1.002 * 6.67);
    REQUIRE(p.length == 1.06e-3);

    REQUIRE(rel_err(chi_prefactor(p, p.dipole_p), 0.14181382378363513) < 1e-14);
    REQUIRE(chi_prefactor(p, p.dipole_t) == chi_prefactor(p, p.dipole_p));
    REQUIRE(rel_err(carrier_omega1(p), 2414937906.806222) < 1e-14);
    REQUIRE(carrier_omega2(p) == carrier_omega1(p));  // no carrier offset by default
    REQUIRE(rel_err(coupling_wavenumber(p), carrier_omega1(p) / c_m_per_us) < 1e-15);

    // the offset sits 8 orders of magnitude below the carrier, so recovering
    // it by subtraction costs ulp(omega1) ~ 5e-7 rad/us of absolute noise
    p.delta_omega1 = 5.0;
    REQUIRE(rel_err(carrier_omega2(p) - carrier_omega1(p), 2.0 * pi * 5.0) < 1e-7);
}

TEST_CASE("derived coherence decay model") {
    SystemParams p = with_derived_coherence_decay(default_params());
    REQUIRE(rel_err(p.gamma10, 0.66) < 1e-15);
    REQUIRE(p.gamma20 == p.gamma10);
    REQUIRE(p.gamma30 == p.gamma10);
}

TEST_CASE("coupling intensity variants") {
    SystemParams p = default_params();
    REQUIRE(coupling_sq(p, CouplingIntensity::mean_square) == 20.0);
    REQUIRE(coupling_sq(p, CouplingIntensity::coherent_sum_square) == 36.0);
    REQUIRE(coupling_sq(p, CouplingIntensity::forward_only) == 16.0);
    REQUIRE(mean_coupling_sq(p) == 20.0);
}

TEST_CASE("parameter validation") {
    SystemParams p = default_params();
    REQUIRE(validate_params(p).empty());

    SECTION("weak-field warning when probe rivals the coupling") {
        p.omega_p0 = 5.0;
        auto warnings = validate_params(p);
        REQUIRE(warnings.size() == 1);
        REQUIRE(warnings[0].find("perturbative") != std::string::npos);
    }
    SECTION("negative rates are hard errors") {
        p.gamma12 = -1e-6;
        REQUIRE_THROWS_AS(validate_params(p), std::invalid_argument);
    }
    SECTION("non-positive length is a hard error") {
        p.length = 0.0;
        REQUIRE_THROWS_AS(validate_params(p), std::invalid_argument);
    }
    SECTION("negative density is a hard error") {
        p.density = -1.0;
        REQUIRE_THROWS_AS(validate_params(p), std::invalid_argument);
    }
    SECTION("non-finite amplitudes are hard errors") {
        p.omega_p0 = std::numeric_limits<double>::infinity();
        REQUIRE_THROWS_AS(validate_params(p), std::invalid_argument);
    }
}

TEST_CASE("detuning set structure") {
    SystemParams p = default_params();
    double d1 = 7.25;
    DetuningSet D = detunings(p, d1);

    REQUIRE(D.d10 == cplx(d1, p.gamma10));
    REQUIRE(D.d20 == cplx(p.delta2, p.gamma20));
    REQUIRE(D.d30 == cplx(p.delta3, p.gamma30));
    REQUIRE(D.d12 == cplx(d1 - p.delta2, p.gamma12));

    // index swap negates the real part and keeps the width
    REQUIRE(D.d12 == -std::conj(D.d21));
    REQUIRE(D.d13 == -std::conj(D.d31));
    REQUIRE(D.d23 == -std::conj(D.d32));

    // coincident lower levels leave a purely imaginary entry
    DetuningSet Dc = detunings(p, p.delta3);
    REQUIRE(Dc.d13.real() == 0.0);
    REQUIRE(Dc.d13.imag() == p.gamma13);
}
