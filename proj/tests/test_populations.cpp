#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "test_util.hpp"
#include "tripod/tripod.hpp"

using namespace tripod;
using testutil::rel_err;

TEST_CASE("population coefficients reproduce frozen reference values") {
    SystemParams p = default_params();
    PopulationCoeffs c = population_coeffs(p, detunings(p, 6.0), true);
    REQUIRE(rel_err(c.alpha, 0.0011104226082424599) < 1e-12);
    REQUIRE(rel_err(c.alpha1, 0.0017471222019464099) < 1e-12);
    REQUIRE(rel_err(c.beta, 6.9271999564735081e-05) < 1e-12);
    REQUIRE(rel_err(c.beta1, 0.0030991745804543449) < 1e-12);
    REQUIRE(rel_err(c.gamma_c, -0.0017471222019464099) < 1e-12);
    REQUIRE(rel_err(c.delta_c, -0.0030991745804543449) < 1e-12);
    REQUIRE(rel_err(c.epsilon_c, 0.26795680247116083) < 1e-12);
    REQUIRE(rel_err(c.xi, 0.0015159090909090908) < 1e-14);
    REQUIRE(rel_err(closed_form_denominator(c), 0.0019977611035781103) < 1e-11);
}

TEST_CASE("detailed-balance pairing of pumping coefficients") {
    // with uniform upper-level decays the return path mirrors the entry path
    SystemParams p = default_params();
    for (double d1 : {3.3, 5.0, 6.0, 8.2, 9.9}) {
        PopulationCoeffs c = population_coeffs(p, detunings(p, d1), true);
        REQUIRE(rel_err(c.gamma_c, -c.alpha1) < 1e-12);
        REQUIRE(rel_err(c.delta_c, -c.beta1) < 1e-12);
    }
}

TEST_CASE("closed-form populations reproduce frozen reference values") {
    SystemParams p = default_params();
    Populations on = solve_populations_closed(population_coeffs(p, detunings(p, 6.0), true));
    REQUIRE(rel_err(on.s00, 0.0010570826519598064) < 1e-12);
    REQUIRE(rel_err(on.s11, 0.62165545177020365) < 1e-12);
    REQUIRE(rel_err(on.s22, 0.018728661600489489) < 1e-12);
    REQUIRE(rel_err(on.s33, 0.35855880397734707) < 1e-12);
    REQUIRE(on.physical);
    REQUIRE(on.method == Populations::Method::closed_form);

    Populations off = solve_populations_closed(population_coeffs(p, detunings(p, 6.0), false));
    REQUIRE(rel_err(off.s00, 0.00093258916554622706) < 1e-12);
    REQUIRE(rel_err(off.s11, 0.67611996583800171) < 1e-12);
    REQUIRE(rel_err(off.s22, 0.015346820678281695) < 1e-12);
    REQUIRE(rel_err(off.s33, 0.30760062431817037) < 1e-12);

    Populations peak = solve_populations_closed(population_coeffs(p, detunings(p, 8.982), true));
    REQUIRE(rel_err(peak.s33, 0.95163099952435948) < 1e-12);
}

TEST_CASE("closed form agrees with the generic linear solve") {
    SystemParams p = default_params();
    for (double d1 : {-1.0, 2.0, 4.5, 6.0, 7.3, 9.0, 11.0}) {
        CAPTURE(d1);
        PopulationCoeffs c = population_coeffs(p, detunings(p, d1), true);
        Populations a = solve_populations_closed(c);
        Populations b = solve_populations_linear(c);
        REQUIRE(std::abs(a.s00 - b.s00) < 1e-12);
        REQUIRE(std::abs(a.s11 - b.s11) < 1e-12);
        REQUIRE(std::abs(a.s22 - b.s22) < 1e-12);
        REQUIRE(std::abs(a.s33 - b.s33) < 1e-12);
        REQUIRE(std::abs(a.s00 + a.s11 + a.s22 + a.s33 - 1.0) < 1e-14);
        REQUIRE(std::abs(b.s00 + b.s11 + b.s22 + b.s33 - 1.0) < 1e-12);
    }
}

TEST_CASE("no trigger and no lower-level relaxation traps everything in one level") {
    SystemParams p = default_params();
    p.gamma12 = p.gamma13 = p.gamma23 = 0.0;
    Populations s = solve_populations_closed(population_coeffs(p, detunings(p, 6.0), false));
    REQUIRE(std::abs(s.s33 - 1.0) < 1e-10);
    REQUIRE(std::abs(s.s11) < 1e-10);
    REQUIRE(std::abs(s.s00) + std::abs(s.s22) < 1e-10);
}

TEST_CASE("balanced population mode") {
    Populations s = balanced_populations();
    REQUIRE(s.s00 == 0.0);
    REQUIRE(s.s11 == 0.5);
    REQUIRE(s.s22 == 0.0);
    REQUIRE(s.s33 == 0.5);
    REQUIRE(s.physical);
    REQUIRE(s.method == Populations::Method::prescribed);

    SystemParams p = default_params();
    p.omega_p0 = 123.0;  // balanced mode ignores the fields entirely
    Populations via = compute_populations(p, detunings(p, 6.0), true, PopulationMode::balanced);
    REQUIRE(via.s11 == 0.5);
    REQUIRE(via.s33 == 0.5);
}

TEST_CASE("population validation flags without clamping") {
    Populations s;
    s.s00 = -1e-8;
    s.s11 = 0.6;
    s.s22 = 0.4;
    s.s33 = 1e-8;
    s = validate_populations(s);
    REQUIRE_FALSE(s.physical);
    REQUIRE(s.worst_violation == Catch::Approx(1e-8));
    REQUIRE(s.s00 == -1e-8);  // value untouched

    s.s00 = -1e-10;  // within tolerance band
    s = validate_populations(s);
    REQUIRE(s.physical);

    s.s00 = std::numeric_limits<double>::quiet_NaN();
    s = validate_populations(s);
    REQUIRE_FALSE(s.physical);
}

TEST_CASE("near the balance pole the closed form goes unphysical and says so") {
    SystemParams p = default_params();
    Populations s = compute_populations(p, detunings(p, 6.5), false, PopulationMode::computed);
    REQUIRE_FALSE(s.physical);
    REQUIRE(s.worst_violation > 1e-3);
}

TEST_CASE("population solver error paths") {
    SECTION("non-uniform lower-level relaxation leaves the ratio undefined") {
        SystemParams p = default_params();
        p.gamma12 = 1e-3;
        REQUIRE_THROWS_AS(population_coeffs(p, detunings(p, 6.0), true), std::domain_error);
    }
    SECTION("non-uniform upper-level decay leaves the ratio undefined") {
        SystemParams p = default_params();
        p.gamma22 = 0.5;
        REQUIRE_THROWS_AS(population_coeffs(p, detunings(p, 6.0), true), std::domain_error);
    }
    SECTION("vanishing upper-level decay") {
        SystemParams p = default_params();
        p.gamma11 = p.gamma22 = p.gamma33 = 0.0;
        REQUIRE_THROWS_AS(population_coeffs(p, detunings(p, 6.0), true), std::domain_error);
    }
    SECTION("degenerate balance equations") {
        PopulationCoeffs zero{};
        REQUIRE_THROWS_AS(solve_populations_closed(zero), std::runtime_error);
        REQUIRE_THROWS_AS(solve_populations_linear(zero), std::runtime_error);
    }
}
