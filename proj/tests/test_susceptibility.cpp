#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "test_util.hpp"
#include "tripod/tripod.hpp"

using namespace tripod;
using testutil::rel_err;

namespace {

struct Fixture {
    SystemParams p = default_params();
    DetuningSet D = detunings(p, 6.0);
    Populations s = compute_populations(p, D, true, PopulationMode::computed);
};

} // namespace

TEST_CASE("side views pick the right detunings and populations") {
    Fixture f;
    SideView pv = side_view(f.p, f.D, f.s, Side::probe);
    REQUIRE(pv.a0 == f.D.d10);
    REQUIRE(pv.ab == f.D.d12);
    REQUIRE(pv.ao == f.D.d13);
    REQUIRE(pv.bo == f.D.d23);
    REQUIRE(pv.o0 == f.D.d30);
    REQUIRE(pv.ob == f.D.d32);
    REQUIRE(pv.saa == f.s.s11);
    REQUIRE(pv.soo == f.s.s33);

    SideView tv = side_view(f.p, f.D, f.s, Side::trigger);
    REQUIRE(tv.a0 == f.D.d30);
    REQUIRE(tv.ab == f.D.d32);
    REQUIRE(tv.ao == f.D.d31);
    REQUIRE(tv.bo == f.D.d21);
    REQUIRE(tv.o0 == f.D.d10);
    REQUIRE(tv.ob == f.D.d12);
    REQUIRE(tv.saa == f.s.s33);
    REQUIRE(tv.soo == f.s.s11);
}

TEST_CASE("pointwise response reproduces frozen reference values") {
    Fixture f;
    double W = mean_coupling_sq(f.p);
    TaylorChi tp = taylor_chi(f.p, f.D, f.s, Side::probe, W);
    REQUIRE(rel_err(tp.chi1, {-0.0024581312391731432, 4.79766240360263e-05}) < 1e-11);
    REQUIRE(rel_err(tp.chi3_self, {0.00045479616993927217, 2.872433277021704e-05}) < 1e-11);
    REQUIRE(rel_err(tp.chi3_cross, {0.00041772038566048381, 2.2147022017826774e-05}) < 1e-11);

    TaylorChi tt = taylor_chi(f.p, f.D, f.s, Side::trigger, W);
    REQUIRE(rel_err(tt.chi1, {3.4065954279057081e-05, 1.726274109636291e-06}) < 1e-11);
    REQUIRE(rel_err(tt.chi3_self, {0.00038068419230987067, 3.8757100845184744e-05}) < 1e-11);
    REQUIRE(rel_err(tt.chi3_cross, {0.00054554061633110601, 4.5012731717518833e-05}) < 1e-11);
}

TEST_CASE("harmonic response coefficients reproduce frozen reference values") {
    Fixture f;
    SusceptibilityCoeffs cp = fourier_coeffs(f.p, f.D, f.s, Side::probe);
    REQUIRE(rel_err(cp.b_mu, {0.66587075331684353, -0.012333016440776013}) < 1e-11);
    REQUIRE(rel_err(cp.chi1[0], {-0.0032923133673103729, 0.00011284052129843489}) < 1e-11);
    REQUIRE(rel_err(cp.chi1[1], {0.0012541428327294847, -7.4183364926631534e-05}) < 1e-11);
    REQUIRE(rel_err(cp.chi1[2], {-0.00047744604978236082, 4.0153471119810007e-05}) < 1e-11);
    REQUIRE(rel_err(cp.self3[0], {0.00051195919476440988, 2.0463068049165678e-05}) < 1e-11);
    REQUIRE(rel_err(cp.self3[1], {-0.00013272310597298428, 4.5340810034694529e-06}) < 1e-11);
    REQUIRE(rel_err(cp.self3[2], {2.6599022845425601e-05, -5.2474009396700895e-06}) < 1e-10);
    REQUIRE(rel_err(cp.cross3[0], {0.00067187214423036767, 8.9596286391186218e-06}) < 1e-11);
    REQUIRE(rel_err(cp.cross3[1], {-0.0003279750276914451, 9.0434344407118356e-06}) < 1e-11);
    REQUIRE(rel_err(cp.cross3[2], {0.0001526534808675944, -9.4963409315103047e-06}) < 1e-10);

    SusceptibilityCoeffs ct = fourier_coeffs(f.p, f.D, f.s, Side::trigger);
    REQUIRE(rel_err(ct.b_mu, {0.80356379956653634, 0.00054060830818384892}) < 1e-11);
    REQUIRE(rel_err(ct.chi1[0], {5.7228965747825746e-05, 2.9704041335557045e-06}) < 1e-11);
    REQUIRE(rel_err(ct.chi1[1], {-2.8826383172315256e-05, -1.5288720601205272e-06}) < 1e-11);
    REQUIRE(rel_err(ct.chi1[2], {1.451990773162724e-05, 7.8655466021242631e-07}) < 1e-11);
    REQUIRE(rel_err(ct.self3[0], {0.00064457293232164886, 6.7230776842108794e-05}) < 1e-11);
    REQUIRE(rel_err(ct.self3[1], {-0.00032701553372794221, -3.4848713107094664e-05}) < 1e-11);
    REQUIRE(rel_err(ct.self3[2], {0.00016589771223778977, 1.8051955958714044e-05}) < 1e-11);
    REQUIRE(rel_err(ct.cross3[0], {0.00073169567810399069, 4.9914620508865505e-05}) < 1e-11);
    REQUIRE(rel_err(ct.cross3[1], {-0.00027938378677504964, -1.2355165693183975e-05}) < 1e-11);
    REQUIRE(rel_err(ct.cross3[2], {0.00010660584666601222, 2.1551901435959691e-06}) < 1e-10);
}

TEST_CASE("lattice geometry internal relations") {
    Fixture f;
    SideView v = side_view(f.p, f.D, f.s, Side::probe);
    LatticeGeometry g = lattice_geometry(f.p, v);
    REQUIRE(g.s_c2 == mean_coupling_sq(f.p));
    REQUIRE(g.cross == cplx(8.0));
    REQUIRE(rel_err(g.b, 2.0 * g.cross * g.a) < 1e-15);
    REQUIRE(rel_err(g.d_coef, 2.0 * g.cross * g.c_coef) < 1e-15);
}

TEST_CASE("linear response absorbs and its harmonics decay") {
    SystemParams p = default_params();
    for (double d1 : {3.0, 4.5, 6.0, 7.5, 9.0, 10.0}) {
        CAPTURE(d1);
        DetuningSet D = detunings(p, d1);
        Populations s = compute_populations(p, D, true, PopulationMode::computed);
        for (Side side : {Side::probe, Side::trigger}) {
            SusceptibilityCoeffs co = fourier_coeffs(p, D, s, side);
            REQUIRE(co.chi1[0].imag() > 0.0);
            REQUIRE(std::abs(co.chi1[1]) < std::abs(co.chi1[0]));
            REQUIRE(std::abs(co.chi1[2]) < std::abs(co.chi1[1]));
        }
    }
}

TEST_CASE("probe and trigger sides are images of each other") {
    // swapping the two weak beams' detunings and populations swaps the sides
    SystemParams p = default_params();
    double da = 5.7, db = p.delta3;
    DetuningSet D1 = detunings(p, da);
    Populations s1 = compute_populations(p, D1, true, PopulationMode::computed);

    SystemParams p2 = p;
    p2.delta3 = da;
    DetuningSet D2 = detunings(p2, db);
    Populations s2 = s1;
    std::swap(s2.s11, s2.s33);

    SusceptibilityCoeffs trig = fourier_coeffs(p, D1, s1, Side::trigger);
    SusceptibilityCoeffs swapped = fourier_coeffs(p2, D2, s2, Side::probe);
    for (int n = 0; n < 3; ++n) {
        CAPTURE(n);
        REQUIRE(rel_err(swapped.chi1[n], trig.chi1[n]) < 1e-12);
        REQUIRE(rel_err(swapped.self3[n], trig.self3[n]) < 1e-12);
        REQUIRE(rel_err(swapped.cross3[n], trig.cross3[n]) < 1e-12);
    }
}

TEST_CASE("degenerate response denominators are rejected") {
    SystemParams p = default_params();
    Fixture f;
    // coincident probe and trigger detunings collapse a cross denominator
    DetuningSet D = detunings(p, p.delta3);
    Populations s = compute_populations(p, D, true, PopulationMode::computed);
    REQUIRE_THROWS_AS(fourier_coeffs(p, D, s, Side::probe), std::runtime_error);
    // the pointwise guard trips when asked for an absurd floor
    REQUIRE_THROWS_AS(taylor_chi(f.p, f.D, f.s, Side::probe, mean_coupling_sq(f.p), 1e6),
                      std::runtime_error);
}
