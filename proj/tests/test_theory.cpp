#include <doctest.h>

#include <cmath>

#include "majoloop/errors.hpp"
#include "majoloop/oracle.hpp"
#include "majoloop/theory.hpp"

using namespace majoloop;
using namespace majoloop::theory;

TEST_CASE("honeycomb diffusion closed forms") {
    // isotropic point: every component equals the bound 1/4
    HoneycombDiffusion iso = d_mic_honeycomb(1.0 / 3, 1.0 / 3, 1.0 / 3);
    CHECK(iso.dz == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(iso.dperp == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(iso.d == doctest::Approx(0.25).epsilon(1e-14));

    HoneycombDiffusion half = d_mic_honeycomb(0.5, 0.5, 0.0);
    CHECK(half.d == doctest::Approx(3.0 / 16).epsilon(1e-14));

    // rotational invariance of the scalar D under color permutations
    for (auto [kx, ky, kz] : {std::array<double, 3>{0.2, 0.3, 0.5},
                              {0.1, 0.1, 0.8},
                              {0.45, 0.35, 0.2}}) {
        double d0 = d_mic_honeycomb(kx, ky, kz).d;
        CHECK(d_mic_honeycomb(ky, kz, kx).d == doctest::Approx(d0).epsilon(1e-12));
        CHECK(d_mic_honeycomb(kz, kx, ky).d == doctest::Approx(d0).epsilon(1e-12));
        CHECK(d_mic_honeycomb(ky, kx, kz).d == doctest::Approx(d0).epsilon(1e-12));
        CHECK(d0 <= 0.25 + 1e-14);  // isotropic point maximizes D
    }

    CHECK_THROWS_AS(d_mic_honeycomb(0.5, 0.5, 0.5), ArgumentError);
}

TEST_CASE("kekule diffusion formula") {
    // uniform tricoloring walks slower than the uniform honeycomb: 25/108
    CHECK(d_mic_kekule(1.0 / 3, 1.0 / 3, 1.0 / 3) ==
          doctest::Approx(25.0 / 108).epsilon(1e-14));
    double d = d_mic_kekule(0.5, 0.3, 0.2);
    CHECK(d > 0.0);
    CHECK(d < 0.25);
    // the two colors sharing the kb-distinguished sublattice pattern commute
    CHECK(d_mic_kekule(0.3, 0.5, 0.2) == doctest::Approx(d).epsilon(1e-12));
}

TEST_CASE("critical contour on the one-parameter cut") {
    // D(k) = 3/16 exactly at k = 2/3 on K_x = k, K_y = K_z = (1-k)/2
    CHECK(honeycomb_cut_d(2.0 / 3) == doctest::Approx(kCriticalD).epsilon(1e-14));
    ContourResult res = critical_contour(honeycomb_cut_d, 1.0 / 3, 0.99);
    REQUIRE(res.found);
    CHECK(res.k == doctest::Approx(2.0 / 3).epsilon(1e-9));
    // no crossing below the isotropic point on this cut
    ContourResult none = critical_contour(honeycomb_cut_d, 0.30, 1.0 / 3);
    CHECK_FALSE(none.found);
}

TEST_CASE("lifshitz shape function matches the q-series oracle") {
    for (double lambda : {1.0, 3.4, 6.0}) {
        for (double u : {0.05, 0.2, 0.5, 0.8, 0.95}) {
            double ref = oracle::lifshitz_j_series(u, lambda, 64);
            CHECK(lifshitz_j(u, lambda) == doctest::Approx(ref).epsilon(1e-12));
        }
    }
    // symmetric under u -> 1 - u
    CHECK(lifshitz_j(0.3, 3.4) == doctest::Approx(lifshitz_j(0.7, 3.4)).epsilon(1e-12));
}

TEST_CASE("poisson-dirichlet ratios are class universal") {
    auto r24 = [](double theta, double f) {
        double p2 = pd_pm(2, theta, f);
        return p2 * p2 / pd_pm(4, theta, f);
    };
    auto r23 = [](double theta, double f) {
        double p2 = pd_pm(2, theta, f), p3 = pd_pm(3, theta, f);
        return p2 * p2 * p2 / (p3 * p3);
    };
    // the fraction f of macroscopic length cancels in the ratios
    for (double f : {1.0, 0.7, 0.31}) {
        CHECK(r24(theta_of_class(SymClass::BDI), f) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r23(theta_of_class(SymClass::BDI), f) == doctest::Approx(9.0 / 8).epsilon(1e-12));
        CHECK(r24(theta_of_class(SymClass::D), f) == doctest::Approx(35.0 / 36).epsilon(1e-12));
        CHECK(r23(theta_of_class(SymClass::D), f) == doctest::Approx(25.0 / 24).epsilon(1e-12));
    }
    // BDI: P_m = f^m / m
    CHECK(pd_pm(3, 1.0, 0.5) == doctest::Approx(0.125 / 3).epsilon(1e-12));
}

TEST_CASE("poisson-dirichlet density normalization") {
    // first-moment identity: the macroscopic loops carry fraction f of the
    // total length, integral of ell P(ell) d ell over (0, f Lcal) = f
    double lcal = 100.0, theta = 2.0, f = 0.8;
    double moment = 0.0;
    int n = 200000;
    for (int i = 0; i < n; ++i) {
        double ell = (i + 0.5) * f * lcal / n;
        moment += ell * pd_density(ell, lcal, theta, f) * (f * lcal / n);
    }
    CHECK(moment == doctest::Approx(f).epsilon(1e-4));
}

TEST_CASE("hyperscaling relations") {
    for (double tau : {2.5, 2.1819, 2.1875}) {
        Exponents e = hyperscaling_from_tau(tau, 0.95);
        CHECK(e.eta == doctest::Approx(5.0 - 6.0 / (tau - 1.0)).epsilon(1e-14));
        CHECK(e.d_f == doctest::Approx(3.0 / (tau - 1.0)).epsilon(1e-14));
        CHECK(e.d_f == doctest::Approx(0.5 * (5.0 - e.eta)).epsilon(1e-12));
        // the two beta routes are algebraically identical
        CHECK(e.beta == doctest::Approx(e.beta_alt).epsilon(1e-12));
        // round trip through eta
        Exponents back = hyperscaling_from_eta(e.eta, 0.95);
        CHECK(back.tau == doctest::Approx(tau).epsilon(1e-12));
    }
    // liquid-phase anchor: tau = 5/2 gives eta = 1, d_f = 2
    Exponents liquid = hyperscaling_from_tau(2.5);
    CHECK(liquid.eta == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(liquid.d_f == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("reference loop-length exponents") {
    CHECK(reference_exponent(RefKind::FirstPassage) == doctest::Approx(1.5));
    CHECK(reference_exponent(RefKind::BulkLiquid) == doctest::Approx(2.5));
    CHECK(reference_exponent(RefKind::SurfaceCritical) == doctest::Approx(3.0));
    CHECK(reference_exponent(RefKind::SurfaceLiquid) == doctest::Approx(2.0));
    // densities follow ell^-exponent (up to the open-boundary exponential)
    double r = reference_density(RefKind::BulkLiquid, 8.0) /
               reference_density(RefKind::BulkLiquid, 2.0);
    CHECK(r == doctest::Approx(std::pow(4.0, -2.5)).epsilon(1e-12));
    double e = reference_density(RefKind::OpenBoundary, 4.0, 0.3) /
               reference_density(RefKind::OpenBoundary, 2.0, 0.3);
    CHECK(e == doctest::Approx(std::pow(2.0, -2.5) * std::exp(-0.3 * 2.0)).epsilon(1e-12));
}
