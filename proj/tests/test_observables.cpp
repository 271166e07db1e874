#include <doctest.h>

#include <cmath>
#include <vector>

#include "majoloop/block.hpp"
#include "majoloop/observables.hpp"
#include "majoloop/rng.hpp"

using namespace majoloop;

namespace {

LatticeSpec& spec44() {
    static LatticeSpec spec = build_lattice(Geometry::Honeycomb, 4, 4);
    return spec;
}

// site index from (cx, cy, sub)
int32_t site(const LatticeSpec& spec, int32_t cx, int32_t cy, int32_t sub) {
    return (cy * spec.lx() + cx) * spec.subs_per_cell() + sub;
}

}  // namespace

TEST_CASE("axis periods and minimal-image surface lengths") {
    const LatticeSpec& spec = spec44();
    CHECK(axis_period(spec, Axis::X) == 8);
    CHECK(axis_period(spec, Axis::Y) == 4);

    int32_t a = site(spec, 0, 0, 0);  // col 0
    int32_t b = site(spec, 3, 0, 1);  // col 7
    CHECK(surface_length(spec, a, b, Axis::X) == 1);  // wraps around
    CHECK(surface_length(spec, a, b, Axis::Y) == 0);
    int32_t c = site(spec, 2, 3, 0);  // col 4, row 3
    CHECK(surface_length(spec, a, c, Axis::X) == 4);
    CHECK(surface_length(spec, a, c, Axis::Y) == 1);
    CHECK(surface_length(spec, a, a, Axis::X) == 0);
}

TEST_CASE("surface distribution is normalized") {
    const LatticeSpec& spec = spec44();
    SurfaceRecord rec{&spec, {{site(spec, 0, 0, 0), site(spec, 0, 0, 1), 4},
                              {site(spec, 1, 0, 0), site(spec, 3, 0, 0), 2},
                              {site(spec, 0, 1, 0), site(spec, 0, 2, 0), 8}}};
    auto dist = surface_distribution(rec, Axis::X);
    CHECK(dist.size() == 5);
    double sum = 0.0;
    for (double v : dist) sum += v;
    CHECK(sum == doctest::Approx(1.0));
    CHECK(dist[1] == doctest::Approx(1.0 / 3.0));  // the intra-cell arc
    CHECK(surface_distribution({&spec, {}}, Axis::X).empty());
}

TEST_CASE("cylinder entanglement counts crossings at half a bit each") {
    const LatticeSpec& spec = spec44();
    SurfaceRecord rec{&spec, {{site(spec, 0, 0, 0), site(spec, 1, 0, 0), 0},   // cols 0-2
                              {site(spec, 0, 0, 1), site(spec, 3, 0, 1), 0}}};  // cols 1-7
    CHECK(entanglement_cylinder(rec, Axis::X, 0) == 0.0);
    CHECK(entanglement_cylinder(rec, Axis::X, 1) == 0.5);   // first arc cut
    CHECK(entanglement_cylinder(rec, Axis::X, 2) == 1.0);   // both arcs cut
    CHECK(entanglement_cylinder(rec, Axis::X, 3) == 0.5);
    CHECK(entanglement_cylinder(rec, Axis::X, 8) == 0.0);
    CHECK_THROWS_AS(entanglement_cylinder(rec, Axis::X, 9), ArgumentError);
}

TEST_CASE("entanglement profile is symmetric and anchored at zero") {
    const LatticeSpec& spec = spec44();
    Rng rng = Rng::keyed({31, 0});
    CircuitBlock blk = make_layer(spec, rng);
    CloseResult res = close_boundary(blk, ClosurePolicy::PureBottom);
    auto profile = entanglement_profile(res.surface, Axis::X);
    int32_t period = axis_period(spec, Axis::X);
    REQUIRE(static_cast<int32_t>(profile.size()) == period + 1);
    CHECK(profile[0] == 0.0);
    CHECK(profile[period] == 0.0);
    for (int32_t ell = 1; ell < period; ++ell) {
        CHECK(profile[ell] == doctest::Approx(profile[period - ell]));
        CHECK(profile[ell] >= 0.0);
    }
}

TEST_CASE("entropy, mutual information and I3") {
    const LatticeSpec& spec = spec44();
    int32_t s0 = site(spec, 0, 0, 0), s1 = site(spec, 0, 0, 1);
    int32_t s2 = site(spec, 1, 0, 0), s3 = site(spec, 1, 0, 1);
    SurfaceRecord rec{&spec, {{s0, s2, 0}, {s1, s3, 0}}};
    CHECK(entropy_of(rec, {s0, s1}) == 1.0);
    CHECK(entropy_of(rec, {s0, s2}) == 0.0);  // a full arc is pure
    CHECK(entropy_of(rec, {s0}) == 0.5);
    CHECK(mutual_information(rec, {s0, s1}, {s2, s3}) == 2);
    CHECK(mutual_information(rec, {s0}, {s3}) == 0);
    CHECK_THROWS_AS(mutual_information(rec, {s0}, {s0, s2}), ArgumentError);
}

TEST_CASE("tripartite information vanishes identically") {
    const LatticeSpec& spec = spec44();
    Rng rng = Rng::keyed({32, 0});
    CircuitBlock blk = compose(make_layer(spec, rng), make_layer(spec, rng), 1, 1);
    CloseResult res = close_boundary(blk, ClosurePolicy::PureBottom);
    // random disjoint regions
    Rng pick = Rng::keyed({32, 1});
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<int32_t> regions[3];
        for (int32_t s = 0; s < spec.n_sites(); ++s) {
            uint64_t r = pick.next_below(4);
            if (r < 3) regions[r].push_back(s);
        }
        double i3 = tripartite_information(res.surface, regions[0], regions[1], regions[2]);
        CHECK(i3 == 0.0);
    }
}

TEST_CASE("spanning stats require the mixed closure") {
    const LatticeSpec& spec = spec44();
    Rng rng = Rng::keyed({33, 0});
    CircuitBlock blk = make_layer(spec, rng);
    CloseResult mixed = close_boundary(blk, ClosurePolicy::MixedBottom);
    SpanningStats st = spanning_stats(mixed, ClosurePolicy::MixedBottom);
    CHECK(st.n_s == mixed.spanning);
    CHECK(st.residual_s == doctest::Approx(0.5 * mixed.spanning));
    CHECK(st.m == mixed.spanning_length);
    CHECK_THROWS_AS(spanning_stats(mixed, ClosurePolicy::PureBottom), ArgumentError);
}

TEST_CASE("physical displacement respects periodic images") {
    const LatticeSpec& spec = spec44();
    int32_t a = site(spec, 0, 0, 0);
    CHECK(physical_displacement(spec, a, a) == 0.0);
    for (int32_t b : {site(spec, 3, 0, 0), site(spec, 0, 3, 1), site(spec, 2, 2, 0)}) {
        CHECK(physical_displacement(spec, a, b) == doctest::Approx(physical_displacement(spec, b, a)));
        CHECK(physical_displacement(spec, a, b) > 0.0);
    }
    // one lattice vector apart = distance |a1| = sqrt(3), with L=4 the
    // minimal image of 3 steps is one step back
    double d1 = physical_displacement(spec, a, site(spec, 1, 0, 0));
    double d3 = physical_displacement(spec, a, site(spec, 3, 0, 0));
    CHECK(d1 == doctest::Approx(std::sqrt(3.0)));
    CHECK(d3 == doctest::Approx(d1));
}

TEST_CASE("radial histogram density and diffusion fit") {
    RadialHistogram hist;
    const double a_true = 0.35;  // target P(r) r^2 amplitude before normalization
    for (int i = 2; i < 40; ++i) {
        double r = i + 0.5;
        hist.add(r, 1e6 * a_true / (r * r));
    }
    auto dens = hist.density();
    double sum = 0.0;
    for (double v : dens) sum += v;
    CHECK(sum == doctest::Approx(1.0));

    DiffusionFit fit = fit_diffusion(hist, 2.0, 40.0);
    CHECK(fit.ok);
    CHECK(fit.chi2r < 1e-6);
    double amp = dens[5] * 5.5 * 5.5;  // constant by construction
    CHECK(fit.d == doctest::Approx(0.5 * amp * amp).epsilon(1e-9));
    // too few populated bins: flagged, not thrown
    RadialHistogram tiny;
    tiny.add(1.2);
    CHECK_FALSE(fit_diffusion(tiny, 0.0, 10.0).ok);
}

TEST_CASE("probe connectivity via union-find") {
    PairingTable pt(8);
    pt.pair(0, 2);
    pt.pair(1, 4);
    pt.pair(3, 6);
    pt.pair(5, 7);
    // probes (0,1), (2,3), (4,5): 0-2 joins p0/p1, 1-4 joins p0/p2
    CHECK(all_probes_connected(pt, {{0, 1}, {2, 3}, {4, 5}}));
    // probes (0,1), (6,7): only linked through node sets not in the probe list
    CHECK_FALSE(all_probes_connected(pt, {{0, 1}, {6, 7}}));
    CHECK_THROWS_AS(all_probes_connected(pt, {{0, 1}}), ArgumentError);

    CHECK(probe_i2(pt, {0, 1}, {2, 3}) == 1);
    CHECK(probe_i2(pt, {0, 1}, {2, 4}) == 2);
    CHECK(probe_i2(pt, {0, 1}, {5, 7}) == 0);
}
