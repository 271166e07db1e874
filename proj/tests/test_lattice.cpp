#include <doctest.h>

#include <set>

#include "majoloop/lattice.hpp"

using namespace majoloop;

TEST_CASE("honeycomb counts and coloring") {
    LatticeSpec spec = build_lattice(Geometry::Honeycomb, 4, 4);
    CHECK(spec.n_sites() == 32);
    CHECK(spec.subs_per_cell() == 2);
    CHECK(spec.bonds_per_cell() == 3);
    CHECK(spec.bonds().size() == 48);
    for (Color c : {Color::X, Color::Y, Color::Z})
        CHECK(spec.bonds_of_color(c).size() == 16);
    CHECK(spec.bonds_of_color(Color::J).empty());
}

TEST_CASE("honeycomb nnn adds six j bonds per cell with sublattice budget") {
    LatticeSpec spec = build_lattice(Geometry::HoneycombNNN, 4, 4);
    CHECK(spec.bonds_per_cell() == 9);
    CHECK(spec.bonds_of_color(Color::J).size() == 96);
    CHECK(spec.family_multiplicity(Color::J) == 2);
    CHECK(spec.family_multiplicity(Color::X) == 1);

    // every j bond stays within one sublattice
    for (int32_t b : spec.bonds_of_color(Color::J)) {
        const Bond& bond = spec.bonds()[b];
        CHECK(spec.sites()[bond.a].sub == spec.sites()[bond.b].sub);
    }

    // sampling mass of the j family is twice its weight
    LatticeSpec w = set_weights(spec, {{Color::X, 0.4},
                                       {Color::Y, 0.2},
                                       {Color::Z, 0.2},
                                       {Color::J, 0.2}});
    double mass_j = 0.0, total = 0.0;
    for (std::size_t i = 0; i < w.sampling_colors().size(); ++i) {
        total += w.sampling_masses()[i];
        if (w.sampling_colors()[i] == Color::J) mass_j = w.sampling_masses()[i];
    }
    CHECK(mass_j == doctest::Approx(2.0 * 0.2).epsilon(1e-12));
    CHECK(total == doctest::Approx(w.sampling_total()).epsilon(1e-12));
}

TEST_CASE("yao-kivelson and cardy cell structure") {
    LatticeSpec yk = build_lattice(Geometry::YaoKivelson, 3, 3);
    CHECK(yk.subs_per_cell() == 6);
    CHECK(yk.bonds_per_cell() == 9);
    CHECK(yk.bonds_of_color(Color::R).size() == 18);
    CHECK(yk.bonds_of_color(Color::Z).size() == 9);

    LatticeSpec cardy = build_lattice(Geometry::CardyL3D, 4, 4);
    CHECK(cardy.subs_per_cell() == 4);
    CHECK(cardy.bonds_per_cell() == 8);
    int phase_count[4] = {0, 0, 0, 0};
    for (const Bond& b : cardy.bonds()) phase_count[b.phase]++;
    for (int p = 0; p < 4; ++p) CHECK(phase_count[p] == 32);

    CHECK_THROWS_AS(build_lattice(Geometry::CardyL3D, 4, 8), ConfigError);
}

TEST_CASE("kekule coloring constraints") {
    CHECK_THROWS_AS(build_lattice(Geometry::KekuleHoneycomb, 4, 4), ConfigError);
    LatticeSpec spec = build_lattice(Geometry::KekuleHoneycomb, 3, 3);
    CHECK(spec.bonds().size() == 27);
    // tricoloring is balanced
    CHECK(spec.bonds_of_color(Color::R).size() == 9);
    CHECK(spec.bonds_of_color(Color::G).size() == 9);
    CHECK(spec.bonds_of_color(Color::B).size() == 9);
}

TEST_CASE("translations are periodic index arithmetic") {
    LatticeSpec spec = build_lattice(Geometry::Honeycomb, 4, 6);
    for (int32_t s : {0, 7, 31, 47}) {
        CHECK(spec.translate_site(s, 0, 0) == s);
        CHECK(spec.translate_site(spec.translate_site(s, 3, 2), -3, -2) == s);
        CHECK(spec.translate_site(s, 4, 0) == s);   // wraps in x
        CHECK(spec.translate_site(s, 0, 6) == s);   // wraps in y
        CHECK(spec.translate_site(s, -4, -6) == s);
    }
    for (int32_t b : {0, 5, 17, 71}) {
        CHECK(spec.translate_bond(spec.translate_bond(b, 1, -2), -1, 2) == b);
    }
    // translation preserves sublattice and bond color
    const Bond& b0 = spec.bonds()[1];
    const Bond& b1 = spec.bonds()[spec.translate_bond(1, 2, 3)];
    CHECK(b0.color == b1.color);
    CHECK(spec.sites()[b0.a].sub == spec.sites()[b1.a].sub);
}

TEST_CASE("set_weights normalizes and rejects nonsense") {
    LatticeSpec spec = build_lattice(Geometry::Honeycomb, 4, 4);
    LatticeSpec w = set_weights(spec, {{Color::X, 2.0}, {Color::Y, 1.0}, {Color::Z, 1.0}});
    CHECK(w.weight(Color::X) == doctest::Approx(0.5));
    CHECK(w.weight(Color::Y) == doctest::Approx(0.25));
    double sum = w.weight(Color::X) + w.weight(Color::Y) + w.weight(Color::Z);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("frustration graph degree") {
    LatticeSpec spec = build_lattice(Geometry::Honeycomb, 4, 4);
    FrustrationGraph fg = frustration_graph(spec);
    CHECK(fg.n_nodes == spec.bonds().size());
    // every honeycomb bond anticommutes with the 4 bonds sharing an endpoint
    for (const auto& adj : fg.adjacency) CHECK(adj.size() == 4);

    LatticeSpec nnn = build_lattice(Geometry::HoneycombNNN, 4, 4);
    FrustrationGraph fg2 = frustration_graph(nnn);
    // nn bond: endpoints now have degree 2 (nn) + 6 (nnn) each
    for (int32_t b : nnn.bonds_of_color(Color::X))
        CHECK(fg2.adjacency[b].size() == 16);
}

TEST_CASE("orientability tracks bipartiteness of active bonds") {
    CHECK(is_orientable(build_lattice(Geometry::Honeycomb, 4, 4)));
    CHECK(is_orientable(build_lattice(Geometry::KekuleHoneycomb, 3, 3)));
    CHECK_FALSE(is_orientable(build_lattice(Geometry::YaoKivelson, 3, 3)));

    LatticeSpec nnn = build_lattice(Geometry::HoneycombNNN, 4, 4);
    CHECK_FALSE(is_orientable(nnn));
    LatticeSpec nnn0 = set_weights(nnn, {{Color::X, 1.0}, {Color::Y, 1.0},
                                         {Color::Z, 1.0}, {Color::J, 0.0}});
    CHECK(is_orientable(nnn0));

    LatticeSpec cardy = build_lattice(Geometry::CardyL3D, 4, 4);
    LatticeSpec c0 = set_weights(cardy, {{Color::P, 0.0}, {Color::Q, 0.3}});
    LatticeSpec c1 = set_weights(cardy, {{Color::P, 0.2}, {Color::Q, 0.3}});
    CHECK(is_orientable(c0));
    CHECK_FALSE(is_orientable(c1));
}

TEST_CASE("chain lattice for hand enumeration") {
    LatticeSpec chain = build_chain_lattice(2);
    CHECK(chain.n_sites() == 4);
    CHECK(chain.bonds_of_color(Color::Z).size() == 2);
    CHECK(chain.bonds_of_color(Color::X).size() == 2);
    CHECK(is_orientable(chain));
}

TEST_CASE("string round trips") {
    for (Geometry g : {Geometry::Honeycomb, Geometry::KekuleHoneycomb,
                       Geometry::HoneycombNNN, Geometry::YaoKivelson,
                       Geometry::CardyL3D}) {
        CHECK(geometry_from_string(to_string(g)) == g);
    }
    CHECK_THROWS_AS(geometry_from_string("triangular"), ConfigError);
    for (Color c : {Color::X, Color::Y, Color::Z, Color::J, Color::R}) {
        CHECK(color_from_string(to_string(c)) == c);
    }
}
