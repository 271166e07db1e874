#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "majoloop/errors.hpp"

namespace majoloop {

enum class Geometry {
    Honeycomb,        // nearest-neighbor Kitaev circuit, bond colors x/y/z
    KekuleHoneycomb,  // honeycomb with Kekule tricoloring r/g/b
    HoneycombNNN,     // honeycomb x/y/z plus next-nearest-neighbor bonds (j)
    YaoKivelson,      // decorated honeycomb: triangle bonds r/g/b, dodecagon x/y/z
    CardyL3D,         // direct 3D vertex loop lattice, resolutions p/q/(1-p-q)
};

Geometry geometry_from_string(const std::string& name);
std::string to_string(Geometry g);

// Bond colors across all geometries. V marks CardyL3D vertex slots, which are
// resolved per vertex (weights p/q) rather than sampled as bonds.
enum class Color : uint8_t { X, Y, Z, J, R, G, B, P, Q, V };

Color color_from_string(const std::string& name);
std::string to_string(Color c);

struct Site {
    int32_t cell_x = 0;
    int32_t cell_y = 0;
    int8_t sub = 0;      // intra-cell index
    int32_t col = 0;     // integer x coordinate on the squashed (brickwall) grid
    int32_t row = 0;     // integer y coordinate
    double px = 0.0;     // physical embedding, unit bond length where meaningful
    double py = 0.0;
};

struct Bond {
    int32_t a = 0;
    int32_t b = 0;
    Color color = Color::X;
    int8_t phase = 0;    // CardyL3D brickwork phase; 0 elsewhere
};

struct FrustrationGraph {
    std::size_t n_nodes = 0;                       // one node per bond
    std::vector<std::vector<int32_t>> adjacency;   // bonds sharing a Majorana site
};

// Immutable circuit geometry: sites, colored bond table, sampling weights.
// Site index = (cell_y * Lx + cell_x) * subs_per_cell + sub, bond index
// likewise over per-cell bond slots, so lattice translations are pure index
// arithmetic.
class LatticeSpec {
  public:
    Geometry geometry() const { return geometry_; }
    int32_t lx() const { return lx_; }
    int32_t ly() const { return ly_; }
    int32_t n_sites() const { return static_cast<int32_t>(sites_.size()); }
    int32_t subs_per_cell() const { return subs_per_cell_; }
    int32_t bonds_per_cell() const { return bonds_per_cell_; }
    const std::vector<Site>& sites() const { return sites_; }
    const std::vector<Bond>& bonds() const { return bonds_; }
    const std::map<Color, double>& weights() const { return weights_; }

    // Number of distinct x columns / y rows of the site grid (periods for
    // minimal-image surface lengths).
    int32_t n_cols() const { return n_cols_; }
    int32_t n_rows() const { return n_rows_; }

    double weight(Color c) const {
        auto it = weights_.find(c);
        return it == weights_.end() ? 0.0 : it->second;
    }

    // Site translated by (dx, dy) unit cells. O(1).
    int32_t translate_site(int32_t site, int32_t dx, int32_t dy) const {
        int32_t cell = site / subs_per_cell_;
        int32_t sub = site % subs_per_cell_;
        int32_t cx = cell % lx_;
        int32_t cy = cell / lx_;
        cx = wrap(cx + dx, lx_);
        cy = wrap(cy + dy, ly_);
        return (cy * lx_ + cx) * subs_per_cell_ + sub;
    }

    int32_t translate_bond(int32_t bond, int32_t dx, int32_t dy) const {
        int32_t cell = bond / bonds_per_cell_;
        int32_t slot = bond % bonds_per_cell_;
        int32_t cx = cell % lx_;
        int32_t cy = cell / lx_;
        cx = wrap(cx + dx, lx_);
        cy = wrap(cy + dy, ly_);
        return (cy * lx_ + cx) * bonds_per_cell_ + slot;
    }

    const std::vector<int32_t>& bonds_of_color(Color c) const;

    // Per-layer bond sampling: a color family is picked with mass
    // weight * family_multiplicity, then a uniform bond of that color.
    // The multiplicity is 1 except where one weight budgets several
    // disconnected families (the two triangular sublattices of the NNN
    // geometry each receive the full j budget).
    const std::vector<Color>& sampling_colors() const { return sampling_colors_; }
    const std::vector<double>& sampling_masses() const { return sampling_masses_; }
    double sampling_total() const { return sampling_total_; }

    int family_multiplicity(Color c) const {
        auto it = family_mult_.find(c);
        return it == family_mult_.end() ? 1 : it->second;
    }

    friend LatticeSpec build_lattice(Geometry g, int32_t lx, int32_t ly);
    friend LatticeSpec build_chain_lattice(int32_t n_cells);
    friend LatticeSpec set_weights(const LatticeSpec& spec,
                                   const std::map<Color, double>& raw);

  private:
    static int32_t wrap(int32_t v, int32_t n) {
        v %= n;
        return v < 0 ? v + n : v;
    }
    void rebuild_sampling_tables();

    Geometry geometry_ = Geometry::Honeycomb;
    int32_t lx_ = 0, ly_ = 0;
    int32_t subs_per_cell_ = 0, bonds_per_cell_ = 0;
    int32_t n_cols_ = 0, n_rows_ = 0;
    std::vector<Site> sites_;
    std::vector<Bond> bonds_;
    std::map<Color, double> weights_;
    std::map<Color, std::vector<int32_t>> by_color_;
    std::map<Color, int> family_mult_;
    std::vector<Color> sampling_colors_;
    std::vector<double> sampling_masses_;
    double sampling_total_ = 0.0;
};

// Builds the periodic lattice with default (uniform) weights.
LatticeSpec build_lattice(Geometry g, int32_t lx, int32_t ly);

// Minimal 1D lattice for hand enumeration: n_cells cells of two sites with
// intra-cell z bonds, plus inter-cell x bonds when n_cells >= 2.
LatticeSpec build_chain_lattice(int32_t n_cells);

// Returns a copy with color weights normalized to sum 1. For CardyL3D the
// map carries vertex resolution probabilities {P: p, Q: q} with p + q <= 1
// and the crossing-free remainder implicit; no renormalization is applied.
LatticeSpec set_weights(const LatticeSpec& spec, const std::map<Color, double>& raw);

// Dual (anticommutation) graph: one node per bond, edges between bonds that
// share a site.
FrustrationGraph frustration_graph(const LatticeSpec& spec);

// True iff the bond graph restricted to nonzero-weight colors is bipartite
// (class BDI). CardyL3D is orientable iff the crossing weight p vanishes.
bool is_orientable(const LatticeSpec& spec);

}  // namespace majoloop
