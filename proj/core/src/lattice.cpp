#include "majoloop/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

namespace majoloop {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

struct BondTemplate {
    int8_t sub_a;
    int8_t sub_b;
    int8_t dx, dy;   // cell offset of the b endpoint
    Color color;
    int8_t phase;
};

}  // namespace

Geometry geometry_from_string(const std::string& name) {
    if (name == "honeycomb") return Geometry::Honeycomb;
    if (name == "kekule") return Geometry::KekuleHoneycomb;
    if (name == "honeycomb-nnn" || name == "nnn") return Geometry::HoneycombNNN;
    if (name == "yao-kivelson" || name == "yk") return Geometry::YaoKivelson;
    if (name == "cardy-l" || name == "cardy") return Geometry::CardyL3D;
    throw ConfigError("unknown geometry: " + name);
}

std::string to_string(Geometry g) {
    switch (g) {
        case Geometry::Honeycomb: return "honeycomb";
        case Geometry::KekuleHoneycomb: return "kekule";
        case Geometry::HoneycombNNN: return "honeycomb-nnn";
        case Geometry::YaoKivelson: return "yao-kivelson";
        case Geometry::CardyL3D: return "cardy-l";
    }
    return "?";
}

Color color_from_string(const std::string& name) {
    if (name == "x") return Color::X;
    if (name == "y") return Color::Y;
    if (name == "z") return Color::Z;
    if (name == "j") return Color::J;
    if (name == "r") return Color::R;
    if (name == "g") return Color::G;
    if (name == "b") return Color::B;
    if (name == "p") return Color::P;
    if (name == "q") return Color::Q;
    throw ConfigError("unknown bond color: " + name);
}

std::string to_string(Color c) {
    switch (c) {
        case Color::X: return "x";
        case Color::Y: return "y";
        case Color::Z: return "z";
        case Color::J: return "j";
        case Color::R: return "r";
        case Color::G: return "g";
        case Color::B: return "b";
        case Color::P: return "p";
        case Color::Q: return "q";
        case Color::V: return "v";
    }
    return "?";
}

const std::vector<int32_t>& LatticeSpec::bonds_of_color(Color c) const {
    static const std::vector<int32_t> empty;
    auto it = by_color_.find(c);
    return it == by_color_.end() ? empty : it->second;
}

void LatticeSpec::rebuild_sampling_tables() {
    sampling_colors_.clear();
    sampling_masses_.clear();
    sampling_total_ = 0.0;
    for (const auto& [color, bonds] : by_color_) {
        double w = weight(color);
        if (w <= 0.0 || bonds.empty()) continue;
        // One mass per color family (times its family multiplicity); bond
        // choice within the family is uniform, so the weight budgets the
        // family as a whole rather than each bond.
        sampling_colors_.push_back(color);
        sampling_masses_.push_back(w * family_multiplicity(color));
        sampling_total_ += sampling_masses_.back();
    }
}

LatticeSpec build_lattice(Geometry g, int32_t lx, int32_t ly) {
    if (lx < 2 || ly < 2) {
        throw ConfigError("lattice dimensions must be at least 2x2 unit cells");
    }
    if (g == Geometry::KekuleHoneycomb && (lx % 3 != 0 || ly % 3 != 0)) {
        throw ConfigError("Kekule coloring needs L_x, L_y divisible by 3");
    }
    if (g == Geometry::CardyL3D && lx != ly) {
        throw ConfigError("CardyL3D uses unit aspect ratio, L_x = L_y");
    }

    LatticeSpec spec;
    spec.geometry_ = g;
    spec.lx_ = lx;
    spec.ly_ = ly;

    int subs = 0;
    std::vector<BondTemplate> templates;
    switch (g) {
        case Geometry::Honeycomb:
        case Geometry::KekuleHoneycomb:
        case Geometry::HoneycombNNN: {
            subs = 2;  // sub 0 = A, sub 1 = B
            templates = {
                {0, 1, 0, 0, Color::Z, 0},
                {1, 0, 1, 0, Color::X, 0},
                {1, 0, 0, 1, Color::Y, 0},
            };
            if (g == Geometry::HoneycombNNN) {
                for (int8_t s : {int8_t{0}, int8_t{1}}) {
                    templates.push_back({s, s, 1, 0, Color::J, 0});
                    templates.push_back({s, s, 0, 1, Color::J, 0});
                    templates.push_back({s, s, 1, -1, Color::J, 0});
                }
                // Each sublattice forms its own triangular lattice and gets
                // the full j budget.
                spec.family_mult_[Color::J] = 2;
            }
            break;
        }
        case Geometry::YaoKivelson: {
            subs = 6;  // up triangle 0,1,2; down triangle 3,4,5
            templates = {
                {0, 1, 0, 0, Color::R, 0}, {1, 2, 0, 0, Color::G, 0},
                {2, 0, 0, 0, Color::B, 0}, {3, 4, 0, 0, Color::R, 0},
                {4, 5, 0, 0, Color::G, 0}, {5, 3, 0, 0, Color::B, 0},
                {0, 3, 0, 0, Color::Z, 0},  // dodecagon bonds between triangles
                {1, 4, 1, 0, Color::X, 0},
                {2, 5, 0, 1, Color::Y, 0},
            };
            break;
        }
        case Geometry::CardyL3D: {
            // 2x2 strands per cell: sub = su + 2*sv. Four brickwork phases of
            // four-leg vertices per depth-1 layer; every strand meets exactly
            // one vertex per phase.
            subs = 4;
            templates = {
                {0, 1, 0, 0, Color::V, 0}, {2, 3, 0, 0, Color::V, 0},
                {0, 2, 0, 0, Color::V, 1}, {1, 3, 0, 0, Color::V, 1},
                {1, 0, 1, 0, Color::V, 2}, {3, 2, 1, 0, Color::V, 2},
                {2, 0, 0, 1, Color::V, 3}, {3, 1, 0, 1, Color::V, 3},
            };
            break;
        }
    }

    spec.subs_per_cell_ = subs;
    spec.bonds_per_cell_ = static_cast<int32_t>(templates.size());
    spec.sites_.resize(static_cast<std::size_t>(lx) * ly * subs);

    // Integer brickwall coordinates: subs spread along x within the cell.
    // Physical embedding with unit bond length for honeycomb-family.
    const int cols_per_cell = (g == Geometry::CardyL3D) ? 2 : subs;
    const int rows_per_cell = (g == Geometry::CardyL3D) ? 2 : 1;
    spec.n_cols_ = lx * cols_per_cell;
    spec.n_rows_ = ly * rows_per_cell;
    for (int32_t cy = 0; cy < ly; ++cy) {
        for (int32_t cx = 0; cx < lx; ++cx) {
            for (int s = 0; s < subs; ++s) {
                Site& site = spec.sites_[(static_cast<std::size_t>(cy) * lx + cx) * subs + s];
                site.cell_x = cx;
                site.cell_y = cy;
                site.sub = static_cast<int8_t>(s);
                if (g == Geometry::CardyL3D) {
                    site.col = 2 * cx + (s & 1);
                    site.row = 2 * cy + (s >> 1);
                    site.px = site.col;
                    site.py = site.row;
                } else {
                    site.col = cols_per_cell * cx + s;
                    site.row = cy;
                    if (subs == 2) {
                        // honeycomb: a1 = (sqrt3, 0), a2 = (sqrt3/2, 3/2),
                        // A at (0,0), B at (sqrt3/2, 1/2)
                        site.px = kSqrt3 * cx + 0.5 * kSqrt3 * cy + (s == 1 ? 0.5 * kSqrt3 : 0.0);
                        site.py = 1.5 * cy + (s == 1 ? 0.5 : 0.0);
                    } else {
                        site.px = site.col;
                        site.py = site.row;
                    }
                }
            }
        }
    }

    std::set<std::pair<int32_t, int32_t>> seen;  // dedupe for tiny periodic sizes
    spec.bonds_.reserve(static_cast<std::size_t>(lx) * ly * templates.size());
    for (int32_t cy = 0; cy < ly; ++cy) {
        for (int32_t cx = 0; cx < lx; ++cx) {
            for (const BondTemplate& t : templates) {
                int32_t bx = LatticeSpec::wrap(cx + t.dx, lx);
                int32_t by = LatticeSpec::wrap(cy + t.dy, ly);
                Bond bond;
                bond.a = (cy * lx + cx) * subs + t.sub_a;
                bond.b = (by * lx + bx) * subs + t.sub_b;
                bond.color = t.color;
                bond.phase = t.phase;
                if (g == Geometry::KekuleHoneycomb) {
                    // proper 3-edge-coloring with period-3 cell pattern
                    int orient = (t.color == Color::Z) ? 0 : (t.color == Color::X) ? 1 : 2;
                    int c = (orient + cx + 2 * cy) % 3;
                    bond.color = (c == 0) ? Color::R : (c == 1) ? Color::G : Color::B;
                }
                if (bond.a == bond.b) {
                    throw ConfigError("degenerate bond (site paired with its own image)");
                }
                auto key = std::minmax(bond.a, bond.b);
                if (!seen.insert({key.first, key.second}).second) {
                    // bond slots must stay dense for translate_bond(); tiny
                    // lattices with coinciding periodic images are rejected
                    throw ConfigError("lattice too small for distinct periodic bonds");
                }
                spec.bonds_.push_back(bond);
            }
        }
    }

    for (std::size_t i = 0; i < spec.bonds_.size(); ++i) {
        spec.by_color_[spec.bonds_[i].color].push_back(static_cast<int32_t>(i));
    }

    // default weights: uniform over colors present (CardyL3D: p = q = 1/4)
    std::map<Color, double> raw;
    if (g == Geometry::CardyL3D) {
        raw[Color::P] = 0.25;
        raw[Color::Q] = 0.25;
        spec.weights_ = raw;
        spec.rebuild_sampling_tables();
        return spec;
    }
    for (const auto& [color, bonds] : spec.by_color_) raw[color] = 1.0;
    return set_weights(spec, raw);
}

LatticeSpec build_chain_lattice(int32_t n_cells) {
    if (n_cells < 1) throw ConfigError("chain lattice needs at least one cell");
    LatticeSpec spec;
    spec.geometry_ = Geometry::Honeycomb;
    spec.lx_ = n_cells;
    spec.ly_ = 1;
    spec.subs_per_cell_ = 2;
    spec.n_cols_ = 2 * n_cells;
    spec.n_rows_ = 1;
    spec.sites_.resize(static_cast<std::size_t>(2) * n_cells);
    for (int32_t c = 0; c < n_cells; ++c) {
        for (int s = 0; s < 2; ++s) {
            Site& site = spec.sites_[2 * c + s];
            site.cell_x = c;
            site.sub = static_cast<int8_t>(s);
            site.col = 2 * c + s;
            site.px = site.col;
        }
    }
    spec.bonds_per_cell_ = (n_cells >= 2) ? 2 : 1;
    for (int32_t c = 0; c < n_cells; ++c) {
        spec.bonds_.push_back({2 * c, 2 * c + 1, Color::Z, 0});
        if (n_cells >= 2) {
            int32_t next = LatticeSpec::wrap(c + 1, n_cells);
            spec.bonds_.push_back({2 * c + 1, 2 * next, Color::X, 0});
        }
    }
    for (std::size_t i = 0; i < spec.bonds_.size(); ++i)
        spec.by_color_[spec.bonds_[i].color].push_back(static_cast<int32_t>(i));
    std::map<Color, double> raw;
    for (const auto& [color, bonds] : spec.by_color_) raw[color] = 1.0;
    return set_weights(spec, raw);
}

LatticeSpec set_weights(const LatticeSpec& spec, const std::map<Color, double>& raw) {
    LatticeSpec out = spec;
    for (const auto& [color, w] : raw) {
        if (w < 0.0) throw ConfigError("negative sampling weight for color " + to_string(color));
        if (!std::isfinite(w)) throw ConfigError("non-finite sampling weight");
    }
    if (spec.geometry() == Geometry::CardyL3D) {
        double p = raw.count(Color::P) ? raw.at(Color::P) : 0.0;
        double q = raw.count(Color::Q) ? raw.at(Color::Q) : 0.0;
        if (p + q > 1.0 + 1e-12) {
            throw ConfigError("CardyL3D resolution probabilities need p + q <= 1");
        }
        out.weights_ = {{Color::P, p}, {Color::Q, q}};
        out.rebuild_sampling_tables();
        return out;
    }
    double total = 0.0;
    for (const auto& [color, w] : raw) {
        if (!spec.by_color_.count(color) && w > 0.0) {
            throw ConfigError("color " + to_string(color) + " has no bonds in " +
                              to_string(spec.geometry()));
        }
        total += w;
    }
    if (total <= 0.0) throw ConfigError("all sampling weights are zero");
    out.weights_.clear();
    for (const auto& [color, w] : raw) out.weights_[color] = w / total;
    out.rebuild_sampling_tables();
    return out;
}

FrustrationGraph frustration_graph(const LatticeSpec& spec) {
    FrustrationGraph graph;
    graph.n_nodes = spec.bonds().size();
    graph.adjacency.resize(graph.n_nodes);
    std::vector<std::vector<int32_t>> bonds_at_site(spec.n_sites());
    for (std::size_t i = 0; i < spec.bonds().size(); ++i) {
        bonds_at_site[spec.bonds()[i].a].push_back(static_cast<int32_t>(i));
        bonds_at_site[spec.bonds()[i].b].push_back(static_cast<int32_t>(i));
    }
    for (const auto& cluster : bonds_at_site) {
        for (std::size_t i = 0; i < cluster.size(); ++i) {
            for (std::size_t j = i + 1; j < cluster.size(); ++j) {
                graph.adjacency[cluster[i]].push_back(cluster[j]);
                graph.adjacency[cluster[j]].push_back(cluster[i]);
            }
        }
    }
    return graph;
}

bool is_orientable(const LatticeSpec& spec) {
    if (spec.geometry() == Geometry::CardyL3D) {
        return spec.weight(Color::P) == 0.0;
    }
    // 2-color the graph of nonzero-weight bonds
    std::vector<int8_t> color(spec.n_sites(), -1);
    std::vector<std::vector<int32_t>> adj(spec.n_sites());
    for (const Bond& b : spec.bonds()) {
        if (spec.weight(b.color) <= 0.0) continue;
        adj[b.a].push_back(b.b);
        adj[b.b].push_back(b.a);
    }
    for (int32_t start = 0; start < spec.n_sites(); ++start) {
        if (color[start] != -1 || adj[start].empty()) continue;
        color[start] = 0;
        std::queue<int32_t> frontier;
        frontier.push(start);
        while (!frontier.empty()) {
            int32_t v = frontier.front();
            frontier.pop();
            for (int32_t w : adj[v]) {
                if (color[w] == -1) {
                    color[w] = static_cast<int8_t>(1 - color[v]);
                    frontier.push(w);
                } else if (color[w] == color[v]) {
                    return false;
                }
            }
        }
    }
    return true;
}

}  // namespace majoloop
