#include "majoloop/block.hpp"

#include <algorithm>

#include "majoloop/errors.hpp"

namespace majoloop {

ClosurePolicy closure_from_string(const std::string& name) {
    if (name == "pure-bottom") return ClosurePolicy::PureBottom;
    if (name == "pure-both") return ClosurePolicy::PureBoth;
    if (name == "mixed-bottom") return ClosurePolicy::MixedBottom;
    if (name == "periodic-time") return ClosurePolicy::PeriodicTime;
    throw ConfigError("unknown closure policy: " + name);
}

std::string to_string(ClosurePolicy p) {
    switch (p) {
        case ClosurePolicy::PureBottom: return "pure-bottom";
        case ClosurePolicy::PureBoth: return "pure-both";
        case ClosurePolicy::MixedBottom: return "mixed-bottom";
        case ClosurePolicy::PeriodicTime: return "periodic-time";
    }
    return "?";
}

CircuitBlock identity_block(const LatticeSpec& spec) {
    CircuitBlock blk;
    blk.spec = &spec;
    int32_t n = spec.n_sites();
    blk.match.resize(2 * n);
    blk.len.assign(2 * n, 0);
    for (int32_t i = 0; i < n; ++i) {
        blk.match[i] = n + i;
        blk.match[n + i] = i;
    }
    return blk;
}

CircuitBlock make_layer(const LatticeSpec& spec, Rng& rng, bool record_moves) {
    const int32_t n = spec.n_sites();
    PairingTable pt(2 * n);
    for (int32_t i = 0; i < n; ++i) pt.pair(i, n + i, 0);

    auto moves = record_moves ? std::make_shared<std::vector<Move>>() : nullptr;
    const auto& bonds = spec.bonds();

    if (spec.geometry() == Geometry::CardyL3D) {
        // brickwork period: 4 vertex phases, each resolving every strand once
        const double p_cross = spec.weight(Color::P);
        const double p_id = spec.weight(Color::Q);
        const int32_t slots = spec.bonds_per_cell();
        for (int phase = 0; phase < 4; ++phase) {
            for (int32_t idx = 0; idx < static_cast<int32_t>(bonds.size()); ++idx) {
                if ((idx % slots) / 2 != phase) continue;
                double u = rng.next_double();
                if (u < p_cross) {
                    pt.braid(n + bonds[idx].a, n + bonds[idx].b);
                    if (moves) moves->push_back({idx, MoveKind::Braid});
                } else if (u < p_cross + p_id) {
                    // identity resolution: strands pass through
                } else {
                    pt.measure(n + bonds[idx].a, n + bonds[idx].b);
                    if (moves) moves->push_back({idx, MoveKind::Measure});
                }
            }
        }
    } else {
        for (int32_t draw = 0; draw < n; ++draw) {
            std::size_t ci = sample_discrete(rng, spec.sampling_masses(),
                                             spec.sampling_total());
            const auto& of_color = spec.bonds_of_color(spec.sampling_colors()[ci]);
            int32_t idx = of_color[rng.next_below(of_color.size())];
            pt.measure(n + bonds[idx].a, n + bonds[idx].b);
            if (moves) moves->push_back({idx, MoveKind::Measure});
        }
    }

    CircuitBlock blk;
    blk.spec = &spec;
    blk.depth = 1;
    blk.match.resize(2 * n);
    blk.len.resize(2 * n);
    for (int32_t i = 0; i < 2 * n; ++i) {
        blk.match[i] = pt.partner(i);
        blk.len[i] = pt.arc_length(i);
    }
    blk.closed = pt.closed();
    blk.n_measurements = pt.n_measurements();
    blk.moves = std::move(moves);
    return blk;
}

CircuitBlock compose(const CircuitBlock& a, const CircuitBlock& b, int32_t dx, int32_t dy) {
    if (a.spec != b.spec || a.n() != b.n())
        throw ArgumentError("compose: blocks live on different lattices");
    const LatticeSpec& spec = *a.spec;
    const int32_t n = a.n();

    CircuitBlock out;
    out.spec = a.spec;
    out.depth = a.depth + b.depth;
    out.n_measurements = a.n_measurements + b.n_measurements;
    out.match.assign(2 * n, -1);
    out.len.assign(2 * n, 0);
    out.closed = a.closed;
    out.closed.merge(b.closed);
    out.seed_record = a.seed_record;

    // glue: a's top at site t meets b's bottom node inv(t)
    auto inv = [&](int32_t t) { return spec.translate_site(t, -dx, -dy); };
    auto fwd = [&](int32_t j) { return spec.translate_site(j, dx, dy); };

    std::vector<char> iface_used(n, 0);
    std::vector<char> done(2 * n, 0);
    for (int32_t r = 0; r < 2 * n; ++r) {
        if (done[r]) continue;
        bool in_a = r < n;
        int32_t node = in_a ? r : n + inv(r - n);
        int64_t total = 0;
        int32_t endpoint;
        while (true) {
            const CircuitBlock& blk = in_a ? a : b;
            int32_t p = blk.match[node];
            total += blk.len[node];
            if (in_a && p < n) {
                endpoint = p;
                break;
            }
            if (!in_a && p >= n) {
                endpoint = n + fwd(p - n);
                break;
            }
            if (in_a) {
                int32_t t = p - n;
                iface_used[t] = 1;
                in_a = false;
                node = inv(t);
            } else {
                int32_t t = fwd(p);
                iface_used[t] = 1;
                in_a = true;
                node = n + t;
            }
        }
        out.match[r] = endpoint;
        out.match[endpoint] = r;
        out.len[r] = out.len[endpoint] = total;
        done[r] = done[endpoint] = 1;
    }

    // cycles confined to the interface close inside the composite
    for (int32_t t0 = 0; t0 < n; ++t0) {
        if (iface_used[t0]) continue;
        int64_t total = 0;
        int32_t t = t0;
        do {
            iface_used[t] = 1;
            int32_t t2 = a.match[n + t] - n;  // a-arc top to top
            total += a.len[n + t];
            iface_used[t2] = 1;
            int32_t j = b.match[inv(t2)];     // b-arc bottom to bottom
            total += b.len[inv(t2)];
            t = fwd(j);
        } while (t != t0);
        out.closed.record(total);  // zero-length identity artifacts are dropped
    }

    if (a.moves && b.moves) {
        auto merged = std::make_shared<std::vector<Move>>(*a.moves);
        merged->reserve(merged->size() + b.moves->size());
        for (const Move& m : *b.moves)
            merged->push_back({spec.translate_bond(m.bond, dx, dy), m.kind});
        out.moves = std::move(merged);
    }
    return out;
}

std::vector<std::pair<int32_t, int32_t>> dimer_covering(const LatticeSpec& spec) {
    std::vector<std::pair<int8_t, int8_t>> per_cell;
    switch (spec.geometry()) {
        case Geometry::Honeycomb:
        case Geometry::KekuleHoneycomb:
        case Geometry::HoneycombNNN:
            per_cell = {{0, 1}};
            break;
        case Geometry::YaoKivelson:
            per_cell = {{0, 3}, {1, 2}, {4, 5}};
            break;
        case Geometry::CardyL3D:
            per_cell = {{0, 1}, {2, 3}};
            break;
    }
    std::vector<std::pair<int32_t, int32_t>> pairs;
    const int32_t subs = spec.subs_per_cell();
    const int32_t cells = spec.lx() * spec.ly();
    pairs.reserve(static_cast<std::size_t>(cells) * per_cell.size());
    for (int32_t c = 0; c < cells; ++c)
        for (auto [sa, sb] : per_cell)
            pairs.emplace_back(c * subs + sa, c * subs + sb);
    return pairs;
}

CloseResult close_boundary(const CircuitBlock& block, ClosurePolicy policy) {
    const int32_t n = block.n();
    PairingTable pt(2 * n);
    for (int32_t i = 0; i < 2 * n; ++i) {
        int32_t p = block.match[i];
        if (p > i) pt.pair(i, p, block.len[i]);
    }

    switch (policy) {
        case ClosurePolicy::PureBottom:
            for (auto [a, b] : dimer_covering(*block.spec)) pt.glue(a, b);
            break;
        case ClosurePolicy::PureBoth:
            for (auto [a, b] : dimer_covering(*block.spec)) {
                pt.glue(a, b);
                pt.glue(n + a, n + b);
            }
            break;
        case ClosurePolicy::MixedBottom:
            break;  // bottom stays open
        case ClosurePolicy::PeriodicTime:
            for (int32_t i = 0; i < n; ++i) pt.glue(i, n + i);
            break;
    }

    CloseResult res;
    res.surface.spec = block.spec;
    res.hist = block.closed;
    res.hist.merge(pt.closed());
    res.n_zero_loops = pt.n_zero_loops();

    for (int32_t i = 0; i < 2 * n; ++i) {
        int32_t p = pt.partner(i);
        if (p == PairingTable::kDead || p < i) continue;
        bool i_top = i >= n;
        bool p_top = p >= n;
        if (i_top && p_top) {
            res.surface.pairs.push_back({i - n, p - n, pt.arc_length(i)});
        } else if (i_top != p_top) {
            ++res.spanning;
            res.spanning_length += pt.arc_length(i);
        } else {
            // both ends on the mixed bottom boundary
            res.open_hist.record(pt.arc_length(i));
        }
    }
    return res;
}

void apply_block(PairingTable& state, const CircuitBlock& block, int32_t dx, int32_t dy) {
    const LatticeSpec& spec = *block.spec;
    const int32_t n = block.n();
    auto inv = [&](int32_t t) { return spec.translate_site(t, -dx, -dy); };
    auto fwd = [&](int32_t j) { return spec.translate_site(j, dx, dy); };

    int32_t base = state.add_nodes(2 * n);
    for (int32_t i = 0; i < 2 * n; ++i) {
        int32_t p = block.match[i];
        if (p > i) state.pair(base + i, base + p, block.len[i]);
    }
    state.closed_.merge(block.closed);
    state.n_measurements_ += block.n_measurements;

    // block bottom j sits at lattice site fwd(j) of the current frontier
    for (int32_t j = 0; j < n; ++j) state.glue(n + fwd(j), base + j);

    // relabel the new top surface (scratch nodes) back into frontier slots
    for (int32_t i = 0; i < n; ++i) {
        int32_t s = base + n + inv(i);
        int32_t p = state.partner_[s];
        int64_t length = state.len_[s];
        state.partner_[s] = PairingTable::kDead;
        state.len_[s] = 0;
        if (p == PairingTable::kDead) continue;  // already relinked from its partner
        if (p == PairingTable::kOpen) {
            state.partner_[n + i] = PairingTable::kOpen;
            state.len_[n + i] = length;
        } else if (p >= base + n) {
            // partner is another new-surface node; map both at once
            int32_t other = fwd(p - base - n);
            state.partner_[p] = PairingTable::kDead;
            state.len_[p] = 0;
            state.pair(n + i, n + other, length);
        } else {
            state.pair(n + i, p, length);
        }
    }
}

}  // namespace majoloop
