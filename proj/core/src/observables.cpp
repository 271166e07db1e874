#include "majoloop/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "majoloop/errors.hpp"

namespace majoloop {

namespace {

int32_t axis_coord(const LatticeSpec& spec, int32_t site, Axis axis) {
    const Site& s = spec.sites()[site];
    return axis == Axis::X ? s.col : s.row;
}

}  // namespace

int32_t axis_period(const LatticeSpec& spec, Axis axis) {
    return axis == Axis::X ? spec.n_cols() : spec.n_rows();
}

int32_t surface_length(const LatticeSpec& spec, int32_t site_a, int32_t site_b, Axis axis) {
    int32_t period = axis_period(spec, axis);
    int32_t d = std::abs(axis_coord(spec, site_a, axis) - axis_coord(spec, site_b, axis));
    return std::min(d, period - d);
}

std::vector<double> surface_distribution(const SurfaceRecord& rec, Axis axis) {
    if (rec.pairs.empty()) return {};
    const LatticeSpec& spec = *rec.spec;
    std::vector<double> dist(axis_period(spec, axis) / 2 + 1, 0.0);
    for (const SurfacePair& p : rec.pairs)
        dist[surface_length(spec, p.a, p.b, axis)] += 1.0;
    double norm = static_cast<double>(rec.pairs.size());
    for (double& v : dist) v /= norm;
    return dist;
}

double entanglement_cylinder(const SurfaceRecord& rec, Axis axis, int32_t ell) {
    const LatticeSpec& spec = *rec.spec;
    int32_t period = axis_period(spec, axis);
    if (ell < 0 || ell > period)
        throw ArgumentError("cylinder length outside [0, period]");
    int64_t crossing = 0;
    for (const SurfacePair& p : rec.pairs) {
        bool a_in = axis_coord(spec, p.a, axis) < ell;
        bool b_in = axis_coord(spec, p.b, axis) < ell;
        crossing += (a_in != b_in) ? 1 : 0;
    }
    return 0.5 * static_cast<double>(crossing);
}

std::vector<double> entanglement_profile(const SurfaceRecord& rec, Axis axis) {
    const LatticeSpec& spec = *rec.spec;
    const int32_t period = axis_period(spec, axis);
    std::vector<double> profile(period + 1, 0.0);
    for (const SurfacePair& p : rec.pairs) {
        int32_t s = surface_length(spec, p.a, p.b, axis);
        for (int32_t ell = 1; ell < period; ++ell) {
            // anchors with exactly one endpoint inside a window of length ell
            int32_t one_in = 2 * std::min({ell, s, period - s, period - ell});
            profile[ell] += static_cast<double>(one_in);
        }
    }
    for (double& v : profile) v *= 0.5 / static_cast<double>(period);
    return profile;
}

double entropy_of(const SurfaceRecord& rec, const std::vector<int32_t>& sites) {
    std::unordered_set<int32_t> in(sites.begin(), sites.end());
    int64_t crossing = 0;
    for (const SurfacePair& p : rec.pairs)
        crossing += (in.count(p.a) != in.count(p.b)) ? 1 : 0;
    return 0.5 * static_cast<double>(crossing);
}

int64_t mutual_information(const SurfaceRecord& rec, const std::vector<int32_t>& a,
                           const std::vector<int32_t>& b) {
    std::unordered_set<int32_t> in_a(a.begin(), a.end());
    for (int32_t s : b)
        if (in_a.count(s)) throw ArgumentError("mutual_information: regions overlap");
    std::unordered_set<int32_t> in_b(b.begin(), b.end());
    int64_t count = 0;
    for (const SurfacePair& p : rec.pairs) {
        bool ab = in_a.count(p.a) && in_b.count(p.b);
        bool ba = in_b.count(p.a) && in_a.count(p.b);
        count += (ab || ba) ? 1 : 0;
    }
    return count;
}

double tripartite_information(const SurfaceRecord& rec, const std::vector<int32_t>& a,
                              const std::vector<int32_t>& b,
                              const std::vector<int32_t>& c) {
    auto join = [](const std::vector<int32_t>& u, const std::vector<int32_t>& v) {
        std::vector<int32_t> out = u;
        out.insert(out.end(), v.begin(), v.end());
        return out;
    };
    return entropy_of(rec, a) + entropy_of(rec, b) + entropy_of(rec, c) -
           entropy_of(rec, join(a, b)) - entropy_of(rec, join(a, c)) -
           entropy_of(rec, join(b, c)) + entropy_of(rec, join(join(a, b), c));
}

SpanningStats spanning_stats(const CloseResult& closed, ClosurePolicy policy) {
    if (policy != ClosurePolicy::MixedBottom)
        throw ArgumentError("spanning statistics need a mixed-bottom closure");
    return {closed.spanning, 0.5 * static_cast<double>(closed.spanning),
            closed.spanning_length};
}

double physical_displacement(const LatticeSpec& spec, int32_t site_a, int32_t site_b) {
    const Site& a = spec.sites()[site_a];
    const Site& b = spec.sites()[site_b];
    // periodicity vectors in the physical embedding
    double a1x, a1y, a2x, a2y;
    if (spec.subs_per_cell() == 2) {
        a1x = 1.7320508075688772;
        a1y = 0.0;
        a2x = 0.5 * 1.7320508075688772;
        a2y = 1.5;
    } else {
        a1x = static_cast<double>(spec.n_cols()) / spec.lx();
        a1y = 0.0;
        a2x = 0.0;
        a2y = static_cast<double>(spec.n_rows()) / spec.ly();
    }
    double t1x = spec.lx() * a1x, t1y = spec.lx() * a1y;
    double t2x = spec.ly() * a2x, t2y = spec.ly() * a2y;
    double dx = a.px - b.px, dy = a.py - b.py;
    double best = std::numeric_limits<double>::max();
    for (int i = -1; i <= 1; ++i) {
        for (int j = -1; j <= 1; ++j) {
            double ux = dx + i * t1x + j * t2x;
            double uy = dy + i * t1y + j * t2y;
            best = std::min(best, ux * ux + uy * uy);
        }
    }
    return std::sqrt(best);
}

void RadialHistogram::add(double r, double weight) {
    std::size_t bin = static_cast<std::size_t>(r);
    if (bin >= counts.size()) counts.resize(bin + 1, 0.0);
    counts[bin] += weight;
    total += weight;
}

void RadialHistogram::add_record(const SurfaceRecord& rec) {
    for (const SurfacePair& p : rec.pairs)
        add(physical_displacement(*rec.spec, p.a, p.b));
}

std::vector<double> RadialHistogram::density() const {
    std::vector<double> d(counts.size(), 0.0);
    if (total <= 0.0) return d;
    for (std::size_t i = 0; i < counts.size(); ++i) d[i] = counts[i] / total;
    return d;
}

DiffusionFit fit_diffusion(const RadialHistogram& hist, double rmin, double rmax) {
    std::vector<double> dens = hist.density();
    // P(r) r^2 = sqrt(2 D): weighted mean, Poisson-style weights
    double num = 0.0, den = 0.0;
    std::vector<std::pair<double, double>> used;  // (amplitude estimate, weight)
    for (std::size_t i = 0; i < dens.size(); ++i) {
        double r = static_cast<double>(i) + 0.5;
        if (r < rmin || r > rmax || hist.counts[i] <= 0.0) continue;
        double amp = dens[i] * r * r;
        double sigma = amp / std::sqrt(hist.counts[i]);
        double w = 1.0 / (sigma * sigma);
        num += amp * w;
        den += w;
        used.push_back({amp, w});
    }
    DiffusionFit fit;
    if (used.size() < 3 || den <= 0.0) return fit;
    double amp = num / den;
    double chi2 = 0.0;
    for (auto [a, w] : used) chi2 += (a - amp) * (a - amp) * w;
    fit.d = 0.5 * amp * amp;
    fit.chi2r = chi2 / static_cast<double>(used.size() - 1);
    fit.ok = fit.chi2r < 10.0;
    return fit;
}

bool all_probes_connected(const PairingTable& state,
                          const std::vector<std::pair<int32_t, int32_t>>& probes) {
    if (probes.size() < 2) throw ArgumentError("need at least two probes");
    // union-find over probes, joined by arcs between their nodes
    std::vector<std::size_t> root(probes.size());
    for (std::size_t i = 0; i < root.size(); ++i) root[i] = i;
    auto find = [&](std::size_t v) {
        while (root[v] != v) v = root[v] = root[root[v]];
        return v;
    };
    std::unordered_map<int32_t, std::size_t> owner;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        owner[probes[i].first] = i;
        owner[probes[i].second] = i;
    }
    for (std::size_t i = 0; i < probes.size(); ++i) {
        for (int32_t node : {probes[i].first, probes[i].second}) {
            int32_t p = state.partner(node);
            auto it = (p >= 0) ? owner.find(p) : owner.end();
            if (it != owner.end()) root[find(i)] = find(it->second);
        }
    }
    std::size_t r0 = find(0);
    for (std::size_t i = 1; i < probes.size(); ++i)
        if (find(i) != r0) return false;
    return true;
}

int64_t probe_i2(const PairingTable& state, std::pair<int32_t, int32_t> a,
                 std::pair<int32_t, int32_t> b) {
    int64_t count = 0;
    for (int32_t node : {a.first, a.second}) {
        int32_t p = state.partner(node);
        if (p == b.first || p == b.second) ++count;
    }
    return count;
}

}  // namespace majoloop
