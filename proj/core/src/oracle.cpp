#include "majoloop/oracle.hpp"

#include <cmath>

#include "majoloop/errors.hpp"
#include "majoloop/pairing.hpp"

namespace majoloop::oracle {

CloseResult replay(const LatticeSpec& spec, const std::vector<Move>& moves,
                   ClosurePolicy policy) {
    const int32_t n = spec.n_sites();
    PairingTable pt(2 * n);
    for (int32_t i = 0; i < n; ++i) pt.pair(i, n + i, 0);
    for (const Move& m : moves) {
        const Bond& bond = spec.bonds()[m.bond];
        if (m.kind == MoveKind::Measure)
            pt.measure(n + bond.a, n + bond.b);
        else
            pt.braid(n + bond.a, n + bond.b);
    }
    CircuitBlock blk;
    blk.spec = &spec;
    blk.match.resize(2 * n);
    blk.len.resize(2 * n);
    for (int32_t i = 0; i < 2 * n; ++i) {
        blk.match[i] = pt.partner(i);
        blk.len[i] = pt.arc_length(i);
    }
    blk.closed = pt.closed();
    blk.n_measurements = pt.n_measurements();
    return close_boundary(blk, policy);
}

Enumeration enumerate_small(const LatticeSpec& spec, int depth, ClosurePolicy policy) {
    const int64_t n_bonds = static_cast<int64_t>(spec.bonds().size());
    const int64_t n_draws = static_cast<int64_t>(spec.n_sites()) * depth;
    double total_seq = std::pow(static_cast<double>(n_bonds), static_cast<double>(n_draws));
    if (spec.geometry() == Geometry::CardyL3D)
        throw ArgumentError("enumerate_small covers measurement-sampled geometries only");
    if (n_bonds > 6 || total_seq > (1 << 21))
        throw ArgumentError("instance too large for exhaustive enumeration");

    // per-draw probability of each bond: family weight split uniformly
    // over the family's bonds
    std::vector<double> prob(n_bonds);
    for (int64_t b = 0; b < n_bonds; ++b) {
        Color c = spec.bonds()[b].color;
        prob[b] = spec.weight(c) * spec.family_multiplicity(c) /
                  spec.sampling_total() /
                  static_cast<double>(spec.bonds_of_color(c).size());
    }

    Enumeration out;
    std::vector<Move> seq(n_draws, Move{0, MoveKind::Measure});
    std::vector<int32_t> choice(n_draws, 0);
    while (true) {
        double p = 1.0;
        for (int64_t d = 0; d < n_draws; ++d) {
            seq[d].bond = choice[d];
            p *= prob[choice[d]];
        }
        CloseResult res = replay(spec, seq, policy);
        out.expected_spanning += p * static_cast<double>(res.spanning);
        out.expected_entropy += p * 0.5 * static_cast<double>(res.spanning);
        out.total_probability += p;
        ++out.n_sequences;
        int64_t d = 0;
        while (d < n_draws && ++choice[d] == n_bonds) choice[d++] = 0;
        if (d == n_draws) break;
    }
    return out;
}

double qseries_theta3(double im_arg, int terms) {
    if (im_arg <= 0.0 || terms < 1) throw ArgumentError("qseries_theta3 domain");
    constexpr double kPi = 3.141592653589793238462643383279502884;
    double sum = 1.0;
    for (int n = 1; n <= terms; ++n)
        sum += 2.0 * std::exp(-kPi * im_arg * static_cast<double>(n) * n);
    return sum;
}

double qseries_eta(double im_arg, int terms) {
    if (im_arg <= 0.0 || terms < 1) throw ArgumentError("qseries_eta domain");
    constexpr double kPi = 3.141592653589793238462643383279502884;
    double prod = 1.0;
    for (int n = 1; n <= terms; ++n)
        prod *= 1.0 - std::exp(-2.0 * kPi * im_arg * n);
    return std::exp(-kPi * im_arg / 12.0) * prod;
}

double lifshitz_j_series(double u, double lambda, int terms) {
    if (!(u > 0.0 && u < 1.0)) throw ArgumentError("lifshitz_j_series domain");
    double num = qseries_theta3(lambda * u, terms) * qseries_theta3(lambda * (1.0 - u), terms);
    double den = qseries_eta(2.0 * u, terms) * qseries_eta(2.0 * (1.0 - u), terms);
    return std::log(num / den);
}

}  // namespace majoloop::oracle
