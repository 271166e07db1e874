#pragma once

#include <vector>

#include "majoloop/block.hpp"
#include "majoloop/lattice.hpp"

namespace majoloop::oracle {

// Sequential reference evolution: applies the recorded moves one at a time
// to an identity pairing (no transfer-matrix composition), then closes.
// Ground truth for any block-composed run sharing the move sequence.
CloseResult replay(const LatticeSpec& spec, const std::vector<Move>& moves,
                   ClosurePolicy policy);

struct Enumeration {
    double expected_spanning = 0.0;
    double expected_entropy = 0.0;  // bits, spanning / 2
    double total_probability = 0.0;
    int64_t n_sequences = 0;
};

// Exhaustive expansion over all bond-choice sequences with their product
// probabilities. Instance must satisfy n_bonds^(n_draws) <= 2^21.
Enumeration enumerate_small(const LatticeSpec& spec, int depth, ClosurePolicy policy);

// Truncated q-series with explicit term counts, for cross-checking the
// theory module's special functions.
double qseries_theta3(double im_arg, int terms);
double qseries_eta(double im_arg, int terms);
double lifshitz_j_series(double u, double lambda, int terms);

}  // namespace majoloop::oracle
