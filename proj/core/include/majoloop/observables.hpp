#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "majoloop/block.hpp"
#include "majoloop/lattice.hpp"
#include "majoloop/pairing.hpp"

namespace majoloop {

enum class Axis { X, Y };

// Grid period of the chosen axis (number of columns or rows).
int32_t axis_period(const LatticeSpec& spec, Axis axis);

// Minimal-image surface length of an arc along the axis, in grid units.
int32_t surface_length(const LatticeSpec& spec, int32_t site_a, int32_t site_b, Axis axis);

// Normalized distribution of minimal-image surface lengths over the arcs of
// a record; index ell runs 0..period/2. Empty record gives an empty vector.
std::vector<double> surface_distribution(const SurfaceRecord& rec, Axis axis);

// Exact per-sample entanglement of the cylinder [0, ell) along the axis,
// in bits (half a bit per crossing Majorana arc).
double entanglement_cylinder(const SurfaceRecord& rec, Axis axis, int32_t ell);

// Cylinder entanglement averaged over all cut anchors, per subsystem size
// ell = 0..period. O(arcs * period).
std::vector<double> entanglement_profile(const SurfaceRecord& rec, Axis axis);

// Entropy of an arbitrary site set, in bits.
double entropy_of(const SurfaceRecord& rec, const std::vector<int32_t>& sites);

// I2(A, B): number of arcs joining A and B. Throws on overlapping sets.
int64_t mutual_information(const SurfaceRecord& rec, const std::vector<int32_t>& a,
                           const std::vector<int32_t>& b);

// I3(A, B, C) from entropies; identically zero for arc counting.
double tripartite_information(const SurfaceRecord& rec, const std::vector<int32_t>& a,
                              const std::vector<int32_t>& b,
                              const std::vector<int32_t>& c);

struct SpanningStats {
    int64_t n_s;        // top-bottom arcs
    double residual_s;  // n_s / 2 bits
    int64_t m;          // total bulk length of spanning arcs
};

// Throws unless the closure was MixedBottom.
SpanningStats spanning_stats(const CloseResult& closed, ClosurePolicy policy);

// Minimal-image physical displacement length of an arc.
double physical_displacement(const LatticeSpec& spec, int32_t site_a, int32_t site_b);

// Accumulates arc displacements into unit-width radial bins [r, r+1).
struct RadialHistogram {
    std::vector<double> counts;
    double total = 0.0;

    void add(double r, double weight = 1.0);
    void add_record(const SurfaceRecord& rec);
    // probability density at r = bin + 0.5 (normalized over all arcs)
    std::vector<double> density() const;
};

struct DiffusionFit {
    double d = 0.0;
    double chi2r = 0.0;
    bool ok = false;
};

// Fits P(r) = sqrt(2 D) / r^2 over [rmin, rmax]; flags poor fits.
DiffusionFit fit_diffusion(const RadialHistogram& hist, double rmin, double rmax);

// Probe connectivity for Poisson-Dirichlet statistics: true iff all probe
// pairs lie on one connected arc structure after full closure.
bool all_probes_connected(const PairingTable& state,
                          const std::vector<std::pair<int32_t, int32_t>>& probes);

// I2 between the node sets of two probes; watermelon G2 sample = I2 / 2.
int64_t probe_i2(const PairingTable& state, std::pair<int32_t, int32_t> a,
                 std::pair<int32_t, int32_t> b);

}  // namespace majoloop
