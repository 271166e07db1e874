#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "majoloop/histogram.hpp"
#include "majoloop/lattice.hpp"
#include "majoloop/pairing.hpp"
#include "majoloop/rng.hpp"

namespace majoloop {

enum class ClosurePolicy { PureBottom, PureBoth, MixedBottom, PeriodicTime };

ClosurePolicy closure_from_string(const std::string& name);
std::string to_string(ClosurePolicy p);

enum class MoveKind : uint8_t { Measure, Braid };

// One sampled circuit event, replayable by the sequential oracle.
struct Move {
    int32_t bond;
    MoveKind kind;
};

struct SeedRecord {
    uint64_t master = 0;
    uint64_t pool = 0;
    uint64_t round = 0;
    uint64_t draw = 0;
};

struct SurfacePair {
    int32_t a;
    int32_t b;
    int64_t bulk_length;
};

struct SurfaceRecord {
    const LatticeSpec* spec = nullptr;
    std::vector<SurfacePair> pairs;
};

// Transfer matrix of a depth-t circuit slab on the loop connectivity:
// a perfect matching over 2N boundary nodes (bottom i, top N+i) with
// per-arc bulk lengths plus the histogram of loops closed inside the slab.
// Immutable after construction; compose() allocates fresh blocks.
struct CircuitBlock {
    const LatticeSpec* spec = nullptr;
    int64_t depth = 0;
    std::vector<int32_t> match;  // size 2N
    std::vector<int64_t> len;
    LoopHistogram closed;
    int64_t n_measurements = 0;
    SeedRecord seed_record;
    // replay log; only populated when layers are built in recording mode
    std::shared_ptr<const std::vector<Move>> moves;

    int32_t n() const { return static_cast<int32_t>(match.size() / 2); }
};

CircuitBlock identity_block(const LatticeSpec& spec);

// Samples one layer of measurements (one brickwork period for CardyL3D)
// and folds it into a depth-1 block.
CircuitBlock make_layer(const LatticeSpec& spec, Rng& rng, bool record_moves = false);

// Stacks b (translated by dx, dy unit cells) on top of a. O(N).
CircuitBlock compose(const CircuitBlock& a, const CircuitBlock& b, int32_t dx, int32_t dy);

struct CloseResult {
    SurfaceRecord surface;       // arcs with both ends on the output surface
    LoopHistogram hist;          // closed loops, including closure-formed ones
    LoopHistogram open_hist;     // arcs with both ends on the mixed boundary
    int64_t spanning = 0;        // top-bottom arcs (MixedBottom only)
    int64_t spanning_length = 0;
    int64_t n_zero_loops = 0;    // length-0 closures, never binned
};

CloseResult close_boundary(const CircuitBlock& block, ClosurePolicy policy);

// Fixed local perfect matching used by the pure closures; site index pairs.
std::vector<std::pair<int32_t, int32_t>> dimer_covering(const LatticeSpec& spec);

// Splices a block (translated by dx, dy) onto an evolving trajectory whose
// frontier occupies state nodes N..2N-1 (node N+i holding site i); the
// frontier slots are reused for the new top surface. Extra nodes (ancillas,
// node ids >= 2N) are untouched. Closed and absorbed loops accumulate in the
// state's histograms.
void apply_block(PairingTable& state, const CircuitBlock& block, int32_t dx, int32_t dy);

}  // namespace majoloop
