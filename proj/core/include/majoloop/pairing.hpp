#pragma once

#include <cstdint>
#include <vector>

#include "majoloop/errors.hpp"
#include "majoloop/histogram.hpp"

namespace majoloop {

struct CircuitBlock;

// Majorana pairing state: an involutive partial matching over node indices
// with per-arc path lengths and a histogram of closed-loop lengths.
//
// Lengths count parity-check links. A measurement adds two links (the cap
// joining the prior partners and the fresh pair), so after M measurements
//   sum of arc lengths + closed.total_length + absorbed.total_length == 2 M.
//
// Nodes can be OPEN (maximally mixed / unpurified); an OPEN node still
// carries the dangling length of the world-line segment ending there.
class PairingTable {
  public:
    static constexpr int32_t kOpen = -1;
    static constexpr int32_t kDead = -2;  // removed by a boundary gluing

    explicit PairingTable(std::size_t n_nodes)
        : partner_(n_nodes, kOpen), len_(n_nodes, 0) {}

    std::size_t size() const { return partner_.size(); }
    int32_t partner(int32_t node) const { return partner_[node]; }
    int64_t arc_length(int32_t node) const { return len_[node]; }
    bool is_open(int32_t node) const { return partner_[node] == kOpen; }
    bool is_dead(int32_t node) const { return partner_[node] == kDead; }

    const LoopHistogram& closed() const { return closed_; }
    LoopHistogram& closed() { return closed_; }
    // world-line segments with both ends absorbed into a mixed boundary
    const LoopHistogram& absorbed() const { return absorbed_; }
    int64_t n_measurements() const { return n_measurements_; }

    // Append n fresh OPEN nodes; returns the index of the first.
    int32_t add_nodes(std::size_t n) {
        int32_t first = static_cast<int32_t>(partner_.size());
        partner_.resize(partner_.size() + n, kOpen);
        len_.resize(len_.size() + n, 0);
        return first;
    }

    // Install an arc directly (initial-state pairing, no links added).
    void pair(int32_t a, int32_t b, int64_t length = 0) {
        partner_[a] = b;
        partner_[b] = a;
        len_[a] = len_[b] = length;
    }

    // Projective parity measurement on (l, m); O(1) loop surgery.
    void measure(int32_t l, int32_t m);

    // World-line crossing on (l, m): exchanges the strands, no links added.
    void braid(int32_t l, int32_t m);

    // Identify nodes a and b (boundary closure), concatenating their arcs
    // without adding a link. Closes a loop if a and b were mutually paired.
    // Both nodes become dead.
    void glue(int32_t a, int32_t b);

    // Terminate the world line at `node` on an absorbing (mixed) boundary.
    void absorb(int32_t node);

    int64_t n_zero_loops() const { return n_zero_loops_; }

    int64_t total_arc_length() const;
    // Throws RuntimeFailure if the involution or length symmetry is violated.
    void audit() const;

  private:
    friend void apply_block(PairingTable& state, const CircuitBlock& block,
                            int32_t dx, int32_t dy);

    std::vector<int32_t> partner_;
    std::vector<int64_t> len_;
    LoopHistogram closed_;
    LoopHistogram absorbed_;
    int64_t n_measurements_ = 0;
    int64_t n_zero_loops_ = 0;  // zero-length trivial closures, never binned
};

}  // namespace majoloop
