#include "majoloop/pairing.hpp"

#include <string>
#include <utility>

namespace majoloop {

void PairingTable::measure(int32_t l, int32_t m) {
    ++n_measurements_;
    if (partner_[l] == m) {
        // self-retracing measurement: closes the existing arc plus the cap
        closed_.record(len_[l] + 1);
        len_[l] = len_[m] = 1;
        return;
    }
    int32_t k = partner_[l];
    int32_t n = partner_[m];
    int64_t joined = len_[l] + len_[m] + 1;
    if (k != kOpen && n != kOpen) {
        partner_[k] = n;
        partner_[n] = k;
        len_[k] = len_[n] = joined;
    } else if (k != kOpen) {
        partner_[k] = kOpen;
        len_[k] = joined;
    } else if (n != kOpen) {
        partner_[n] = kOpen;
        len_[n] = joined;
    } else {
        // both strands ended on the mixed boundary; the cap fuses them into
        // a segment no longer attached to any live node
        absorbed_.record(joined);
    }
    partner_[l] = m;
    partner_[m] = l;
    len_[l] = len_[m] = 1;
}

void PairingTable::braid(int32_t l, int32_t m) {
    if (partner_[l] == m) return;  // an arc crossing itself stays an arc
    int32_t k = partner_[l];
    int32_t n = partner_[m];
    std::swap(len_[l], len_[m]);
    partner_[l] = n;
    partner_[m] = k;
    if (k != kOpen) partner_[k] = m;
    if (n != kOpen) partner_[n] = l;
}

void PairingTable::glue(int32_t a, int32_t b) {
    int32_t k = partner_[a];
    int32_t n = partner_[b];
    if (k == b) {
        int64_t total = len_[a];
        if (total == 0)
            ++n_zero_loops_;
        else
            closed_.record(total);
    } else {
        int64_t joined = len_[a] + len_[b];
        if (k != kOpen && k != kDead && n != kOpen && n != kDead) {
            partner_[k] = n;
            partner_[n] = k;
            len_[k] = len_[n] = joined;
        } else if (k != kOpen && k != kDead) {
            partner_[k] = kOpen;
            len_[k] = joined;
        } else if (n != kOpen && n != kDead) {
            partner_[n] = kOpen;
            len_[n] = joined;
        } else {
            absorbed_.record(joined);
        }
    }
    partner_[a] = kDead;
    partner_[b] = kDead;
    len_[a] = len_[b] = 0;
}

void PairingTable::absorb(int32_t node) {
    int32_t k = partner_[node];
    if (k == kOpen) {
        absorbed_.record(len_[node]);
    } else if (k != kDead) {
        partner_[k] = kOpen;
        // len_[k] already carries the arc length
    }
    partner_[node] = kDead;
    len_[node] = 0;
}

int64_t PairingTable::total_arc_length() const {
    int64_t total = 0;
    for (std::size_t i = 0; i < partner_.size(); ++i) {
        int32_t p = partner_[i];
        if (p == kDead) continue;
        if (p == kOpen) {
            total += len_[i];  // dangling strand, counted once
        } else if (static_cast<int32_t>(i) < p) {
            total += len_[i];
        }
    }
    return total;
}

void PairingTable::audit() const {
    for (std::size_t i = 0; i < partner_.size(); ++i) {
        int32_t p = partner_[i];
        if (p == kOpen || p == kDead) continue;
        if (p < 0 || p >= static_cast<int32_t>(partner_.size()) ||
            partner_[p] != static_cast<int32_t>(i))
            throw RuntimeFailure("pairing involution violated at node " +
                                 std::to_string(i));
        if (len_[p] != len_[i])
            throw RuntimeFailure("asymmetric arc length at node " +
                                 std::to_string(i));
        if (len_[i] < 0)
            throw RuntimeFailure("negative arc length at node " +
                                 std::to_string(i));
    }
}

}  // namespace majoloop
