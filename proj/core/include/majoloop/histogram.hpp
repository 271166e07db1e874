#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace majoloop {

// Log-binned histogram of closed-loop lengths, base 10^(1/8). Zero-length
// loops (identity-glued artifacts) are never recorded.
class LoopHistogram {
  public:
    static constexpr int kBinsPerDecade = 8;

    void record(int64_t length, double weight = 1.0) {
        if (length <= 0) return;
        std::size_t bin = bin_index(length);
        if (bin >= counts_.size()) counts_.resize(bin + 1, 0.0);
        counts_[bin] += weight;
        total_loops_ += weight;
        total_length_ += weight * static_cast<double>(length);
    }

    void merge(const LoopHistogram& other) {
        if (other.counts_.size() > counts_.size()) counts_.resize(other.counts_.size(), 0.0);
        for (std::size_t i = 0; i < other.counts_.size(); ++i) counts_[i] += other.counts_[i];
        total_loops_ += other.total_loops_;
        total_length_ += other.total_length_;
    }

    static std::size_t bin_index(int64_t length) {
        // lengths 1..9 get unit bins, log bins beyond
        if (length < 10) return static_cast<std::size_t>(length - 1);
        double b = std::floor(std::log10(static_cast<double>(length)) * kBinsPerDecade);
        return static_cast<std::size_t>(b) + 1;  // length 10 lands after bin for 9
    }

    static double bin_lower(std::size_t bin) {
        if (bin < 9) return static_cast<double>(bin + 1);
        return std::pow(10.0, static_cast<double>(bin - 1) / kBinsPerDecade);
    }

    static double bin_upper(std::size_t bin) {
        if (bin < 9) return static_cast<double>(bin + 2);
        return std::pow(10.0, static_cast<double>(bin) / kBinsPerDecade);
    }

    static double bin_center(std::size_t bin) {
        return std::sqrt(bin_lower(bin) * bin_upper(bin));
    }

    std::size_t n_bins() const { return counts_.size(); }
    double count(std::size_t bin) const { return bin < counts_.size() ? counts_[bin] : 0.0; }
    const std::vector<double>& counts() const { return counts_; }
    double total_loops() const { return total_loops_; }
    double total_length() const { return total_length_; }

    bool operator==(const LoopHistogram& other) const {
        if (total_loops_ != other.total_loops_ || total_length_ != other.total_length_)
            return false;
        std::size_t n = std::max(counts_.size(), other.counts_.size());
        for (std::size_t i = 0; i < n; ++i)
            if (count(i) != other.count(i)) return false;
        return true;
    }

  private:
    std::vector<double> counts_;
    double total_loops_ = 0.0;
    double total_length_ = 0.0;
};

}  // namespace majoloop
