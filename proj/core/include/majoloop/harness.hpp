#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "majoloop/block.hpp"
#include "majoloop/histogram.hpp"
#include "majoloop/lattice.hpp"
#include "majoloop/observables.hpp"

namespace majoloop {

inline constexpr const char* kVersion = "0.1.0";

struct CampaignConfig {
    Geometry geometry = Geometry::Honeycomb;
    int32_t lx = 8;
    int32_t ly = 8;
    std::map<Color, double> weights;  // empty: geometry defaults
    int64_t depth = 16;               // power of two
    int32_t pool_size = 20;
    int32_t pools = 1;
    int64_t samples = 100;
    ClosurePolicy closure = ClosurePolicy::MixedBottom;
    // scalar observables: spanning, spanning-length, occupied-fraction,
    // pd2, pd3, pd4; vector accumulators: surface, entanglement
    std::vector<std::string> observables{"spanning"};
    uint64_t seed = 1;
    std::string out_dir;  // empty: in-memory only
    int threads = 1;
    bool oracle_mode = false;  // sequential replay instead of composed blocks
    // scalar coordinate of the point along a sweep cut; carried into the
    // output schema so fits can ingest result tables directly
    double control = 0.0;
};

// Throws ConfigError on an invalid configuration.
void validate(const CampaignConfig& cfg);

// Stable hash of all physics-relevant fields, hex string.
std::string config_hash(const CampaignConfig& cfg);

struct ResultRow {
    std::string hash;
    uint64_t seed;
    int32_t pool;  // -1 marks the pool-aggregated row
    std::string observable;
    double value;
    double std_error;
    int64_t n;
};

struct CampaignResult {
    std::vector<ResultRow> rows;
    LoopHistogram closed;     // merged over all samples, closure included
    LoopHistogram open_arcs;  // mixed-boundary arc lengths
    std::vector<double> surface_x;  // mean arcs per surface length
    std::vector<double> surface_y;
    std::vector<double> profile;  // mean cut-averaged entanglement, axis X
    RadialHistogram radial;
    int64_t total_measurements = 0;
    double occupied_fraction = 0.0;
};

CampaignResult run_campaign(const CampaignConfig& cfg);

// Serialized result table (fixed header, 17 significant digits).
std::string csv_serialize(const CampaignConfig& cfg, const std::vector<ResultRow>& rows);

// Writes rows.csv, hist.csv, auxiliary tables, and the JSON sidecar into
// cfg.out_dir. Throws RuntimeFailure on I/O errors.
void write_outputs(const CampaignConfig& cfg, const CampaignResult& result);

struct SweepCell {
    std::map<Color, double> weights;
    int32_t lx = 0;  // 0 keeps the template value
    int32_t ly = 0;
    int64_t depth = 0;
    double control = 0.0;
    std::string label;  // stable key: sub-seed derivation and file naming
};

struct CsvRow {
    int32_t lx, ly;
    int64_t depth;
    double control;
    int32_t pool;
    std::string observable;
    double value, std_error;
    int64_t n;
};

// Reads back a rows.csv written by write_outputs.
std::vector<CsvRow> read_rows_csv(const std::string& path);

// Runs one campaign per cell with sub-seeds hashed from (master seed, label).
// Cells whose rows.csv already exists under out_dir are skipped.
std::vector<CampaignResult> sweep(const CampaignConfig& tmpl,
                                  const std::vector<SweepCell>& cells);

// Watermelon 2-leg correlator: ancilla pairs injected at two events
// separated by t_sep layers (site_b = site_a for the temporal mode); pure
// product state at both temporal boundaries. Returns the trajectory mean
// of I2(A, B) / 2.
double watermelon_g2(const LatticeSpec& spec, int64_t t_pre, int64_t t_sep,
                     int64_t t_post, int32_t site_a, int32_t site_b,
                     int64_t samples, uint64_t seed);

}  // namespace majoloop
