#include "majoloop/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "majoloop/errors.hpp"
#include "majoloop/oracle.hpp"
#include "majoloop/rng.hpp"

namespace majoloop {

namespace {

std::string fmt17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

int log2_exact(int64_t v) {
    int k = 0;
    while ((int64_t{1} << k) < v) ++k;
    return ((int64_t{1} << k) == v) ? k : -1;
}

struct ScalarAccum {
    double sum = 0.0, sumsq = 0.0;
    int64_t n = 0;
    void add(double v) {
        sum += v;
        sumsq += v * v;
        ++n;
    }
    void merge(const ScalarAccum& o) {
        sum += o.sum;
        sumsq += o.sumsq;
        n += o.n;
    }
    double mean() const { return n ? sum / n : 0.0; }
    double std_error() const {
        if (n < 2) return 0.0;
        double m = mean();
        double var = std::max(0.0, (sumsq - n * m * m) / (n - 1));
        return std::sqrt(var / n);
    }
};

void add_vec(std::vector<double>& a, const std::vector<double>& b) {
    if (b.size() > a.size()) a.resize(b.size(), 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
}

struct Accum {
    std::map<std::string, ScalarAccum> scalars;
    LoopHistogram closed, open;
    std::vector<double> surface_x, surface_y, profile;
    RadialHistogram radial;
    int64_t meas = 0;
    int64_t n_profiles = 0;

    void merge(const Accum& o) {
        for (const auto& [name, acc] : o.scalars) scalars[name].merge(acc);
        closed.merge(o.closed);
        open.merge(o.open);
        add_vec(surface_x, o.surface_x);
        add_vec(surface_y, o.surface_y);
        add_vec(profile, o.profile);
        if (o.radial.counts.size() > radial.counts.size())
            radial.counts.resize(o.radial.counts.size(), 0.0);
        for (std::size_t i = 0; i < o.radial.counts.size(); ++i)
            radial.counts[i] += o.radial.counts[i];
        radial.total += o.radial.total;
        meas += o.meas;
        n_profiles += o.n_profiles;
    }
};

bool wants(const CampaignConfig& cfg, const std::string& name) {
    return std::find(cfg.observables.begin(), cfg.observables.end(), name) !=
           cfg.observables.end();
}

int max_probe_m(const CampaignConfig& cfg) {
    int m = 0;
    for (int k : {2, 3, 4})
        if (wants(cfg, "pd" + std::to_string(k))) m = k;
    return m;
}

std::vector<int32_t> probe_sites(const LatticeSpec& spec, int m) {
    // corners of the half-period grid; pairwise separations ~ L/2
    const std::pair<int32_t, int32_t> at[4] = {
        {0, 0},
        {spec.lx() / 2, spec.ly() / 2},
        {spec.lx() / 2, 0},
        {0, spec.ly() / 2},
    };
    std::vector<int32_t> sites;
    for (int j = 0; j < m; ++j)
        sites.push_back((at[j].second * spec.lx() + at[j].first) * spec.subs_per_cell());
    return sites;
}

struct PoolContext {
    const CampaignConfig* cfg;
    const LatticeSpec* spec;
    std::vector<CircuitBlock> pool;
    uint64_t pool_id;
    int rounds;  // log2(depth)
};

CircuitBlock draw_sample_block(const PoolContext& ctx, Rng& rng) {
    const auto& pool = ctx.pool;
    uint64_t a = rng.next_below(pool.size());
    if (ctx.rounds == 0) return pool[a];
    uint64_t b = rng.next_below(pool.size());
    int32_t dx = static_cast<int32_t>(rng.next_below(ctx.spec->lx()));
    int32_t dy = static_cast<int32_t>(rng.next_below(ctx.spec->ly()));
    return compose(pool[a], pool[b], dx, dy);
}

void eval_sample(const PoolContext& ctx, int64_t s, Accum& acc) {
    const CampaignConfig& cfg = *ctx.cfg;
    Rng rng = Rng::keyed({cfg.seed, ctx.pool_id,
                          static_cast<uint64_t>(ctx.rounds), static_cast<uint64_t>(s)});
    CircuitBlock blk = draw_sample_block(ctx, rng);
    CloseResult res = cfg.oracle_mode
                          ? oracle::replay(*ctx.spec, *blk.moves, cfg.closure)
                          : close_boundary(blk, cfg.closure);

    if (wants(cfg, "spanning"))
        acc.scalars["spanning"].add(static_cast<double>(res.spanning));
    if (wants(cfg, "spanning-length"))
        acc.scalars["spanning-length"].add(static_cast<double>(res.spanning_length));
    // fraction of links sitting in loops that closed inside the bulk,
    // before any boundary closure
    if (wants(cfg, "occupied-fraction") && blk.n_measurements > 0)
        acc.scalars["occupied-fraction"].add(
            blk.closed.total_length() / (2.0 * static_cast<double>(blk.n_measurements)));
    if (wants(cfg, "surface")) {
        for (const SurfacePair& p : res.surface.pairs) {
            std::size_t sx = surface_length(*ctx.spec, p.a, p.b, Axis::X);
            std::size_t sy = surface_length(*ctx.spec, p.a, p.b, Axis::Y);
            if (sx >= acc.surface_x.size()) acc.surface_x.resize(sx + 1, 0.0);
            if (sy >= acc.surface_y.size()) acc.surface_y.resize(sy + 1, 0.0);
            acc.surface_x[sx] += 1.0;
            acc.surface_y[sy] += 1.0;
        }
        acc.radial.add_record(res.surface);
    }
    if (wants(cfg, "entanglement")) {
        add_vec(acc.profile, entanglement_profile(res.surface, Axis::X));
        ++acc.n_profiles;
    }
    acc.closed.merge(res.hist);
    acc.open.merge(res.open_hist);
    acc.meas += blk.n_measurements;
}

void eval_pd_sample(const PoolContext& ctx, int m, int64_t s, Accum& acc) {
    const CampaignConfig& cfg = *ctx.cfg;
    const LatticeSpec& spec = *ctx.spec;
    const int32_t n = spec.n_sites();
    Rng rng = Rng::keyed({cfg.seed, ctx.pool_id, 1000 + static_cast<uint64_t>(m),
                          static_cast<uint64_t>(s)});
    uint64_t a = rng.next_below(ctx.pool.size());
    uint64_t b = rng.next_below(ctx.pool.size());
    int32_t dx1 = static_cast<int32_t>(rng.next_below(spec.lx()));
    int32_t dy1 = static_cast<int32_t>(rng.next_below(spec.ly()));
    int32_t dx2 = static_cast<int32_t>(rng.next_below(spec.lx()));
    int32_t dy2 = static_cast<int32_t>(rng.next_below(spec.ly()));

    PairingTable state(2 * n);
    for (int32_t i = 0; i < n; ++i) state.pair(i, n + i, 0);
    apply_block(state, ctx.pool[a], dx1, dy1);
    std::vector<std::pair<int32_t, int32_t>> probes;
    for (int32_t site : probe_sites(spec, m)) {
        int32_t anc = state.add_nodes(2);
        state.pair(anc, anc + 1, 0);
        state.measure(anc + 1, n + site);
        probes.push_back({anc, anc + 1});
    }
    apply_block(state, ctx.pool[b], dx2, dy2);
    for (int32_t i = 0; i < n; ++i) state.glue(i, n + i);
    acc.scalars["pd" + std::to_string(m)].add(
        all_probes_connected(state, probes) ? 1.0 : 0.0);
}

std::vector<CircuitBlock> build_pool(const CampaignConfig& cfg, const LatticeSpec& spec,
                                     uint64_t pool_id, int rounds) {
    std::vector<CircuitBlock> pool;
    pool.reserve(cfg.pool_size);
    for (int32_t i = 0; i < cfg.pool_size; ++i) {
        Rng rng = Rng::keyed({cfg.seed, pool_id, 0, static_cast<uint64_t>(i)});
        pool.push_back(make_layer(spec, rng, cfg.oracle_mode));
    }
    for (int r = 1; r < rounds; ++r) {
        std::vector<CircuitBlock> next;
        next.reserve(pool.size());
        for (int32_t i = 0; i < cfg.pool_size; ++i) {
            Rng rng = Rng::keyed({cfg.seed, pool_id, static_cast<uint64_t>(r),
                                  static_cast<uint64_t>(i)});
            uint64_t a = rng.next_below(pool.size());
            uint64_t b = rng.next_below(pool.size());
            int32_t dx = static_cast<int32_t>(rng.next_below(spec.lx()));
            int32_t dy = static_cast<int32_t>(rng.next_below(spec.ly()));
            next.push_back(compose(pool[a], pool[b], dx, dy));
        }
        pool = std::move(next);
    }
    return pool;
}

// chunked parallel map-reduce: chunk boundaries are independent of the
// thread count, and chunk accumulators merge in index order, so results
// are byte-identical for any number of workers
void run_chunks(int threads, int64_t n_chunks,
                const std::function<void(int64_t, Accum&)>& work,
                std::vector<Accum>& chunks) {
    chunks.assign(n_chunks, Accum{});
    std::atomic<int64_t> next{0};
    auto worker = [&] {
        while (true) {
            int64_t c = next.fetch_add(1);
            if (c >= n_chunks) break;
            work(c, chunks[c]);
        }
    };
    int nt = std::max(1, std::min<int>(threads, static_cast<int>(n_chunks)));
    if (nt == 1) {
        worker();
    } else {
        std::vector<std::thread> ts;
        for (int i = 0; i < nt; ++i) ts.emplace_back(worker);
        for (auto& t : ts) t.join();
    }
}

}  // namespace

void validate(const CampaignConfig& cfg) {
    if (cfg.lx < 2 || cfg.ly < 2) throw ConfigError("lattice dimensions must be >= 2");
    if (cfg.depth < 1 || log2_exact(cfg.depth) < 0)
        throw ConfigError("depth must be a power of 2");
    if (cfg.pool_size < 1) throw ConfigError("pool size must be >= 1");
    if (cfg.pools < 1) throw ConfigError("pool count must be >= 1");
    if (cfg.samples < 1) throw ConfigError("sample count must be >= 1");
    if (cfg.threads < 1) throw ConfigError("thread count must be >= 1");
    std::set<std::string> known{"spanning",          "spanning-length", "surface",
                                "entanglement",      "occupied-fraction", "pd2",
                                "pd3",               "pd4"};
    for (const auto& obs : cfg.observables)
        if (!known.count(obs)) throw ConfigError("unknown observable: " + obs);
    if ((wants(cfg, "spanning") || wants(cfg, "spanning-length")) &&
        cfg.closure != ClosurePolicy::MixedBottom)
        throw ConfigError("spanning observables need the mixed-bottom closure");
    if (wants(cfg, "occupied-fraction") && cfg.closure != ClosurePolicy::PureBoth &&
        cfg.closure != ClosurePolicy::PeriodicTime)
        throw ConfigError("occupied-fraction needs a fully closing boundary policy");
    if (max_probe_m(cfg) > 0) {
        if (cfg.closure != ClosurePolicy::PeriodicTime)
            throw ConfigError("pd observables need the periodic-time closure");
        if (cfg.depth < 2) throw ConfigError("pd observables need depth >= 2");
    }
    if (cfg.oracle_mode && max_probe_m(cfg) > 0)
        throw ConfigError("oracle mode does not cover probe campaigns");
}

std::string config_hash(const CampaignConfig& cfg) {
    std::ostringstream os;
    os << to_string(cfg.geometry) << '|' << cfg.lx << '|' << cfg.ly << '|';
    for (const auto& [c, w] : cfg.weights) os << to_string(c) << '=' << fmt17(w) << ',';
    os << '|' << cfg.depth << '|' << cfg.pool_size << '|' << cfg.pools << '|'
       << cfg.samples << '|' << to_string(cfg.closure) << '|' << cfg.seed << '|'
       << cfg.control << '|' << cfg.oracle_mode << '|';
    for (const auto& obs : cfg.observables) os << obs << ',';
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(os.str())));
    return buf;
}

CampaignResult run_campaign(const CampaignConfig& cfg) {
    validate(cfg);
    LatticeSpec spec = build_lattice(cfg.geometry, cfg.lx, cfg.ly);
    if (!cfg.weights.empty()) spec = set_weights(spec, cfg.weights);
    const int rounds = log2_exact(cfg.depth);
    const std::string hash = config_hash(cfg);
    const int pd_m = max_probe_m(cfg);

    CampaignResult result;
    Accum global;
    std::map<std::string, ScalarAccum> pool_means;  // pool-level nested variance

    for (int32_t p = 0; p < cfg.pools; ++p) {
        PoolContext ctx;
        ctx.cfg = &cfg;
        ctx.spec = &spec;
        ctx.pool_id = static_cast<uint64_t>(p);
        ctx.rounds = rounds;
        ctx.pool = build_pool(cfg, spec, ctx.pool_id, rounds);

        int64_t n_chunks = std::min<int64_t>(64, cfg.samples);
        std::vector<Accum> chunks;
        auto chunk_range = [&](int64_t c) {
            int64_t lo = cfg.samples * c / n_chunks;
            int64_t hi = cfg.samples * (c + 1) / n_chunks;
            return std::pair<int64_t, int64_t>{lo, hi};
        };
        run_chunks(cfg.threads, n_chunks,
                   [&](int64_t c, Accum& acc) {
                       auto [lo, hi] = chunk_range(c);
                       for (int64_t s = lo; s < hi; ++s) {
                           eval_sample(ctx, s, acc);
                           for (int m = 2; m <= pd_m; ++m)
                               if (wants(cfg, "pd" + std::to_string(m)))
                                   eval_pd_sample(ctx, m, s, acc);
                       }
                   },
                   chunks);
        Accum pool_acc;
        for (const Accum& c : chunks) pool_acc.merge(c);

        for (const auto& obs : cfg.observables) {
            auto it = pool_acc.scalars.find(obs);
            if (it == pool_acc.scalars.end()) continue;
            result.rows.push_back({hash, cfg.seed, p, obs, it->second.mean(),
                                   it->second.std_error(), it->second.n});
            pool_means[obs].add(it->second.mean());
        }
        global.merge(pool_acc);
    }

    // aggregate rows: each pool mean counts as one sample (nested variance)
    for (const auto& obs : cfg.observables) {
        auto pm = pool_means.find(obs);
        if (pm == pool_means.end()) continue;
        if (cfg.pools > 1) {
            result.rows.push_back({hash, cfg.seed, -1, obs, pm->second.mean(),
                                   pm->second.std_error(), pm->second.n});
        } else {
            const ScalarAccum& acc = global.scalars.at(obs);
            result.rows.push_back(
                {hash, cfg.seed, -1, obs, acc.mean(), acc.std_error(), acc.n});
        }
    }

    result.closed = global.closed;
    result.open_arcs = global.open;
    int64_t total_samples = cfg.samples * cfg.pools;
    result.surface_x = global.surface_x;
    result.surface_y = global.surface_y;
    for (double& v : result.surface_x) v /= static_cast<double>(total_samples);
    for (double& v : result.surface_y) v /= static_cast<double>(total_samples);
    result.profile = global.profile;
    if (global.n_profiles > 0)
        for (double& v : result.profile) v /= static_cast<double>(global.n_profiles);
    result.radial = global.radial;
    result.total_measurements = global.meas;
    if (global.meas > 0)
        result.occupied_fraction =
            global.closed.total_length() / (2.0 * static_cast<double>(global.meas));

    if (!cfg.out_dir.empty()) write_outputs(cfg, result);
    return result;
}

std::string csv_serialize(const CampaignConfig& cfg, const std::vector<ResultRow>& rows) {
    std::ostringstream os;
    os << "geometry,lx,ly,depth,pool_size,pools,samples,closure,control,seed,"
          "version,hash,pool,observable,value,std_error,n\n";
    for (const ResultRow& r : rows) {
        os << to_string(cfg.geometry) << ',' << cfg.lx << ',' << cfg.ly << ','
           << cfg.depth << ',' << cfg.pool_size << ',' << cfg.pools << ','
           << cfg.samples << ',' << to_string(cfg.closure) << ','
           << fmt17(cfg.control) << ',' << r.seed << ',' << kVersion << ','
           << r.hash << ',' << r.pool << ',' << r.observable << ','
           << fmt17(r.value) << ',' << fmt17(r.std_error) << ',' << r.n << '\n';
    }
    return os.str();
}

void write_outputs(const CampaignConfig& cfg, const CampaignResult& result) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw RuntimeFailure("cannot create output directory " + cfg.out_dir);

    auto dump = [&](const std::string& name, const std::string& text) {
        std::ofstream out(fs::path(cfg.out_dir) / name, std::ios::binary);
        out << text;
        if (!out) throw RuntimeFailure("failed writing " + name + " in " + cfg.out_dir);
    };

    dump("rows.csv", csv_serialize(cfg, result.rows));

    {
        std::ostringstream os;
        os << "bin,lower,upper,center,closed,open\n";
        std::size_t nb = std::max(result.closed.n_bins(), result.open_arcs.n_bins());
        for (std::size_t b = 0; b < nb; ++b) {
            os << b << ',' << fmt17(LoopHistogram::bin_lower(b)) << ','
               << fmt17(LoopHistogram::bin_upper(b)) << ','
               << fmt17(LoopHistogram::bin_center(b)) << ','
               << fmt17(result.closed.count(b)) << ','
               << fmt17(result.open_arcs.count(b)) << '\n';
        }
        dump("hist.csv", os.str());
    }
    if (!result.surface_x.empty() || !result.surface_y.empty()) {
        std::ostringstream os;
        os << "ell,count_x,count_y\n";
        std::size_t n = std::max(result.surface_x.size(), result.surface_y.size());
        for (std::size_t i = 0; i < n; ++i) {
            double cx = i < result.surface_x.size() ? result.surface_x[i] : 0.0;
            double cy = i < result.surface_y.size() ? result.surface_y[i] : 0.0;
            os << i << ',' << fmt17(cx) << ',' << fmt17(cy) << '\n';
        }
        dump("surface.csv", os.str());
    }
    if (!result.profile.empty()) {
        std::ostringstream os;
        os << "ell,entanglement\n";
        for (std::size_t i = 0; i < result.profile.size(); ++i)
            os << i << ',' << fmt17(result.profile[i]) << '\n';
        dump("profile.csv", os.str());
    }

    nlohmann::json meta;
    meta["geometry"] = to_string(cfg.geometry);
    meta["lx"] = cfg.lx;
    meta["ly"] = cfg.ly;
    nlohmann::json weights;
    for (const auto& [c, w] : cfg.weights) weights[to_string(c)] = w;
    meta["weights"] = weights;
    meta["depth"] = cfg.depth;
    meta["pool_size"] = cfg.pool_size;
    meta["pools"] = cfg.pools;
    meta["samples"] = cfg.samples;
    meta["closure"] = to_string(cfg.closure);
    meta["control"] = cfg.control;
    meta["observables"] = cfg.observables;
    meta["seed"] = cfg.seed;
    meta["oracle_mode"] = cfg.oracle_mode;
    meta["version"] = kVersion;
    meta["hash"] = config_hash(cfg);
    meta["total_measurements"] = result.total_measurements;
    meta["occupied_fraction"] = result.occupied_fraction;
    {
        auto now = std::chrono::system_clock::now();
        std::time_t t = std::chrono::system_clock::to_time_t(now);
        char buf[32];
        std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
        meta["timestamp"] = buf;
    }
    dump("sidecar.json", meta.dump(2) + "\n");
}

std::vector<CampaignResult> sweep(const CampaignConfig& tmpl,
                                  const std::vector<SweepCell>& cells) {
    namespace fs = std::filesystem;
    std::vector<CampaignResult> results;
    results.reserve(cells.size());
    for (const SweepCell& cell : cells) {
        if (cell.label.empty()) throw ConfigError("sweep cells need a stable label");
        CampaignConfig cfg = tmpl;
        if (!cell.weights.empty()) cfg.weights = cell.weights;
        if (cell.lx > 0) cfg.lx = cell.lx;
        if (cell.ly > 0) cfg.ly = cell.ly;
        if (cell.depth > 0) cfg.depth = cell.depth;
        cfg.control = cell.control;
        cfg.seed = fnv1a(std::to_string(tmpl.seed) + "/" + cell.label);
        if (!tmpl.out_dir.empty()) {
            cfg.out_dir = (fs::path(tmpl.out_dir) / cell.label).string();
            if (fs::exists(fs::path(cfg.out_dir) / "rows.csv")) {
                results.push_back(CampaignResult{});  // finished cell, skipped
                continue;
            }
        }
        results.push_back(run_campaign(cfg));
    }
    return results;
}

std::vector<CsvRow> read_rows_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw RuntimeFailure("cannot open " + path);
    std::vector<CsvRow> rows;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) f.push_back(tok);
        if (f.size() != 17) throw RuntimeFailure("malformed row in " + path);
        CsvRow r;
        r.lx = std::stoi(f[1]);
        r.ly = std::stoi(f[2]);
        r.depth = std::stoll(f[3]);
        r.control = std::stod(f[8]);
        r.pool = std::stoi(f[12]);
        r.observable = f[13];
        r.value = std::stod(f[14]);
        r.std_error = std::stod(f[15]);
        r.n = std::stoll(f[16]);
        rows.push_back(r);
    }
    return rows;
}

double watermelon_g2(const LatticeSpec& spec, int64_t t_pre, int64_t t_sep,
                     int64_t t_post, int32_t site_a, int32_t site_b,
                     int64_t samples, uint64_t seed) {
    if (t_pre < 0 || t_sep < 0 || t_post < 0)
        throw ArgumentError("watermelon_g2 needs nonnegative depths");
    const int32_t n = spec.n_sites();
    auto dimers = dimer_covering(spec);
    double sum = 0.0;
    for (int64_t s = 0; s < samples; ++s) {
        Rng rng = Rng::keyed({seed, 7777, static_cast<uint64_t>(s)});
        PairingTable state(2 * n);
        for (auto [a, b] : dimers) state.pair(n + a, n + b, 0);  // pure start
        auto evolve = [&](int64_t t) {
            for (int64_t step = 0; step < t; ++step)
                apply_block(state, make_layer(spec, rng), 0, 0);
        };
        evolve(t_pre);
        int32_t pa = state.add_nodes(2);
        state.pair(pa, pa + 1, 0);
        state.measure(pa + 1, n + site_a);
        evolve(t_sep);
        int32_t pb = state.add_nodes(2);
        state.pair(pb, pb + 1, 0);
        state.measure(pb + 1, n + site_b);
        evolve(t_post);
        for (auto [a, b] : dimers) state.glue(n + a, n + b);  // final projection
        sum += 0.5 * static_cast<double>(
                         probe_i2(state, {pa, pa + 1}, {pb, pb + 1}));
    }
    return sum / static_cast<double>(samples);
}

}  // namespace majoloop
