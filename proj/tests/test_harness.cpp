#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "majoloop/harness.hpp"

using namespace majoloop;

namespace {

CampaignConfig small_config() {
    CampaignConfig cfg;
    cfg.geometry = Geometry::Honeycomb;
    cfg.lx = 8;
    cfg.ly = 4;
    cfg.depth = 4;
    cfg.pool_size = 4;
    cfg.samples = 40;
    cfg.seed = 17;
    cfg.closure = ClosurePolicy::MixedBottom;
    cfg.observables = {"spanning", "spanning-length"};
    return cfg;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("config validation") {
    CampaignConfig cfg = small_config();
    CHECK_NOTHROW(validate(cfg));

    CampaignConfig bad = cfg;
    bad.depth = 12;  // not a power of two
    CHECK_THROWS_AS(validate(bad), ConfigError);

    bad = cfg;
    bad.observables = {"volume"};
    CHECK_THROWS_AS(validate(bad), ConfigError);

    bad = cfg;
    bad.closure = ClosurePolicy::PureBoth;  // spanning needs an open bottom
    CHECK_THROWS_AS(validate(bad), ConfigError);

    bad = cfg;
    bad.observables = {"pd2"};
    CHECK_THROWS_AS(validate(bad), ConfigError);  // pd probes need periodic time
    bad.closure = ClosurePolicy::PeriodicTime;
    CHECK_NOTHROW(validate(bad));

    bad = cfg;
    bad.pool_size = 0;
    CHECK_THROWS_AS(validate(bad), ConfigError);
}

TEST_CASE("config hash tracks physics, not execution") {
    CampaignConfig cfg = small_config();
    std::string h = config_hash(cfg);
    CHECK(!h.empty());

    CampaignConfig same = cfg;
    same.threads = 8;
    same.out_dir = "/tmp/elsewhere";
    CHECK(config_hash(same) == h);

    CampaignConfig other = cfg;
    other.ly = 8;
    CHECK(config_hash(other) != h);
    other = cfg;
    other.seed = 18;
    CHECK(config_hash(other) != h);
    other = cfg;
    other.weights = {{Color::X, 0.5}, {Color::Y, 0.25}, {Color::Z, 0.25}};
    CHECK(config_hash(other) != h);
}

TEST_CASE("campaigns are reproducible and thread invariant") {
    CampaignConfig cfg = small_config();
    CampaignResult a = run_campaign(cfg);
    CampaignResult b = run_campaign(cfg);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].observable == b.rows[i].observable);
        CHECK(a.rows[i].value == b.rows[i].value);  // bitwise
        CHECK(a.rows[i].std_error == b.rows[i].std_error);
    }

    CampaignConfig mt = cfg;
    mt.threads = 4;
    CampaignResult c = run_campaign(mt);
    CHECK(csv_serialize(cfg, a.rows) == csv_serialize(mt, c.rows));
    CHECK(a.closed == c.closed);
}

TEST_CASE("aggregate rows summarize pools") {
    CampaignConfig cfg = small_config();
    cfg.pools = 3;
    cfg.samples = 30;
    CampaignResult res = run_campaign(cfg);
    int aggregates = 0, pool_rows = 0;
    for (const ResultRow& r : res.rows) {
        if (r.observable != "spanning") continue;
        if (r.pool < 0) {
            ++aggregates;
            CHECK(r.n == 3);  // nested variance: one entry per pool mean
            CHECK(r.std_error > 0.0);
        } else {
            ++pool_rows;
            CHECK(r.n == 30);
        }
    }
    CHECK(aggregates == 1);
    CHECK(pool_rows == 3);
    CHECK(res.total_measurements > 0);
}

TEST_CASE("occupied fraction lies in the physical range") {
    CampaignConfig cfg = small_config();
    cfg.closure = ClosurePolicy::PeriodicTime;
    cfg.observables = {"occupied-fraction"};
    cfg.depth = 16;
    CampaignResult res = run_campaign(cfg);
    REQUIRE(!res.rows.empty());
    double rho = res.rows.back().value;
    CHECK(rho > 0.0);
    CHECK(rho < 1.0);
    // the summary field also counts loops closed by the boundary, so it can
    // only exceed the bulk value
    CHECK(res.occupied_fraction >= rho);
    CHECK(res.occupied_fraction <= 1.0 + 1e-12);
}

TEST_CASE("oracle mode reproduces the composed pipeline") {
    CampaignConfig cfg = small_config();
    cfg.samples = 12;
    CampaignResult fast = run_campaign(cfg);
    CampaignConfig ocfg = cfg;
    ocfg.oracle_mode = true;
    CampaignResult slow = run_campaign(ocfg);
    REQUIRE(fast.rows.size() == slow.rows.size());
    for (std::size_t i = 0; i < fast.rows.size(); ++i)
        CHECK(fast.rows[i].value == slow.rows[i].value);
    CHECK(fast.closed == slow.closed);
}

TEST_CASE("csv output round trips at full precision") {
    CampaignConfig cfg = small_config();
    cfg.control = 0.6523817001234567;
    auto dir = std::filesystem::temp_directory_path() / "majoloop_test_csv";
    std::filesystem::remove_all(dir);
    cfg.out_dir = dir.string();
    CampaignResult res = run_campaign(cfg);
    write_outputs(cfg, res);

    CHECK(std::filesystem::exists(dir / "rows.csv"));
    CHECK(std::filesystem::exists(dir / "hist.csv"));
    CHECK(std::filesystem::exists(dir / "sidecar.json"));

    auto rows = read_rows_csv((dir / "rows.csv").string());
    std::size_t matched = 0;
    for (const CsvRow& r : rows) {
        CHECK(r.control == cfg.control);  // 17 digits survive the round trip
        for (const ResultRow& orig : res.rows) {
            if (orig.observable == r.observable && orig.pool == r.pool) {
                CHECK(r.value == orig.value);
                CHECK(r.std_error == orig.std_error);
                ++matched;
            }
        }
    }
    CHECK(matched == res.rows.size());

    std::string sidecar = slurp(dir / "sidecar.json");
    CHECK(sidecar.find("\"seed\"") != std::string::npos);
    CHECK(sidecar.find(config_hash(cfg)) != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("sweep skips completed cells") {
    CampaignConfig tmpl = small_config();
    auto dir = std::filesystem::temp_directory_path() / "majoloop_test_sweep";
    std::filesystem::remove_all(dir);
    tmpl.out_dir = dir.string();
    tmpl.samples = 10;

    std::vector<SweepCell> cells(2);
    cells[0].label = "a";
    cells[0].control = 0.1;
    cells[1].label = "b";
    cells[1].control = 0.2;
    auto first = sweep(tmpl, cells);
    CHECK(first.size() == 2);
    CHECK(std::filesystem::exists(dir / "a" / "rows.csv"));
    CHECK(std::filesystem::exists(dir / "b" / "rows.csv"));

    // different labels use different sub-seeds
    CHECK(first[0].rows.front().seed != first[1].rows.front().seed);

    auto t0 = std::filesystem::last_write_time(dir / "a" / "rows.csv");
    auto second = sweep(tmpl, cells);
    CHECK(std::filesystem::last_write_time(dir / "a" / "rows.csv") == t0);
    std::filesystem::remove_all(dir);
}

TEST_CASE("watermelon correlator sanity") {
    LatticeSpec spec = build_lattice(Geometry::Honeycomb, 4, 4);
    double g2_near = watermelon_g2(spec, 2, 1, 2, 0, 1, 40, 5);
    CHECK(g2_near >= 0.0);
    CHECK(g2_near <= 1.0);
    // immediate re-probe of the same site leaves the probes strongly linked
    double g2_auto = watermelon_g2(spec, 2, 0, 2, 0, 0, 40, 5);
    CHECK(g2_auto >= 0.4);
    CHECK(g2_auto >= g2_near);
    CHECK_THROWS_AS(watermelon_g2(spec, -1, 0, 0, 0, 0, 2, 5), ArgumentError);
}
