// Command-line front end: campaign runs, parameter sweeps, scaling fits,
// closed-form tables, and the sequential-oracle equivalence check.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "majoloop/block.hpp"
#include "majoloop/errors.hpp"
#include "majoloop/fss.hpp"
#include "majoloop/harness.hpp"
#include "majoloop/oracle.hpp"
#include "majoloop/rng.hpp"
#include "majoloop/theory.hpp"

namespace {

using namespace majoloop;

std::map<Color, double> parse_weights(const std::string& text) {
    std::map<Color, double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ConfigError("weight entries look like color=value: " + item);
        out[color_from_string(item.substr(0, eq))] = std::stod(item.substr(eq + 1));
    }
    return out;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

// weight map for a point on one of the standard one-parameter cuts
std::map<Color, double> cut_weights(const std::string& cut, double k) {
    if (cut == "bdi") return {{Color::X, k}, {Color::Y, 0.5 * (1 - k)}, {Color::Z, 0.5 * (1 - k)}};
    if (cut == "d")
        return {{Color::X, k},
                {Color::Y, (1 - k) / 3},
                {Color::Z, (1 - k) / 3},
                {Color::J, (1 - k) / 3}};
    if (cut == "cardy") return {{Color::P, k}, {Color::Q, 0.0}};
    throw ConfigError("unknown cut: " + cut + " (bdi, d, cardy)");
}

struct SimulateArgs {
    std::string geometry = "honeycomb";
    int32_t lx = 8, ly = 8;
    int64_t depth = 16;
    int32_t pool_size = 20, pools = 1;
    int64_t samples = 100;
    uint64_t seed = 1;
    std::string closure = "mixed-bottom";
    std::string observables = "spanning";
    std::string weights;
    std::string out;
    int threads = 1;
    bool oracle_mode = false;
    double control = 0.0;
};

void add_campaign_flags(CLI::App* cmd, SimulateArgs& a) {
    cmd->add_option("--geometry", a.geometry,
                    "honeycomb | kekule | honeycomb-nnn | yao-kivelson | cardy-l");
    cmd->add_option("--Lx", a.lx, "unit cells along x");
    cmd->add_option("--Ly", a.ly, "unit cells along y");
    cmd->add_option("--depth", a.depth, "circuit depth (power of 2)");
    cmd->add_option("--pool-size", a.pool_size, "circuit pool size N_p");
    cmd->add_option("--pools", a.pools, "independent pools");
    cmd->add_option("--samples", a.samples, "trajectories per pool");
    cmd->add_option("--seed", a.seed, "master seed");
    cmd->add_option("--closure", a.closure,
                    "pure-bottom | pure-both | mixed-bottom | periodic-time");
    cmd->add_option("--observables", a.observables, "comma list");
    cmd->add_option("--weights", a.weights, "color weights, e.g. x=0.5,y=0.25,z=0.25");
    cmd->add_option("--out", a.out, "output directory");
    cmd->add_option("--threads", a.threads, "worker threads");
    cmd->add_option("--control", a.control, "control-parameter tag for the output table");
    cmd->add_flag("--oracle-mode", a.oracle_mode, "sequential replay instead of blocks");
}

CampaignConfig to_config(const SimulateArgs& a) {
    CampaignConfig cfg;
    cfg.geometry = geometry_from_string(a.geometry);
    cfg.lx = a.lx;
    cfg.ly = a.ly;
    cfg.depth = a.depth;
    cfg.pool_size = a.pool_size;
    cfg.pools = a.pools;
    cfg.samples = a.samples;
    cfg.seed = a.seed;
    cfg.closure = closure_from_string(a.closure);
    cfg.observables = split_list(a.observables);
    if (!a.weights.empty()) cfg.weights = parse_weights(a.weights);
    cfg.out_dir = a.out;
    cfg.threads = a.threads;
    cfg.oracle_mode = a.oracle_mode;
    cfg.control = a.control;
    return cfg;
}

int cmd_simulate(const SimulateArgs& a) {
    CampaignResult res = run_campaign(to_config(a));
    for (const ResultRow& r : res.rows) {
        if (r.pool != -1) continue;
        std::printf("%s = %.10g +- %.2g (n=%lld)\n", r.observable.c_str(), r.value,
                    r.std_error, static_cast<long long>(r.n));
    }
    return 0;
}

int cmd_sweep(const SimulateArgs& a, const std::string& cut, const std::string& k_list,
              const std::string& l_list, const std::string& aspect) {
    CampaignConfig tmpl = to_config(a);
    if (tmpl.out_dir.empty()) throw ConfigError("sweep needs --out");
    std::vector<SweepCell> cells;
    for (const std::string& ls : split_list(l_list)) {
        int32_t l = std::stoi(ls);
        for (const std::string& ks : split_list(k_list)) {
            double k = std::stod(ks);
            SweepCell cell;
            cell.weights = cut_weights(cut, k);
            if (aspect == "spanning") {
                cell.lx = 2 * l;
                cell.ly = l;
                cell.depth = l;
            } else if (aspect == "fisher") {
                cell.lx = 2 * l;
                cell.ly = l;
                cell.depth = 4 * l;
            } else {
                cell.lx = l;
                cell.ly = l;
                cell.depth = l;
            }
            cell.control = k;
            char label[64];
            std::snprintf(label, sizeof label, "L%d_k%.6f", l, k);
            cell.label = label;
            cells.push_back(cell);
        }
    }
    sweep(tmpl, cells);
    std::printf("sweep finished: %zu cells under %s\n", cells.size(), tmpl.out_dir.c_str());
    return 0;
}

int cmd_fss(const std::string& in_dir, const std::string& observable,
            const std::string& model_name, double kc_guess, double nu_guess,
            double window_lo, double window_hi, const std::string& out) {
    namespace fs = std::filesystem;
    std::vector<fss::SamplePoint> data;
    for (const auto& entry : fs::directory_iterator(in_dir)) {
        fs::path rows = entry.path() / "rows.csv";
        if (!entry.is_directory() || !fs::exists(rows)) continue;
        for (const CsvRow& r : read_rows_csv(rows.string())) {
            if (r.pool != -1 || r.observable != observable) continue;
            if (!(r.std_error > 0.0)) continue;
            data.push_back({r.ly, r.control, r.value, r.std_error});
        }
    }
    if (data.empty()) throw ConfigError("no matching rows under " + in_dir);

    fss::CollapseModel model = model_name == "linear"
                                   ? fss::CollapseModel::Linear
                               : model_name == "nonlinear"
                                   ? fss::CollapseModel::Nonlinear
                                   : fss::CollapseModel::WithIrrelevant;
    fss::SplineConfig spline;
    fss::ScalingFit fit = fss::collapse_fit(data, model, {window_lo, window_hi}, spline,
                                            kc_guess, nu_guess);
    nlohmann::json rep;
    rep["observable"] = observable;
    rep["model"] = model_name;
    rep["n_points"] = fit.n_points;
    rep["k_c"] = fit.k_c;
    rep["k_c_err"] = fit.k_c_err;
    rep["nu"] = fit.nu;
    rep["nu_err"] = fit.nu_err;
    rep["alpha"] = fit.alpha;
    rep["chi2r"] = fit.chi2r;
    rep["converged"] = fit.converged;
    std::string text = rep.dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
    } else {
        fs::create_directories(out);
        std::ofstream f(fs::path(out) / "fit.json");
        f << text;
        auto cells = fss::chi2_landscape(data, model, {window_lo, window_hi}, spline, fit,
                                         {fit.k_c - 0.02, fit.k_c + 0.02},
                                         {fit.nu * 0.8, fit.nu * 1.2}, 41);
        std::ofstream lf(fs::path(out) / "landscape.csv");
        lf << "k_c,nu,chi2r\n";
        for (const auto& c : cells)
            lf << c.k_c << ',' << c.nu << ',' << c.chi2r << '\n';
        if (!f || !lf) throw RuntimeFailure("failed writing fit outputs to " + out);
    }
    if (!fit.converged) throw RuntimeFailure("scaling fit did not converge");
    return 0;
}

int cmd_theory(const std::string& table, const std::string& out) {
    std::ostringstream os;
    if (table == "dmic") {
        os << "k,d_z,d_perp,d,d_kekule\n";
        for (int i = 0; i <= 200; ++i) {
            double k = i / 200.0;
            auto d = theory::d_mic_honeycomb(k, 0.5 * (1 - k), 0.5 * (1 - k));
            double dk = theory::d_mic_kekule(k, 0.5 * (1 - k), 0.5 * (1 - k));
            os << k << ',' << d.dz << ',' << d.dperp << ',' << d.d << ',' << dk << '\n';
        }
    } else if (table == "contour") {
        auto r = theory::critical_contour(theory::honeycomb_cut_d, 0.34, 0.999);
        os << "cut,k_c\nbdi," << (r.found ? r.k : -1.0) << '\n';
    } else if (table == "lifshitz") {
        os << "u,j_3.4\n";
        for (int i = 1; i < 40; ++i) {
            double u = i / 40.0;
            os << u << ',' << theory::lifshitz_j(u, 3.4) << '\n';
        }
    } else if (table == "hyperscaling") {
        os << "tau,eta,d_f,beta,beta_alt\n";
        for (double tau : {2.1819, 2.1875}) {
            auto e = theory::hyperscaling_from_tau(tau, 1.0);
            os << tau << ',' << e.eta << ',' << e.d_f << ',' << e.beta << ','
               << e.beta_alt << '\n';
        }
    } else if (table == "pd") {
        os << "theta,p2,p3,p4,r24,r23\n";
        for (double theta : {1.0, 0.5}) {
            double p2 = theory::pd_pm(2, theta, 1.0);
            double p3 = theory::pd_pm(3, theta, 1.0);
            double p4 = theory::pd_pm(4, theta, 1.0);
            os << theta << ',' << p2 << ',' << p3 << ',' << p4 << ','
               << p2 * p2 / p4 << ',' << p2 * p2 * p2 / (p3 * p3) << '\n';
        }
    } else {
        throw ConfigError("unknown table: " + table +
                          " (dmic, contour, lifshitz, hyperscaling, pd)");
    }
    if (out.empty()) {
        std::cout << os.str();
    } else {
        std::ofstream f(out);
        f << os.str();
        if (!f) throw RuntimeFailure("failed writing " + out);
    }
    return 0;
}

bool close_results_equal(const CloseResult& a, const CloseResult& b) {
    if (a.spanning != b.spanning || a.spanning_length != b.spanning_length) return false;
    if (!(a.hist == b.hist) || !(a.open_hist == b.open_hist)) return false;
    if (a.n_zero_loops != b.n_zero_loops) return false;
    if (a.surface.pairs.size() != b.surface.pairs.size()) return false;
    for (std::size_t i = 0; i < a.surface.pairs.size(); ++i) {
        const auto& pa = a.surface.pairs[i];
        const auto& pb = b.surface.pairs[i];
        if (pa.a != pb.a || pa.b != pb.b || pa.bulk_length != pb.bulk_length)
            return false;
    }
    return true;
}

int cmd_oracle_check(int seeds) {
    const Geometry geoms[] = {Geometry::Honeycomb, Geometry::HoneycombNNN,
                              Geometry::YaoKivelson, Geometry::CardyL3D};
    const ClosurePolicy policies[] = {ClosurePolicy::PureBottom, ClosurePolicy::PureBoth,
                                      ClosurePolicy::MixedBottom,
                                      ClosurePolicy::PeriodicTime};
    int64_t checked = 0;
    for (int seed = 0; seed < seeds; ++seed) {
        for (Geometry g : geoms) {
            for (int32_t l : {4, 8}) {
                LatticeSpec spec = build_lattice(g, l, l);
                for (int64_t depth : {4, 16, 64}) {
                    Rng rng = Rng::keyed({static_cast<uint64_t>(seed),
                                          static_cast<uint64_t>(l),
                                          static_cast<uint64_t>(depth),
                                          static_cast<uint64_t>(g)});
                    std::vector<CircuitBlock> layer;
                    for (int64_t t = 0; t < depth; ++t)
                        layer.push_back(make_layer(spec, rng, true));
                    while (layer.size() > 1) {
                        std::vector<CircuitBlock> next;
                        for (std::size_t i = 0; i + 1 < layer.size(); i += 2) {
                            int32_t dx = static_cast<int32_t>(rng.next_below(l));
                            int32_t dy = static_cast<int32_t>(rng.next_below(l));
                            next.push_back(compose(layer[i], layer[i + 1], dx, dy));
                        }
                        layer = std::move(next);
                    }
                    ClosurePolicy policy = policies[(seed + l + depth) % 4];
                    CloseResult via_blocks = close_boundary(layer[0], policy);
                    CloseResult via_replay =
                        oracle::replay(spec, *layer[0].moves, policy);
                    if (!close_results_equal(via_blocks, via_replay)) {
                        std::fprintf(stderr,
                                     "MISMATCH: %s L=%d depth=%lld seed=%d %s\n",
                                     to_string(g).c_str(), l,
                                     static_cast<long long>(depth), seed,
                                     to_string(policy).c_str());
                        return 3;
                    }
                    ++checked;
                }
            }
        }
    }
    std::printf("oracle-check: %lld cases OK\n", static_cast<long long>(checked));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"measurement-only Majorana loop-model simulator"};
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App* c_sim = app.add_subcommand("simulate", "run one campaign");
    add_campaign_flags(c_sim, sim);

    SimulateArgs swp;
    std::string cut = "bdi", k_list = "0.65", l_list = "8", aspect = "spanning";
    CLI::App* c_swp = app.add_subcommand("sweep", "grid of campaigns over a cut");
    add_campaign_flags(c_swp, swp);
    c_swp->add_option("--cut", cut, "bdi | d | cardy");
    c_swp->add_option("--k-list", k_list, "comma list of control values");
    c_swp->add_option("--L-list", l_list, "comma list of linear sizes");
    c_swp->add_option("--aspect", aspect, "spanning | fisher | unit");

    std::string fss_in, fss_obs = "spanning", fss_model = "nonlinear", fss_out;
    double kc_guess = 0.65, nu_guess = 1.0, win_lo = -2.0, win_hi = 2.0;
    CLI::App* c_fss = app.add_subcommand("fss", "scaling collapse of sweep output");
    c_fss->add_option("--in", fss_in, "sweep output directory")->required();
    c_fss->add_option("--observable", fss_obs);
    c_fss->add_option("--model", fss_model, "linear | nonlinear | with-irrelevant");
    c_fss->add_option("--kc-guess", kc_guess);
    c_fss->add_option("--nu-guess", nu_guess);
    c_fss->add_option("--window-lo", win_lo);
    c_fss->add_option("--window-hi", win_hi);
    c_fss->add_option("--out", fss_out, "report directory (default: stdout)");

    std::string th_table = "dmic", th_out;
    CLI::App* c_th = app.add_subcommand("theory", "closed-form reference tables");
    c_th->add_option("--table", th_table, "dmic | contour | lifshitz | hyperscaling | pd");
    c_th->add_option("--out", th_out, "CSV path (default: stdout)");

    int oc_seeds = 200;
    CLI::App* c_oc = app.add_subcommand("oracle-check", "block vs sequential replay");
    c_oc->add_option("--seeds", oc_seeds, "random seeds per case");

    try {
        app.parse(argc, argv);
        if (c_sim->parsed()) return cmd_simulate(sim);
        if (c_swp->parsed()) return cmd_sweep(swp, cut, k_list, l_list, aspect);
        if (c_fss->parsed())
            return cmd_fss(fss_in, fss_obs, fss_model, kc_guess, nu_guess, win_lo,
                           win_hi, fss_out);
        if (c_th->parsed()) return cmd_theory(th_table, th_out);
        if (c_oc->parsed()) return cmd_oracle_check(oc_seeds);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const ArgumentError& e) {
        std::fprintf(stderr, "argument error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime failure: %s\n", e.what());
        return 3;
    }
    return 0;
}
