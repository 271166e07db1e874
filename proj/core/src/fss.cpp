#include "majoloop/fss.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "majoloop/errors.hpp"
#include "majoloop/theory.hpp"

namespace majoloop::fss {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kBad = 1e30;

// Clamped cubic B-spline basis over the given breakpoints.
class CubicSpline {
  public:
    explicit CubicSpline(const std::vector<double>& breaks) {
        knots_.insert(knots_.end(), 3, breaks.front());
        knots_.insert(knots_.end(), breaks.begin(), breaks.end());
        knots_.insert(knots_.end(), 3, breaks.back());
        n_basis_ = static_cast<int>(breaks.size()) + 2;
    }

    int n_basis() const { return n_basis_; }

    // Cox-de Boor; writes all basis values at x into row (size n_basis).
    void eval(double x, double* row) const {
        std::fill(row, row + n_basis_, 0.0);
        const auto& t = knots_;
        int m = static_cast<int>(t.size());
        std::vector<double> b(m - 1, 0.0);
        for (int i = 0; i + 1 < m; ++i) {
            bool last = (t[i + 1] == t.back()) && (x == t.back());
            if ((x >= t[i] && x < t[i + 1]) || (last && t[i] < t[i + 1])) b[i] = 1.0;
        }
        for (int k = 2; k <= 4; ++k) {
            for (int i = 0; i + k < m; ++i) {
                double left = 0.0, right = 0.0;
                if (t[i + k - 1] > t[i]) left = (x - t[i]) / (t[i + k - 1] - t[i]) * b[i];
                if (t[i + k] > t[i + 1])
                    right = (t[i + k] - x) / (t[i + k] - t[i + 1]) * b[i + 1];
                b[i] = left + right;
            }
        }
        for (int i = 0; i < n_basis_; ++i) row[i] = b[i];
    }

    bool in_range(double x) const { return x >= knots_.front() && x <= knots_.back(); }

  private:
    std::vector<double> knots_;
    int n_basis_;
};

struct InnerSolve {
    double chi2 = kBad;
    double chi2r = kBad;
    int64_t n_points = 0;
    std::vector<double> coeffs;
};

// Linear least squares for the spline coefficients at fixed scaling
// parameters. Basis functions without data support are dropped.
InnerSolve solve_spline(const CubicSpline& spline, const std::vector<double>& x,
                        const std::vector<double>& y, const std::vector<double>& sigma,
                        const std::vector<double>& amp, bool want_coeffs) {
    InnerSolve out;
    const int nb = spline.n_basis();
    const int nf = static_cast<int>(x.size());
    if (nf < 8) return out;
    Eigen::MatrixXd a(nf, nb);
    Eigen::VectorXd rhs(nf);
    std::vector<double> row(nb);
    for (int i = 0; i < nf; ++i) {
        spline.eval(x[i], row.data());
        for (int j = 0; j < nb; ++j) a(i, j) = row[j] * amp[i] / sigma[i];
        rhs(i) = y[i] / sigma[i];
    }
    std::vector<int> keep;
    for (int j = 0; j < nb; ++j)
        if (a.col(j).lpNorm<1>() > 1e-12) keep.push_back(j);
    if (static_cast<int>(keep.size()) < 4 || nf <= static_cast<int>(keep.size())) return out;
    Eigen::MatrixXd ak(nf, keep.size());
    for (std::size_t j = 0; j < keep.size(); ++j) ak.col(j) = a.col(keep[j]);
    Eigen::VectorXd c = (ak.transpose() * ak)
                            .ldlt()
                            .solve(ak.transpose() * rhs);
    out.chi2 = (ak * c - rhs).squaredNorm();
    int dof = nf - static_cast<int>(keep.size());
    out.chi2r = out.chi2 / std::max(1, dof);
    out.n_points = nf;
    if (want_coeffs) {
        out.coeffs.assign(nb, 0.0);
        for (std::size_t j = 0; j < keep.size(); ++j) out.coeffs[keep[j]] = c(j);
    }
    return out;
}

int count_distinct_l(const std::vector<SamplePoint>& data) {
    std::set<int32_t> ls;
    for (const auto& p : data) ls.insert(p.l);
    return static_cast<int>(ls.size());
}

struct CollapseEval {
    const std::vector<SamplePoint>* data;
    const CubicSpline* spline;
    std::pair<double, double> window;

    // y_scale(L) rescales the ordinate (spanning-length / beta collapses)
    InnerSolve eval(double k_c, double nu, double alpha, double beta_irr, double y_irr,
                    const std::function<double(double)>& y_scale, bool want_coeffs) const {
        if (nu <= 0.05 || nu > 20.0) return {};
        std::vector<double> x, y, s, amp;
        for (const auto& p : *data) {
            double dk = p.k - k_c;
            double xv = std::pow(static_cast<double>(p.l), 1.0 / nu) * dk *
                        (1.0 + alpha * dk);
            if (xv < window.first || xv > window.second || !spline->in_range(xv)) continue;
            double scale = y_scale ? y_scale(static_cast<double>(p.l)) : 1.0;
            double a = 1.0 + beta_irr * std::pow(static_cast<double>(p.l), y_irr);
            x.push_back(xv);
            y.push_back(p.y * scale);
            s.push_back(p.sigma * scale);
            amp.push_back(a);
        }
        return solve_spline(*spline, x, y, s, amp, want_coeffs);
    }
};

}  // namespace

double nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                   std::vector<double>& x, const std::vector<double>& step,
                   int max_iter, double ftol) {
    const std::size_t n = x.size();
    std::vector<std::vector<double>> pts(n + 1, x);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step[i];
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fv[i] = f(pts[i]);

    for (int it = 0; it < max_iter; ++it) {
        std::vector<std::size_t> order(n + 1);
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::size_t best = order[0], worst = order[n], second = order[n - 1];
        if (std::abs(fv[worst] - fv[best]) <= ftol * (std::abs(fv[best]) + ftol)) break;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j] / n;
        }
        auto blend = [&](double t) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j)
                p[j] = centroid[j] + t * (pts[worst][j] - centroid[j]);
            return p;
        };
        std::vector<double> refl = blend(-1.0);
        double fr = f(refl);
        if (fr < fv[best]) {
            std::vector<double> exp_ = blend(-2.0);
            double fe = f(exp_);
            if (fe < fr) {
                pts[worst] = exp_;
                fv[worst] = fe;
            } else {
                pts[worst] = refl;
                fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            pts[worst] = refl;
            fv[worst] = fr;
        } else {
            std::vector<double> con = blend(fr < fv[worst] ? -0.5 : 0.5);
            double fc = f(con);
            if (fc < std::min(fr, fv[worst])) {
                pts[worst] = con;
                fv[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t j = 0; j < n; ++j)
                        pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
                    fv[i] = f(pts[i]);
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (fv[i] < fv[best]) best = i;
    x = pts[best];
    return fv[best];
}

std::vector<double> default_breaks(const SplineConfig& cfg, double xlo, double xhi) {
    std::vector<double> breaks;
    if (!cfg.breaks.empty()) {
        breaks = cfg.breaks;
    } else if (cfg.uniform) {
        for (int i = 0; i < cfg.n_uniform; ++i)
            breaks.push_back(xlo + (xhi - xlo) * i / (cfg.n_uniform - 1));
    } else {
        for (int i = 0; i <= 20; ++i) breaks.push_back(-0.5 + 0.1 * i);
        for (double b : {2.0, 3.0, 4.0, 5.0}) breaks.push_back(b);
        breaks.push_back(xlo);
        breaks.push_back(xhi);
    }
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> out;
    for (double b : breaks) {
        if (b < xlo - 1e-12 || b > xhi + 1e-12) continue;
        if (out.empty() || b - out.back() > 1e-9) out.push_back(b);
    }
    if (out.size() < 2) out = {xlo, xhi};
    return out;
}

namespace {

// chi^2 = chi^2_min + 4 contour half-width along one frozen parameter,
// re-minimizing the others.
double contour_error(const std::function<double(double, std::vector<double>&)>& chi2_at,
                     double center, const std::vector<double>& others, double chi2_min,
                     double step0) {
    double half = 0.0;
    for (double sign : {1.0, -1.0}) {
        double prev_d = 0.0, prev_chi = chi2_min;
        double d = step0;
        double found = 0.0;
        for (int i = 0; i < 24; ++i) {
            std::vector<double> rest = others;
            double chi = chi2_at(center + sign * d, rest);
            if (chi >= chi2_min + 4.0) {
                double t = (chi2_min + 4.0 - prev_chi) / std::max(1e-12, chi - prev_chi);
                found = prev_d + t * (d - prev_d);
                break;
            }
            prev_d = d;
            prev_chi = chi;
            d *= 1.6;
        }
        if (found == 0.0) found = d;
        half += 0.5 * found;
    }
    return half;
}

}  // namespace

ScalingFit collapse_fit(const std::vector<SamplePoint>& data, CollapseModel model,
                        std::pair<double, double> window, const SplineConfig& spline_cfg,
                        double k_c_guess, double nu_guess) {
    if (count_distinct_l(data) < 3)
        throw ArgumentError("collapse_fit needs at least 3 distinct system sizes");
    for (const auto& p : data)
        if (!(p.sigma > 0.0)) throw ArgumentError("collapse_fit needs sigma > 0");

    CubicSpline spline(default_breaks(spline_cfg, window.first, window.second));
    CollapseEval ev{&data, &spline, window};

    auto unpack = [&](const std::vector<double>& v, double& kc, double& nu, double& al,
                      double& bi, double& yi) {
        kc = v[0];
        nu = v[1];
        al = (model != CollapseModel::Linear) ? v[2] : 0.0;
        bi = (model == CollapseModel::WithIrrelevant) ? v[3] : 0.0;
        yi = (model == CollapseModel::WithIrrelevant) ? v[4] : -1.0;
    };
    auto objective = [&](const std::vector<double>& v) {
        double kc, nu, al, bi, yi;
        unpack(v, kc, nu, al, bi, yi);
        if (model == CollapseModel::WithIrrelevant && (yi > -0.05 || yi < -4.0)) return kBad;
        return ev.eval(kc, nu, al, bi, yi, nullptr, false).chi2r;
    };

    std::vector<double> x{k_c_guess, nu_guess};
    std::vector<double> step{0.01, 0.08};
    if (model != CollapseModel::Linear) {
        x.push_back(0.0);
        step.push_back(0.2);
    }
    if (model == CollapseModel::WithIrrelevant) {
        x.insert(x.end(), {0.0, -1.0});
        step.insert(step.end(), {0.2, 0.5});
    }
    nelder_mead(objective, x, step);
    nelder_mead(objective, x, step);  // restart from the optimum

    ScalingFit fit;
    double kc, nu, al, bi, yi;
    unpack(x, kc, nu, al, bi, yi);
    InnerSolve inner = ev.eval(kc, nu, al, bi, yi, nullptr, true);
    fit.k_c = kc;
    fit.nu = nu;
    fit.alpha = al;
    fit.beta_irr = bi;
    fit.y_irr = (model == CollapseModel::WithIrrelevant) ? yi : 0.0;
    fit.breaks = default_breaks(spline_cfg, window.first, window.second);
    fit.coeffs = inner.coeffs;
    fit.chi2 = inner.chi2;
    fit.chi2r = inner.chi2r;
    fit.n_points = inner.n_points;
    fit.converged = inner.chi2 < kBad;
    if (!fit.converged) return fit;

    // chi^2 + 4 contour errors on K_c and nu
    auto chi2_kc = [&](double kc_fixed, std::vector<double>& rest) {
        auto obj = [&](const std::vector<double>& v) {
            std::vector<double> full = {kc_fixed};
            full.insert(full.end(), v.begin(), v.end());
            return objective(full);
        };
        std::vector<double> stepr(step.begin() + 1, step.end());
        double chi2r_min = nelder_mead(obj, rest, stepr, 400);
        return chi2r_min * std::max<int64_t>(1, fit.n_points - fit.coeffs.size());
    };
    auto chi2_nu = [&](double nu_fixed, std::vector<double>& rest) {
        auto obj = [&](const std::vector<double>& v) {
            std::vector<double> full = {v[0], nu_fixed};
            full.insert(full.end(), v.begin() + 1, v.end());
            return objective(full);
        };
        std::vector<double> stepr = step;
        stepr.erase(stepr.begin() + 1);
        double chi2r_min = nelder_mead(obj, rest, stepr, 400);
        return chi2r_min * std::max<int64_t>(1, fit.n_points - fit.coeffs.size());
    };
    double chi2_min = fit.chi2r * std::max<int64_t>(1, fit.n_points - fit.coeffs.size());
    {
        std::vector<double> rest(x.begin() + 1, x.end());
        fit.k_c_err = contour_error(chi2_kc, fit.k_c, rest, chi2_min, 1e-3);
    }
    {
        std::vector<double> rest = x;
        rest.erase(rest.begin() + 1);
        fit.nu_err = contour_error(chi2_nu, fit.nu, rest, chi2_min, 5e-3);
    }
    return fit;
}

std::vector<LandscapeCell> chi2_landscape(const std::vector<SamplePoint>& data,
                                          CollapseModel model,
                                          std::pair<double, double> window,
                                          const SplineConfig& spline_cfg,
                                          const ScalingFit& fit,
                                          std::pair<double, double> k_c_range,
                                          std::pair<double, double> nu_range, int grid) {
    CubicSpline spline(default_breaks(spline_cfg, window.first, window.second));
    CollapseEval ev{&data, &spline, window};
    double al = (model != CollapseModel::Linear) ? fit.alpha : 0.0;
    std::vector<LandscapeCell> cells;
    cells.reserve(static_cast<std::size_t>(grid) * grid);
    for (int i = 0; i < grid; ++i) {
        double kc = k_c_range.first +
                    (k_c_range.second - k_c_range.first) * i / std::max(1, grid - 1);
        for (int j = 0; j < grid; ++j) {
            double nu = nu_range.first +
                        (nu_range.second - nu_range.first) * j / std::max(1, grid - 1);
            cells.push_back(
                {kc, nu, ev.eval(kc, nu, al, fit.beta_irr, fit.y_irr, nullptr, false).chi2r});
        }
    }
    return cells;
}

PowerLawFit powerlaw_fit(const LoopHistogram& hist, double lmin, double lmax) {
    std::vector<double> lx, ly, w;
    for (std::size_t bin = 0; bin < hist.n_bins(); ++bin) {
        double c = LoopHistogram::bin_center(bin);
        double n = hist.count(bin);
        if (c < lmin || c > lmax || n <= 0.0) continue;
        double width = LoopHistogram::bin_upper(bin) - LoopHistogram::bin_lower(bin);
        lx.push_back(std::log(c));
        ly.push_back(std::log(n / width));
        w.push_back(n);  // Poisson: var(log density) ~ 1/n
    }
    if (lx.size() < 8)
        throw ArgumentError("powerlaw_fit needs at least 8 populated bins in window");
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sw += w[i];
        sx += w[i] * lx[i];
        sy += w[i] * ly[i];
        sxx += w[i] * lx[i] * lx[i];
        sxy += w[i] * lx[i] * ly[i];
    }
    double det = sw * sxx - sx * sx;
    double slope = (sw * sxy - sx * sy) / det;
    double inter = (sxx * sy - sx * sxy) / det;
    double chi2 = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        double r = ly[i] - (inter + slope * lx[i]);
        chi2 += w[i] * r * r;
    }
    PowerLawFit fit;
    fit.exponent = -slope;
    fit.error = std::sqrt(sw / det);
    fit.chi2r = chi2 / std::max<std::size_t>(1, lx.size() - 2);
    return fit;
}

ScalingFit spanning_length_collapse(const std::vector<SamplePoint>& data,
                                    std::pair<double, double> window,
                                    const SplineConfig& spline_cfg, double k_c_guess,
                                    double nu_guess, double eta_guess, bool free_eta) {
    if (count_distinct_l(data) < 3)
        throw ArgumentError("spanning_length_collapse needs at least 3 system sizes");
    CubicSpline spline(default_breaks(spline_cfg, window.first, window.second));
    CollapseEval ev{&data, &spline, window};

    auto eval_at = [&](double kc, double nu, double al, double eta) {
        auto scale = [eta](double l) { return std::pow(l, -(5.0 - eta) / 2.0); };
        return ev.eval(kc, nu, al, 0.0, -1.0, scale, false).chi2r;
    };
    auto objective = [&](const std::vector<double>& v) {
        double eta = free_eta ? v[3] : eta_guess;
        if (eta < -2.0 || eta > 2.0) return kBad;
        return eval_at(v[0], v[1], v[2], eta);
    };
    std::vector<double> x{k_c_guess, nu_guess, 0.0};
    std::vector<double> step{0.01, 0.08, 0.2};
    if (free_eta) {
        // the chi2 surface has local minima in eta, so seed the simplex from a
        // coarse scan around the guess and keep the best restart
        x.push_back(eta_guess);
        step.push_back(0.05);
        std::vector<double> best = x;
        double best_f = kBad;
        for (double de : {0.0, -0.2, 0.2, -0.4, 0.4}) {
            std::vector<double> trial{k_c_guess, nu_guess, 0.0, eta_guess + de};
            if (trial[3] < -2.0 || trial[3] > 2.0) continue;
            double f = nelder_mead(objective, trial, step);
            f = nelder_mead(objective, trial, step);
            if (f < best_f) {
                best_f = f;
                best = trial;
            }
        }
        x = best;
    } else {
        nelder_mead(objective, x, step);
        nelder_mead(objective, x, step);
    }

    ScalingFit fit;
    fit.k_c = x[0];
    fit.nu = x[1];
    fit.alpha = x[2];
    fit.eta = free_eta ? x[3] : eta_guess;
    auto scale = [&](double l) { return std::pow(l, -(5.0 - fit.eta) / 2.0); };
    InnerSolve inner = ev.eval(fit.k_c, fit.nu, fit.alpha, 0.0, -1.0, scale, true);
    fit.breaks = default_breaks(spline_cfg, window.first, window.second);
    fit.coeffs = inner.coeffs;
    fit.chi2 = inner.chi2;
    fit.chi2r = inner.chi2r;
    fit.n_points = inner.n_points;
    fit.converged = inner.chi2 < kBad;
    return fit;
}

ScalingFit beta_collapse(const std::vector<SamplePoint>& data,
                         std::pair<double, double> window, const SplineConfig& spline_cfg,
                         double k_c, double nu, double beta_guess) {
    if (count_distinct_l(data) < 3)
        throw ArgumentError("beta_collapse needs at least 3 system sizes");
    CubicSpline spline(default_breaks(spline_cfg, window.first, window.second));
    CollapseEval ev{&data, &spline, window};

    auto objective = [&](const std::vector<double>& v) {
        double beta = v[0];
        if (beta < 0.0 || beta > 3.0) return kBad;
        auto scale = [&](double l) { return std::pow(l, 2.0 * beta / nu); };
        return ev.eval(k_c, nu, v[1], 0.0, -1.0, scale, false).chi2r;
    };
    std::vector<double> x{beta_guess, 0.0};
    std::vector<double> step{0.05, 0.2};
    nelder_mead(objective, x, step);
    nelder_mead(objective, x, step);

    ScalingFit fit;
    fit.k_c = k_c;
    fit.nu = nu;
    fit.beta = x[0];
    fit.alpha = x[1];
    auto scale = [&](double l) { return std::pow(l, 2.0 * fit.beta / nu); };
    InnerSolve inner = ev.eval(k_c, nu, fit.alpha, 0.0, -1.0, scale, true);
    fit.breaks = default_breaks(spline_cfg, window.first, window.second);
    fit.coeffs = inner.coeffs;
    fit.chi2 = inner.chi2;
    fit.chi2r = inner.chi2r;
    fit.n_points = inner.n_points;
    fit.converged = inner.chi2 < kBad;
    return fit;
}

namespace {

LifshitzFit linear_shape_fit(const std::vector<ProfilePoint>& data,
                             const std::function<double(double, double)>& shape) {
    std::vector<double> c1, c2, y, s;
    for (const auto& p : data) {
        double u = p.ell / p.l;
        if (u <= 0.0 || u >= 1.0 || !(p.sigma > 0.0)) continue;
        c1.push_back(static_cast<double>(p.l));
        c2.push_back(shape(u, static_cast<double>(p.l)));
        y.push_back(p.s);
        s.push_back(p.sigma);
    }
    LifshitzFit fit;
    if (c1.size() < 4) return fit;
    Eigen::MatrixXd a(c1.size(), 2);
    Eigen::VectorXd rhs(c1.size());
    for (std::size_t i = 0; i < c1.size(); ++i) {
        a(i, 0) = c1[i] / s[i];
        a(i, 1) = c2[i] / s[i];
        rhs(i) = y[i] / s[i];
    }
    Eigen::Vector2d c = (a.transpose() * a).ldlt().solve(a.transpose() * rhs);
    fit.a = c(0);
    fit.b = c(1);
    fit.chi2 = (a * c - rhs).squaredNorm();
    fit.chi2r = fit.chi2 / std::max<std::size_t>(1, c1.size() - 2);
    fit.converged = true;
    return fit;
}

}  // namespace

LifshitzFit lifshitz_fit(const std::vector<ProfilePoint>& data, double lambda_lo,
                         double lambda_hi) {
    auto chi2_of = [&](double lambda) {
        return linear_shape_fit(data, [lambda](double u, double) {
                   return theory::lifshitz_j(u, lambda);
               }).chi2;
    };
    // coarse scan, then golden-section refinement
    const int n_scan = 40;
    double best_l = lambda_lo, best_chi = std::numeric_limits<double>::max();
    for (int i = 0; i <= n_scan; ++i) {
        double l = lambda_lo + (lambda_hi - lambda_lo) * i / n_scan;
        double chi = chi2_of(l);
        if (chi < best_chi) {
            best_chi = chi;
            best_l = l;
        }
    }
    double span = (lambda_hi - lambda_lo) / n_scan;
    double lo = std::max(lambda_lo, best_l - span);
    double hi = std::min(lambda_hi, best_l + span);
    const double gr = 0.6180339887498949;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = chi2_of(x1), f2 = chi2_of(x2);
    for (int it = 0; it < 60 && hi - lo > 1e-6; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = chi2_of(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = chi2_of(x2);
        }
    }
    double lambda = 0.5 * (lo + hi);
    LifshitzFit fit = linear_shape_fit(
        data, [lambda](double u, double) { return theory::lifshitz_j(u, lambda); });
    fit.lambda = lambda;
    return fit;
}

LifshitzFit cft_arc_fit(const std::vector<ProfilePoint>& data) {
    return linear_shape_fit(data, [](double u, double l) {
        return std::log((l / kPi) * std::sin(kPi * u));
    });
}

}  // namespace majoloop::fss
