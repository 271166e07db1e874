#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "majoloop/histogram.hpp"

namespace majoloop::fss {

struct SamplePoint {
    int32_t l;     // linear system size
    double k;      // control parameter
    double y;      // observable mean
    double sigma;  // standard error, > 0
};

enum class CollapseModel { Linear, Nonlinear, WithIrrelevant };

struct SplineConfig {
    // breakpoints for the cubic B-spline; empty selects the default layout
    // (spacing 0.1 on [-0.5, 1.5], spacing 1 on [2, 5])
    std::vector<double> breaks;
    bool uniform = false;  // replace default with n_uniform equispaced breaks
    int n_uniform = 24;
};

std::vector<double> default_breaks(const SplineConfig& cfg, double xlo, double xhi);

struct ScalingFit {
    double k_c = 0.0;
    double nu = 0.0;
    double alpha = 0.0;     // nonlinear scaling-variable coefficient
    double beta_irr = 0.0;  // irrelevant amplitude (WithIrrelevant)
    double y_irr = 0.0;     // irrelevant exponent
    double eta = 0.0;       // joint spanning-length fits
    double beta = 0.0;      // order-parameter collapse
    std::vector<double> breaks;
    std::vector<double> coeffs;
    double chi2 = 0.0;
    double chi2r = 0.0;
    int64_t n_points = 0;
    double k_c_err = 0.0;  // from the chi^2 = chi^2_min + 4 contour
    double nu_err = 0.0;
    bool converged = false;
};

// Collapse y = (amplitude) f(x), x = L^(1/nu) (K - K_c) (1 + alpha (K - K_c)),
// f a cubic B-spline solved by nested linear least squares; outer downhill
// simplex over the scaling parameters. Points with x outside the window are
// excluded.
ScalingFit collapse_fit(const std::vector<SamplePoint>& data, CollapseModel model,
                        std::pair<double, double> window, const SplineConfig& spline,
                        double k_c_guess, double nu_guess);

// chi^2_r over a (K_c, nu) grid with the remaining parameters fixed at the
// fit optimum; rows of (k_c, nu, chi2r).
struct LandscapeCell {
    double k_c, nu, chi2r;
};
std::vector<LandscapeCell> chi2_landscape(const std::vector<SamplePoint>& data,
                                          CollapseModel model,
                                          std::pair<double, double> window,
                                          const SplineConfig& spline,
                                          const ScalingFit& fit,
                                          std::pair<double, double> k_c_range,
                                          std::pair<double, double> nu_range,
                                          int grid);

struct PowerLawFit {
    double exponent = 0.0;
    double error = 0.0;
    double chi2r = 0.0;
};

// Weighted log-log fit of the binned density; needs >= 8 populated bins
// inside [lmin, lmax].
PowerLawFit powerlaw_fit(const LoopHistogram& hist, double lmin, double lmax);

// Joint (nu, eta) collapse of the spanning length with ordinate
// M L^(-(5 - eta)/2). Set free_eta = false to pin eta.
ScalingFit spanning_length_collapse(const std::vector<SamplePoint>& data,
                                    std::pair<double, double> window,
                                    const SplineConfig& spline, double k_c_guess,
                                    double nu_guess, double eta_guess,
                                    bool free_eta = true);

// Order-parameter collapse G2 L^(2 beta / nu) = f(x) at fixed (K_c, nu).
ScalingFit beta_collapse(const std::vector<SamplePoint>& data,
                         std::pair<double, double> window, const SplineConfig& spline,
                         double k_c, double nu, double beta_guess);

struct ProfilePoint {
    int32_t l;
    double ell;  // subsystem size along the cut
    double s;    // entanglement, bits
    double sigma;
};

struct LifshitzFit {
    double a = 0.0;  // area-law coefficient
    double b = 0.0;  // shape amplitude
    double lambda = 0.0;
    double chi2 = 0.0;
    double chi2r = 0.0;
    bool converged = false;
};

// S(ell, L) = a L + b J(ell / L; lambda), linear in (a, b), scanned in lambda.
LifshitzFit lifshitz_fit(const std::vector<ProfilePoint>& data,
                         double lambda_lo = 0.5, double lambda_hi = 20.0);

// Competing conformal-arc form S = a L + b log((L / pi) sin(pi ell / L)).
LifshitzFit cft_arc_fit(const std::vector<ProfilePoint>& data);

// Downhill simplex minimizer (shared by the fitters and tests).
double nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                   std::vector<double>& x, const std::vector<double>& step,
                   int max_iter = 2000, double ftol = 1e-10);

}  // namespace majoloop::fss
