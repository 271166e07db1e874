#pragma once

#include <functional>

namespace majoloop::theory {

struct HoneycombDiffusion {
    double dz;
    double dperp;
    double d;
};

// Mean-squared displacement per step of the loop-endpoint walk on the
// honeycomb circuit; weights must sum to 1.
HoneycombDiffusion d_mic_honeycomb(double kx, double ky, double kz);

// Same walk on the Kekule-colored honeycomb, averaged over the unit cell.
double d_mic_kekule(double kr, double kg, double kb);

inline constexpr double kCriticalD = 3.0 / 16.0;

struct ContourResult {
    bool found = false;
    double k = 0.0;
};

// Solves d_of_param(k) = 3/16 on [lo, hi] by bisection to 1e-10.
ContourResult critical_contour(const std::function<double(double)>& d_of_param,
                               double lo, double hi);

// The Fig-style one-parameter honeycomb cut K_x = k, K_y = K_z = (1 - k)/2.
double honeycomb_cut_d(double k);

// Quantum Lifshitz entanglement shape
//   J(u) = log[ theta3(i lambda u) theta3(i lambda (1-u))
//               / (eta(2iu) eta(2i(1-u))) ],
// q-series truncated when terms drop below 1e-15. Domain 0 < u < 1.
double lifshitz_j(double u, double lambda);

// Poisson-Dirichlet: probability that m well-separated points lie on one
// macroscopic loop, P_m = f^m Gamma(1+theta) Gamma(m) / Gamma(m+theta).
double pd_pm(int m, double theta, double f);

// Macroscopic loop-length density P(ell) with ell P(ell) =
// (theta / Lcal) (1 - ell / (f Lcal))^(theta - 1), 0 < ell < f Lcal.
double pd_density(double ell, double lcal, double theta, double f);

enum class SymClass { BDI, D };

inline double theta_of_class(SymClass c) { return c == SymClass::BDI ? 1.0 : 0.5; }

struct Exponents {
    double nu = 0.0;
    double eta = 0.0;
    double tau = 0.0;
    double d_f = 0.0;
    double beta = 0.0;
    double beta_alt = 0.0;
};

// eta = 5 - 6/(tau-1); d_f = 3/(tau-1) = (5-eta)/2; beta = nu (eta+1)/2;
// beta_alt = 3 nu (tau-2)/(tau-1); tau = (11-eta)/(5-eta).
Exponents hyperscaling_from_tau(double tau, double nu = 1.0);
Exponents hyperscaling_from_eta(double eta, double nu = 1.0);

enum class RefKind {
    FirstPassage,     // ell^(-3/2)
    BulkLiquid,       // ell^(-5/2)
    SurfaceCritical,  // ell^(-3)
    SurfaceLiquid,    // ell^(-2)
    OpenBoundary,     // ell^(-5/2) exp(-alpha ell)
};

double reference_exponent(RefKind kind);

// Unnormalized density for fit seeding and plots.
double reference_density(RefKind kind, double ell, double alpha = 0.0);

}  // namespace majoloop::theory
