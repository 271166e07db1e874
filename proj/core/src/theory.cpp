#include "majoloop/theory.hpp"

#include <cmath>

#include "majoloop/errors.hpp"

namespace majoloop::theory {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void check_normalized(double a, double b, double c) {
    if (a < 0.0 || b < 0.0 || c < 0.0 || std::abs(a + b + c - 1.0) > 1e-9)
        throw ArgumentError("color weights must be nonnegative and sum to 1");
}

// theta3(i t) = 1 + 2 sum_{n >= 1} exp(-pi t n^2)
double theta3_imag(double t) {
    double sum = 1.0;
    for (int n = 1;; ++n) {
        double term = 2.0 * std::exp(-kPi * t * n * n);
        sum += term;
        if (term < 1e-15) break;
    }
    return sum;
}

// eta(i t) = exp(-pi t / 12) prod_{n >= 1} (1 - exp(-2 pi t n))
double eta_imag(double t) {
    double prod = 1.0;
    for (int n = 1;; ++n) {
        double x = std::exp(-2.0 * kPi * t * n);
        prod *= 1.0 - x;
        if (x < 1e-15) break;
    }
    return std::exp(-kPi * t / 12.0) * prod;
}

}  // namespace

HoneycombDiffusion d_mic_honeycomb(double kx, double ky, double kz) {
    check_normalized(kx, ky, kz);
    HoneycombDiffusion out;
    out.dz = (9.0 / 8.0) * kz * (kx + ky);
    out.dperp = (1.0 / 6.0) * (2.0 * out.dz + 9.0 * kx * ky);
    out.d = (3.0 / 4.0) * (kx * ky + kx * kz + ky * kz);
    return out;
}

double d_mic_kekule(double kr, double kg, double kb) {
    check_normalized(kr, kg, kb);
    return (3.0 / 8.0) *
           (kg * kr * (2.0 - 3.0 * kg * kr) +
            kb * (kg + kr) * (2.0 + kg * kr) -
            3.0 * kb * kb * (kg * kg - kg * kr + kr * kr));
}

ContourResult critical_contour(const std::function<double(double)>& d_of_param,
                               double lo, double hi) {
    double flo = d_of_param(lo) - kCriticalD;
    double fhi = d_of_param(hi) - kCriticalD;
    if (flo == 0.0) return {true, lo};
    if (fhi == 0.0) return {true, hi};
    if (flo * fhi > 0.0) return {};
    while (hi - lo > 1e-10) {
        double mid = 0.5 * (lo + hi);
        double fmid = d_of_param(mid) - kCriticalD;
        if (fmid == 0.0) return {true, mid};
        if (flo * fmid < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    return {true, 0.5 * (lo + hi)};
}

double honeycomb_cut_d(double k) {
    return d_mic_honeycomb(k, 0.5 * (1.0 - k), 0.5 * (1.0 - k)).d;
}

double lifshitz_j(double u, double lambda) {
    if (!(u > 0.0 && u < 1.0)) throw ArgumentError("lifshitz_j needs 0 < u < 1");
    if (!(lambda > 0.0)) throw ArgumentError("lifshitz_j needs lambda > 0");
    double num = theta3_imag(lambda * u) * theta3_imag(lambda * (1.0 - u));
    double den = eta_imag(2.0 * u) * eta_imag(2.0 * (1.0 - u));
    return std::log(num / den);
}

double pd_pm(int m, double theta, double f) {
    if (m < 2 || theta <= 0.0 || f <= 0.0 || f > 1.0)
        throw ArgumentError("pd_pm needs m >= 2, theta > 0, 0 < f <= 1");
    return std::pow(f, m) *
           std::exp(std::lgamma(1.0 + theta) + std::lgamma(static_cast<double>(m)) -
                    std::lgamma(m + theta));
}

double pd_density(double ell, double lcal, double theta, double f) {
    if (theta <= 0.0 || f <= 0.0 || f > 1.0 || !(ell > 0.0 && ell < f * lcal))
        throw ArgumentError("pd_density needs theta > 0, 0 < ell < f Lcal");
    return (theta / (ell * lcal)) * std::pow(1.0 - ell / (f * lcal), theta - 1.0);
}

Exponents hyperscaling_from_tau(double tau, double nu) {
    if (tau <= 1.0) throw ArgumentError("hyperscaling needs tau > 1");
    Exponents e;
    e.nu = nu;
    e.tau = tau;
    e.eta = 5.0 - 6.0 / (tau - 1.0);
    e.d_f = 3.0 / (tau - 1.0);
    e.beta = nu * (e.eta + 1.0) / 2.0;
    e.beta_alt = 3.0 * nu * (tau - 2.0) / (tau - 1.0);
    return e;
}

Exponents hyperscaling_from_eta(double eta, double nu) {
    if (eta >= 5.0) throw ArgumentError("hyperscaling needs eta < 5");
    return hyperscaling_from_tau((11.0 - eta) / (5.0 - eta), nu);
}

double reference_exponent(RefKind kind) {
    switch (kind) {
        case RefKind::FirstPassage: return 1.5;
        case RefKind::BulkLiquid: return 2.5;
        case RefKind::SurfaceCritical: return 3.0;
        case RefKind::SurfaceLiquid: return 2.0;
        case RefKind::OpenBoundary: return 2.5;
    }
    return 0.0;
}

double reference_density(RefKind kind, double ell, double alpha) {
    if (ell <= 0.0) throw ArgumentError("reference_density needs ell > 0");
    double base = std::pow(ell, -reference_exponent(kind));
    if (kind == RefKind::OpenBoundary) base *= std::exp(-alpha * ell);
    return base;
}

}  // namespace majoloop::theory
