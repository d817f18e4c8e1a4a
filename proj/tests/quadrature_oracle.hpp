// Test-only oracles, independent of the library implementation path:
// adaptive-Simpson quadrature of the defining Si/Ci integrals, and the
// induced-EMF closed forms re-evaluated through those quadrature routines.
#ifndef RISLOC_TESTS_QUADRATURE_ORACLE_HPP
#define RISLOC_TESTS_QUADRATURE_ORACLE_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace oracle {

inline constexpr double kGamma = 0.57721566490153286;

inline double simpson(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    return (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b));
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double whole, double tol, int depth) {
    const double c = 0.5 * (a + b);
    const double left = simpson(f, a, c);
    const double right = simpson(f, c, b);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive_simpson(f, a, c, left, tol / 2.0, depth - 1) +
           adaptive_simpson(f, c, b, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-13) {
    if (a == b) return 0.0;
    return adaptive_simpson(f, a, b, simpson(f, a, b), tol, 40);
}

/// Si(x) = int_0^x sin(t)/t dt, integrated between the integrand's zeros.
inline double si(double x) {
    auto f = [](double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; };
    const double pi = std::numbers::pi;
    double acc = 0.0;
    double a = 0.0;
    while (a + pi < x) {
        acc += integrate(f, a, a + pi);
        a += pi;
    }
    return acc + integrate(f, a, x);
}

/// Ci(x) = gamma + ln x + int_0^x (cos t - 1)/t dt.
inline double ci(double x) {
    auto f = [](double t) { return t == 0.0 ? 0.0 : (std::cos(t) - 1.0) / t; };
    const double pi = std::numbers::pi;
    double acc = 0.0;
    double a = 0.0;
    while (a + pi < x) {
        acc += integrate(f, a, a + pi);
        a += pi;
    }
    return kGamma + std::log(x) + acc + integrate(f, a, x);
}

/// Induced-EMF self-impedance closed form with quadrature-backed Si/Ci.
inline std::complex<double> self_impedance(double length, double wavelength, double eta0,
                                           double wire_radius) {
    const double pi = std::numbers::pi;
    const double k = 2.0 * pi / wavelength;
    const double kl = k * length;
    const double r =
        eta0 / (2.0 * pi) *
        (kGamma + std::log(kl) - ci(kl) + 0.5 * std::sin(kl) * (si(2.0 * kl) - 2.0 * si(kl)) +
         0.5 * std::cos(kl) *
             (kGamma + std::log(kl / 2.0) + ci(2.0 * kl) - 2.0 * ci(kl)));
    const double x =
        eta0 / (4.0 * pi) *
        (2.0 * si(kl) + std::cos(kl) * (2.0 * si(kl) - si(2.0 * kl)) -
         std::sin(kl) *
             (2.0 * ci(kl) - ci(2.0 * kl) - ci(2.0 * k * wire_radius * wire_radius / length)));
    return {r, x};
}

/// Side-by-side parallel mutual impedance closed form with quadrature Si/Ci.
inline std::complex<double> mutual_impedance(double separation, double length,
                                             double wavelength, double eta0) {
    const double pi = std::numbers::pi;
    const double k = 2.0 * pi / wavelength;
    const double u0 = k * separation;
    const double diag = std::sqrt(separation * separation + length * length);
    const double u1 = k * (diag + length);
    const double u2 = k * (diag - length);
    const double r = eta0 / (4.0 * pi) * (2.0 * ci(u0) - ci(u1) - ci(u2));
    const double x = -eta0 / (4.0 * pi) * (2.0 * si(u0) - si(u1) - si(u2));
    return {r, x};
}

/// Straight-line evaluation of the far-field transfer impedance formula.
inline std::complex<double> farfield_transfer(double r, double wavelength, double eta0) {
    const double pi = std::numbers::pi;
    const double k = 2.0 * pi / wavelength;
    const double l_eff = wavelength / pi;
    const std::complex<double> j(0.0, 1.0);
    return j * eta0 * k * l_eff * l_eff / (4.0 * pi) * std::exp(-j * k * r) / r;
}

}  // namespace oracle

#endif
