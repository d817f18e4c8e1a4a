#include "risloc/em_dipole.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace risloc {
namespace {

constexpr double kPi = std::numbers::pi;

// E1(z) by the modified Lentz continued fraction. Used on the imaginary
// axis z = i x for x >= kSiCiSeriesLimit, where convergence is rapid.
std::complex<double> expint_e1_cf(std::complex<double> z) {
    const double tiny = 1e-300;
    std::complex<double> b = z + 1.0;
    std::complex<double> c = 1.0 / tiny;
    std::complex<double> d = 1.0 / b;
    std::complex<double> h = d;
    for (int i = 1; i <= 2000; ++i) {
        const double a = -static_cast<double>(i) * static_cast<double>(i);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const std::complex<double> del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) {
            return h * std::exp(-z);
        }
    }
    throw std::runtime_error("expint_e1_cf: continued fraction did not converge");
}

double si_series(double x) {
    // Si(x) = sum_{n>=0} (-1)^n x^(2n+1) / ((2n+1)(2n+1)!)
    const double x2 = x * x;
    double term = x;  // x^(2n+1)/(2n+1)!
    double sum = x;
    for (int n = 1; n < 200; ++n) {
        term *= -x2 / ((2.0 * n) * (2.0 * n + 1.0));
        const double contrib = term / (2.0 * n + 1.0);
        sum += contrib;
        if (std::abs(contrib) < 1e-17 * std::abs(sum) + 1e-300) break;
    }
    return sum;
}

double ci_series(double x) {
    // Ci(x) = gamma + ln x + sum_{n>=1} (-1)^n x^(2n) / ((2n)(2n)!)
    const double x2 = x * x;
    double term = 1.0;  // (-1)^n x^(2n)/(2n)!
    double sum = 0.0;
    for (int n = 1; n < 200; ++n) {
        term *= -x2 / ((2.0 * n - 1.0) * (2.0 * n));
        const double contrib = term / (2.0 * n);
        sum += contrib;
        if (std::abs(contrib) < 1e-17 * (std::abs(sum) + 1.0) + 1e-300) break;
    }
    return kEulerGamma + std::log(x) + sum;
}

}  // namespace

Wave Wave::from_frequency(double hz) {
    if (!(hz > 0.0) || !std::isfinite(hz)) {
        throw std::domain_error("Wave: frequency must be positive and finite");
    }
    Wave w;
    w.frequency = hz;
    w.wavelength = kSpeedOfLight / hz;
    w.wavenumber = 2.0 * kPi / w.wavelength;
    return w;
}

double sine_integral(double x) {
    if (!std::isfinite(x) || x < 0.0) {
        throw std::domain_error("sine_integral: x must be finite and non-negative");
    }
    if (x < kSiCiSeriesLimit) return si_series(x);
    // E1(ix) = -Ci(x) + i (Si(x) - pi/2)
    const std::complex<double> e1 = expint_e1_cf({0.0, x});
    return kPi / 2.0 + e1.imag();
}

double cosine_integral(double x) {
    if (!std::isfinite(x) || x <= 0.0) {
        throw std::domain_error("cosine_integral: x must be finite and positive");
    }
    if (x < kSiCiSeriesLimit) return ci_series(x);
    const std::complex<double> e1 = expint_e1_cf({0.0, x});
    return -e1.real();
}

Impedance self_impedance(const Dipole& d, const Wave& w) {
    const double lambda = w.wavelength;
    if (!(d.length >= 0.1 * lambda && d.length <= 1.0 * lambda)) {
        throw std::domain_error("self_impedance: length outside [0.1, 1.0] wavelengths");
    }
    const double k = w.wavenumber;
    const double l = d.length;
    const double kl = k * l;
    const double a = kWireRadiusOverWavelength * lambda;

    const double si_kl = sine_integral(kl);
    const double si_2kl = sine_integral(2.0 * kl);
    const double ci_kl = cosine_integral(kl);
    const double ci_2kl = cosine_integral(2.0 * kl);
    const double sin_kl = std::sin(kl);
    const double cos_kl = std::cos(kl);

    const double r =
        w.eta0 / (2.0 * kPi) *
        (kEulerGamma + std::log(kl) - ci_kl +
         0.5 * sin_kl * (si_2kl - 2.0 * si_kl) +
         0.5 * cos_kl * (kEulerGamma + std::log(kl / 2.0) + ci_2kl - 2.0 * ci_kl));
    const double x =
        w.eta0 / (4.0 * kPi) *
        (2.0 * si_kl + cos_kl * (2.0 * si_kl - si_2kl) -
         sin_kl * (2.0 * ci_kl - ci_2kl - cosine_integral(2.0 * k * a * a / l)));
    return {r, x};
}

Impedance mutual_impedance_parallel(const Dipole& d1, const Dipole& d2, const Wave& w) {
    if (d1.length != d2.length) {
        throw std::domain_error("mutual_impedance_parallel: lengths must be equal");
    }
    if (d1.orientation.cross(d2.orientation).norm() > 1e-12) {
        throw std::domain_error("mutual_impedance_parallel: orientations must be parallel");
    }
    const double s = distance(d1.position, d2.position);
    if (s <= 0.0) {
        throw std::domain_error(
            "mutual_impedance_parallel: zero separation (use self_impedance)");
    }
    const double k = w.wavenumber;
    const double l = d1.length;
    const double u0 = k * s;
    const double diag = std::sqrt(s * s + l * l);
    const double u1 = k * (diag + l);
    const double u2 = k * (diag - l);

    const double r = w.eta0 / (4.0 * kPi) *
                     (2.0 * cosine_integral(u0) - cosine_integral(u1) - cosine_integral(u2));
    const double x = -w.eta0 / (4.0 * kPi) *
                     (2.0 * sine_integral(u0) - sine_integral(u1) - sine_integral(u2));
    return {r, x};
}

Impedance farfield_transfer_impedance(const Dipole& p1, const Dipole& p2, const Wave& w) {
    const double r = distance(p1.position, p2.position);
    if (r <= 0.0) {
        throw std::domain_error("farfield_transfer_impedance: coincident positions");
    }
    if (r < w.wavelength) {
        std::cerr << "[risloc] warning: far-field transfer impedance evaluated at r="
                  << r << " m < lambda=" << w.wavelength << " m\n";
    }
    const double l_eff = w.wavelength / kPi;
    const double amp = w.eta0 * w.wavenumber * l_eff * l_eff / (4.0 * kPi);
    const double kr = w.wavenumber * r;
    const std::complex<double> j(0.0, 1.0);
    return j * amp * std::exp(-j * kr) / r;
}

}  // namespace risloc
