#ifndef RISLOC_EM_DIPOLE_HPP
#define RISLOC_EM_DIPOLE_HPP

#include <complex>

#include "risloc/geometry.hpp"

namespace risloc {

inline constexpr double kSpeedOfLight = 299792458.0;       // m/s
inline constexpr double kFreeSpaceImpedance = 376.730313668;  // ohm
inline constexpr double kEulerGamma = 0.57721566490153286;

// Switch point between the power-series and continued-fraction evaluation
// of Si/Ci. Both sides agree to better than 1e-12 here (tested).
inline constexpr double kSiCiSeriesLimit = 6.0;

// Thin-wire radius used by the self-reactance term, as a fraction of the
// wavelength. Only the reactance of non-resonant lengths depends on it.
inline constexpr double kWireRadiusOverWavelength = 1e-3;

using Impedance = std::complex<double>;

/// Carrier wave constants derived from the frequency.
struct Wave {
    double frequency;   // Hz
    double wavelength;  // m
    double wavenumber;  // rad/m
    double eta0 = kFreeSpaceImpedance;

    static Wave from_frequency(double hz);
};

/// Center-fed thin-wire dipole. All antennas in the scene are vertically
/// oriented half-wave dipoles unless stated otherwise.
struct Dipole {
    Vec3 position;
    double length;                    // m
    Vec3 orientation{0.0, 0.0, 1.0};  // unit vector
};

/// Si(x) = int_0^x sin(t)/t dt, absolute error <= 1e-10 for x >= 0.
double sine_integral(double x);

/// Ci(x) = gamma + ln x + int_0^x (cos t - 1)/t dt, x > 0, abs error <= 1e-10.
double cosine_integral(double x);

/// Induced-EMF self-impedance of a center-fed thin dipole.
/// Valid for lengths in [0.1, 1.0] wavelengths.
Impedance self_impedance(const Dipole& d, const Wave& w);

/// Induced-EMF mutual impedance of two equal-length parallel dipoles in the
/// side-by-side arrangement, with the lateral separation taken as the
/// distance between the dipole centers. Symmetric in its arguments.
Impedance mutual_impedance_parallel(const Dipole& d1, const Dipole& d2, const Wave& w);

/// Far-field transfer impedance between two scene nodes:
///   Z(r) = j * eta0 * k * l_eff^2 / (4 pi) * exp(-j k r) / r
/// with l_eff = lambda/pi (half-wave effective length). Below one wavelength
/// a validity warning is logged and the value is still returned.
Impedance farfield_transfer_impedance(const Dipole& p1, const Dipole& p2, const Wave& w);

}  // namespace risloc

#endif
