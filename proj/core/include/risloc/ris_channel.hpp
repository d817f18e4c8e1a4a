#ifndef RISLOC_RIS_CHANNEL_HPP
#define RISLOC_RIS_CHANNEL_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "risloc/em_dipole.hpp"
#include "risloc/linalg.hpp"

namespace risloc {

/// RSSI reported when the channel carries no power at all.
inline constexpr double kRssiFloorDbm = -200.0;

enum class ConfigClass { Uniform, LinearRamp, Random };

std::string to_string(ConfigClass c);
ConfigClass config_class_from_string(const std::string& s);

/// One RIS state: the N load impedances, purely reactive after quantization.
struct RisConfiguration {
    std::vector<Impedance> loads;
    std::string id;
    ConfigClass cls = ConfigClass::Random;
};

/// The D discrete reactance values a load may take, strictly increasing.
struct LoadCodebook {
    std::vector<double> reactances;  // ohm

    std::size_t size() const { return reactances.size(); }

    /// D values uniformly spaced over [lo, hi].
    static LoadCodebook uniform_span(std::size_t d, double lo, double hi);

    /// Nearest codebook value.
    double quantize(double x) const;

    void validate() const;
};

/// Regular rows x cols grid of half-wave dipoles in the x-z wall plane,
/// row-major element order, centered at `center`.
struct RisArray {
    std::vector<Dipole> elements;
    int rows = 0;
    int cols = 0;
    double spacing = 0.0;
    Vec3 center;

    std::size_t size() const { return elements.size(); }
};

RisArray build_ris_array(int rows, int cols, double spacing, const Vec3& center,
                         const Wave& w);

/// Immutable scene description; defaults reproduce the reference indoor
/// scenario (20x20 m room, 4x4 RIS on the bottom wall, AP outside the top
/// left corner, 2.4 GHz, 0.1 W, 3 dBm shadowing, no direct AP-MU LOS).
struct Scenario {
    double room_side = 20.0;  // room is [0, room_side]^2 in x,y
    Dipole ap;
    RisArray ris;
    Wave wave;
    double p_ap = 0.1;         // W
    double noise_sigma = 3.0;  // dBm
    /// Receiver sensitivity: reported RSSI is censored at this level, as a
    /// real receiver cannot read below its noise floor. Deep-fade readings
    /// therefore carry no information, matching measured-fingerprint
    /// behavior. Set very low to disable.
    double rx_floor_dbm = -90.0;
    bool los_enabled = false;
    double burst_period_ms = 100.0;
    double z0_ref = 50.0;  // ohm, normalization making H dimensionless

    void validate() const;

    /// FNV-1a hash over the canonical parameter serialization; identifies
    /// the scenario a radio map was generated from.
    std::uint64_t hash() const;
};

Scenario make_default_scenario();

/// N x N mutual-coupling matrix Z_SS: self-impedance on the diagonal,
/// parallel mutual impedance off it.
ComplexMatrix coupling_matrix(const RisArray& ris, const Wave& w);

/// Phi = -(Z_SS + diag(loads))^-1 by partially pivoted LU.
ComplexMatrix reflection_matrix(const ComplexMatrix& z_ss, const RisConfiguration& config);

/// Far-field transfer impedances from `node` to every array element,
/// in element order.
std::vector<Complex> transfer_vector(const Dipole& node, const RisArray& ris, const Wave& w);

/// Dimensionless end-to-end channel H = (H_LOS + z_RS^T Phi z_TS) / z0_ref
/// for a mobile user at `mu`.
Complex end_to_end_channel(const Scenario& s, const RisConfiguration& config, const Vec3& mu);

/// RSSI_l = max(rx_floor_dbm, 30 + 10 log10(|H|^2 p_ap) + X),
/// X ~ N(0, noise_sigma^2). H = 0 maps to the kRssiFloorDbm sentinel (noise
/// added on top would be meaningless there, so the sentinel is returned
/// as-is).
double rssi_sample(const Scenario& s, Complex h, std::mt19937_64& rng);

/// Caches Phi per configuration and z_TS for the AP so radio-map generation
/// costs one z_RS evaluation plus a vector-matrix-vector product per cell.
class ChannelWorkspace {
  public:
    ChannelWorkspace(const Scenario& s, const std::vector<RisConfiguration>& configs);

    Complex channel(std::size_t config_index, const Vec3& mu) const;
    std::size_t config_count() const { return phis_.size(); }
    const Scenario& scenario() const { return scenario_; }

  private:
    Scenario scenario_;
    std::vector<ComplexMatrix> phis_;
    std::vector<std::vector<Complex>> phi_z_ts_;  // Phi * z_TS, per config
};

}  // namespace risloc

#endif
