#include "risloc/ris_channel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace risloc {

std::string to_string(ConfigClass c) {
    switch (c) {
        case ConfigClass::Uniform: return "uniform";
        case ConfigClass::LinearRamp: return "linear-ramp";
        case ConfigClass::Random: return "random";
    }
    return "random";
}

ConfigClass config_class_from_string(const std::string& s) {
    if (s == "uniform") return ConfigClass::Uniform;
    if (s == "linear-ramp") return ConfigClass::LinearRamp;
    if (s == "random") return ConfigClass::Random;
    throw std::invalid_argument("unknown configuration class: " + s);
}

LoadCodebook LoadCodebook::uniform_span(std::size_t d, double lo, double hi) {
    if (d < 2 || !(lo < hi)) {
        throw std::domain_error("LoadCodebook: need d >= 2 and lo < hi");
    }
    LoadCodebook cb;
    cb.reactances.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        cb.reactances[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(d - 1);
    }
    return cb;
}

double LoadCodebook::quantize(double x) const {
    auto it = std::lower_bound(reactances.begin(), reactances.end(), x);
    if (it == reactances.begin()) return *it;
    if (it == reactances.end()) return reactances.back();
    const double hi = *it;
    const double lo = *(it - 1);
    return (x - lo <= hi - x) ? lo : hi;
}

void LoadCodebook::validate() const {
    if (reactances.empty()) throw std::domain_error("LoadCodebook: empty");
    for (std::size_t i = 1; i < reactances.size(); ++i) {
        if (!(reactances[i] > reactances[i - 1])) {
            throw std::domain_error("LoadCodebook: reactances must be strictly increasing");
        }
    }
}

RisArray build_ris_array(int rows, int cols, double spacing, const Vec3& center,
                         const Wave& w) {
    if (rows < 1 || cols < 1) throw std::domain_error("build_ris_array: rows, cols >= 1");
    if (!(spacing > 0.0)) throw std::domain_error("build_ris_array: spacing must be positive");
    RisArray a;
    a.rows = rows;
    a.cols = cols;
    a.spacing = spacing;
    a.center = center;
    a.elements.reserve(static_cast<std::size_t>(rows) * cols);
    // Wall plane: columns run along x, rows stack along z, top row first.
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            Dipole d;
            d.length = w.wavelength / 2.0;
            d.position = {center.x + (c - (cols - 1) / 2.0) * spacing,
                          center.y,
                          center.z + ((rows - 1) / 2.0 - r) * spacing};
            a.elements.push_back(d);
        }
    }
    return a;
}

void Scenario::validate() const {
    if (!(p_ap > 0.0)) throw std::domain_error("Scenario: p_ap must be positive");
    if (!(noise_sigma >= 0.0)) throw std::domain_error("Scenario: noise_sigma must be >= 0");
    if (!(room_side > 0.0) || !std::isfinite(room_side)) {
        throw std::domain_error("Scenario: invalid room size");
    }
    if (ris.elements.empty()) throw std::domain_error("Scenario: RIS has no elements");
}

std::uint64_t Scenario::hash() const {
    char buf[512];
    const int n = std::snprintf(
        buf, sizeof(buf),
        "room=%.9g ap=%.9g,%.9g,%.9g ris=%dx%d@%.9g c=%.9g,%.9g,%.9g f=%.9g "
        "p=%.9g sigma=%.9g floor=%.9g los=%d t=%.9g z0=%.9g",
        room_side, ap.position.x, ap.position.y, ap.position.z, ris.rows, ris.cols,
        ris.spacing, ris.center.x, ris.center.y, ris.center.z, wave.frequency, p_ap,
        noise_sigma, rx_floor_dbm, los_enabled ? 1 : 0, burst_period_ms, z0_ref);
    std::uint64_t h = 14695981039346656037ULL;
    for (int i = 0; i < n; ++i) {
        h ^= static_cast<unsigned char>(buf[i]);
        h *= 1099511628211ULL;
    }
    return h;
}

Scenario make_default_scenario() {
    Scenario s;
    s.wave = Wave::from_frequency(2.4e9);
    const double h = 1.5;
    s.ap.position = {-1.0, 21.0, h};
    s.ap.length = s.wave.wavelength / 2.0;
    s.ris = build_ris_array(4, 4, s.wave.wavelength / 2.0, {10.0, 0.0, h}, s.wave);
    return s;
}

ComplexMatrix coupling_matrix(const RisArray& ris, const Wave& w) {
    const std::size_t n = ris.size();
    ComplexMatrix z(n, n);
    for (std::size_t u = 0; u < n; ++u) {
        z(u, u) = self_impedance(ris.elements[u], w);
        for (std::size_t v = u + 1; v < n; ++v) {
            const Impedance m = mutual_impedance_parallel(ris.elements[u], ris.elements[v], w);
            z(u, v) = m;
            z(v, u) = m;
        }
    }
    return z;
}

ComplexMatrix reflection_matrix(const ComplexMatrix& z_ss, const RisConfiguration& config) {
    const std::size_t n = z_ss.rows();
    if (config.loads.size() != n) {
        throw std::invalid_argument("reflection_matrix: load count does not match Z_SS");
    }
    ComplexMatrix a = z_ss;
    for (std::size_t i = 0; i < n; ++i) a(i, i) += config.loads[i];
    ComplexMatrix phi;
    try {
        phi = invert_lu(a);
    } catch (const SingularMatrixError&) {
        throw SingularMatrixError("reflection_matrix: singular Z_SS + Z_L for configuration '" +
                                  config.id + "'");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) phi(i, j) = -phi(i, j);
    }
    return phi;
}

std::vector<Complex> transfer_vector(const Dipole& node, const RisArray& ris, const Wave& w) {
    std::vector<Complex> z(ris.size());
    for (std::size_t u = 0; u < ris.size(); ++u) {
        z[u] = farfield_transfer_impedance(node, ris.elements[u], w);
    }
    return z;
}

namespace {

Dipole mu_dipole(const Scenario& s, const Vec3& mu) {
    Dipole d;
    d.position = mu;
    d.length = s.wave.wavelength / 2.0;
    return d;
}

void check_mu(const Scenario& s, const Vec3& mu) {
    if (mu.x < 0.0 || mu.x > s.room_side || mu.y < 0.0 || mu.y > s.room_side) {
        throw std::domain_error("end_to_end_channel: MU position outside the room");
    }
    if (distance(mu, s.ap.position) == 0.0) {
        throw std::domain_error("end_to_end_channel: MU coincides with the AP");
    }
    for (const Dipole& e : s.ris.elements) {
        if (distance(mu, e.position) == 0.0) {
            throw std::domain_error("end_to_end_channel: MU coincides with a RIS element");
        }
    }
}

}  // namespace

Complex end_to_end_channel(const Scenario& s, const RisConfiguration& config, const Vec3& mu) {
    check_mu(s, mu);
    const Dipole rx = mu_dipole(s, mu);
    const ComplexMatrix z_ss = coupling_matrix(s.ris, s.wave);
    const ComplexMatrix phi = reflection_matrix(z_ss, config);
    const std::vector<Complex> z_rs = transfer_vector(rx, s.ris, s.wave);
    const std::vector<Complex> z_ts = transfer_vector(s.ap, s.ris, s.wave);

    Complex h = 0.0;
    const std::vector<Complex> phi_zts = phi * z_ts;
    for (std::size_t u = 0; u < z_rs.size(); ++u) h += z_rs[u] * phi_zts[u];
    if (s.los_enabled) h += farfield_transfer_impedance(s.ap, rx, s.wave);
    return h / s.z0_ref;
}

double rssi_sample(const Scenario& s, Complex h, std::mt19937_64& rng) {
    const double p = std::norm(h) * s.p_ap;
    if (p <= 0.0) return kRssiFloorDbm;
    double v = 30.0 + 10.0 * std::log10(p);
    if (s.noise_sigma > 0.0) {
        std::normal_distribution<double> noise(0.0, s.noise_sigma);
        v += noise(rng);
    }
    return std::max(v, s.rx_floor_dbm);
}

ChannelWorkspace::ChannelWorkspace(const Scenario& s,
                                   const std::vector<RisConfiguration>& configs)
    : scenario_(s) {
    scenario_.validate();
    const ComplexMatrix z_ss = coupling_matrix(s.ris, s.wave);
    const std::vector<Complex> z_ts = transfer_vector(s.ap, s.ris, s.wave);
    phis_.reserve(configs.size());
    phi_z_ts_.reserve(configs.size());
    for (const RisConfiguration& c : configs) {
        phis_.push_back(reflection_matrix(z_ss, c));
        phi_z_ts_.push_back(phis_.back() * z_ts);
    }
}

Complex ChannelWorkspace::channel(std::size_t config_index, const Vec3& mu) const {
    check_mu(scenario_, mu);
    const Dipole rx = mu_dipole(scenario_, mu);
    const std::vector<Complex> z_rs = transfer_vector(rx, scenario_.ris, scenario_.wave);
    Complex h = 0.0;
    const std::vector<Complex>& pz = phi_z_ts_[config_index];
    for (std::size_t u = 0; u < z_rs.size(); ++u) h += z_rs[u] * pz[u];
    if (scenario_.los_enabled) {
        h += farfield_transfer_impedance(scenario_.ap, rx, scenario_.wave);
    }
    return h / scenario_.z0_ref;
}

}  // namespace risloc
