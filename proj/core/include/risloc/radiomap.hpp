#ifndef RISLOC_RADIOMAP_HPP
#define RISLOC_RADIOMAP_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "risloc/ris_channel.hpp"

namespace risloc {

/// Regular square lattice of reference locations, row-major, all at the
/// same antenna height. Points sit at cell centers so L = (side/spacing)^2.
struct ReferenceGrid {
    std::vector<Vec3> points;
    double spacing = 0.0;
    double height = 1.5;

    std::size_t size() const { return points.size(); }

    static ReferenceGrid square(double side, double spacing, double height = 1.5);
};

/// The configuration superset S-tilde together with the seed it came from.
struct ConfigurationSet {
    std::vector<RisConfiguration> configs;
    std::uint64_t seed = 0;

    std::size_t size() const { return configs.size(); }
};

/// 10 uniform + 10 linear-ramp + 30 random configurations drawn from the
/// codebook, loads purely reactive. Deterministic in the seed.
ConfigurationSet generate_configuration_set(const LoadCodebook& codebook, std::size_t n,
                                            std::uint64_t seed,
                                            std::size_t n_uniform = 10,
                                            std::size_t n_ramp = 10,
                                            std::size_t n_random = 30);

/// Offline fingerprint database: L x M RSSI matrix, dBm. Entries are
/// quantized to 1e-6 dBm so file persistence is exact by construction.
struct RadioMap {
    std::vector<double> rssi;  // row-major L x M
    ReferenceGrid grid;
    std::vector<std::string> config_ids;
    std::uint64_t scenario_hash = 0;
    std::uint64_t seed = 0;
    int averaging_k = 1;

    std::size_t locations() const { return grid.size(); }
    std::size_t configurations() const { return config_ids.size(); }

    double at(std::size_t l, std::size_t m) const { return rssi[l * configurations() + m]; }
    std::span<const double> row(std::size_t l) const {
        return {rssi.data() + l * configurations(), configurations()};
    }
};

/// Entry (l, m) = mean of K independent RSSI samples at grid point l under
/// configuration m. Per-cell RNG substreams: the result does not depend on
/// evaluation order, so `threads` never changes the output.
RadioMap build_radio_map(const Scenario& s, const ReferenceGrid& grid,
                         const ConfigurationSet& configs, int averaging_k,
                         std::uint64_t seed, int threads = 1);

/// Column slice preserving subset order; grid unchanged.
RadioMap restrict(const RadioMap& map, std::span<const std::size_t> config_subset);

/// Row slice (e.g. the training locations of a split).
RadioMap restrict_rows(const RadioMap& map, std::span<const std::size_t> rows);

/// Disjoint train/validation split over location indices, |train| = floor(L*fraction).
struct LocationSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
};

LocationSplit split_locations(std::size_t location_count, std::uint64_t seed,
                              double fraction = 0.1);

class MapFormatError : public std::runtime_error {
  public:
    explicit MapFormatError(const std::string& what) : std::runtime_error(what) {}
};

/// Text container: header block, then one CSV row per location
/// (x, y, M RSSI values, 6 decimal places). Round-trip is bit-exact.
void save_radio_map(const RadioMap& map, const std::string& path);
RadioMap load_radio_map(const std::string& path);

/// Configuration-set sidecar: one line per configuration,
/// "id class x1 x2 ... xN" (reactances, ohm).
void save_configuration_set(const ConfigurationSet& set, const std::string& path);
ConfigurationSet load_configuration_set(const std::string& path);

}  // namespace risloc

#endif
