#ifndef RISLOC_HARNESS_HPP
#define RISLOC_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "risloc/radiomap.hpp"
#include "risloc/selection.hpp"

namespace risloc {

class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Everything a run needs; defaults reproduce the reference indoor scenario.
struct ExperimentConfig {
    // scenario
    double frequency = 2.4e9;
    double p_ap = 0.1;
    double noise_sigma = 3.0;
    double rx_floor_dbm = -90.0;
    double room_side = 20.0;
    int ris_rows = 4;
    int ris_cols = 4;
    double ris_spacing_wavelengths = 0.5;
    bool los_enabled = false;
    double burst_period_ms = 100.0;
    double z0_ref = 50.0;
    double antenna_height = 1.5;
    // load codebook and configuration superset
    std::size_t codebook_size = 200;
    double codebook_min = -300.0;
    double codebook_max = 300.0;
    std::size_t n_uniform = 10;
    std::size_t n_ramp = 10;
    std::size_t n_random = 30;
    // radio maps
    std::vector<double> grid_spacings = {2.0, 1.0};  // experiment 2 sweep
    double exp1_grid_spacing = 1.0;
    int averaging_k = 10;
    // selection and localization
    std::size_t subset_m = 15;
    std::vector<std::size_t> m_sweep = {4, 8, 12, 16, 20, 24, 28};
    std::vector<std::string> selectors = {"ga-fs", "random", "hss-greedy"};
    GaParams ga;
    std::size_t knn_k = 5;
    double train_fraction = 0.1;
    // run control
    std::size_t trials = 20;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    int threads = 1;

    std::size_t s_tilde() const { return n_uniform + n_ramp + n_random; }
    void validate() const;
};

/// Key-value text config; '#' starts a comment, unknown keys are an error
/// naming the valid keys, missing keys keep their defaults.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_stream(std::istream& in, const std::string& origin);
std::string dump_config(const ExperimentConfig& cfg);

Scenario scenario_from_config(const ExperimentConfig& cfg);

/// One fresh-noise query per listed location: single-sample RSSI over every
/// configuration in the workspace, truth = grid coordinate. Per-(location,
/// config) substreams keyed by (seed, stream_tag).
std::vector<RssiVector> make_channel_queries(const ChannelWorkspace& ws,
                                             const ReferenceGrid& grid,
                                             std::span<const std::size_t> locations,
                                             std::uint64_t seed, std::uint64_t stream_tag);

/// Fig.-4 style run: error CDFs with FS (GA subset) and without
/// (full superset and random-M baselines), pooled over trials.
/// Writes exp1_cdf.csv and exp1_manifest.txt under cfg.out_dir.
void run_experiment_1(const ExperimentConfig& cfg);

/// Fig.-5 style run: mean error vs M for each selector, grid density and
/// trial. Writes exp2_error_vs_m.csv, exp2_error_vs_m_agg.csv and
/// exp2_manifest.txt under cfg.out_dir.
void run_experiment_2(const ExperimentConfig& cfg);

}  // namespace risloc

#endif
