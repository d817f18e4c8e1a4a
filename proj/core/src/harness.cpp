#include "risloc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include "risloc/rng.hpp"

namespace risloc {
namespace {

constexpr std::uint64_t kConfigSetTag = 0x636667ULL;
constexpr std::uint64_t kExp1Tag = 0xE1ULL;
constexpr std::uint64_t kExp2Tag = 0xE2ULL;

template <typename T>
std::string join(const std::vector<T>& v) {
    std::ostringstream out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ',';
        out << v[i];
    }
    return out.str();
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    const std::size_t n_workers = std::min<std::size_t>(threads, n);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= n) return;
                    body(i);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

/// kNN mean error of full-width queries against the map restricted to
/// `subset` columns (full location database).
double mean_subset_error(const RadioMap& map, std::span<const std::size_t> subset,
                         const std::vector<RssiVector>& full_queries, std::size_t knn_k,
                         std::vector<double>* per_query_errors = nullptr) {
    const RadioMap sub = restrict(map, subset);
    const std::size_t k = std::min(knn_k, sub.locations());
    RssiVector q;
    q.values.resize(subset.size());
    double acc = 0.0;
    for (const RssiVector& full : full_queries) {
        for (std::size_t i = 0; i < subset.size(); ++i) q.values[i] = full.values[subset[i]];
        const Estimate est = knn_localize(q, sub, k);
        const double err = distance(est.position, *full.truth);
        acc += err;
        if (per_query_errors) per_query_errors->push_back(err);
    }
    return acc / static_cast<double>(full_queries.size());
}

SelectionResult run_selector(const std::string& method, const RadioMap& map,
                             const LocationSplit& split, std::size_t m,
                             const ExperimentConfig& cfg, const Scenario& scenario,
                             std::uint64_t seed) {
    if (method == "ga-fs") {
        GaParams ga = cfg.ga;
        ga.knn_k = cfg.knn_k;
        return ga_feature_select(map, split, m, ga, scenario, seed);
    }
    // HSS needs no held-out data: it scores the whole offline map.
    if (method == "hss-greedy") return hss_greedy(map, m);
    if (method == "hss-exhaustive") return hss_exhaustive(map, m);
    if (method == "random") return random_select(map.configurations(), m, seed);
    throw ConfigError("unknown selector '" + method +
                      "' (valid: ga-fs, random, hss-greedy, hss-exhaustive)");
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file " + path.string());
    return out;
}

void write_manifest_header(std::ostream& out, const ExperimentConfig& cfg) {
    out << "master_seed " << cfg.seed << "\n";
    std::istringstream dump(dump_config(cfg));
    std::string line;
    while (std::getline(dump, line)) out << "config." << line << "\n";
}

}  // namespace

void ExperimentConfig::validate() const {
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (subset_m > s_tilde()) throw ConfigError("m exceeds the configuration superset size");
    for (std::size_t m : m_sweep) {
        if (m > s_tilde()) throw ConfigError("m_sweep value exceeds the superset size");
        if (m < 2) throw ConfigError("m_sweep values must be >= 2");
    }
    if (m_sweep.empty()) throw ConfigError("m_sweep must not be empty");
    if (grid_spacings.empty()) throw ConfigError("grid_spacings must not be empty");
    if (selectors.empty()) throw ConfigError("selectors must not be empty");
    for (const std::string& s : selectors) {
        if (s != "ga-fs" && s != "random" && s != "hss-greedy" && s != "hss-exhaustive") {
            throw ConfigError("unknown selector '" + s +
                              "' (valid: ga-fs, random, hss-greedy, hss-exhaustive)");
        }
    }
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ConfigError("train_fraction must be in (0, 1)");
    }
    if (averaging_k < 1) throw ConfigError("averaging_k must be >= 1");
    if (!(codebook_min < codebook_max)) throw ConfigError("codebook_min must be < codebook_max");
    if (codebook_size < 2) throw ConfigError("codebook_size must be >= 2");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    ga.validate();
}

namespace {

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

double parse_double(const std::string& v) { return std::stod(v); }
std::uint64_t parse_u64(const std::string& v) { return std::stoull(v); }

const std::map<std::string, Setter>& config_setters() {
    static const std::map<std::string, Setter> setters = {
        {"frequency", [](auto& c, const auto& v) { c.frequency = parse_double(v); }},
        {"p_ap", [](auto& c, const auto& v) { c.p_ap = parse_double(v); }},
        {"noise_sigma", [](auto& c, const auto& v) { c.noise_sigma = parse_double(v); }},
        {"rx_floor_dbm", [](auto& c, const auto& v) { c.rx_floor_dbm = parse_double(v); }},
        {"room_side", [](auto& c, const auto& v) { c.room_side = parse_double(v); }},
        {"ris_rows", [](auto& c, const auto& v) { c.ris_rows = std::stoi(v); }},
        {"ris_cols", [](auto& c, const auto& v) { c.ris_cols = std::stoi(v); }},
        {"ris_spacing_wavelengths",
         [](auto& c, const auto& v) { c.ris_spacing_wavelengths = parse_double(v); }},
        {"los_enabled", [](auto& c, const auto& v) { c.los_enabled = (v == "1" || v == "true"); }},
        {"burst_period_ms", [](auto& c, const auto& v) { c.burst_period_ms = parse_double(v); }},
        {"z0_ref", [](auto& c, const auto& v) { c.z0_ref = parse_double(v); }},
        {"antenna_height", [](auto& c, const auto& v) { c.antenna_height = parse_double(v); }},
        {"codebook_size", [](auto& c, const auto& v) { c.codebook_size = parse_u64(v); }},
        {"codebook_min", [](auto& c, const auto& v) { c.codebook_min = parse_double(v); }},
        {"codebook_max", [](auto& c, const auto& v) { c.codebook_max = parse_double(v); }},
        {"n_uniform", [](auto& c, const auto& v) { c.n_uniform = parse_u64(v); }},
        {"n_ramp", [](auto& c, const auto& v) { c.n_ramp = parse_u64(v); }},
        {"n_random", [](auto& c, const auto& v) { c.n_random = parse_u64(v); }},
        {"grid_spacings",
         [](auto& c, const auto& v) {
             c.grid_spacings.clear();
             for (const auto& s : split_list(v)) c.grid_spacings.push_back(parse_double(s));
         }},
        {"exp1_grid_spacing",
         [](auto& c, const auto& v) { c.exp1_grid_spacing = parse_double(v); }},
        {"averaging_k", [](auto& c, const auto& v) { c.averaging_k = std::stoi(v); }},
        {"m", [](auto& c, const auto& v) { c.subset_m = parse_u64(v); }},
        {"m_sweep",
         [](auto& c, const auto& v) {
             c.m_sweep.clear();
             for (const auto& s : split_list(v)) c.m_sweep.push_back(parse_u64(s));
         }},
        {"selectors", [](auto& c, const auto& v) { c.selectors = split_list(v); }},
        {"ga_population", [](auto& c, const auto& v) { c.ga.population = parse_u64(v); }},
        {"ga_generations", [](auto& c, const auto& v) { c.ga.generations = parse_u64(v); }},
        {"ga_tournament", [](auto& c, const auto& v) { c.ga.tournament_size = parse_u64(v); }},
        {"ga_crossover_rate",
         [](auto& c, const auto& v) { c.ga.crossover_rate = parse_double(v); }},
        {"ga_mutation_rate",
         [](auto& c, const auto& v) { c.ga.mutation_rate = parse_double(v); }},
        {"ga_elitism", [](auto& c, const auto& v) { c.ga.elitism = parse_u64(v); }},
        {"ga_queries_per_location",
         [](auto& c, const auto& v) { c.ga.queries_per_location = parse_u64(v); }},
        {"knn_k", [](auto& c, const auto& v) { c.knn_k = parse_u64(v); }},
        {"train_fraction", [](auto& c, const auto& v) { c.train_fraction = parse_double(v); }},
        {"trials", [](auto& c, const auto& v) { c.trials = parse_u64(v); }},
        {"seed", [](auto& c, const auto& v) { c.seed = parse_u64(v); }},
        {"out_dir", [](auto& c, const auto& v) { c.out_dir = v; }},
        {"threads", [](auto& c, const auto& v) { c.threads = std::stoi(v); }},
    };
    return setters;
}

std::string valid_keys() {
    std::string keys;
    for (const auto& [k, _] : config_setters()) {
        if (!keys.empty()) keys += ", ";
        keys += k;
    }
    return keys;
}

}  // namespace

ExperimentConfig parse_config_stream(std::istream& in, const std::string& origin) {
    ExperimentConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::size_t eq = line.find('=');
        if (eq != std::string::npos) line[eq] = ' ';  // optional key = value syntax
        std::istringstream row(line);
        std::string key, value;
        if (!(row >> key)) continue;  // blank line
        if (!(row >> value)) {
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": key '" + key + "' has no value");
        }
        const auto it = config_setters().find(key);
        if (it == config_setters().end()) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": unknown key '" + key +
                              "'; valid keys: " + valid_keys());
        }
        try {
            it->second(cfg, value);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": bad value '" + value +
                              "' for key '" + key + "'");
        }
    }
    return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    return parse_config_stream(in, path);
}

std::string dump_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    out << "frequency " << num(cfg.frequency) << "\n";
    out << "p_ap " << num(cfg.p_ap) << "\n";
    out << "noise_sigma " << num(cfg.noise_sigma) << "\n";
    out << "rx_floor_dbm " << num(cfg.rx_floor_dbm) << "\n";
    out << "room_side " << num(cfg.room_side) << "\n";
    out << "ris_rows " << cfg.ris_rows << "\n";
    out << "ris_cols " << cfg.ris_cols << "\n";
    out << "ris_spacing_wavelengths " << num(cfg.ris_spacing_wavelengths) << "\n";
    out << "los_enabled " << (cfg.los_enabled ? 1 : 0) << "\n";
    out << "burst_period_ms " << num(cfg.burst_period_ms) << "\n";
    out << "z0_ref " << num(cfg.z0_ref) << "\n";
    out << "antenna_height " << num(cfg.antenna_height) << "\n";
    out << "codebook_size " << cfg.codebook_size << "\n";
    out << "codebook_min " << num(cfg.codebook_min) << "\n";
    out << "codebook_max " << num(cfg.codebook_max) << "\n";
    out << "n_uniform " << cfg.n_uniform << "\n";
    out << "n_ramp " << cfg.n_ramp << "\n";
    out << "n_random " << cfg.n_random << "\n";
    out << "grid_spacings " << join(cfg.grid_spacings) << "\n";
    out << "exp1_grid_spacing " << num(cfg.exp1_grid_spacing) << "\n";
    out << "averaging_k " << cfg.averaging_k << "\n";
    out << "m " << cfg.subset_m << "\n";
    out << "m_sweep " << join(cfg.m_sweep) << "\n";
    out << "selectors " << join(cfg.selectors) << "\n";
    out << "ga_population " << cfg.ga.population << "\n";
    out << "ga_generations " << cfg.ga.generations << "\n";
    out << "ga_tournament " << cfg.ga.tournament_size << "\n";
    out << "ga_crossover_rate " << num(cfg.ga.crossover_rate) << "\n";
    out << "ga_mutation_rate " << num(cfg.ga.mutation_rate) << "\n";
    out << "ga_elitism " << cfg.ga.elitism << "\n";
    out << "ga_queries_per_location " << cfg.ga.queries_per_location << "\n";
    out << "knn_k " << cfg.knn_k << "\n";
    out << "train_fraction " << num(cfg.train_fraction) << "\n";
    out << "trials " << cfg.trials << "\n";
    out << "seed " << cfg.seed << "\n";
    out << "out_dir " << cfg.out_dir << "\n";
    out << "threads " << cfg.threads << "\n";
    return out.str();
}

Scenario scenario_from_config(const ExperimentConfig& cfg) {
    Scenario s;
    s.wave = Wave::from_frequency(cfg.frequency);
    s.room_side = cfg.room_side;
    s.p_ap = cfg.p_ap;
    s.noise_sigma = cfg.noise_sigma;
    s.rx_floor_dbm = cfg.rx_floor_dbm;
    s.los_enabled = cfg.los_enabled;
    s.burst_period_ms = cfg.burst_period_ms;
    s.z0_ref = cfg.z0_ref;
    const double h = cfg.antenna_height;
    s.ap.position = {-1.0, cfg.room_side + 1.0, h};
    s.ap.length = s.wave.wavelength / 2.0;
    s.ris = build_ris_array(cfg.ris_rows, cfg.ris_cols,
                            cfg.ris_spacing_wavelengths * s.wave.wavelength,
                            {cfg.room_side / 2.0, 0.0, h}, s.wave);
    s.validate();
    return s;
}

std::vector<RssiVector> make_channel_queries(const ChannelWorkspace& ws,
                                             const ReferenceGrid& grid,
                                             std::span<const std::size_t> locations,
                                             std::uint64_t seed, std::uint64_t stream_tag) {
    const std::size_t m_count = ws.config_count();
    std::vector<RssiVector> queries;
    queries.reserve(locations.size());
    for (std::size_t i = 0; i < locations.size(); ++i) {
        const Vec3 p = grid.points[locations[i]];
        RssiVector q;
        q.truth = p;
        q.values.resize(m_count);
        for (std::size_t m = 0; m < m_count; ++m) {
            std::mt19937_64 rng = make_rng(seed, stream_tag, locations[i], m);
            q.values[m] = rssi_sample(ws.scenario(), ws.channel(m, p), rng);
        }
        queries.push_back(std::move(q));
    }
    return queries;
}

void run_experiment_1(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    std::filesystem::create_directories(cfg.out_dir);

    const Scenario scenario = scenario_from_config(cfg);
    const LoadCodebook codebook =
        LoadCodebook::uniform_span(cfg.codebook_size, cfg.codebook_min, cfg.codebook_max);
    const ConfigurationSet configs = generate_configuration_set(
        codebook, scenario.ris.size(), mix64(cfg.seed, kConfigSetTag), cfg.n_uniform,
        cfg.n_ramp, cfg.n_random);
    const ChannelWorkspace ws(scenario, configs.configs);
    const ReferenceGrid grid =
        ReferenceGrid::square(cfg.room_side, cfg.exp1_grid_spacing, cfg.antenna_height);

    std::vector<std::size_t> full_set(configs.size());
    std::iota(full_set.begin(), full_set.end(), 0);

    struct TrialOut {
        std::vector<double> err_fs, err_full, err_rand;
        double ga_fitness = 0.0;
    };
    std::vector<TrialOut> trials(cfg.trials);

    parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
        const std::uint64_t cell_seed = mix64(cfg.seed, kExp1Tag, t);
        const RadioMap map = build_radio_map(scenario, grid, configs, cfg.averaging_k,
                                             mix64(cell_seed, 1));
        const LocationSplit split = split_locations(map.locations(), mix64(cell_seed, 2));
        const std::vector<RssiVector> queries =
            make_channel_queries(ws, grid, split.validation, mix64(cell_seed, 3), 0);

        const SelectionResult ga =
            run_selector("ga-fs", map, split, cfg.subset_m, cfg, scenario, mix64(cell_seed, 4));
        const SelectionResult rnd = run_selector("random", map, split, cfg.subset_m, cfg,
                                                 scenario, mix64(cell_seed, 5));

        TrialOut& out = trials[t];
        out.ga_fitness = ga.fitness;
        mean_subset_error(map, ga.subset, queries, cfg.knn_k, &out.err_fs);
        mean_subset_error(map, full_set, queries, cfg.knn_k, &out.err_full);
        mean_subset_error(map, rnd.subset, queries, cfg.knn_k, &out.err_rand);
    });

    std::vector<double> err_fs, err_full, err_rand;
    for (const TrialOut& t : trials) {
        err_fs.insert(err_fs.end(), t.err_fs.begin(), t.err_fs.end());
        err_full.insert(err_full.end(), t.err_full.begin(), t.err_full.end());
        err_rand.insert(err_rand.end(), t.err_rand.begin(), t.err_rand.end());
    }
    auto mean_of = [](const std::vector<double>& v) {
        return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    };

    // common 0.1 m error levels across the three pooled distributions
    const double max_err = std::max(
        {*std::max_element(err_fs.begin(), err_fs.end()),
         *std::max_element(err_full.begin(), err_full.end()),
         *std::max_element(err_rand.begin(), err_rand.end())});
    const int levels = static_cast<int>(std::ceil(max_err / 0.1)) + 1;
    auto frac_below = [](std::vector<double> v, double e) {
        std::sort(v.begin(), v.end());
        return static_cast<double>(std::upper_bound(v.begin(), v.end(), e) - v.begin()) /
               v.size();
    };

    std::ofstream csv = open_output(std::filesystem::path(cfg.out_dir) / "exp1_cdf.csv");
    csv << "error,cdf_with_fs,cdf_without_fs_full,cdf_without_fs_random\n";
    char buf[160];
    for (int i = 0; i <= levels; ++i) {
        const double e = i * 0.1;
        std::snprintf(buf, sizeof(buf), "%.1f,%.6f,%.6f,%.6f\n", e, frac_below(err_fs, e),
                      frac_below(err_full, e), frac_below(err_rand, e));
        csv << buf;
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ofstream man = open_output(std::filesystem::path(cfg.out_dir) / "exp1_manifest.txt");
    write_manifest_header(man, cfg);
    man << "experiment exp1\n";
    man << "locations " << grid.size() << "\n";
    man << "acquisition_time_ms " << cfg.subset_m * cfg.burst_period_ms << "\n";
    std::snprintf(buf, sizeof(buf), "mean_error_with_fs %.6f\n", mean_of(err_fs));
    man << buf;
    std::snprintf(buf, sizeof(buf), "mean_error_without_fs_full %.6f\n", mean_of(err_full));
    man << buf;
    std::snprintf(buf, sizeof(buf), "mean_error_without_fs_random %.6f\n", mean_of(err_rand));
    man << buf;
    std::snprintf(buf, sizeof(buf), "wall_time_s %.3f\n", wall);
    man << buf;
}

void run_experiment_2(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    std::filesystem::create_directories(cfg.out_dir);

    const Scenario scenario = scenario_from_config(cfg);
    const LoadCodebook codebook =
        LoadCodebook::uniform_span(cfg.codebook_size, cfg.codebook_min, cfg.codebook_max);
    const ConfigurationSet configs = generate_configuration_set(
        codebook, scenario.ris.size(), mix64(cfg.seed, kConfigSetTag), cfg.n_uniform,
        cfg.n_ramp, cfg.n_random);
    const ChannelWorkspace ws(scenario, configs.configs);

    const std::size_t n_grids = cfg.grid_spacings.size();
    const std::size_t n_cells = n_grids * cfg.trials;
    // results[cell][m_index][selector_index] = mean validation error
    std::vector<std::vector<std::vector<double>>> results(
        n_cells, std::vector<std::vector<double>>(cfg.m_sweep.size(),
                                                  std::vector<double>(cfg.selectors.size())));

    parallel_for(n_cells, cfg.threads, [&](std::size_t cell) {
        const std::size_t gi = cell / cfg.trials;
        const std::size_t trial = cell % cfg.trials;
        const ReferenceGrid grid =
            ReferenceGrid::square(cfg.room_side, cfg.grid_spacings[gi], cfg.antenna_height);
        const std::uint64_t cell_seed = mix64(cfg.seed, kExp2Tag, gi, trial);
        const RadioMap map = build_radio_map(scenario, grid, configs, cfg.averaging_k,
                                             mix64(cell_seed, 1));
        const LocationSplit split = split_locations(map.locations(), mix64(cell_seed, 2));
        const std::vector<RssiVector> queries =
            make_channel_queries(ws, grid, split.validation, mix64(cell_seed, 3), 0);

        for (std::size_t mi = 0; mi < cfg.m_sweep.size(); ++mi) {
            for (std::size_t si = 0; si < cfg.selectors.size(); ++si) {
                const SelectionResult sel =
                    run_selector(cfg.selectors[si], map, split, cfg.m_sweep[mi], cfg, scenario,
                                 mix64(cell_seed, 4 + si, cfg.m_sweep[mi]));
                results[cell][mi][si] =
                    mean_subset_error(map, sel.subset, queries, cfg.knn_k);
            }
        }
    });

    char buf[160];
    std::ofstream csv = open_output(std::filesystem::path(cfg.out_dir) / "exp2_error_vs_m.csv");
    csv << "L,M,method,trial,mean_error\n";
    std::ofstream agg =
        open_output(std::filesystem::path(cfg.out_dir) / "exp2_error_vs_m_agg.csv");
    agg << "L,M,method,mean_error,std_error\n";
    std::ofstream man = open_output(std::filesystem::path(cfg.out_dir) / "exp2_manifest.txt");
    write_manifest_header(man, cfg);
    man << "experiment exp2\n";

    for (std::size_t gi = 0; gi < n_grids; ++gi) {
        const ReferenceGrid grid =
            ReferenceGrid::square(cfg.room_side, cfg.grid_spacings[gi], cfg.antenna_height);
        const std::size_t l_count = grid.size();
        for (std::size_t mi = 0; mi < cfg.m_sweep.size(); ++mi) {
            man << "acquisition_time_ms_L" << l_count << "_M" << cfg.m_sweep[mi] << ' '
                << cfg.m_sweep[mi] * cfg.burst_period_ms << "\n";
            for (std::size_t si = 0; si < cfg.selectors.size(); ++si) {
                double sum = 0.0, sumsq = 0.0;
                for (std::size_t t = 0; t < cfg.trials; ++t) {
                    const double e = results[gi * cfg.trials + t][mi][si];
                    std::snprintf(buf, sizeof(buf), "%zu,%zu,%s,%zu,%.6f\n", l_count,
                                  cfg.m_sweep[mi], cfg.selectors[si].c_str(), t, e);
                    csv << buf;
                    sum += e;
                    sumsq += e * e;
                }
                const double mean = sum / cfg.trials;
                const double var =
                    cfg.trials > 1 ? std::max(0.0, (sumsq - cfg.trials * mean * mean) /
                                                       (cfg.trials - 1))
                                   : 0.0;
                std::snprintf(buf, sizeof(buf), "%zu,%zu,%s,%.6f,%.6f\n", l_count,
                              cfg.m_sweep[mi], cfg.selectors[si].c_str(), mean,
                              std::sqrt(var));
                agg << buf;
                std::snprintf(buf, sizeof(buf), "mean_error_L%zu_M%zu_%s %.6f\n", l_count,
                              cfg.m_sweep[mi], cfg.selectors[si].c_str(), mean);
                man << buf;
            }
        }
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::snprintf(buf, sizeof(buf), "wall_time_s %.3f\n", wall);
    man << buf;
}

}  // namespace risloc
