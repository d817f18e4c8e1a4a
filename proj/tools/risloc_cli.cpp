// risloc command line: radio-map generation, configuration subset
// selection, one-shot localization and the two experiment runners.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "risloc/harness.hpp"
#include "risloc/rng.hpp"

namespace fs = std::filesystem;
using namespace risloc;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "key-value config file");
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "master seed")->each([&](const std::string&) {
        opts.seed_set = true;
    });
    cmd->add_option("--threads", opts.threads, "worker thread count");
}

ExperimentConfig load_config(const CommonOpts& opts) {
    ExperimentConfig cfg;
    if (!opts.config_path.empty()) cfg = parse_config(opts.config_path);
    if (opts.seed_set) cfg.seed = opts.seed;
    if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
    if (opts.threads > 0) cfg.threads = opts.threads;
    return cfg;
}

struct MapBundle {
    RadioMap map;
    ConfigurationSet configs;
};

MapBundle generate_map(const ExperimentConfig& cfg, double grid_spacing) {
    const Scenario scenario = scenario_from_config(cfg);
    const LoadCodebook codebook =
        LoadCodebook::uniform_span(cfg.codebook_size, cfg.codebook_min, cfg.codebook_max);
    ConfigurationSet configs = generate_configuration_set(
        codebook, scenario.ris.size(), mix64(cfg.seed, 0x636667ULL), cfg.n_uniform, cfg.n_ramp,
        cfg.n_random);
    const ReferenceGrid grid =
        ReferenceGrid::square(cfg.room_side, grid_spacing, cfg.antenna_height);
    RadioMap map = build_radio_map(scenario, grid, configs, cfg.averaging_k,
                                   mix64(cfg.seed, 0x6d6170ULL), cfg.threads);
    return {std::move(map), std::move(configs)};
}

std::vector<RssiVector> read_queries(const std::string& path, std::size_t m_count,
                                     bool with_truth, double truth_height) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open query file " + path);
    std::vector<RssiVector> queries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string field;
        std::vector<double> vals;
        while (std::getline(row, field, ',')) vals.push_back(std::stod(field));
        const std::size_t expected = m_count + (with_truth ? 2 : 0);
        if (vals.size() != expected) {
            throw std::runtime_error("query file line " + std::to_string(line_no) +
                                     ": expected " + std::to_string(expected) + " fields");
        }
        RssiVector q;
        q.values.assign(vals.begin(), vals.begin() + m_count);
        if (with_truth) q.truth = Vec3{vals[m_count], vals[m_count + 1], truth_height};
        queries.push_back(std::move(q));
    }
    return queries;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS-assisted wireless fingerprint localization toolkit"};
    app.require_subcommand(1);

    CommonOpts opts;
    double grid_spacing = 0.0;
    std::string map_path, method = "ga-fs", query_path, matcher = "knn";
    std::size_t subset_m = 0, knn_k = 0;
    bool with_truth = false;

    CLI::App* gen = app.add_subcommand("gen-map", "generate a radio map and its configuration set");
    add_common(gen, opts);
    gen->add_option("--grid-spacing", grid_spacing, "reference grid spacing, m");

    CLI::App* sel = app.add_subcommand("select", "choose an M-configuration subset");
    add_common(sel, opts);
    sel->add_option("--map", map_path, "radio map file (generated when omitted)");
    sel->add_option("--method", method, "ga-fs | random | hss-greedy | hss-exhaustive");
    sel->add_option("--m", subset_m, "subset size M");
    sel->add_option("--grid-spacing", grid_spacing, "grid spacing when generating, m");

    CLI::App* loc = app.add_subcommand("localize", "localize RSSI query vectors against a map");
    add_common(loc, opts);
    loc->add_option("--map", map_path, "radio map file")->required();
    loc->add_option("--query", query_path, "CSV of query rows (M RSSI values per line)")
        ->required();
    loc->add_option("--matcher", matcher, "knn | pearson");
    loc->add_option("--k", knn_k, "kNN neighbor count");
    loc->add_flag("--with-truth", with_truth, "query rows end with true x,y");

    CLI::App* e1 = app.add_subcommand("exp1", "error CDF with and without feature selection");
    add_common(e1, opts);
    CLI::App* e2 = app.add_subcommand("exp2", "mean error vs M per selector and grid density");
    add_common(e2, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig cfg = load_config(opts);
        fs::create_directories(cfg.out_dir);

        if (gen->parsed()) {
            const double spacing = grid_spacing > 0.0 ? grid_spacing : cfg.exp1_grid_spacing;
            const MapBundle bundle = generate_map(cfg, spacing);
            save_radio_map(bundle.map, (fs::path(cfg.out_dir) / "radio_map.txt").string());
            save_configuration_set(bundle.configs,
                                   (fs::path(cfg.out_dir) / "config_set.txt").string());
            std::cout << "wrote " << bundle.map.locations() << "x"
                      << bundle.map.configurations() << " map to " << cfg.out_dir << "\n";
        } else if (sel->parsed()) {
            RadioMap map;
            if (!map_path.empty()) {
                map = load_radio_map(map_path);
            } else {
                const double spacing =
                    grid_spacing > 0.0 ? grid_spacing : cfg.exp1_grid_spacing;
                map = generate_map(cfg, spacing).map;
            }
            const std::size_t m = subset_m > 0 ? subset_m : cfg.subset_m;
            const LocationSplit split =
                split_locations(map.locations(), mix64(cfg.seed, 2), cfg.train_fraction);
            SelectionResult result;
            const Scenario scenario = scenario_from_config(cfg);
            if (method == "ga-fs") {
                GaParams ga = cfg.ga;
                ga.knn_k = cfg.knn_k;
                result = ga_feature_select(map, split, m, ga, scenario, mix64(cfg.seed, 4));
            } else if (method == "random") {
                result = random_select(map.configurations(), m, mix64(cfg.seed, 4));
            } else if (method == "hss-greedy") {
                result = hss_greedy(restrict_rows(map, split.train), m);
            } else if (method == "hss-exhaustive") {
                result = hss_exhaustive(restrict_rows(map, split.train), m);
            } else {
                throw ConfigError("unknown method '" + method + "'");
            }
            const std::string record = serialize_selection_result(result);
            std::ofstream out(fs::path(cfg.out_dir) / "selection.txt");
            out << record;
            std::cout << record;
        } else if (loc->parsed()) {
            const RadioMap map = load_radio_map(map_path);
            const std::vector<RssiVector> queries =
                read_queries(query_path, map.configurations(), with_truth, map.grid.height);
            const std::size_t k = knn_k > 0 ? knn_k : cfg.knn_k;
            std::ofstream out(fs::path(cfg.out_dir) / "estimates.csv");
            out << (with_truth ? "est_x,est_y,error\n" : "est_x,est_y\n");
            char buf[96];
            for (const RssiVector& q : queries) {
                const Estimate est = matcher == "pearson"
                                         ? permuted_pearson_localize(q, map)
                                         : knn_localize(q, map, k);
                if (with_truth) {
                    std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f\n", est.position.x,
                                  est.position.y, distance(est.position, *q.truth));
                } else {
                    std::snprintf(buf, sizeof(buf), "%.6f,%.6f\n", est.position.x,
                                  est.position.y);
                }
                out << buf;
                std::cout << buf;
            }
        } else if (e1->parsed()) {
            run_experiment_1(cfg);
            std::cout << "experiment 1 outputs written to " << cfg.out_dir << "\n";
        } else if (e2->parsed()) {
            run_experiment_2(cfg);
            std::cout << "experiment 2 outputs written to " << cfg.out_dir << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
