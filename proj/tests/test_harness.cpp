#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "risloc/harness.hpp"

using namespace risloc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Small, fast settings for end-to-end runs.
ExperimentConfig tiny_config(const std::string& out_dir) {
    ExperimentConfig cfg;
    cfg.ris_rows = 2;
    cfg.ris_cols = 2;
    cfg.n_uniform = 3;
    cfg.n_ramp = 3;
    cfg.n_random = 6;
    cfg.grid_spacings = {5.0};  // 16 locations
    cfg.exp1_grid_spacing = 4.0;  // 25 locations
    cfg.averaging_k = 2;
    cfg.subset_m = 4;
    cfg.m_sweep = {3, 6};
    cfg.selectors = {"ga-fs", "random", "hss-greedy"};
    cfg.ga.population = 8;
    cfg.ga.generations = 4;
    cfg.ga.queries_per_location = 2;
    cfg.ga.knn_k = 2;
    cfg.knn_k = 2;
    cfg.train_fraction = 0.25;
    cfg.trials = 2;
    cfg.seed = 11;
    cfg.out_dir = out_dir;
    return cfg;
}

std::string tmp_dir(const char* name) {
    const fs::path p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    return p.string();
}

}  // namespace

TEST_CASE("config parsing") {
    SUBCASE("empty stream yields defaults") {
        std::istringstream in("");
        const ExperimentConfig cfg = parse_config_stream(in, "<test>");
        const ExperimentConfig ref;
        CHECK(cfg.frequency == ref.frequency);
        CHECK(cfg.subset_m == ref.subset_m);
        CHECK(cfg.m_sweep == ref.m_sweep);
        CHECK(cfg.selectors == ref.selectors);
    }
    SUBCASE("values, comments and '=' syntax") {
        std::istringstream in(
            "# scenario\n"
            "frequency = 5.0e9\n"
            "noise_sigma 1.5\n"
            "trials=3\n"
            "m_sweep 2,4,6\n"
            "selectors ga-fs,random\n"
            "los_enabled true\n");
        const ExperimentConfig cfg = parse_config_stream(in, "<test>");
        CHECK(cfg.frequency == 5.0e9);
        CHECK(cfg.noise_sigma == 1.5);
        CHECK(cfg.trials == 3);
        CHECK(cfg.m_sweep == std::vector<std::size_t>{2, 4, 6});
        CHECK(cfg.selectors == std::vector<std::string>{"ga-fs", "random"});
        CHECK(cfg.los_enabled);
    }
    SUBCASE("unknown key names the valid ones") {
        std::istringstream in("frequenzy 2.4e9\n");
        try {
            parse_config_stream(in, "<test>");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            const std::string what = e.what();
            CHECK(what.find("frequenzy") != std::string::npos);
            CHECK(what.find("frequency") != std::string::npos);
        }
    }
    SUBCASE("dump-parse round trip") {
        ExperimentConfig cfg = tiny_config("unused");
        cfg.frequency = 3.3e9;
        cfg.codebook_min = -123.456;
        const std::string text = dump_config(cfg);
        std::istringstream in(text);
        const ExperimentConfig back = parse_config_stream(in, "<dump>");
        CHECK(dump_config(back) == text);
        CHECK(back.frequency == cfg.frequency);
        CHECK(back.codebook_min == cfg.codebook_min);
        CHECK(back.m_sweep == cfg.m_sweep);
        CHECK(back.selectors == cfg.selectors);
    }
    SUBCASE("validation rejects nonsense") {
        ExperimentConfig cfg;
        cfg.trials = 0;
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
        cfg = ExperimentConfig{};
        cfg.subset_m = cfg.s_tilde() + 1;
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
        cfg = ExperimentConfig{};
        cfg.codebook_min = 10.0;
        cfg.codebook_max = -10.0;
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
    }
}

TEST_CASE("channel queries") {
    ExperimentConfig cfg = tiny_config("unused");
    const Scenario s = scenario_from_config(cfg);
    const LoadCodebook cb =
        LoadCodebook::uniform_span(cfg.codebook_size, cfg.codebook_min, cfg.codebook_max);
    const ConfigurationSet set =
        generate_configuration_set(cb, s.ris.elements.size(), 1, cfg.n_uniform,
                                   cfg.n_ramp, cfg.n_random);
    const ReferenceGrid grid = ReferenceGrid::square(cfg.room_side, 5.0);
    ChannelWorkspace ws(s, set.configs);
    const std::vector<std::size_t> locs{0, 3, 7};

    const auto q1 = make_channel_queries(ws, grid, locs, 5, 1);
    const auto q2 = make_channel_queries(ws, grid, locs, 5, 1);
    const auto q3 = make_channel_queries(ws, grid, locs, 6, 1);
    REQUIRE(q1.size() == 3);
    CHECK(q1[0].values.size() == set.size());
    CHECK(q1[1].truth == grid.points[3]);
    for (std::size_t i = 0; i < q1.size(); ++i) {
        CHECK(q1[i].values == q2[i].values);
    }
    bool any_diff = false;
    for (std::size_t i = 0; i < q1.size(); ++i) {
        if (q1[i].values != q3[i].values) any_diff = true;
    }
    CHECK(any_diff);
}

TEST_CASE("experiment 1 end to end") {
    const std::string out = tmp_dir("risloc_exp1");
    ExperimentConfig cfg = tiny_config(out);
    run_experiment_1(cfg);

    const fs::path cdf_path = fs::path(out) / "exp1_cdf.csv";
    const fs::path manifest_path = fs::path(out) / "exp1_manifest.txt";
    REQUIRE(fs::exists(cdf_path));
    REQUIRE(fs::exists(manifest_path));

    SUBCASE("CDF columns are monotone and end at 1") {
        std::ifstream in(cdf_path);
        std::string header;
        std::getline(in, header);
        CHECK(header.find("error") == 0);
        double prev[3] = {-1, -1, -1};
        double last[3] = {0, 0, 0};
        std::string line;
        std::size_t rows = 0;
        while (std::getline(in, line)) {
            double e, a, b, c;
            REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &e, &a, &b, &c) == 4);
            const double cur[3] = {a, b, c};
            for (int i = 0; i < 3; ++i) {
                CHECK(cur[i] >= prev[i] - 1e-12);
                CHECK(cur[i] >= 0.0);
                CHECK(cur[i] <= 1.0 + 1e-12);
                prev[i] = cur[i];
                last[i] = cur[i];
            }
            ++rows;
        }
        CHECK(rows > 0);
        for (int i = 0; i < 3; ++i) CHECK(last[i] == doctest::Approx(1.0));
    }
    SUBCASE("reruns are byte-identical; threads do not change bytes") {
        const std::string bytes = slurp(cdf_path);
        const std::string out2 = tmp_dir("risloc_exp1_b");
        ExperimentConfig cfg2 = tiny_config(out2);
        cfg2.threads = 4;
        run_experiment_1(cfg2);
        CHECK(slurp(fs::path(out2) / "exp1_cdf.csv") == bytes);
    }
    SUBCASE("manifest records the settings") {
        const std::string manifest = slurp(manifest_path);
        CHECK(manifest.find("seed") != std::string::npos);
        CHECK(manifest.find("acquisition_time_ms") != std::string::npos);
    }
}

TEST_CASE("experiment 2 end to end") {
    const std::string out = tmp_dir("risloc_exp2");
    ExperimentConfig cfg = tiny_config(out);
    run_experiment_2(cfg);

    const fs::path raw_path = fs::path(out) / "exp2_error_vs_m.csv";
    const fs::path agg_path = fs::path(out) / "exp2_error_vs_m_agg.csv";
    REQUIRE(fs::exists(raw_path));
    REQUIRE(fs::exists(agg_path));

    SUBCASE("row count is grids x methods x M x trials") {
        std::ifstream in(raw_path);
        std::string line;
        std::getline(in, line);  // header
        std::size_t rows = 0;
        while (std::getline(in, line)) {
            if (!line.empty()) ++rows;
        }
        CHECK(rows == cfg.grid_spacings.size() * cfg.selectors.size() *
                          cfg.m_sweep.size() * cfg.trials);
    }
    SUBCASE("aggregate means match the raw rows") {
        // Re-derive every aggregate mean from the raw file.
        std::map<std::string, std::pair<double, std::size_t>> pooled;  // "L,M,method"
        {
            std::ifstream in(raw_path);
            std::string line;
            std::getline(in, line);
            while (std::getline(in, line)) {
                std::size_t L, M;
                unsigned long trial;
                char method[64];
                double err;
                if (std::sscanf(line.c_str(), "%zu,%zu,%63[^,],%lu,%lf", &L, &M, method,
                                &trial, &err) == 5) {
                    auto& cell = pooled[std::to_string(L) + "," + std::to_string(M) +
                                        "," + method];
                    cell.first += err;
                    cell.second += 1;
                }
            }
        }
        REQUIRE(!pooled.empty());
        std::ifstream agg(agg_path);
        std::string line;
        std::getline(agg, line);
        std::size_t checked = 0;
        while (std::getline(agg, line)) {
            std::size_t L, M;
            char method[64];
            double mean, stdev;
            if (std::sscanf(line.c_str(), "%zu,%zu,%63[^,],%lf,%lf", &L, &M, method,
                            &mean, &stdev) == 5) {
                const auto it = pooled.find(std::to_string(L) + "," + std::to_string(M) +
                                            "," + method);
                REQUIRE(it != pooled.end());
                CHECK(mean == doctest::Approx(it->second.first / it->second.second)
                                  .epsilon(1e-6));
                CHECK(stdev >= 0.0);
                ++checked;
            }
        }
        CHECK(checked == pooled.size());
    }
    SUBCASE("byte-identical across thread counts") {
        const std::string bytes = slurp(raw_path);
        const std::string out2 = tmp_dir("risloc_exp2_b");
        ExperimentConfig cfg2 = tiny_config(out2);
        cfg2.threads = 3;
        run_experiment_2(cfg2);
        CHECK(slurp(fs::path(out2) / "exp2_error_vs_m.csv") == bytes);
        CHECK(slurp(fs::path(out2) / "exp2_error_vs_m_agg.csv") ==
              slurp(fs::path(out) / "exp2_error_vs_m_agg.csv"));
    }
    SUBCASE("degenerate selector list rejected") {
        ExperimentConfig bad = cfg;
        bad.selectors = {"not-a-method"};
        CHECK_THROWS(run_experiment_2(bad));
    }
}
