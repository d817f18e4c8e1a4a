#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "risloc/selection.hpp"

using namespace risloc;

namespace {

RadioMap make_map(std::size_t rows, std::size_t cols,
                  const std::vector<double>& values) {
    RadioMap map;
    map.grid.spacing = 1.0;
    map.grid.height = 1.5;
    for (std::size_t l = 0; l < rows; ++l) {
        map.grid.points.push_back({static_cast<double>(l % 8), static_cast<double>(l / 8), 1.5});
    }
    for (std::size_t m = 0; m < cols; ++m) {
        map.config_ids.push_back("c" + std::to_string(m));
    }
    map.rssi = values;
    map.averaging_k = 1;
    return map;
}

// Nested-loop reference for the exhaustive HSS search.
std::pair<std::vector<std::size_t>, double> brute_force_hss(const RadioMap& map,
                                                            std::size_t m) {
    const std::size_t s = map.configurations();
    std::vector<std::size_t> idx(m);
    std::vector<bool> mask(s, false);
    std::fill(mask.begin(), mask.begin() + static_cast<long>(m), true);
    std::sort(mask.begin(), mask.end(), std::greater<bool>());
    std::vector<std::size_t> best;
    double best_val = -1.0;
    do {
        std::vector<std::size_t> subset;
        for (std::size_t i = 0; i < s; ++i) {
            if (mask[i]) subset.push_back(i);
        }
        const double val = hss_objective(map, subset);
        if (val > best_val) {
            best_val = val;
            best = subset;
        }
    } while (std::prev_permutation(mask.begin(), mask.end()));
    return {best, best_val};
}

}  // namespace

TEST_CASE("dissimilarity") {
    SUBCASE("two values") {
        const std::vector<double> v{3.0, 7.0};
        CHECK(dissimilarity(v) == doctest::Approx(2.0 * 16.0).epsilon(1e-12));
    }
    SUBCASE("worked example {0,1,3}") {
        const std::vector<double> v{0.0, 1.0, 3.0};
        // ordered pairs: (0-1)^2+(0-3)^2+(1-0)^2+(1-3)^2+(3-0)^2+(3-1)^2 = 28
        // coefficient 2/(3*2) -> but ordered sum double-counts: 28/3
        CHECK(dissimilarity(v) == doctest::Approx(28.0 / 3.0).epsilon(1e-12));
    }
    SUBCASE("constant vector scores zero") {
        const std::vector<double> v{5.0, 5.0, 5.0, 5.0};
        CHECK(dissimilarity(v) == 0.0);
    }
    SUBCASE("translation invariance, scale quadratically") {
        const std::vector<double> v{1.0, 4.0, 6.0, 2.0};
        std::vector<double> shifted = v, scaled = v;
        for (double& x : shifted) x += 100.0;
        for (double& x : scaled) x *= 3.0;
        CHECK(dissimilarity(shifted) == doctest::Approx(dissimilarity(v)).epsilon(1e-12));
        CHECK(dissimilarity(scaled) == doctest::Approx(9.0 * dissimilarity(v)).epsilon(1e-12));
    }
    SUBCASE("needs at least two values") {
        const std::vector<double> v{1.0};
        CHECK_THROWS_AS(dissimilarity(v), std::domain_error);
    }
}

TEST_CASE("exhaustive HSS") {
    SUBCASE("spread beats clustering") {
        // One location, three configurations at 0, 1, 10 dBm: the best pair
        // is {0, 10}.
        const RadioMap map = make_map(1, 3, {0.0, 1.0, 10.0});
        const SelectionResult r = hss_exhaustive(map, 2);
        CHECK(r.subset == std::vector<std::size_t>{0, 2});
        CHECK(r.fitness == doctest::Approx(hss_objective(map, r.subset)));
    }
    SUBCASE("M = S returns the full set") {
        const RadioMap map = make_map(2, 4, {1, 2, 3, 4, 4, 3, 2, 1});
        const SelectionResult r = hss_exhaustive(map, 4);
        CHECK(r.subset == std::vector<std::size_t>{0, 1, 2, 3});
    }
    SUBCASE("matches a nested-loop oracle on random instances") {
        std::mt19937_64 rng(77);
        std::uniform_real_distribution<double> dist(-90.0, -30.0);
        for (int t = 0; t < 20; ++t) {
            std::vector<double> values(4 * 6);
            for (double& v : values) v = dist(rng);
            const RadioMap map = make_map(4, 6, values);
            const auto [oracle_subset, oracle_val] = brute_force_hss(map, 3);
            const SelectionResult r = hss_exhaustive(map, 3);
            CHECK(r.fitness == doctest::Approx(oracle_val).epsilon(1e-12));
            CHECK(r.subset == oracle_subset);
        }
    }
    SUBCASE("combinatorial guard") {
        const RadioMap map = make_map(1, 50, std::vector<double>(50, 0.0));
        CHECK_THROWS_AS(hss_exhaustive(map, 25), std::domain_error);
    }
    SUBCASE("invalid m") {
        const RadioMap map = make_map(1, 3, {0, 1, 2});
        CHECK_THROWS_AS(hss_exhaustive(map, 1), std::domain_error);
        CHECK_THROWS_AS(hss_exhaustive(map, 4), std::domain_error);
    }
}

TEST_CASE("greedy HSS") {
    std::mt19937_64 rng(91);
    std::uniform_real_distribution<double> dist(-90.0, -30.0);

    SUBCASE("M = 2 equals the exhaustive best pair") {
        for (int t = 0; t < 10; ++t) {
            std::vector<double> values(5 * 7);
            for (double& v : values) v = dist(rng);
            const RadioMap map = make_map(5, 7, values);
            const SelectionResult g = hss_greedy(map, 2);
            const SelectionResult e = hss_exhaustive(map, 2);
            CHECK(g.fitness == doctest::Approx(e.fitness).epsilon(1e-12));
            CHECK(g.subset == e.subset);
        }
    }
    SUBCASE("never beats exhaustive, trace is non-decreasing in size") {
        for (int t = 0; t < 10; ++t) {
            std::vector<double> values(4 * 8);
            for (double& v : values) v = dist(rng);
            const RadioMap map = make_map(4, 8, values);
            const SelectionResult g = hss_greedy(map, 4);
            const SelectionResult e = hss_exhaustive(map, 4);
            CHECK(g.fitness <= e.fitness + 1e-12);
            CHECK(g.subset.size() == 4);
            CHECK(std::is_sorted(g.subset.begin(), g.subset.end()));
            CHECK(std::adjacent_find(g.subset.begin(), g.subset.end()) == g.subset.end());
            REQUIRE(g.trace.size() == 3);  // pair, then two additions
        }
    }
}

TEST_CASE("random selection") {
    SUBCASE("valid subsets, deterministic in seed") {
        const SelectionResult a = random_select(10, 4, 5);
        const SelectionResult b = random_select(10, 4, 5);
        const SelectionResult c = random_select(10, 4, 6);
        CHECK(a.subset == b.subset);
        CHECK(a.subset != c.subset);
        CHECK(a.subset.size() == 4);
        CHECK(std::is_sorted(a.subset.begin(), a.subset.end()));
        CHECK(a.subset.back() < 10);
    }
    SUBCASE("approximately uniform over C(5,2) = 10 subsets") {
        std::map<std::vector<std::size_t>, int> counts;
        const int n = 100000;
        for (int i = 0; i < n; ++i) {
            counts[random_select(5, 2, static_cast<std::uint64_t>(i)).subset]++;
        }
        REQUIRE(counts.size() == 10);
        // Each subset has p = 0.1; 3 sigma on a binomial count.
        const double expect = n * 0.1;
        const double tol = 3.0 * std::sqrt(n * 0.1 * 0.9);
        for (const auto& [subset, count] : counts) {
            CHECK(std::abs(count - expect) < tol);
        }
    }
}

TEST_CASE("GA feature selection") {
    Scenario scenario = make_default_scenario();
    scenario.noise_sigma = 1.0;

    // Planted instance: 16 locations on a 4x4 grid, columns 0..3 encode the
    // location's four index bits at 20 dB separation; the remaining columns
    // are nearly constant. Only {0,1,2,3} localizes exactly, so the GA must
    // recover it.
    const std::size_t L = 16, S = 10, M = 4;
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> junk(-59.55, -59.45);
    std::vector<double> values(L * S);
    for (std::size_t l = 0; l < L; ++l) {
        for (std::size_t m = 0; m < S; ++m) {
            values[l * S + m] = m < M
                ? -80.0 + 20.0 * static_cast<double>((l >> m) & 1u)
                : junk(rng);
        }
    }
    const RadioMap map = make_map(L, S, values);
    LocationSplit split;
    for (std::size_t l = 0; l < L; ++l) split.train.push_back(l);

    GaParams params;
    params.queries_per_location = 4;
    params.knn_k = 1;

    SUBCASE("recovers the planted columns") {
        int hits = 0;
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const SelectionResult r = ga_feature_select(map, split, M, params, scenario, seed);
            REQUIRE(r.subset.size() == M);
            CHECK(std::is_sorted(r.subset.begin(), r.subset.end()));
            if (r.subset == std::vector<std::size_t>{0, 1, 2, 3}) ++hits;
        }
        CHECK(hits >= 4);
    }
    SUBCASE("deterministic in the seed") {
        const SelectionResult a = ga_feature_select(map, split, M, params, scenario, 9);
        const SelectionResult b = ga_feature_select(map, split, M, params, scenario, 9);
        CHECK(a.subset == b.subset);
        CHECK(a.fitness == b.fitness);
        CHECK(a.trace == b.trace);
    }
    SUBCASE("best-ever trace never regresses") {
        const SelectionResult r = ga_feature_select(map, split, M, params, scenario, 3);
        REQUIRE(!r.trace.empty());
        // Fitness is mean localization error, so best-ever is non-increasing.
        for (std::size_t i = 1; i < r.trace.size(); ++i) {
            CHECK(r.trace[i] <= r.trace[i - 1]);
        }
    }
    SUBCASE("M = S short-circuits to the full set") {
        const SelectionResult r = ga_feature_select(map, split, S, params, scenario, 1);
        std::vector<std::size_t> all(S);
        for (std::size_t i = 0; i < S; ++i) all[i] = i;
        CHECK(r.subset == all);
    }
    SUBCASE("parameter validation") {
        GaParams bad = params;
        bad.population = 0;
        CHECK_THROWS_AS(bad.validate(), std::domain_error);
        bad = params;
        bad.crossover_rate = 1.5;
        CHECK_THROWS_AS(bad.validate(), std::domain_error);
        bad = params;
        bad.elitism = bad.population + 1;
        CHECK_THROWS_AS(bad.validate(), std::domain_error);
    }
}

TEST_CASE("serialization") {
    SelectionResult r;
    r.method = SelectionMethod::GaFs;
    r.subset = {2, 5, 9};
    r.fitness = -1.25;
    r.seed = 42;
    r.trace = {-3.0, -2.0, -1.25};
    const std::string s = serialize_selection_result(r);
    CHECK(s.find("ga-fs") != std::string::npos);
    CHECK(s.find("2 5 9") != std::string::npos);
    CHECK(s.find("42") != std::string::npos);
}
