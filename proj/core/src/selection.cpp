#include "risloc/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "risloc/rng.hpp"

namespace risloc {
namespace {

constexpr std::uint64_t kGaInitTag = 0x6761696eULL;   // population init
constexpr std::uint64_t kGaLoopTag = 0x67616f70ULL;   // per-generation operators
constexpr std::uint64_t kGaQueryTag = 0x67617175ULL;  // per-generation query noise
constexpr std::uint64_t kRandSelTag = 0x72736c63ULL;

std::vector<std::size_t> random_subset(std::size_t s_tilde, std::size_t m,
                                       std::mt19937_64& rng) {
    std::vector<std::size_t> all(s_tilde);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(m);
    std::sort(all.begin(), all.end());
    return all;
}

std::uint64_t binomial_guarded(std::size_t n, std::size_t k, std::uint64_t cap) {
    std::uint64_t c = 1;
    k = std::min(k, n - k);
    for (std::size_t i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
        if (c > cap) return cap + 1;
    }
    return c;
}

}  // namespace

std::string to_string(SelectionMethod m) {
    switch (m) {
        case SelectionMethod::HssGreedy: return "hss-greedy";
        case SelectionMethod::HssExhaustive: return "hss-exhaustive";
        case SelectionMethod::GaFs: return "ga-fs";
        case SelectionMethod::Random: return "random";
    }
    return "random";
}

double dissimilarity(std::span<const double> values) {
    const std::size_t m = values.size();
    if (m < 2) throw std::domain_error("dissimilarity: need at least 2 values");
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const double d = values[i] - values[j];
            sum += d * d;
        }
    }
    // ordered pairs count each unordered pair twice
    return 2.0 / (static_cast<double>(m) * (m - 1)) * (2.0 * sum);
}

double hss_objective(const RadioMap& map, std::span<const std::size_t> subset) {
    std::vector<double> values(subset.size());
    double acc = 0.0;
    for (std::size_t l = 0; l < map.locations(); ++l) {
        const auto row = map.row(l);
        for (std::size_t i = 0; i < subset.size(); ++i) values[i] = row[subset[i]];
        acc += dissimilarity(values);
    }
    return acc / static_cast<double>(map.locations());
}

SelectionResult hss_exhaustive(const RadioMap& map, std::size_t m) {
    const std::size_t s_tilde = map.configurations();
    if (m < 2 || m > s_tilde) throw std::domain_error("hss_exhaustive: need 2 <= M <= S");
    if (binomial_guarded(s_tilde, m, 1000000) > 1000000) {
        throw std::domain_error(
            "hss_exhaustive: C(S, M) exceeds 1e6 candidates; use hss_greedy instead");
    }

    std::vector<std::size_t> current(m);
    std::iota(current.begin(), current.end(), 0);
    SelectionResult best;
    best.method = SelectionMethod::HssExhaustive;
    best.fitness = -std::numeric_limits<double>::infinity();

    for (;;) {
        const double obj = hss_objective(map, current);
        if (obj > best.fitness) {  // strict: lexicographic tie-break
            best.fitness = obj;
            best.subset = current;
        }
        // next combination in lexicographic order
        std::size_t i = m;
        while (i-- > 0) {
            if (current[i] != i + s_tilde - m) {
                ++current[i];
                for (std::size_t j = i + 1; j < m; ++j) current[j] = current[j - 1] + 1;
                break;
            }
            if (i == 0) {
                best.trace.push_back(best.fitness);
                return best;
            }
        }
    }
}

SelectionResult hss_greedy(const RadioMap& map, std::size_t m) {
    const std::size_t s_tilde = map.configurations();
    if (m < 2 || m > s_tilde) throw std::domain_error("hss_greedy: need 2 <= M <= S");

    SelectionResult result;
    result.method = SelectionMethod::HssGreedy;

    // Seed with the exhaustive best pair.
    std::vector<std::size_t> chosen;
    double best_pair = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s_tilde; ++i) {
        for (std::size_t j = i + 1; j < s_tilde; ++j) {
            const std::size_t pair[2] = {i, j};
            const double obj = hss_objective(map, pair);
            if (obj > best_pair) {
                best_pair = obj;
                chosen = {i, j};
            }
        }
    }
    result.trace.push_back(best_pair);

    std::vector<char> used(s_tilde, 0);
    used[chosen[0]] = used[chosen[1]] = 1;
    while (chosen.size() < m) {
        double best_obj = -std::numeric_limits<double>::infinity();
        std::size_t best_col = s_tilde;
        std::vector<std::size_t> candidate = chosen;
        candidate.push_back(0);
        for (std::size_t c = 0; c < s_tilde; ++c) {
            if (used[c]) continue;
            candidate.back() = c;
            const double obj = hss_objective(map, candidate);
            if (obj > best_obj) {
                best_obj = obj;
                best_col = c;
            }
        }
        chosen.push_back(best_col);
        used[best_col] = 1;
        result.trace.push_back(best_obj);
    }
    std::sort(chosen.begin(), chosen.end());
    result.subset = std::move(chosen);
    result.fitness = hss_objective(map, result.subset);
    return result;
}

void GaParams::validate() const {
    if (population < 2 || population < 2 * elitism) {
        throw std::domain_error("GaParams: population must be >= max(2, 2*elitism)");
    }
    if (generations < 1 || tournament_size < 1 || queries_per_location < 1 || knn_k < 1) {
        throw std::domain_error("GaParams: counts must be >= 1");
    }
    if (crossover_rate < 0.0 || crossover_rate > 1.0 || mutation_rate < 0.0 ||
        mutation_rate > 1.0) {
        throw std::domain_error("GaParams: rates must be in [0, 1]");
    }
}

namespace {

using Chromosome = std::vector<std::size_t>;

/// Per-generation query set: one full-width noisy vector per
/// (training location, repeat). Shared by every candidate in a generation.
std::vector<std::vector<double>> make_generation_queries(
    const RadioMap& map, std::span<const std::size_t> train, std::size_t q_per_loc,
    double noise_sigma, double rx_floor_dbm, std::uint64_t seed, std::size_t generation) {
    std::vector<std::vector<double>> queries;
    queries.reserve(train.size() * q_per_loc);
    for (std::size_t ti = 0; ti < train.size(); ++ti) {
        const auto row = map.row(train[ti]);
        for (std::size_t q = 0; q < q_per_loc; ++q) {
            std::mt19937_64 rng =
                make_rng(seed, kGaQueryTag, generation, ti * q_per_loc + q);
            std::normal_distribution<double> noise(0.0, noise_sigma);
            std::vector<double> v(row.begin(), row.end());
            if (noise_sigma > 0.0) {
                for (double& x : v) x = std::max(x + noise(rng), rx_floor_dbm);
            }
            queries.push_back(std::move(v));
        }
    }
    return queries;
}

double ga_fitness(const Chromosome& chrom, const RadioMap& train_map,
                  std::span<const std::size_t> train,
                  const std::vector<std::vector<double>>& queries, std::size_t q_per_loc,
                  const ReferenceGrid& full_grid, std::size_t knn_k) {
    const RadioMap sub = restrict(train_map, chrom);
    const std::size_t k = std::min(knn_k, sub.locations());
    double acc = 0.0;
    RssiVector q;
    q.values.resize(chrom.size());
    for (std::size_t ti = 0; ti < train.size(); ++ti) {
        const Vec3 truth = full_grid.points[train[ti]];
        for (std::size_t rep = 0; rep < q_per_loc; ++rep) {
            const std::vector<double>& full = queries[ti * q_per_loc + rep];
            for (std::size_t i = 0; i < chrom.size(); ++i) q.values[i] = full[chrom[i]];
            const Estimate est = knn_localize(q, sub, k);
            acc += distance(est.position, truth);
        }
    }
    return acc / static_cast<double>(train.size() * q_per_loc);
}

Chromosome crossover_repair(const Chromosome& p1, const Chromosome& p2, std::size_t s_tilde,
                            std::mt19937_64& rng) {
    const std::size_t m = p1.size();
    std::vector<char> in_child(s_tilde, 0);
    Chromosome child;
    child.reserve(m);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t gene = coin(rng) ? p1[i] : p2[i];
        if (!in_child[gene]) {
            in_child[gene] = 1;
            child.push_back(gene);
        }
    }
    // repair: refill from the parents' unused genes, then anything unused
    Chromosome pool;
    for (const Chromosome* p : {&p1, &p2}) {
        for (std::size_t g : *p) {
            if (!in_child[g]) {
                in_child[g] = 1;
                pool.push_back(g);
            }
        }
    }
    std::shuffle(pool.begin(), pool.end(), rng);
    while (child.size() < m && !pool.empty()) {
        child.push_back(pool.back());
        pool.pop_back();
    }
    while (child.size() < m) {
        std::uniform_int_distribution<std::size_t> pick(0, s_tilde - 1);
        const std::size_t g = pick(rng);
        if (!in_child[g]) {
            in_child[g] = 1;
            child.push_back(g);
        }
    }
    std::sort(child.begin(), child.end());
    return child;
}

void mutate_swap(Chromosome& chrom, std::size_t s_tilde, std::mt19937_64& rng) {
    if (chrom.size() >= s_tilde) return;  // no out-of-subset index to swap in
    std::vector<std::size_t> outside;
    outside.reserve(s_tilde - chrom.size());
    std::size_t pos = 0;
    for (std::size_t g = 0; g < s_tilde; ++g) {
        if (pos < chrom.size() && chrom[pos] == g) {
            ++pos;
        } else {
            outside.push_back(g);
        }
    }
    std::uniform_int_distribution<std::size_t> pick_in(0, chrom.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_out(0, outside.size() - 1);
    chrom[pick_in(rng)] = outside[pick_out(rng)];
    std::sort(chrom.begin(), chrom.end());
}

}  // namespace

SelectionResult ga_feature_select(const RadioMap& map, const LocationSplit& split,
                                  std::size_t m, const GaParams& params,
                                  const Scenario& scenario, std::uint64_t seed) {
    params.validate();
    const std::size_t s_tilde = map.configurations();
    if (m < 1 || m > s_tilde) throw std::domain_error("ga_feature_select: need 1 <= M <= S");
    if (split.train.empty()) throw std::domain_error("ga_feature_select: empty training split");

    const RadioMap train_map = restrict_rows(map, split.train);
    // training rows become 0..Lt-1 within train_map
    std::vector<std::size_t> train_local(split.train.size());
    std::iota(train_local.begin(), train_local.end(), 0);

    SelectionResult result;
    result.method = SelectionMethod::GaFs;
    result.seed = seed;

    auto eval_generation = [&](const std::vector<Chromosome>& pop, std::size_t gen,
                               std::vector<double>& fitness) {
        const auto queries = make_generation_queries(train_map, train_local,
                                                     params.queries_per_location,
                                                     scenario.noise_sigma,
                                                     scenario.rx_floor_dbm, seed, gen);
        fitness.resize(pop.size());
        for (std::size_t i = 0; i < pop.size(); ++i) {
            fitness[i] = ga_fitness(pop[i], train_map, train_local, queries,
                                    params.queries_per_location, train_map.grid,
                                    params.knn_k);
        }
    };

    if (m == s_tilde) {  // only one candidate exists
        std::vector<Chromosome> pop(1);
        pop[0].resize(m);
        std::iota(pop[0].begin(), pop[0].end(), 0);
        std::vector<double> fitness;
        eval_generation(pop, 0, fitness);
        result.subset = pop[0];
        result.fitness = fitness[0];
        result.trace.push_back(fitness[0]);
        return result;
    }

    std::mt19937_64 init_rng = make_rng(seed, kGaInitTag);
    std::vector<Chromosome> pop(params.population);
    for (Chromosome& c : pop) c = random_subset(s_tilde, m, init_rng);

    double best_ever = std::numeric_limits<double>::infinity();
    Chromosome best_chrom;
    std::vector<double> fitness;

    for (std::size_t gen = 0; gen < params.generations; ++gen) {
        eval_generation(pop, gen, fitness);
        for (std::size_t i = 0; i < pop.size(); ++i) {
            if (fitness[i] < best_ever) {
                best_ever = fitness[i];
                best_chrom = pop[i];
            }
        }
        result.trace.push_back(best_ever);
        if (gen + 1 == params.generations) break;

        // rank by this generation's (common-random-number) fitness
        std::vector<std::size_t> order(pop.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fitness[a] < fitness[b]; });

        std::mt19937_64 rng = make_rng(seed, kGaLoopTag, gen);
        std::vector<Chromosome> next;
        next.reserve(params.population);
        for (std::size_t e = 0; e < params.elitism; ++e) next.push_back(pop[order[e]]);

        std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
        std::bernoulli_distribution do_cx(params.crossover_rate);
        std::bernoulli_distribution do_mut(params.mutation_rate);
        auto tournament = [&]() -> const Chromosome& {
            std::size_t best = pick(rng);
            for (std::size_t t = 1; t < params.tournament_size; ++t) {
                const std::size_t c = pick(rng);
                if (fitness[c] < fitness[best]) best = c;
            }
            return pop[best];
        };
        while (next.size() < params.population) {
            const Chromosome& p1 = tournament();
            const Chromosome& p2 = tournament();
            Chromosome child = do_cx(rng) ? crossover_repair(p1, p2, s_tilde, rng) : p1;
            if (do_mut(rng)) mutate_swap(child, s_tilde, rng);
            next.push_back(std::move(child));
        }
        pop = std::move(next);
    }

    result.subset = best_chrom;
    result.fitness = best_ever;
    return result;
}

SelectionResult random_select(std::size_t s_tilde, std::size_t m, std::uint64_t seed) {
    if (m < 1 || m > s_tilde) throw std::domain_error("random_select: need 1 <= M <= S");
    std::mt19937_64 rng = make_rng(seed, kRandSelTag);
    SelectionResult result;
    result.method = SelectionMethod::Random;
    result.seed = seed;
    result.subset = random_subset(s_tilde, m, rng);
    return result;
}

std::string serialize_selection_result(const SelectionResult& r) {
    std::ostringstream out;
    out << "method " << to_string(r.method) << "\n";
    out << "seed " << r.seed << "\n";
    out << "fitness " << r.fitness << "\n";
    out << "indices";
    for (std::size_t i : r.subset) out << ' ' << i;
    out << "\ntrace";
    for (double t : r.trace) out << ' ' << t;
    out << "\n";
    return out.str();
}

}  // namespace risloc
