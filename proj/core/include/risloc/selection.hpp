#ifndef RISLOC_SELECTION_HPP
#define RISLOC_SELECTION_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "risloc/localization.hpp"
#include "risloc/radiomap.hpp"

namespace risloc {

enum class SelectionMethod { HssGreedy, HssExhaustive, GaFs, Random };

std::string to_string(SelectionMethod m);

/// Chosen configuration subset (sorted, unique) with its fitness and the
/// per-iteration best-fitness trace.
struct SelectionResult {
    std::vector<std::size_t> subset;
    SelectionMethod method = SelectionMethod::Random;
    double fitness = 0.0;
    std::vector<double> trace;
    std::uint64_t seed = 0;
};

/// Mean pairwise squared difference over the M values at one location,
/// ordered pairs, coefficient 2/(M(M-1)).
double dissimilarity(std::span<const double> values);

/// HSS objective: mean over locations of the per-location dissimilarity of
/// the subset's columns.
double hss_objective(const RadioMap& map, std::span<const std::size_t> subset);

/// Exact argmax by enumerating all C(S, M) subsets; guarded at 1e6 candidates.
SelectionResult hss_exhaustive(const RadioMap& map, std::size_t m);

/// Greedy HSS: best pair first, then one column per step.
SelectionResult hss_greedy(const RadioMap& map, std::size_t m);

struct GaParams {
    std::size_t population = 40;
    std::size_t generations = 50;
    std::size_t tournament_size = 3;
    double crossover_rate = 0.9;
    double mutation_rate = 0.1;
    std::size_t elitism = 2;
    std::size_t queries_per_location = 10;
    std::size_t knn_k = 5;

    void validate() const;
};

/// Genetic-algorithm wrapper feature selection: fixed-cardinality-M index
/// sets, fitness = mean kNN localization error over fresh-noise queries at
/// the training locations, common random numbers per generation. Fresh
/// queries are the map's own fingerprint rows plus N(0, noise_sigma) per
/// entry, which works identically for simulated and measured maps.
SelectionResult ga_feature_select(const RadioMap& map, const LocationSplit& split,
                                  std::size_t m, const GaParams& params,
                                  const Scenario& scenario, std::uint64_t seed);

/// Uniform random M-subset baseline.
SelectionResult random_select(std::size_t s_tilde, std::size_t m, std::uint64_t seed);

/// Text record: method, seed, fitness, indices, trace.
std::string serialize_selection_result(const SelectionResult& r);

}  // namespace risloc

#endif
