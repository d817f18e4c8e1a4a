#ifndef RISLOC_LOCALIZATION_HPP
#define RISLOC_LOCALIZATION_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "risloc/radiomap.hpp"

namespace risloc {

/// Exact-match weight floor for inverse-distance kNN, dBm.
inline constexpr double kKnnDistanceEpsilon = 1e-9;

/// One online measurement: M RSSI values at an unknown position, plus the
/// ground-truth coordinate when the query is synthetic.
struct RssiVector {
    std::vector<double> values;
    std::optional<Vec3> truth;
};

struct Estimate {
    Vec3 position;
    std::optional<std::size_t> matched_index;
    double score = 0.0;
};

class UndefinedCorrelationError : public std::domain_error {
  public:
    explicit UndefinedCorrelationError(const std::string& what) : std::domain_error(what) {}
};

/// Pearson correlation coefficient; throws UndefinedCorrelationError for
/// constant or too-short vectors.
double pearson(std::span<const double> a, std::span<const double> b);

/// argmax over locations of the best Pearson correlation against any cyclic
/// shift of the stored fingerprint. Ties break to the lowest location index,
/// then the lowest shift. Constant fingerprint rows score -inf with a warning.
Estimate permuted_pearson_localize(const RssiVector& q, const RadioMap& map);

/// Weighted kNN regression: k nearest fingerprints in RSSI space, weights
/// 1/max(d, eps); an exact match (d <= eps) short-circuits to that point.
Estimate knn_localize(const RssiVector& q, const RadioMap& map, std::size_t k);

using Localizer = std::function<Estimate(const RssiVector&, const RadioMap&)>;

struct ErrorReport {
    std::vector<Vec3> truths;
    std::vector<Vec3> estimates;
    std::vector<double> errors;  // per query, m
    double mean_error = 0.0;
    /// empirical CDF sampled at 0.1 m resolution: (error level, fraction <=)
    std::vector<std::pair<double, double>> cdf;
};

ErrorReport evaluate(const RadioMap& map, const std::vector<RssiVector>& queries,
                     const Localizer& localizer);

/// Empirical CDF of raw errors at 0.1 m resolution (used for pooled reports).
std::vector<std::pair<double, double>> error_cdf(std::vector<double> errors);

/// CSV: true_x,true_y,est_x,est_y,error rows plus a trailing summary block.
void write_error_report_csv(const ErrorReport& report, const std::string& path);

}  // namespace risloc

#endif
