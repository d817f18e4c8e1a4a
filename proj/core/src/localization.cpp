#include "risloc/localization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>

namespace risloc {
namespace {

struct CenteredStats {
    std::vector<double> centered;
    double sigma;  // sqrt(sum of squared deviations)
};

CenteredStats center(std::span<const double> v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    CenteredStats s;
    s.centered.reserve(v.size());
    double ss = 0.0;
    for (double x : v) {
        const double d = x - mean;
        s.centered.push_back(d);
        ss += d * d;
    }
    s.sigma = std::sqrt(ss);
    return s;
}

}  // namespace

double pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2) {
        throw UndefinedCorrelationError("pearson: need equal lengths >= 2");
    }
    const CenteredStats sa = center(a);
    const CenteredStats sb = center(b);
    if (sa.sigma == 0.0 || sb.sigma == 0.0) {
        throw UndefinedCorrelationError("pearson: correlation undefined for a constant vector");
    }
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += sa.centered[i] * sb.centered[i];
    return dot / (sa.sigma * sb.sigma);
}

Estimate permuted_pearson_localize(const RssiVector& q, const RadioMap& map) {
    const std::size_t m_count = map.configurations();
    if (m_count < 2) throw std::domain_error("permuted_pearson_localize: need M >= 2");
    if (q.values.size() != m_count) {
        throw std::domain_error("permuted_pearson_localize: query length does not match map");
    }
    const CenteredStats sq = center(q.values);
    if (sq.sigma == 0.0) {
        throw UndefinedCorrelationError("permuted_pearson_localize: constant query vector");
    }

    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_l = 0;
    std::vector<double> shifted(m_count);
    for (std::size_t l = 0; l < map.locations(); ++l) {
        const std::span<const double> row = map.row(l);
        const CenteredStats sr = center(row);
        if (sr.sigma == 0.0) {
            std::cerr << "[risloc] warning: constant fingerprint row " << l
                      << " skipped by permuted-Pearson matcher\n";
            continue;
        }
        // shift k cycles the stored fingerprint left by k positions
        for (std::size_t k = 0; k < m_count; ++k) {
            double dot = 0.0;
            for (std::size_t i = 0; i < m_count; ++i) {
                dot += sq.centered[i] * sr.centered[(i + k) % m_count];
            }
            const double rho = dot / (sq.sigma * sr.sigma);
            if (rho > best) {  // strict: ties keep lowest l, then lowest k
                best = rho;
                best_l = l;
            }
        }
    }
    if (!std::isfinite(best)) {
        throw UndefinedCorrelationError("permuted_pearson_localize: all fingerprint rows constant");
    }
    return {map.grid.points[best_l], best_l, best};
}

Estimate knn_localize(const RssiVector& q, const RadioMap& map, std::size_t k) {
    const std::size_t l_count = map.locations();
    if (k == 0 || k > l_count) {
        throw std::domain_error("knn_localize: need 1 <= k <= number of map locations");
    }
    if (q.values.size() != map.configurations()) {
        throw std::domain_error("knn_localize: query length does not match map");
    }

    std::vector<std::pair<double, std::size_t>> dist(l_count);
    for (std::size_t l = 0; l < l_count; ++l) {
        const std::span<const double> row = map.row(l);
        double ss = 0.0;
        for (std::size_t m = 0; m < row.size(); ++m) {
            const double d = q.values[m] - row[m];
            ss += d * d;
        }
        dist[l] = {std::sqrt(ss), l};
    }
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());

    if (dist[0].first <= kKnnDistanceEpsilon) {
        return {map.grid.points[dist[0].second], dist[0].second, dist[0].first};
    }
    double wsum = 0.0;
    Vec3 pos{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < k; ++i) {
        const double w = 1.0 / std::max(dist[i].first, kKnnDistanceEpsilon);
        pos = pos + map.grid.points[dist[i].second] * w;
        wsum += w;
    }
    return {pos * (1.0 / wsum), std::nullopt, dist[0].first};
}

std::vector<std::pair<double, double>> error_cdf(std::vector<double> errors) {
    std::sort(errors.begin(), errors.end());
    const double resolution = 0.1;
    const double max_err = errors.empty() ? 0.0 : errors.back();
    const int levels = static_cast<int>(std::ceil(max_err / resolution)) + 1;
    std::vector<std::pair<double, double>> cdf;
    cdf.reserve(levels);
    for (int i = 1; i <= levels; ++i) {
        const double e = i * resolution;
        const auto it = std::upper_bound(errors.begin(), errors.end(), e);
        cdf.emplace_back(e, static_cast<double>(it - errors.begin()) / errors.size());
    }
    return cdf;
}

ErrorReport evaluate(const RadioMap& map, const std::vector<RssiVector>& queries,
                     const Localizer& localizer) {
    ErrorReport report;
    report.truths.reserve(queries.size());
    report.estimates.reserve(queries.size());
    report.errors.reserve(queries.size());
    for (const RssiVector& q : queries) {
        if (!q.truth) throw std::domain_error("evaluate: query is missing ground truth");
        const Estimate est = localizer(q, map);
        report.truths.push_back(*q.truth);
        report.estimates.push_back(est.position);
        report.errors.push_back(distance(est.position, *q.truth));
    }
    report.mean_error =
        std::accumulate(report.errors.begin(), report.errors.end(), 0.0) / report.errors.size();
    report.cdf = error_cdf(report.errors);
    return report;
}

void write_error_report_csv(const ErrorReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_error_report_csv: cannot open " + path);
    out << "true_x,true_y,est_x,est_y,error\n";
    char buf[160];
    for (std::size_t i = 0; i < report.errors.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f,%.6f,%.6f\n", report.truths[i].x,
                      report.truths[i].y, report.estimates[i].x, report.estimates[i].y,
                      report.errors[i]);
        out << buf;
    }
    std::snprintf(buf, sizeof(buf), "# queries,%zu\n# mean_error,%.6f\n",
                  report.errors.size(), report.mean_error);
    out << buf;
}

}  // namespace risloc
