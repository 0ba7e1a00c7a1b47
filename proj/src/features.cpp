#include "meetsense/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

namespace meetsense::features {
namespace {

double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double variance_of(std::span<const double> v, double mean) {
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return s / static_cast<double>(v.size() - 1);
}

}  // namespace

double welch_p_value(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) return 1.0;
    const double n1 = static_cast<double>(a.size());
    const double n2 = static_cast<double>(b.size());
    const double m1 = mean_of(a), m2 = mean_of(b);
    const double v1 = variance_of(a, m1), v2 = variance_of(b, m2);
    const double se2 = v1 / n1 + v2 / n2;
    if (se2 == 0.0) return m1 == m2 ? 1.0 : 0.0;

    const double t = (m1 - m2) / std::sqrt(se2);
    const double df =
        se2 * se2 / ((v1 / n1) * (v1 / n1) / (n1 - 1.0) + (v2 / n2) * (v2 / n2) / (n2 - 1.0));
    boost::math::students_t dist(std::max(df, 1e-6));
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

RefinedFeature feature_construct(std::span<const double> series, double significance_alpha) {
    if (series.empty()) throw InsufficientDataError("feature_construct: empty series");

    // Work on a sorted copy: 1-D k-means clusters are intervals, and sorting
    // makes every sum independent of the input order (exact permutation
    // invariance).
    std::vector<double> v(series.begin(), series.end());
    std::sort(v.begin(), v.end());
    const int n = static_cast<int>(v.size());

    RefinedFeature out;
    out.total_count = n;

    if (n == 1 || v.front() == v.back()) {
        out.mean_value = mean_of(v);
        out.used_count = n;
        out.single_cluster = true;
        return out;
    }

    // k=2 Lloyd iterations seeded at the extremes. Points exactly on the
    // midpoint go to the low cluster.
    double c_lo = v.front(), c_hi = v.back();
    int split = 0;  // first index of the high cluster
    for (int iter = 0; iter < 100; ++iter) {
        const double mid = 0.5 * (c_lo + c_hi);
        const int new_split = static_cast<int>(
            std::upper_bound(v.begin(), v.end(), mid) - v.begin());
        if (new_split == split && iter > 0) break;
        split = new_split;
        c_lo = mean_of({v.data(), static_cast<std::size_t>(split)});
        c_hi = mean_of({v.data() + split, static_cast<std::size_t>(n - split)});
    }

    const std::span<const double> low{v.data(), static_cast<std::size_t>(split)};
    const std::span<const double> high{v.data() + split, static_cast<std::size_t>(n - split)};

    // Larger cluster is the major one; on a tie keep the higher-valued
    // cluster (features are similarities, the noise mode sits low).
    const bool high_is_major = high.size() >= low.size();
    const auto major = high_is_major ? high : low;
    const auto minor = high_is_major ? low : high;

    bool separated;
    if (minor.size() == 1 && n >= 4) {
        separated = true;  // a lone outlier cannot support a distributional test
    } else {
        separated = welch_p_value(low, high) < significance_alpha;
    }

    if (separated) {
        out.mean_value = mean_of(major);
        out.used_count = static_cast<int>(major.size());
        out.single_cluster = false;
    } else {
        out.mean_value = mean_of(v);
        out.used_count = n;
        out.single_cluster = true;
    }
    return out;
}

}  // namespace meetsense::features
