#ifndef MEETSENSE_FEATURES_HPP
#define MEETSENSE_FEATURES_HPP

#include <span>

#include "meetsense/types.hpp"

namespace meetsense::features {

/// Aggregate of a pairwise feature series after discarding the minor
/// (noise) cluster.
struct RefinedFeature {
    double mean_value = 0.0;
    int used_count = 0;
    int total_count = 0;
    bool single_cluster = false;
};

/// Two-sided Welch mean-difference p-value between two samples. Returns 1.0
/// when either sample is too small to carry a variance (n < 2).
double welch_p_value(std::span<const double> a, std::span<const double> b);

/// Split the series into two clusters (1-D k-means seeded at min and max);
/// when the clusters separate significantly (Welch p < alpha), return the
/// mean of the larger cluster's points, otherwise the mean of all points.
/// A single point against >= 3 others is treated as the minor cluster
/// outright. Empty series -> InsufficientDataError.
RefinedFeature feature_construct(std::span<const double> series,
                                 double significance_alpha = 0.05);

}  // namespace meetsense::features

#endif
