#include <doctest.h>

#include <algorithm>
#include <random>

#include "meetsense/features.hpp"

using namespace meetsense;
namespace mf = meetsense::features;

TEST_CASE("identical values collapse to a single cluster") {
    std::vector<double> series(100, 0.42);
    const auto r = mf::feature_construct(series);
    CHECK(r.mean_value == doctest::Approx(0.42));
    CHECK(r.single_cluster);
    CHECK(r.used_count == 100);
    CHECK(r.total_count == 100);
}

TEST_CASE("contaminated series keeps the major mode") {
    std::mt19937 rng(7);
    std::normal_distribution<double> major(0.80, 0.02), minor(0.10, 0.02);
    std::vector<double> series;
    for (int i = 0; i < 90; ++i) series.push_back(major(rng));
    for (int i = 0; i < 10; ++i) series.push_back(minor(rng));
    const auto r = mf::feature_construct(series);
    CHECK(r.mean_value >= 0.78);
    CHECK(r.mean_value <= 0.82);
    CHECK(r.used_count == 90);
    CHECK(!r.single_cluster);
}

TEST_CASE("single point passes through") {
    const auto r = mf::feature_construct(std::vector<double>{0.5});
    CHECK(r.mean_value == doctest::Approx(0.5));
    CHECK(r.used_count == 1);
    CHECK(r.single_cluster);
}

TEST_CASE("empty series raises") {
    CHECK_THROWS_AS(mf::feature_construct(std::vector<double>{}), InsufficientDataError);
}

TEST_CASE("major-cluster mean divides by the major cluster size") {
    // 8 points at 0.8, 2 at 0.1. Dividing the major sum by the total count
    // would give 0.64; the refined mean must be the major cluster's own mean.
    std::vector<double> series(8, 0.8);
    series.push_back(0.1);
    series.push_back(0.1);
    const auto r = mf::feature_construct(series);
    CHECK(r.mean_value == doctest::Approx(0.8));
    CHECK(r.used_count == 8);
    CHECK(r.mean_value > 0.7);  // far from the whole-count divisor result
}

TEST_CASE("refined mean stays within the series range") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> series;
        const int n = 2 + trial;
        for (int i = 0; i < n; ++i) series.push_back(u(rng));
        const auto r = mf::feature_construct(series);
        CHECK(r.mean_value >= *std::min_element(series.begin(), series.end()));
        CHECK(r.mean_value <= *std::max_element(series.begin(), series.end()));
        CHECK(r.used_count >= 1);
        CHECK(r.used_count <= r.total_count);
    }
}

TEST_CASE("shuffling the series never changes the refined mean") {
    std::mt19937 rng(13);
    std::normal_distribution<double> major(0.7, 0.05), minor(0.2, 0.03);
    std::vector<double> series;
    for (int i = 0; i < 40; ++i) series.push_back(major(rng));
    for (int i = 0; i < 12; ++i) series.push_back(minor(rng));
    const auto base = mf::feature_construct(series);
    for (int trial = 0; trial < 10; ++trial) {
        std::shuffle(series.begin(), series.end(), rng);
        const auto r = mf::feature_construct(series);
        CHECK(r.mean_value == base.mean_value);  // bitwise, not approximate
        CHECK(r.used_count == base.used_count);
    }
}

TEST_CASE("a lone outlier is discarded without a test") {
    std::vector<double> series = {0.81, 0.80, 0.79, 0.82, 0.05};
    const auto r = mf::feature_construct(series);
    CHECK(r.used_count == 4);
    CHECK(r.mean_value == doctest::Approx(0.805).epsilon(0.01));
}

TEST_CASE("two points cannot separate") {
    const auto r = mf::feature_construct(std::vector<double>{0.1, 0.9});
    CHECK(r.single_cluster);
    CHECK(r.mean_value == doctest::Approx(0.5));
    CHECK(r.used_count == 2);
}

TEST_CASE("contamination robustness across generated mixtures") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> mass(0.70, 0.95), gap(0.3, 0.6),
        center(0.55, 0.9), sigma(0.01, 0.04);
    int ok = 0;
    const int trials = 50;
    for (int t = 0; t < trials; ++t) {
        const double clean_mean = center(rng);
        const double mode_gap = gap(rng);
        const double p = mass(rng);
        const double s = sigma(rng);
        std::normal_distribution<double> clean(clean_mean, s), noise(clean_mean - mode_gap, s);
        std::vector<double> series;
        const int n = 80;
        for (int i = 0; i < n; ++i) {
            series.push_back(i < p * n ? clean(rng) : noise(rng));
        }
        const auto r = mf::feature_construct(series);
        if (std::fabs(r.mean_value - clean_mean) <= 0.25 * mode_gap) ++ok;
    }
    CHECK(ok >= trials * 95 / 100);
}

TEST_CASE("welch p-value behaves at the edges") {
    std::vector<double> a = {0.8, 0.81, 0.79, 0.8};
    std::vector<double> b = {0.1, 0.11, 0.09, 0.1};
    CHECK(mf::welch_p_value(a, b) < 0.001);
    CHECK(mf::welch_p_value(a, a) == doctest::Approx(1.0));
    CHECK(mf::welch_p_value(std::vector<double>{0.5}, b) == 1.0);  // too small to test
}
