#include <doctest.h>

#include <random>

#include "meetsense/proximity.hpp"

using namespace meetsense;
namespace mp = meetsense::proximity;

namespace {

ScanRecord scan(std::string id, double t, std::map<std::string, double> readings) {
    return ScanRecord{std::move(id), t, std::move(readings)};
}

}  // namespace

TEST_CASE("pair_distance basics") {
    const auto a = scan("a", 0.0, {{"A", -50.0}, {"B", -60.0}});

    SUBCASE("identical readings give zero") {
        CHECK(*mp::pair_distance(a, a) == doctest::Approx(0.0));
    }
    SUBCASE("mean absolute difference over common APs") {
        const auto b = scan("b", 0.0, {{"A", -54.0}, {"B", -70.0}});
        CHECK(*mp::pair_distance(a, b) == doctest::Approx(7.0));
    }
    SUBCASE("no common access point is absent, not zero") {
        const auto b = scan("b", 0.0, {{"C", -40.0}});
        CHECK(!mp::pair_distance(a, b).has_value());
    }
    SUBCASE("uncommon APs are ignored") {
        const auto b = scan("b", 0.0, {{"A", -54.0}, {"B", -70.0}, {"Z", -41.0}});
        CHECK(*mp::pair_distance(a, b) == doctest::Approx(7.0));
    }
}

TEST_CASE("filter_readings drops weak APs") {
    auto s = mp::filter_readings(scan("a", 0.0, {{"A", -50.0}, {"B", -81.0}, {"C", -80.0}}));
    CHECK(s.readings.size() == 2);
    CHECK(s.readings.count("A") == 1);
    CHECK(s.readings.count("C") == 1);
}

TEST_CASE("proximity similarity mapping") {
    std::vector<ScanRecord> li, lj;

    SUBCASE("zero distance maps to 1") {
        li = {scan("a", 10.0, {{"A", -50.0}})};
        lj = {scan("b", 12.0, {{"A", -50.0}})};
        const auto s = mp::proximity_similarity(li, lj, 60.0, 30.0);
        REQUIRE(s.values.size() == 1);
        CHECK(s.values[0].second == doctest::Approx(1.0));
    }
    SUBCASE("distance at or past the cap maps to 0") {
        li = {scan("a", 10.0, {{"A", -20.0}})};
        lj = {scan("b", 12.0, {{"A", -55.0}})};
        const auto s = mp::proximity_similarity(li, lj, 60.0, 30.0);
        CHECK(s.values[0].second == doctest::Approx(0.0));
    }
    SUBCASE("linear in between") {
        li = {scan("a", 10.0, {{"A", -50.0}, {"B", -60.0}})};
        lj = {scan("b", 12.0, {{"A", -54.0}, {"B", -70.0}})};
        const auto s = mp::proximity_similarity(li, lj, 60.0, 30.0);
        CHECK(s.values[0].second == doctest::Approx(1.0 - 7.0 / 30.0));
    }
}

TEST_CASE("proximity similarity with no defined bucket raises") {
    std::vector<ScanRecord> li = {scan("a", 0.0, {{"A", -50.0}})};
    std::vector<ScanRecord> lj = {scan("b", 0.0, {{"B", -50.0}})};
    CHECK_THROWS_AS(mp::proximity_similarity(li, lj, 60.0, 30.0), InsufficientDataError);
}

TEST_CASE("proximity similarity matches nearest scan across buckets") {
    // i scans at t=59, j at t=61: different 60 s buckets, within 30 s slack.
    std::vector<ScanRecord> li = {scan("a", 59.0, {{"A", -50.0}})};
    std::vector<ScanRecord> lj = {scan("b", 61.0, {{"A", -56.0}})};
    const auto s = mp::proximity_similarity(li, lj, 60.0, 30.0);
    REQUIRE(!s.values.empty());
    CHECK(s.values[0].second == doctest::Approx(1.0 - 6.0 / 30.0));
}

TEST_CASE("proximity similarity is symmetric per bucket") {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> rssi(-79.0, -35.0);
    std::vector<ScanRecord> li, lj;
    for (int k = 0; k < 8; ++k) {
        li.push_back(scan("a", 60.0 * k + 3.0, {{"A", rssi(rng)}, {"B", rssi(rng)}}));
        lj.push_back(scan("b", 60.0 * k + 9.0, {{"A", rssi(rng)}, {"B", rssi(rng)}}));
    }
    const auto ij = mp::proximity_similarity(li, lj, 60.0, 30.0);
    const auto ji = mp::proximity_similarity(lj, li, 60.0, 30.0);
    REQUIRE(ij.values.size() == ji.values.size());
    for (std::size_t k = 0; k < ij.values.size(); ++k) {
        CHECK(ij.values[k].first == ji.values[k].first);
        CHECK(ij.values[k].second == ji.values[k].second);
    }
}

TEST_CASE("raising any single reading gap never raises similarity") {
    std::vector<ScanRecord> li = {scan("a", 5.0, {{"A", -50.0}, {"B", -60.0}, {"C", -44.0}})};
    std::vector<ScanRecord> lj = {scan("b", 8.0, {{"A", -55.0}, {"B", -63.0}, {"C", -48.0}})};
    const double base = mp::proximity_similarity(li, lj, 60.0, 30.0).values[0].second;
    for (const char* ap : {"A", "B", "C"}) {
        auto lj2 = lj;
        lj2[0].readings[ap] -= 5.0;  // widen that AP's gap
        const double bumped = mp::proximity_similarity(li, lj2, 60.0, 30.0).values[0].second;
        CHECK(bumped <= base);
    }
}
