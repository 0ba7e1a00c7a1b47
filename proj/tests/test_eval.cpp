#include <doctest.h>

#include "meetsense/eval.hpp"

using namespace meetsense;
namespace me = meetsense::eval;

namespace {
using Set = std::set<std::string>;
using Sets = std::vector<std::set<std::string>>;
}  // namespace

TEST_CASE("f1_pair examples") {
    CHECK(me::f1_pair(Set{"a", "b", "c"}, Set{"a", "b", "c"}) == doctest::Approx(1.0));
    CHECK(me::f1_pair(Set{"a", "b", "c"}, Set{"a", "b"}) == doctest::Approx(0.8));
    CHECK(me::f1_pair(Set{"a", "b"}, Set{"c", "d"}) == doctest::Approx(0.0));
    CHECK(me::f1_pair(Set{"a", "b"}, Set{}) == 0.0);
}

TEST_CASE("f1_pair is symmetric in its arguments") {
    const Set k{"a", "b", "c"};
    const Set v{"b", "c", "d", "e"};
    CHECK(me::f1_pair(k, v) == me::f1_pair(v, k));
}

TEST_CASE("f1_overall examples") {
    SUBCASE("perfect detection of two groups") {
        const Sets truth = {{"a", "b"}, {"c", "d", "e"}};
        CHECK(me::f1_overall(truth, truth) == doctest::Approx(1.0));
    }
    SUBCASE("splitting one truth group") {
        const Sets truth = {{"a", "b", "c", "d"}};
        const Sets detected = {{"a", "b"}, {"c", "d"}};
        CHECK(me::f1_overall(truth, detected) == doctest::Approx(2.0 / 3.0));
    }
    SUBCASE("spurious singleton dilutes") {
        const Sets truth = {{"a", "b", "c"}};
        const Sets detected = {{"a", "b", "c"}, {"a"}};
        CHECK(me::f1_overall(truth, detected) == doctest::Approx(0.75));
    }
    SUBCASE("empty detection scores 0") {
        CHECK(me::f1_overall(Sets{{"a"}}, Sets{}) == 0.0);
    }
}

TEST_CASE("f1_overall is directional") {
    // the denominator counts detected groups, so the roles do not commute
    const Sets truth = {{"a", "b"}, {"c", "d"}};
    const Sets detected = {{"a", "b"}};
    CHECK(me::f1_overall(truth, detected) == doctest::Approx(1.0));
    CHECK(me::f1_overall(detected, truth) == doctest::Approx(0.5));
}

TEST_CASE("f1_overall is 1 exactly when detection is a permutation of truth") {
    const Sets truth = {{"a", "b"}, {"c", "d", "e"}, {"f"}};
    const Sets permuted = {{"f"}, {"c", "d", "e"}, {"a", "b"}};
    CHECK(me::f1_overall(truth, permuted) == doctest::Approx(1.0));

    const Sets off = {{"f"}, {"c", "d"}, {"a", "b"}};
    CHECK(me::f1_overall(truth, off) < 1.0);
}

TEST_CASE("optimal assignment never reuses a truth group") {
    const Sets truth = {{"a", "b", "c", "d"}, {"e", "f"}};
    const Sets detected = {{"a", "b"}, {"c", "d"}};
    // best-match lets both detected groups claim the same truth group
    CHECK(me::f1_overall(truth, detected, false) == doctest::Approx(2.0 / 3.0));
    // the assignment variant still matches both (distinct pairs score best)
    CHECK(me::f1_overall(truth, detected, true) <= me::f1_overall(truth, detected, false));
}

TEST_CASE("rows_to_csv is stable") {
    std::vector<me::EvalRow> rows = {{"S1", "groupsense", 1.0, 0.2879, "proximity+audio"},
                                     {"S1", "next2me", 0.5333, 0.1261, "proximity+audio"}};
    const auto csv = me::rows_to_csv(rows);
    CHECK(csv ==
          "scenario,method,f1,modularity,decision_path\n"
          "S1,groupsense,1.0000,0.2879,proximity+audio\n"
          "S1,next2me,0.5333,0.1261,proximity+audio\n");
}

TEST_CASE("sweep csv and svg carry every point") {
    std::vector<me::SweepPoint> pts = {{20.0, "groupsense", 1.0, 0.9},
                                       {20.0, "next2me", 0.8, 0.7},
                                       {5.0, "groupsense", 0.9, 0.8},
                                       {5.0, "next2me", 0.6, 0.5}};
    const auto csv = me::sweep_to_csv(pts);
    CHECK(csv.find("snr_db,method,f1,same_group_similarity\n") == 0);
    CHECK(csv.find("20.0,groupsense,1.0000,0.9000\n") != std::string::npos);
    const auto svg = me::sweep_to_svg(pts);
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("groupsense") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
}
