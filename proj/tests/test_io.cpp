#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <unistd.h>

#include "helpers.hpp"
#include "meetsense/io.hpp"

using namespace meetsense;
namespace mio = meetsense::io;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("meetsense_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("wav round-trips within 16-bit quantization") {
    TempDir tmp;
    auto t = test_helpers::make_trace("s01", 44100, test_helpers::sine(440.0, 44100, 0.25, 0.8));
    mio::write_wav(tmp.file("s01.wav"), t);
    const auto back = mio::read_wav(tmp.file("s01.wav"));
    CHECK(back.subject_id == "s01");  // from the file stem
    CHECK(back.sample_rate_hz == 44100);
    REQUIRE(back.samples.size() == t.samples.size());
    for (std::size_t i = 0; i < t.samples.size(); ++i) {
        CHECK(std::fabs(back.samples[i] - t.samples[i]) <= 1.0 / 32767.0);
    }
}

TEST_CASE("wav reader accepts other sample rates") {
    TempDir tmp;
    auto t = test_helpers::make_trace("x", 8000, test_helpers::sine(440.0, 8000, 0.5));
    mio::write_wav(tmp.file("x.wav"), t);
    CHECK(mio::read_wav(tmp.file("x.wav")).sample_rate_hz == 8000);
}

TEST_CASE("wav reader rejects missing files") {
    CHECK_THROWS_AS(mio::read_wav("/nonexistent/file.wav"), IoError);
}

TEST_CASE("scan csv round-trips and filters weak readings") {
    TempDir tmp;
    std::vector<ScanRecord> scans = {
        {"a", 0.0, {{"ap1", -50.0}, {"ap2", -79.5}}},
        {"a", 60.0, {{"ap1", -52.25}}},
        {"b", 0.0, {{"ap1", -85.0}, {"ap2", -40.0}}},  // ap1 below cutoff
    };
    mio::write_scans_csv(tmp.file("scans.csv"), scans);
    const auto back = mio::read_scans_csv(tmp.file("scans.csv"));
    REQUIRE(back.count("a") == 1);
    REQUIRE(back.count("b") == 1);
    CHECK(back.at("a").size() == 2);
    CHECK(back.at("a")[0].readings.at("ap1") == doctest::Approx(-50.0));
    CHECK(back.at("a")[1].timestamp_s == doctest::Approx(60.0));
    CHECK(back.at("b")[0].readings.size() == 1);  // -85 dropped on read
    // timestamps strictly increasing per subject
    CHECK(back.at("a")[0].timestamp_s < back.at("a")[1].timestamp_s);
}

TEST_CASE("feature series csv has the documented shape") {
    PairFeatureSeries s;
    s.subject_i = "a";
    s.subject_j = "b";
    s.values = {{0, 0.5}, {2, 0.75}};
    const auto csv = mio::feature_series_csv({s});
    CHECK(csv ==
          "subject_i,subject_j,segment_index,value\n"
          "a,b,0,0.500000\n"
          "a,b,2,0.750000\n");
}

TEST_CASE("graph csv round-trips") {
    TempDir tmp;
    community::SimilarityGraph g({"a", "b", "c"});
    g.set_weight(0, 1, 0.5);
    g.set_weight(1, 2, 0.25);
    mio::write_graph_csv(tmp.file("g.csv"), g);
    const auto back = mio::read_graph_csv(tmp.file("g.csv"));
    CHECK(back.size() == 3);
    CHECK(back.weight(back.index_of("a"), back.index_of("b")) == doctest::Approx(0.5));
    CHECK(back.weight(back.index_of("b"), back.index_of("c")) == doctest::Approx(0.25));
    CHECK(back.weight(back.index_of("a"), back.index_of("c")) == 0.0);
}

TEST_CASE("partition json lists communities and modularity") {
    community::SimilarityGraph g({"a", "b", "c", "d"});
    g.set_weight(0, 1, 1.0);
    g.set_weight(2, 3, 1.0);
    const auto part = community::detect_communities(g);
    const auto json_text = mio::partition_json(g, part);
    CHECK(json_text.find("\"communities\"") != std::string::npos);
    CHECK(json_text.find("\"modularity\"") != std::string::npos);
    CHECK(json_text.find("\"a\"") != std::string::npos);
}

TEST_CASE("group result json carries the decision provenance") {
    detector::GroupResult r;
    r.groups = {{"a", "b"}, {"c"}};
    r.ungrouped = {"c"};
    r.decision_path = "audio-only";
    r.modularities["audio"] = 0.42;
    r.accepting_modularity = 0.42;
    r.window = {0.0, 60.0};
    const auto text = mio::group_result_json(r);
    CHECK(text.find("\"decision_path\": \"audio-only\"") != std::string::npos);
    CHECK(text.find("\"window\"") != std::string::npos);
    CHECK(text.find("\"modularities\"") != std::string::npos);
}

TEST_CASE("truth json round-trips") {
    TempDir tmp;
    sim::GroundTruth truth;
    truth.window = {0.0, 60.0};
    truth.groups = {{"a", "b"}, {"c", "d", "e"}};
    mio::write_truth_json(tmp.file("truth.json"), truth);
    const auto back = mio::read_truth_json(tmp.file("truth.json"));
    CHECK(back.window == truth.window);
    CHECK(back.groups == truth.groups);
}

TEST_CASE("config json round-trips every knob") {
    Config cfg;
    cfg.delta_p1 = 0.4;
    cfg.tie_epsilon = 0.02;
    cfg.next2me_top_n = 8;
    cfg.weight_grid = {0.0, 0.5, 1.0};
    const auto back = Config::from_json(cfg.to_json());
    CHECK(back.delta_p1 == cfg.delta_p1);
    CHECK(back.tie_epsilon == cfg.tie_epsilon);
    CHECK(back.next2me_top_n == cfg.next2me_top_n);
    CHECK(back.weight_grid == cfg.weight_grid);
    CHECK(back.bandpass_low_hz == cfg.bandpass_low_hz);
}

TEST_CASE("dataset writes and loads through the documented layout") {
    TempDir tmp;
    const auto sc = sim::scenario_library("S1", 2);
    auto small = sc;
    small.duration_s = 2.0;
    for (auto& g : small.groups) {
        for (auto& u : g.schedule) u.end_s = std::min(u.end_s, 1.9);
        g.schedule.erase(std::remove_if(g.schedule.begin(), g.schedule.end(),
                                        [](const sim::Utterance& u) { return u.start_s >= 1.8; }),
                         g.schedule.end());
    }
    const auto traces = sim::synth_audio(small);
    const auto scans = sim::synth_scans(small, 1.0);
    const auto truth = sim::ground_truth(small);
    mio::write_dataset(tmp.path.string(), small, traces, scans, truth);

    CHECK(fs::exists(tmp.path / "u1.wav"));
    CHECK(fs::exists(tmp.path / "scans.csv"));
    CHECK(fs::exists(tmp.path / "truth.json"));
    CHECK(fs::exists(tmp.path / "scenario.json"));

    const auto ds = mio::load_dataset(tmp.path.string());
    CHECK(ds.subjects.size() == traces.size());
    CHECK(ds.truth.groups == truth.groups);
    bool all_have_scans = true;
    for (const auto& s : ds.subjects) all_have_scans = all_have_scans && !s.scans.empty();
    CHECK(all_have_scans);
}

TEST_CASE("file hash is stable and content-sensitive") {
    TempDir tmp;
    mio::write_text_file(tmp.file("x.txt"), "hello");
    mio::write_text_file(tmp.file("y.txt"), "hello");
    mio::write_text_file(tmp.file("z.txt"), "world");
    CHECK(mio::file_hash(tmp.file("x.txt")) == mio::file_hash(tmp.file("y.txt")));
    CHECK(mio::file_hash(tmp.file("x.txt")) != mio::file_hash(tmp.file("z.txt")));
}

TEST_CASE("manifest embeds config, seed and hashes") {
    TempDir tmp;
    Config cfg;
    mio::write_text_file(tmp.file("in.csv"), "data");
    mio::write_manifest(tmp.file("manifest.json"), cfg, 42,
                        {{"in.csv", mio::file_hash(tmp.file("in.csv"))}});
    const auto text = mio::read_text_file(tmp.file("manifest.json"));
    CHECK(text.find("\"seed\": 42") != std::string::npos);
    CHECK(text.find("\"tool_version\"") != std::string::npos);
    CHECK(text.find("in.csv") != std::string::npos);
    CHECK(text.find("\"config\"") != std::string::npos);
}
