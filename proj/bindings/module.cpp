#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "meetsense/audio.hpp"
#include "meetsense/baselines.hpp"
#include "meetsense/community.hpp"
#include "meetsense/config.hpp"
#include "meetsense/detector.hpp"
#include "meetsense/eval.hpp"
#include "meetsense/features.hpp"
#include "meetsense/io.hpp"
#include "meetsense/proximity.hpp"
#include "meetsense/sim.hpp"

namespace py = pybind11;
using namespace meetsense;

namespace {

AudioTrace make_trace(const std::vector<double>& samples, int fs, const std::string& id) {
    AudioTrace t;
    t.subject_id = id;
    t.sample_rate_hz = fs;
    t.samples = samples;
    return t;
}

ScanRecord make_scan(double t, const std::map<std::string, double>& readings,
                     const std::string& id) {
    return proximity::filter_readings(ScanRecord{id, t, readings});
}

std::vector<ScanRecord> make_log(
    const std::vector<std::pair<double, std::map<std::string, double>>>& entries,
    const std::string& id) {
    std::vector<ScanRecord> log;
    log.reserve(entries.size());
    for (const auto& [t, readings] : entries) log.push_back(make_scan(t, readings, id));
    return log;
}

community::SimilarityGraph make_graph(
    const std::vector<std::string>& nodes,
    const std::vector<std::tuple<std::string, std::string, double>>& edges) {
    community::SimilarityGraph g(nodes);
    for (const auto& [a, b, w] : edges) g.set_weight(a, b, w);
    return g;
}

Config config_from(const std::string& json_text) {
    if (json_text.empty()) {
        Config cfg;
        cfg.validate();
        return cfg;
    }
    return Config::from_json(json_text);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Meeting-group detection: cepstral acoustic context, WiFi proximity, "
              "modularity-gated community detection.";

    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<AlignmentError>(m, "AlignmentError", PyExc_RuntimeError);
    py::register_exception<InsufficientDataError>(m, "InsufficientDataError", PyExc_RuntimeError);
    py::register_exception<DegenerateInputError>(m, "DegenerateInputError", PyExc_ValueError);
    py::register_exception<DegenerateGraphError>(m, "DegenerateGraphError", PyExc_ValueError);
    py::register_exception<InsufficientPopulationError>(m, "InsufficientPopulationError",
                                                        PyExc_RuntimeError);
    py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    // audio
    m.def(
        "normalize",
        [](const std::vector<double>& samples, int fs) {
            return audio::normalize(make_trace(samples, fs, "x")).samples;
        },
        py::arg("samples"), py::arg("sample_rate_hz") = 44100,
        "Peak-normalize a waveform (all-zero input passes through).");
    m.def(
        "bandpass",
        [](const std::vector<double>& samples, int fs, double low, double high) {
            return audio::bandpass(make_trace(samples, fs, "x"), low, high).samples;
        },
        py::arg("samples"), py::arg("sample_rate_hz") = 44100, py::arg("low_hz") = 300.0,
        py::arg("high_hz") = 3400.0, "Zero-phase Butterworth bandpass.");
    m.def(
        "ccep", [](const std::vector<double>& samples) { return audio::ccep(samples); },
        py::arg("segment"), "Complex cepstrum of one segment.");
    m.def(
        "estimate_drift",
        [](const std::vector<double>& reference, const std::vector<double>& target, int fs,
           double max_shift_s) {
            const auto est = audio::estimate_drift(make_trace(reference, fs, "ref"),
                                                   make_trace(target, fs, "tgt"), max_shift_s);
            return std::make_pair(est.shift_s, est.peak_correlation);
        },
        py::arg("reference"), py::arg("target"), py::arg("sample_rate_hz") = 44100,
        py::arg("max_shift_s") = 30.0,
        "Returns (shift_s, peak_correlation); positive shift means the target lags.");
    m.def(
        "acoustic_similarity",
        [](const std::vector<double>& samples_i, const std::vector<double>& samples_j, int fs,
           double segment_len_s) {
            return audio::acoustic_similarity(make_trace(samples_i, fs, "i"),
                                              make_trace(samples_j, fs, "j"), segment_len_s)
                .values;
        },
        py::arg("samples_i"), py::arg("samples_j"), py::arg("sample_rate_hz") = 44100,
        py::arg("segment_len_s") = 1.0,
        "Per-segment tone similarity of two aligned traces: list of (segment, value).");

    // proximity
    m.def(
        "pair_distance",
        [](const std::map<std::string, double>& a, const std::map<std::string, double>& b)
            -> std::optional<double> {
            return proximity::pair_distance(make_scan(0.0, a, "a"), make_scan(0.0, b, "b"));
        },
        py::arg("readings_i"), py::arg("readings_j"),
        "Manhattan RSSI distance over shared APs; None when none are shared.");
    m.def(
        "proximity_similarity",
        [](const std::vector<std::pair<double, std::map<std::string, double>>>& log_i,
           const std::vector<std::pair<double, std::map<std::string, double>>>& log_j,
           double bucket_s, double cap_db) {
            return proximity::proximity_similarity(make_log(log_i, "i"), make_log(log_j, "j"),
                                                   bucket_s, cap_db)
                .values;
        },
        py::arg("log_i"), py::arg("log_j"), py::arg("time_bucket_s") = 60.0,
        py::arg("distance_cap_db") = 30.0,
        "Per-bucket proximity similarity from two scan logs [(t, {ap: rssi}), ...].");

    // features
    m.def(
        "feature_construct",
        [](const std::vector<double>& series, double alpha) {
            const auto r = features::feature_construct(series, alpha);
            py::dict d;
            d["mean_value"] = r.mean_value;
            d["used_count"] = r.used_count;
            d["total_count"] = r.total_count;
            d["single_cluster"] = r.single_cluster;
            return d;
        },
        py::arg("series"), py::arg("significance_alpha") = 0.05,
        "Refined mean after discarding the minor noise cluster.");

    // community
    m.def(
        "modularity",
        [](const std::vector<std::string>& nodes,
           const std::vector<std::tuple<std::string, std::string, double>>& edges,
           const std::map<std::string, int>& assignment) {
            const auto g = make_graph(nodes, edges);
            std::vector<int> a(nodes.size());
            for (std::size_t i = 0; i < nodes.size(); ++i) a[i] = assignment.at(nodes[i]);
            return community::modularity(g, a);
        },
        py::arg("nodes"), py::arg("edges"), py::arg("assignment"),
        "Newman weighted modularity of a partition given as {node: community}.");
    m.def(
        "detect_communities",
        [](const std::vector<std::string>& nodes,
           const std::vector<std::tuple<std::string, std::string, double>>& edges,
           const std::string& algorithm) {
            const auto g = make_graph(nodes, edges);
            const auto part = community::detect_communities(
                g, algorithm == "louvain" ? community::Algorithm::louvain
                                          : community::Algorithm::walktrap);
            std::vector<std::vector<std::string>> communities;
            for (const auto& comm : part.communities()) {
                std::vector<std::string> ids;
                for (std::size_t idx : comm) ids.push_back(nodes[idx]);
                communities.push_back(std::move(ids));
            }
            return std::make_pair(communities, part.modularity);
        },
        py::arg("nodes"), py::arg("edges"), py::arg("algorithm") = "walktrap",
        "Returns (communities, modularity).");

    // eval
    m.def(
        "f1_pair",
        [](const std::set<std::string>& truth, const std::set<std::string>& detected) {
            return eval::f1_pair(truth, detected);
        },
        py::arg("truth_group"), py::arg("detected_group"));
    m.def(
        "f1_overall",
        [](const std::vector<std::set<std::string>>& truth,
           const std::vector<std::set<std::string>>& detected, bool optimal) {
            return eval::f1_overall(truth, detected, optimal);
        },
        py::arg("truth"), py::arg("detected"), py::arg("optimal_assignment") = false);

    // sim + pipeline over dataset directories
    m.def("scenario_names", &sim::scenario_names);
    m.def(
        "generate_dataset",
        [](const std::string& library, const std::string& out_dir, std::uint64_t seed) {
            auto sc = sim::scenario_library(library, seed);
            io::write_dataset(out_dir, sc, sim::synth_audio(sc), sim::synth_scans(sc),
                              sim::ground_truth(sc));
        },
        py::arg("library"), py::arg("out_dir"), py::arg("seed") = 1,
        "Synthesize a library scenario into a dataset directory.");
    m.def(
        "detect_dataset",
        [](const std::string& audio_dir, const std::string& scans_csv,
           const std::string& config_json) {
            const auto ds = io::load_dataset(audio_dir, scans_csv);
            const auto result = detector::detect(ds.subjects, config_from(config_json));
            return io::group_result_json(result);
        },
        py::arg("audio_dir"), py::arg("scans_csv") = "", py::arg("config_json") = "",
        "Run the detector over a dataset directory; returns the result JSON.");
    m.def(
        "compare_dataset",
        [](const std::string& dataset_dir, const std::string& config_json) {
            const auto ds = io::load_dataset(dataset_dir);
            return eval::rows_to_csv(eval::compare_methods(ds, config_from(config_json)));
        },
        py::arg("dataset_dir"), py::arg("config_json") = "",
        "Run all three methods against ground truth; returns the comparison CSV.");
    m.def("default_config_json", [] {
        Config cfg;
        return cfg.to_json();
    });

    m.attr("__version__") = io::kToolVersion;
}
