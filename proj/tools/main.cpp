#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "meetsense/baselines.hpp"
#include "meetsense/config.hpp"
#include "meetsense/detector.hpp"
#include "meetsense/eval.hpp"
#include "meetsense/io.hpp"
#include "meetsense/sim.hpp"

namespace fs = std::filesystem;
using namespace meetsense;

namespace {

Config load_config(const std::string& path_opt) {
    if (!path_opt.empty()) return Config::load(path_opt);
    if (const char* env = std::getenv("MEETSENSE_CONFIG")) {
        if (*env) return Config::load(env);
    }
    Config cfg;
    cfg.validate();
    return cfg;
}

std::map<std::string, std::string> hash_dataset_inputs(const std::string& dir) {
    std::map<std::string, std::string> hashes;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto ext = entry.path().extension();
        if (ext == ".wav" || ext == ".csv" || ext == ".json") {
            hashes[entry.path().filename().string()] = io::file_hash(entry.path().string());
        }
    }
    return hashes;
}

int cmd_gen(const std::string& library, const std::string& scenario_file,
            const std::string& out_dir, std::uint64_t seed, bool seed_set,
            const Config& cfg) {
    sim::Scenario sc;
    if (!scenario_file.empty()) {
        sc = sim::load_scenario(scenario_file);
    } else {
        sc = sim::scenario_library(library, seed_set ? seed : 1);
    }
    if (seed_set) sc.seed = seed;

    const auto traces = sim::synth_audio(sc);
    const auto scans = sim::synth_scans(sc);
    const auto truth = sim::ground_truth(sc);
    io::write_dataset(out_dir, sc, traces, scans, truth);
    io::write_manifest((fs::path(out_dir) / "manifest.json").string(), cfg, sc.seed,
                       hash_dataset_inputs(out_dir));
    std::cout << "wrote " << traces.size() << " traces + scans + truth to " << out_dir << "\n";
    return 0;
}

int cmd_detect(const std::string& audio_dir, const std::string& scans_file,
               const std::string& out_file, const Config& cfg) {
    const auto ds = io::load_dataset(audio_dir, scans_file);
    const auto result = detector::detect(ds.subjects, cfg);
    const auto text = io::group_result_json(result);
    if (out_file.empty()) {
        std::cout << text;
    } else {
        io::write_text_file(out_file, text);
        io::write_manifest(out_file + ".manifest.json", cfg, 0, hash_dataset_inputs(audio_dir));
    }
    return 0;
}

int cmd_compare(const std::string& dataset_dir, const std::string& out_file,
                const Config& cfg) {
    auto ds = io::load_dataset(dataset_dir);
    if (ds.truth.groups.empty()) {
        std::cerr << "compare: dataset has no truth.json\n";
        return 1;
    }
    const auto rows = eval::compare_methods(ds, cfg);
    const auto csv = eval::rows_to_csv(rows);
    if (out_file.empty()) {
        std::cout << csv;
    } else {
        io::write_text_file(out_file, csv);
        io::write_manifest(out_file + ".manifest.json", cfg, 0, hash_dataset_inputs(dataset_dir));
    }
    return 0;
}

int cmd_eval(const std::string& dataset_dir, const std::string& result_file,
             const std::string& out_file) {
    const auto truth = io::read_truth_json((fs::path(dataset_dir) / "truth.json").string());
    const auto j = nlohmann::json::parse(io::read_text_file(result_file));
    const auto groups = j.at("groups").get<std::vector<std::vector<std::string>>>();

    eval::EvalRow row;
    row.scenario = fs::path(dataset_dir).filename().string();
    row.method = j.value("method", "groupsense");
    row.f1 = eval::f1_overall(truth.groups, groups);
    row.modularity = j.value("accepting_modularity", 0.0);
    row.decision_path = j.value("decision_path", "");
    const auto csv = eval::rows_to_csv({row});
    if (out_file.empty()) {
        std::cout << csv;
    } else {
        io::write_text_file(out_file, csv);
    }
    return 0;
}

int cmd_sweep(const std::string& library, const std::string& scenario_file,
              const std::vector<double>& snr_grid, const std::string& methods_arg, int seeds,
              const std::string& out_dir, std::uint64_t seed, bool seed_set, const Config& cfg) {
    sim::Scenario sc;
    if (!scenario_file.empty()) {
        sc = sim::load_scenario(scenario_file);
    } else {
        sc = sim::scenario_library(library, seed_set ? seed : 1);
    }
    if (seed_set) sc.seed = seed;

    std::vector<baselines::Method> methods;
    std::stringstream ss(methods_arg);
    std::string name;
    while (std::getline(ss, name, ',')) methods.push_back(baselines::method_from_name(name));

    const auto points = eval::noise_sweep(sc, snr_grid, methods, cfg, seeds);
    fs::create_directories(out_dir);
    io::write_text_file((fs::path(out_dir) / "sweep.csv").string(), eval::sweep_to_csv(points));
    io::write_text_file((fs::path(out_dir) / "sweep.svg").string(), eval::sweep_to_svg(points));
    io::write_manifest((fs::path(out_dir) / "manifest.json").string(), cfg, sc.seed, {});
    std::cout << "wrote sweep.csv and sweep.svg to " << out_dir << "\n";
    return 0;
}

int cmd_features(const std::string& audio_dir, const std::string& scans_file,
                 const std::string& out_dir, const Config& cfg) {
    const auto ds = io::load_dataset(audio_dir, scans_file);
    const auto table = detector::compute_features(ds.subjects, cfg);

    fs::create_directories(out_dir);
    std::vector<PairFeatureSeries> acoustic, proximity;
    for (const auto& [key, series] : table.acoustic_series) acoustic.push_back(series);
    for (const auto& [key, series] : table.proximity_series) proximity.push_back(series);
    io::write_text_file((fs::path(out_dir) / "acoustic_series.csv").string(),
                        io::feature_series_csv(acoustic));
    io::write_text_file((fs::path(out_dir) / "proximity_series.csv").string(),
                        io::feature_series_csv(proximity));

    std::ostringstream refined;
    refined << "subject_i,subject_j,kind,mean_value,used_count,total_count,single_cluster\n";
    auto emit = [&refined](const std::map<PairKey, features::RefinedFeature>& m,
                           const char* kind) {
        for (const auto& [key, f] : m) {
            refined << key.first << ',' << key.second << ',' << kind << ','
                    << io::format_fixed(f.mean_value, 6) << ',' << f.used_count << ','
                    << f.total_count << ',' << (f.single_cluster ? 1 : 0) << '\n';
        }
    };
    emit(table.proximity, "proximity");
    emit(table.acoustic, "acoustic");
    io::write_text_file((fs::path(out_dir) / "refined_features.csv").string(), refined.str());
    std::cout << "wrote feature CSVs to " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MeetSense: meeting-group detection from audio and WiFi scans"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path,
                   "config JSON (default: $MEETSENSE_CONFIG or built-in defaults)");

    auto* gen = app.add_subcommand("gen", "generate a synthetic dataset");
    std::string gen_library = "S1", gen_scenario, gen_out;
    std::uint64_t gen_seed = 1;
    auto* gen_lib_opt =
        gen->add_option("--library", gen_library, "library scenario name (S1..S7, G6G7_WALK)");
    auto* gen_sc_opt = gen->add_option("--scenario", gen_scenario, "scenario JSON file");
    gen->add_option("--out", gen_out, "output dataset directory")->required();
    auto* gen_seed_opt = gen->add_option("--seed", gen_seed, "override the scenario seed");
    gen_sc_opt->excludes(gen_lib_opt);

    auto* detect = app.add_subcommand("detect", "detect meeting groups in a dataset");
    std::string det_audio, det_scans, det_out;
    detect->add_option("--audio-dir", det_audio, "directory of per-subject WAV files")->required();
    detect->add_option("--scans", det_scans, "scan CSV (default: <audio-dir>/scans.csv)");
    detect->add_option("--out", det_out, "result JSON path (default: stdout)");

    auto* compare = app.add_subcommand("compare", "run all three methods against ground truth");
    std::string cmp_dataset, cmp_out;
    compare->add_option("--dataset", cmp_dataset, "dataset directory (with truth.json)")
        ->required();
    compare->add_option("--out", cmp_out, "comparison CSV path (default: stdout)");

    auto* evalc = app.add_subcommand("eval", "score a detection result against ground truth");
    std::string ev_dataset, ev_result, ev_out;
    evalc->add_option("--dataset", ev_dataset, "dataset directory (with truth.json)")->required();
    evalc->add_option("--result", ev_result, "detection result JSON")->required();
    evalc->add_option("--out", ev_out, "eval CSV path (default: stdout)");

    auto* sweep = app.add_subcommand("sweep", "noise sweep across methods");
    std::string sw_library = "S3", sw_scenario, sw_methods = "groupsense,next2me,audiomatch",
                sw_out;
    std::vector<double> sw_snr = {20.0, 15.0, 10.0, 5.0, 0.0};
    int sw_seeds = 1;
    std::uint64_t sw_seed = 1;
    auto* sw_lib_opt = sweep->add_option("--library", sw_library, "library scenario name");
    auto* sw_sc_opt = sweep->add_option("--scenario", sw_scenario, "scenario JSON file");
    sweep->add_option("--snr", sw_snr, "SNR grid in dB");
    sweep->add_option("--methods", sw_methods, "comma-separated methods");
    sweep->add_option("--seeds", sw_seeds, "seeds averaged per grid point");
    sweep->add_option("--out", sw_out, "output directory")->required();
    auto* sw_seed_opt = sweep->add_option("--seed", sw_seed, "base scenario seed");
    sw_sc_opt->excludes(sw_lib_opt);

    auto* features = app.add_subcommand("features", "emit pairwise feature CSVs");
    std::string ft_audio, ft_scans, ft_out;
    features->add_option("--audio-dir", ft_audio, "directory of per-subject WAV files")
        ->required();
    features->add_option("--scans", ft_scans, "scan CSV (default: <audio-dir>/scans.csv)");
    features->add_option("--out", ft_out, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        const auto cfg = load_config(config_path);
        if (gen->parsed()) {
            return cmd_gen(gen_library, gen_scenario, gen_out, gen_seed,
                           gen_seed_opt->count() > 0, cfg);
        }
        if (detect->parsed()) return cmd_detect(det_audio, det_scans, det_out, cfg);
        if (compare->parsed()) return cmd_compare(cmp_dataset, cmp_out, cfg);
        if (evalc->parsed()) return cmd_eval(ev_dataset, ev_result, ev_out);
        if (sweep->parsed()) {
            return cmd_sweep(sw_library, sw_scenario, sw_snr, sw_methods, sw_seeds, sw_out,
                             sw_seed, sw_seed_opt->count() > 0, cfg);
        }
        if (features->parsed()) return cmd_features(ft_audio, ft_scans, ft_out, cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
