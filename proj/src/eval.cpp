#include "meetsense/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace meetsense::eval {
namespace {

std::vector<std::set<std::string>> to_sets(const std::vector<std::vector<std::string>>& groups) {
    std::vector<std::set<std::string>> out;
    out.reserve(groups.size());
    for (const auto& g : groups) out.emplace_back(g.begin(), g.end());
    return out;
}

std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

double assignment_best(const std::vector<std::vector<double>>& score,
                       std::vector<int>& taken, std::size_t v) {
    // Exhaustive matching: detected group v onward, truth groups used at
    // most once. Sizes here are tiny (a handful of groups per scenario).
    if (v == score.size()) return 0.0;
    double best = 0.0;
    // Option: leave v unmatched.
    best = assignment_best(score, taken, v + 1);
    for (std::size_t k = 0; k < score[v].size(); ++k) {
        if (taken[k]) continue;
        taken[k] = 1;
        best = std::max(best, score[v][k] + assignment_best(score, taken, v + 1));
        taken[k] = 0;
    }
    return best;
}

}  // namespace

double f1_pair(const std::set<std::string>& truth_group,
               const std::set<std::string>& detected_group) {
    if (detected_group.empty()) return 0.0;
    std::size_t inter = 0;
    for (const auto& m : detected_group) inter += truth_group.count(m);
    const double denom = static_cast<double>(truth_group.size() + detected_group.size());
    return denom > 0.0 ? 2.0 * static_cast<double>(inter) / denom : 0.0;
}

double f1_overall(const std::vector<std::set<std::string>>& truth,
                  const std::vector<std::set<std::string>>& detected,
                  bool optimal_assignment) {
    if (detected.empty()) return 0.0;

    if (!optimal_assignment) {
        double sum = 0.0;
        for (const auto& v : detected) {
            double best = 0.0;
            for (const auto& k : truth) best = std::max(best, f1_pair(k, v));
            sum += best;
        }
        return sum / static_cast<double>(detected.size());
    }

    std::vector<std::vector<double>> score(detected.size(),
                                           std::vector<double>(truth.size(), 0.0));
    for (std::size_t v = 0; v < detected.size(); ++v) {
        for (std::size_t k = 0; k < truth.size(); ++k) {
            score[v][k] = f1_pair(truth[k], detected[v]);
        }
    }
    std::vector<int> taken(truth.size(), 0);
    return assignment_best(score, taken, 0) / static_cast<double>(detected.size());
}

double f1_overall(const std::vector<std::vector<std::string>>& truth,
                  const std::vector<std::vector<std::string>>& detected,
                  bool optimal_assignment) {
    return f1_overall(to_sets(truth), to_sets(detected), optimal_assignment);
}

Dataset dataset_from_scenario(const sim::Scenario& scenario) {
    Dataset ds;
    ds.name = scenario.name;
    const auto traces = sim::synth_audio(scenario);
    auto scans = sim::synth_scans(scenario);
    std::map<std::string, std::vector<ScanRecord>> by_subject;
    for (auto& s : scans) by_subject[s.subject_id].push_back(std::move(s));
    for (const auto& t : traces) {
        detector::SubjectData sd;
        sd.scans = by_subject[t.subject_id];
        sd.audio = t;
        ds.subjects.push_back(std::move(sd));
    }
    ds.truth = sim::ground_truth(scenario);
    return ds;
}

EvalRow run_method(const Dataset& dataset, baselines::Method method, const Config& config) {
    const auto result = baselines::baseline_detect(method, dataset.subjects, config);
    EvalRow row;
    row.scenario = dataset.name;
    row.method = baselines::method_name(method);
    row.f1 = f1_overall(dataset.truth.groups, result.groups);
    row.modularity = result.accepting_modularity;
    row.decision_path = result.decision_path;
    return row;
}

std::vector<EvalRow> compare_methods(const Dataset& dataset, const Config& config) {
    std::vector<EvalRow> rows;
    for (auto method : {baselines::Method::groupsense, baselines::Method::next2me,
                        baselines::Method::audiomatch}) {
        rows.push_back(run_method(dataset, method, config));
    }
    return rows;
}

std::string rows_to_csv(const std::vector<EvalRow>& rows) {
    std::ostringstream out;
    out << "scenario,method,f1,modularity,decision_path\n";
    for (const auto& r : rows) {
        out << r.scenario << ',' << r.method << ',' << format_fixed(r.f1, 4) << ','
            << format_fixed(r.modularity, 4) << ',' << r.decision_path << '\n';
    }
    return out.str();
}

namespace {

// Mean similarity over ground-truth same-group pairs, by the method's own
// aggregate.
double same_group_similarity(const Dataset& dataset, baselines::Method method,
                             const Config& config) {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& g : dataset.truth.groups) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            for (std::size_t j = i + 1; j < g.size(); ++j) pairs.emplace_back(g[i], g[j]);
        }
    }
    if (pairs.empty()) return 0.0;

    double sum = 0.0;
    if (method == baselines::Method::groupsense) {
        const auto table = detector::compute_features(dataset.subjects, config);
        for (const auto& [a, b] : pairs) {
            auto it = table.acoustic.find(PairKey(a, b));
            if (it != table.acoustic.end()) sum += it->second.mean_value;
        }
    } else {
        const auto traces = detector::preprocess_and_align(dataset.subjects, config);
        std::map<std::string, const AudioTrace*> by_id;
        for (const auto& t : traces) by_id[t.subject_id] = &t;
        for (const auto& [a, b] : pairs) {
            baselines::FingerprintSeries s;
            if (method == baselines::Method::next2me) {
                s = baselines::next2me_similarity(*by_id.at(a), *by_id.at(b),
                                                  config.next2me_top_n, config.next2me_window_s);
            } else {
                s = baselines::audiomatch_similarity(*by_id.at(a), *by_id.at(b),
                                                     baselines::AudioMatchParams::from(config));
            }
            const auto values = s.values_only();
            if (!values.empty()) {
                sum += std::accumulate(values.begin(), values.end(), 0.0) /
                       static_cast<double>(values.size());
            }
        }
    }
    return sum / static_cast<double>(pairs.size());
}

}  // namespace

std::vector<SweepPoint> noise_sweep(const sim::Scenario& base,
                                    const std::vector<double>& snr_grid_db,
                                    const std::vector<baselines::Method>& methods,
                                    const Config& config, int seeds_per_point) {
    std::vector<SweepPoint> out;
    for (double snr : snr_grid_db) {
        for (auto method : methods) {
            double f1_sum = 0.0, sim_sum = 0.0;
            for (int s = 0; s < seeds_per_point; ++s) {
                sim::Scenario sc = base;
                sc.seed = base.seed + static_cast<std::uint64_t>(s);
                if (std::isinf(snr)) {
                    sc.noise.snr_db.reset();  // noiseless limit
                } else {
                    sc.noise.snr_db = snr;
                }
                const auto dataset = dataset_from_scenario(sc);
                f1_sum += run_method(dataset, method, config).f1;
                sim_sum += same_group_similarity(dataset, method, config);
            }
            SweepPoint p;
            p.snr_db = snr;
            p.method = baselines::method_name(method);
            p.f1 = f1_sum / seeds_per_point;
            p.same_group_similarity = sim_sum / seeds_per_point;
            out.push_back(p);
        }
    }
    return out;
}

std::string sweep_to_csv(const std::vector<SweepPoint>& points) {
    std::ostringstream out;
    out << "snr_db,method,f1,same_group_similarity\n";
    for (const auto& p : points) {
        out << format_fixed(p.snr_db, 1) << ',' << p.method << ',' << format_fixed(p.f1, 4)
            << ',' << format_fixed(p.same_group_similarity, 4) << '\n';
    }
    return out.str();
}

std::string sweep_to_svg(const std::vector<SweepPoint>& points) {
    // Minimal static line chart: F1 vs SNR, one polyline per method.
    const int width = 640, height = 400, margin = 50;
    std::map<std::string, std::vector<std::pair<double, double>>> curves;
    double snr_min = 1e9, snr_max = -1e9;
    for (const auto& p : points) {
        if (std::isinf(p.snr_db)) continue;
        curves[p.method].emplace_back(p.snr_db, p.f1);
        snr_min = std::min(snr_min, p.snr_db);
        snr_max = std::max(snr_max, p.snr_db);
    }
    if (snr_min >= snr_max) {
        snr_min -= 1.0;
        snr_max += 1.0;
    }
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    auto x_of = [&](double snr) {
        return margin + (snr - snr_min) / (snr_max - snr_min) * (width - 2 * margin);
    };
    auto y_of = [&](double f1) { return height - margin - f1 * (height - 2 * margin); };
    svg << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\""
        << width - margin << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin
        << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-size=\"13\">SNR (dB)</text>\n";
    svg << "<text x=\"15\" y=\"" << height / 2
        << "\" font-size=\"13\" transform=\"rotate(-90 15," << height / 2
        << ")\" text-anchor=\"middle\">F1</text>\n";
    for (double f1 : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        svg << "<text x=\"" << margin - 8 << "\" y=\"" << y_of(f1) + 4
            << "\" text-anchor=\"end\" font-size=\"11\">" << format_fixed(f1, 2)
            << "</text>\n";
    }
    int ci = 0;
    int ly = margin;
    for (auto& [method, pts] : curves) {
        std::sort(pts.begin(), pts.end());
        svg << "<polyline fill=\"none\" stroke=\"" << colors[ci % 4]
            << "\" stroke-width=\"2\" points=\"";
        for (const auto& [snr, f1] : pts) {
            svg << format_fixed(x_of(snr), 1) << ',' << format_fixed(y_of(f1), 1) << ' ';
        }
        svg << "\"/>\n";
        for (const auto& [snr, f1] : pts) {
            svg << "<circle cx=\"" << format_fixed(x_of(snr), 1) << "\" cy=\""
                << format_fixed(y_of(f1), 1) << "\" r=\"3\" fill=\"" << colors[ci % 4]
                << "\"/>\n";
        }
        svg << "<text x=\"" << width - margin - 130 << "\" y=\"" << ly + 14
            << "\" font-size=\"12\" fill=\"" << colors[ci % 4] << "\">" << method
            << "</text>\n";
        ly += 16;
        ++ci;
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace meetsense::eval
