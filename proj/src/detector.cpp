#include "meetsense/detector.hpp"

#include <algorithm>
#include <cmath>

#include "meetsense/proximity.hpp"

namespace meetsense::detector {
namespace {

using community::Algorithm;
using community::DetectOptions;
using community::Partition;
using community::SimilarityGraph;

Algorithm algorithm_from(const Config& cfg) {
    return cfg.community_algorithm == "louvain" ? Algorithm::louvain : Algorithm::walktrap;
}

DetectOptions options_from(const Config& cfg) {
    return DetectOptions{cfg.walk_length, cfg.tie_epsilon};
}

features::RefinedFeature refine_or_zero(const PairFeatureSeries& series, double alpha) {
    if (series.empty()) return {};  // absence of evidence: weight 0, not an error
    const auto values = series.values_only();
    return features::feature_construct(values, alpha);
}

/// Accumulates groups/singletons; keeps output ordering deterministic.
struct ResultBuilder {
    GroupResult result;

    void add_group(std::vector<std::string> members) {
        std::sort(members.begin(), members.end());
        result.groups.push_back(std::move(members));
    }
    void add_singleton(const std::string& id) {
        result.groups.push_back({id});
        result.ungrouped.push_back(id);
    }
    GroupResult finish() {
        std::sort(result.groups.begin(), result.groups.end());
        std::sort(result.ungrouped.begin(), result.ungrouped.end());
        return std::move(result);
    }
};

SimilarityGraph build_graph(const std::vector<std::string>& ids, const FeatureTable& table,
                            double proximity_share, double acoustic_share) {
    SimilarityGraph g(ids);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            const double w = proximity_share * table.proximity_weight(ids[i], ids[j]) +
                             acoustic_share * table.acoustic_weight(ids[i], ids[j]);
            g.set_weight(i, j, w);
        }
    }
    return g;
}

double partition_modularity_or_zero(const SimilarityGraph& g, const std::vector<int>& assignment) {
    if (g.total_weight() <= 0.0) return 0.0;
    return community::modularity(g, assignment);
}

bool covers_all_as_one(const Partition& p) {
    return p.community_count() == 1;
}

std::vector<std::vector<std::string>> named_communities(const Partition& p,
                                                        const SimilarityGraph& g) {
    std::vector<std::vector<std::string>> out;
    for (const auto& comm : p.communities()) {
        std::vector<std::string> names;
        names.reserve(comm.size());
        for (std::size_t idx : comm) names.push_back(g.nodes()[idx]);
        out.push_back(std::move(names));
    }
    return out;
}

/// Final-partition modularity on the stage graph that accepted it; groups
/// and singletons each form a community.
double accepted_modularity(const SimilarityGraph& stage_graph,
                           const std::vector<std::vector<std::string>>& groups) {
    if (stage_graph.total_weight() <= 0.0) return 0.0;
    std::vector<int> assignment(stage_graph.size(), -1);
    int c = 0;
    for (const auto& g : groups) {
        for (const auto& id : g) assignment[stage_graph.index_of(id)] = c;
        ++c;
    }
    for (int& a : assignment) {
        if (a == -1) a = c++;  // subjects outside this stage's population
    }
    return community::modularity(stage_graph, assignment);
}

/// Acoustic confirmation of one proximity cluster (Algorithm 3, step 2).
/// Returns the cluster's groups; failing members become singletons.
void confirm_cluster(const std::vector<std::string>& cluster, const FeatureTable& table,
                     const Config& cfg, int cluster_idx, ResultBuilder& builder,
                     std::map<std::string, double>& modularities) {
    if (cluster.size() == 1) {
        builder.add_singleton(cluster.front());
        return;
    }
    if (cluster.size() == 2) {
        // Modularity is uninformative for a pair; gate on the refined
        // acoustic feature instead.
        if (table.acoustic_weight(cluster[0], cluster[1]) >= cfg.pair_accept_threshold) {
            builder.add_group({cluster[0], cluster[1]});
        } else {
            builder.add_singleton(cluster[0]);
            builder.add_singleton(cluster[1]);
        }
        return;
    }

    const auto g = build_graph(cluster, table, 0.0, 1.0);
    const auto part = community::detect_communities(g, algorithm_from(cfg), options_from(cfg));
    modularities["audio_cluster_" + std::to_string(cluster_idx)] = part.modularity;

    if (part.modularity >= cfg.delta_alpha) {
        for (auto& sub : named_communities(part, g)) {
            if (sub.size() >= 2) {
                builder.add_group(std::move(sub));
            } else {
                builder.add_singleton(sub.front());
            }
        }
        return;
    }
    // Type-2 convergence: one cohesive community has modularity ~0 by
    // construction; accept it when the ties are uniformly strong.
    if (covers_all_as_one(part) && g.mean_pair_weight() >= cfg.single_group_floor) {
        builder.add_group(cluster);
        return;
    }
    for (const auto& id : cluster) builder.add_singleton(id);
}

}  // namespace

double FeatureTable::proximity_weight(const std::string& a, const std::string& b) const {
    auto it = proximity.find(PairKey(a, b));
    return it == proximity.end() ? 0.0 : std::max(it->second.mean_value, 0.0);
}

double FeatureTable::acoustic_weight(const std::string& a, const std::string& b) const {
    auto it = acoustic.find(PairKey(a, b));
    return it == acoustic.end() ? 0.0 : std::max(it->second.mean_value, 0.0);
}

std::vector<AudioTrace> preprocess_and_align(const std::vector<SubjectData>& subjects,
                                             const Config& config) {
    std::vector<AudioTrace> traces;
    traces.reserve(subjects.size());
    for (const auto& s : subjects) {
        traces.push_back(audio::normalize(
            audio::bandpass(s.audio, config.bandpass_low_hz, config.bandpass_high_hz)));
    }
    std::sort(traces.begin(), traces.end(),
              [](const AudioTrace& a, const AudioTrace& b) { return a.subject_id < b.subject_id; });
    if (traces.size() > 1) {
        // Keep at least half the shortest trace overlapping at every
        // candidate shift; tiny overlaps make normalized correlation
        // peak on coincidental envelope matches.
        double min_span = traces.front().duration_s();
        for (const auto& t : traces) min_span = std::min(min_span, t.duration_s());
        const double window = std::min(config.max_shift_s, 0.45 * min_span);
        traces = audio::align(traces, traces.front().subject_id, window);
    }
    // Truncate to the analysis window T.
    for (auto& t : traces) {
        const auto max_samples =
            static_cast<std::size_t>(config.window_T_s * t.sample_rate_hz);
        if (t.samples.size() > max_samples) t.samples.resize(max_samples);
    }
    return traces;
}

FeatureTable compute_features(const std::vector<SubjectData>& subjects, const Config& config) {
    config.validate();
    FeatureTable table;

    const auto traces = preprocess_and_align(subjects, config);
    for (const auto& t : traces) table.subjects.push_back(t.subject_id);
    if (!traces.empty()) {
        table.window = {traces.front().start_time_s, traces.front().end_time_s()};
    }

    std::map<std::string, const std::vector<ScanRecord>*> scans;
    for (const auto& s : subjects) {
        if (!s.scans.empty()) scans[s.audio.subject_id] = &s.scans;
    }

    // Cepstra once per subject, correlations per pair.
    std::vector<std::vector<std::optional<audio::CepstrumSegment>>> cepstra;
    cepstra.reserve(traces.size());
    for (const auto& t : traces) {
        cepstra.push_back(audio::segment_cepstra(t, config.segment_len_s));
    }

    for (std::size_t i = 0; i < traces.size(); ++i) {
        for (std::size_t j = i + 1; j < traces.size(); ++j) {
            const PairKey key(traces[i].subject_id, traces[j].subject_id);
            auto series = audio::acoustic_similarity(cepstra[i], cepstra[j],
                                                     traces[i].subject_id, traces[j].subject_id);
            table.acoustic[key] = refine_or_zero(series, config.significance_alpha);
            table.acoustic_series[key] = std::move(series);

            const auto si = scans.find(traces[i].subject_id);
            const auto sj = scans.find(traces[j].subject_id);
            if (si != scans.end() && sj != scans.end()) {
                try {
                    auto pseries = proximity::proximity_similarity(
                        *si->second, *sj->second, config.time_bucket_s, config.distance_cap_db,
                        config.nearest_scan_slack_s);
                    table.proximity[key] = refine_or_zero(pseries, config.significance_alpha);
                    table.proximity_series[key] = std::move(pseries);
                } catch (const InsufficientDataError&) {
                    table.proximity[key] = {};  // no shared AP anywhere: weight 0
                }
            }
        }
    }
    return table;
}

GroupResult proximity_available(const std::vector<std::string>& ids, const FeatureTable& table,
                                const Config& config) {
    ResultBuilder builder;
    auto& mods = builder.result.modularities;

    const auto pg = build_graph(ids, table, 1.0, 0.0);
    const auto part_p = community::detect_communities(pg, algorithm_from(config),
                                                      options_from(config));
    const double m_p = part_p.modularity;
    mods["proximity"] = m_p;

    auto finish_with = [&](const char* path, double accepting_mod) {
        builder.result.decision_path = path;
        builder.result.accepting_modularity = accepting_mod;
        builder.result.window = table.window;
        return builder.finish();
    };

    const bool proximity_dominant = m_p >= config.delta_p1;
    const bool type2_proximity = m_p < config.delta_p2 && covers_all_as_one(part_p) &&
                                 pg.mean_pair_weight() >= config.single_group_floor;

    if (proximity_dominant || type2_proximity) {
        // Step 2: per-cluster acoustic confirmation. A Type-2 proximity
        // stage (everyone co-located) is a single candidate cluster.
        std::vector<std::vector<std::string>> clusters =
            proximity_dominant ? named_communities(part_p, pg)
                               : std::vector<std::vector<std::string>>{ids};
        int idx = 0;
        for (const auto& cluster : clusters) {
            confirm_cluster(cluster, table, config, idx++, builder, mods);
        }
        const bool any_group =
            std::any_of(builder.result.groups.begin(), builder.result.groups.end(),
                        [](const auto& g) { return g.size() >= 2; });
        const auto ag = build_graph(ids, table, 0.0, 1.0);
        if (any_group) {
            return finish_with("proximity+audio", accepted_modularity(ag, builder.result.groups));
        }
        return finish_with("rejected", accepted_modularity(ag, builder.result.groups));
    }

    if (m_p >= config.delta_p2) {
        // Step 3: proximity is a weak signal; sweep the weighted
        // combination and keep the most modular partition.
        double best_m = -2.0;
        double best_w = 0.0;
        Partition best_part;
        SimilarityGraph best_graph;
        for (double w : config.weight_grid) {
            auto g = build_graph(ids, table, 1.0 - w, w);
            auto part = community::detect_communities(g, algorithm_from(config),
                                                      options_from(config));
            if (part.modularity > best_m) {
                best_m = part.modularity;
                best_w = w;
                best_part = part;
                best_graph = std::move(g);
            }
        }
        mods["weighted"] = best_m;
        builder.result.best_weight = best_w;

        const bool accept = best_m >= config.delta_alpha;
        const bool type2 = !accept && covers_all_as_one(best_part) &&
                           best_graph.mean_pair_weight() >= config.single_group_floor;
        if (accept || type2) {
            for (auto& sub : named_communities(best_part, best_graph)) {
                if (sub.size() >= 2) {
                    builder.add_group(std::move(sub));
                } else {
                    builder.add_singleton(sub.front());
                }
            }
            return finish_with("weighted-combined", best_m);
        }
        for (const auto& id : ids) builder.add_singleton(id);
        return finish_with("rejected", best_m);
    }

    // Proximity insignificance: no cohesion and not one co-located mass.
    for (const auto& id : ids) builder.add_singleton(id);
    return finish_with("rejected", m_p);
}

GroupResult proximity_not_available(const std::vector<std::string>& ids,
                                    const FeatureTable& table, const Config& config) {
    ResultBuilder builder;

    const auto ag = build_graph(ids, table, 0.0, 1.0);
    const auto part = community::detect_communities(ag, algorithm_from(config),
                                                    options_from(config));
    const double m_a = part.modularity;
    builder.result.modularities["audio"] = m_a;

    const bool accept = m_a >= config.delta_alpha;
    const bool type2 = !accept && covers_all_as_one(part) &&
                       ag.mean_pair_weight() >= config.single_group_floor;

    if (accept || type2) {
        for (auto& sub : named_communities(part, ag)) {
            if (sub.size() >= 2) {
                builder.add_group(std::move(sub));
            } else {
                builder.add_singleton(sub.front());
            }
        }
        const bool any_group =
            std::any_of(builder.result.groups.begin(), builder.result.groups.end(),
                        [](const auto& g) { return g.size() >= 2; });
        builder.result.decision_path = any_group ? "audio-only" : "rejected";
    } else {
        for (const auto& id : ids) builder.add_singleton(id);
        builder.result.decision_path = "rejected";
    }
    builder.result.accepting_modularity = accepted_modularity(ag, builder.result.groups);
    builder.result.window = table.window;
    return builder.finish();
}

GroupResult detect(const std::vector<SubjectData>& subjects, const Config& config) {
    config.validate();
    if (subjects.size() < 2) {
        throw InsufficientPopulationError("detect: need at least 2 subjects");
    }

    const auto table = compute_features(subjects, config);

    std::vector<std::string> with_scans, without_scans;
    std::map<std::string, bool> has_scans;
    for (const auto& s : subjects) has_scans[s.audio.subject_id] = !s.scans.empty();
    for (const auto& id : table.subjects) {
        (has_scans[id] ? with_scans : without_scans).push_back(id);
    }

    GroupResult merged;
    merged.window = table.window;

    auto absorb = [&merged](const GroupResult& r, const std::string& prefix) {
        merged.groups.insert(merged.groups.end(), r.groups.begin(), r.groups.end());
        merged.ungrouped.insert(merged.ungrouped.end(), r.ungrouped.begin(), r.ungrouped.end());
        for (const auto& [k, v] : r.modularities) {
            merged.modularities[prefix.empty() ? k : prefix + k] = v;
        }
    };

    GroupResult res_o, res_no;
    bool ran_o = false, ran_no = false;
    if (with_scans.size() >= 2) {
        res_o = proximity_available(with_scans, table, config);
        absorb(res_o, "");
        ran_o = true;
    } else {
        for (const auto& id : with_scans) {
            merged.groups.push_back({id});
            merged.ungrouped.push_back(id);
        }
    }
    if (without_scans.size() >= 2) {
        res_no = proximity_not_available(without_scans, table, config);
        absorb(res_no, without_scans.size() == subjects.size() ? "" : "no_scan_");
        ran_no = true;
    } else {
        for (const auto& id : without_scans) {
            merged.groups.push_back({id});
            merged.ungrouped.push_back(id);
        }
    }

    // The decision path reports the branch that accepted groups; the
    // proximity branch takes precedence when both did.
    const GroupResult* pick = nullptr;
    if (ran_o && ran_no) {
        pick = (res_o.decision_path != "rejected" || res_no.decision_path == "rejected")
                   ? &res_o
                   : &res_no;
    } else if (ran_o) {
        pick = &res_o;
    } else if (ran_no) {
        pick = &res_no;
    }
    if (pick) {
        merged.decision_path = pick->decision_path;
        merged.accepting_modularity = pick->accepting_modularity;
        merged.best_weight = pick->best_weight;
    } else {
        merged.decision_path = "rejected";
    }

    std::sort(merged.groups.begin(), merged.groups.end());
    std::sort(merged.ungrouped.begin(), merged.ungrouped.end());
    return merged;
}

}  // namespace meetsense::detector
