#include "meetsense/baselines.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "meetsense/fft.hpp"
#include "meetsense/proximity.hpp"

namespace meetsense::baselines {
namespace {

using community::Partition;
using community::SimilarityGraph;

double mean_or_zero(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

bool window_all_zero(std::span<const double> w) {
    return std::all_of(w.begin(), w.end(), [](double v) { return v == 0.0; });
}

}  // namespace

std::string method_name(Method m) {
    switch (m) {
        case Method::groupsense: return "groupsense";
        case Method::next2me: return "next2me";
        case Method::audiomatch: return "audiomatch";
    }
    return "unknown";
}

Method method_from_name(const std::string& name) {
    if (name == "groupsense") return Method::groupsense;
    if (name == "next2me") return Method::next2me;
    if (name == "audiomatch") return Method::audiomatch;
    throw ParameterError("unknown method: " + name);
}

std::vector<double> FingerprintSeries::values_only() const {
    std::vector<double> out;
    out.reserve(values.size());
    for (const auto& [idx, v] : values) out.push_back(v);
    return out;
}

std::vector<std::set<int>> next2me_top_bins(const AudioTrace& trace, int top_n,
                                            double window_s) {
    if (top_n <= 0) throw ParameterError("next2me: top_n must be positive");
    const auto win = static_cast<std::size_t>(std::llround(window_s * trace.sample_rate_hz));
    if (win == 0) throw ParameterError("next2me: window shorter than one sample");

    std::vector<std::set<int>> out;
    const std::size_t count = trace.samples.size() / win;  // trailing partial skipped
    out.reserve(count);
    for (std::size_t w = 0; w < count; ++w) {
        std::span<const double> seg{trace.samples.data() + w * win, win};
        if (window_all_zero(seg)) {
            out.emplace_back();  // silent window carries no fingerprint
            continue;
        }
        const auto spectrum = fft::forward(seg);
        const std::size_t half = win / 2;
        std::vector<std::pair<double, int>> mags;
        mags.reserve(half);
        for (std::size_t k = 1; k <= half; ++k) {  // skip DC
            mags.emplace_back(std::abs(spectrum[k]), static_cast<int>(k));
        }
        const auto take = std::min<std::size_t>(top_n, mags.size());
        std::partial_sort(mags.begin(), mags.begin() + take, mags.end(),
                          [](const auto& a, const auto& b) {
                              return a.first != b.first ? a.first > b.first
                                                        : a.second < b.second;
                          });
        std::set<int> bins;
        for (std::size_t i = 0; i < take; ++i) bins.insert(mags[i].second);
        out.push_back(std::move(bins));
    }
    return out;
}

FingerprintSeries next2me_similarity(const AudioTrace& trace_i, const AudioTrace& trace_j,
                                     int top_n, double window_s) {
    const auto bins_i = next2me_top_bins(trace_i, top_n, window_s);
    const auto bins_j = next2me_top_bins(trace_j, top_n, window_s);

    FingerprintSeries series;
    series.subject_i = trace_i.subject_id;
    series.subject_j = trace_j.subject_id;
    series.method = "next2me";
    const std::size_t count = std::min(bins_i.size(), bins_j.size());
    for (std::size_t w = 0; w < count; ++w) {
        if (bins_i[w].empty() && bins_j[w].empty()) continue;
        std::vector<int> inter, uni;
        std::set_intersection(bins_i[w].begin(), bins_i[w].end(), bins_j[w].begin(),
                              bins_j[w].end(), std::back_inserter(inter));
        std::set_union(bins_i[w].begin(), bins_i[w].end(), bins_j[w].begin(),
                       bins_j[w].end(), std::back_inserter(uni));
        series.values.emplace_back(static_cast<long>(w),
                                   uni.empty() ? 0.0
                                               : static_cast<double>(inter.size()) /
                                                     static_cast<double>(uni.size()));
    }
    return series;
}

std::vector<std::vector<std::uint16_t>> audiomatch_fingerprint(const AudioTrace& trace,
                                                               const AudioMatchParams& params) {
    const int fs = trace.sample_rate_hz;
    const auto frame_len = static_cast<std::size_t>(std::llround(params.window_s * fs));
    const auto hop = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(frame_len * (1.0 - params.overlap))));
    if (frame_len < 8) throw ParameterError("audiomatch: window too short");
    if (trace.samples.size() < frame_len) return {};

    std::vector<double> hamming(frame_len);
    for (std::size_t i = 0; i < frame_len; ++i) {
        hamming[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (frame_len - 1));
    }

    // Banded log-magnitude spectrogram.
    const int bands = params.bands;
    const double hz_per_bin = static_cast<double>(fs) / static_cast<double>(frame_len);
    const double band_width = (params.band_high_hz - params.band_low_hz) / bands;
    const std::size_t frames = (trace.samples.size() - frame_len) / hop + 1;

    std::vector<std::vector<double>> log_spec(frames, std::vector<double>(bands, 0.0));
    std::vector<double> buf(frame_len);
    for (std::size_t t = 0; t < frames; ++t) {
        for (std::size_t i = 0; i < frame_len; ++i) {
            buf[i] = trace.samples[t * hop + i] * hamming[i];
        }
        const auto spectrum = fft::forward(buf);
        for (int b = 0; b < bands; ++b) {
            const double f0 = params.band_low_hz + b * band_width;
            const double f1 = f0 + band_width;
            const auto k0 = static_cast<std::size_t>(std::ceil(f0 / hz_per_bin));
            const auto k1 = std::max<std::size_t>(
                k0 + 1, static_cast<std::size_t>(std::floor(f1 / hz_per_bin)));
            double acc = 0.0;
            for (std::size_t k = k0; k < k1 && k <= frame_len / 2; ++k) {
                acc += std::abs(spectrum[k]);
            }
            log_spec[t][b] = std::log(acc / static_cast<double>(k1 - k0) + 1e-12);
        }
    }

    // Each interior cell against its 16 surrounding cells (time and band
    // offsets in {-2,-1,1,2}), one bit per comparison.
    static constexpr int kOffsets[4] = {-2, -1, 1, 2};
    std::vector<std::vector<std::uint16_t>> words(frames);
    for (std::size_t t = 2; t + 2 < frames; ++t) {
        words[t].reserve(bands - 4);
        for (int b = 2; b + 2 < bands; ++b) {
            std::uint16_t word = 0;
            int bit = 0;
            for (int dt : kOffsets) {
                for (int db : kOffsets) {
                    const double center = log_spec[t][b];
                    const double nb = log_spec[t + dt][b + db];
                    if (center > nb) word |= static_cast<std::uint16_t>(1u << bit);
                    ++bit;
                }
            }
            words[t].push_back(word);
        }
    }
    return words;
}

FingerprintSeries audiomatch_similarity(const AudioTrace& trace_i, const AudioTrace& trace_j,
                                        const AudioMatchParams& params) {
    const auto fp_i = audiomatch_fingerprint(trace_i, params);
    const auto fp_j = audiomatch_fingerprint(trace_j, params);

    FingerprintSeries series;
    series.subject_i = trace_i.subject_id;
    series.subject_j = trace_j.subject_id;
    series.method = "audiomatch";

    const int fs = trace_i.sample_rate_hz;
    const auto frame_len = static_cast<std::size_t>(std::llround(params.window_s * fs));
    const auto hop = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(frame_len * (1.0 - params.overlap))));

    std::map<long, std::pair<double, long>> pooled;  // window -> (distance sum, count)
    const std::size_t frames = std::min(fp_i.size(), fp_j.size());
    for (std::size_t t = 0; t < frames; ++t) {
        if (fp_i[t].empty() || fp_j[t].empty()) continue;
        const std::size_t nb = std::min(fp_i[t].size(), fp_j[t].size());
        const double frame_time = static_cast<double>(t * hop) / fs;
        const long window = static_cast<long>(std::floor(frame_time / params.group_window_s));
        auto& [sum, count] = pooled[window];
        for (std::size_t b = 0; b < nb; ++b) {
            sum += std::popcount(static_cast<unsigned>(fp_i[t][b] ^ fp_j[t][b])) / 16.0;
            ++count;
        }
    }
    for (const auto& [window, agg] : pooled) {
        if (agg.second == 0) continue;
        series.values.emplace_back(window, 1.0 - agg.first / static_cast<double>(agg.second));
    }
    return series;
}

namespace {

// Aggregated (plain mean) pairwise weights for one baseline over aligned
// traces; the row/column order follows `ids`.
SimilarityGraph baseline_audio_graph(Method method, const std::vector<AudioTrace>& traces,
                                     const std::vector<std::string>& ids, const Config& cfg) {
    std::map<std::string, const AudioTrace*> by_id;
    for (const auto& t : traces) by_id[t.subject_id] = &t;

    SimilarityGraph g(ids);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            const AudioTrace& a = *by_id.at(ids[i]);
            const AudioTrace& b = *by_id.at(ids[j]);
            FingerprintSeries s;
            if (method == Method::next2me) {
                s = next2me_similarity(a, b, cfg.next2me_top_n, cfg.next2me_window_s);
            } else {
                s = audiomatch_similarity(a, b, AudioMatchParams::from(cfg));
            }
            g.set_weight(i, j, mean_or_zero(s.values_only()));
        }
    }
    return g;
}

community::Algorithm baseline_algorithm(Method method) {
    return method == Method::next2me ? community::Algorithm::louvain
                                     : community::Algorithm::walktrap;
}

}  // namespace

detector::GroupResult baseline_detect(Method method,
                                      const std::vector<detector::SubjectData>& subjects,
                                      const Config& config) {
    config.validate();
    if (method == Method::groupsense) return detector::detect(subjects, config);
    if (subjects.size() < 2) {
        throw InsufficientPopulationError("baseline_detect: need at least 2 subjects");
    }

    const auto traces = detector::preprocess_and_align(subjects, config);
    std::vector<std::string> ids;
    for (const auto& t : traces) ids.push_back(t.subject_id);

    std::map<std::string, const std::vector<ScanRecord>*> scans;
    for (const auto& s : subjects) {
        if (!s.scans.empty()) scans[s.audio.subject_id] = &s.scans;
    }

    detector::GroupResult result;
    if (!traces.empty()) {
        result.window = {traces.front().start_time_s, traces.front().end_time_s()};
    }

    // Proximity front-end: cluster the scan-having population first. The
    // baselines use plain mean similarity, no gating, no refinement.
    std::vector<std::vector<std::string>> clusters;
    std::vector<std::string> with_scans, without_scans;
    for (const auto& id : ids) {
        (scans.count(id) ? with_scans : without_scans).push_back(id);
    }
    const bool used_proximity = with_scans.size() >= 2;
    if (used_proximity) {
        SimilarityGraph pg(with_scans);
        for (std::size_t i = 0; i < with_scans.size(); ++i) {
            for (std::size_t j = i + 1; j < with_scans.size(); ++j) {
                try {
                    const auto series = proximity::proximity_similarity(
                        *scans.at(with_scans[i]), *scans.at(with_scans[j]),
                        config.time_bucket_s, config.distance_cap_db,
                        config.nearest_scan_slack_s);
                    pg.set_weight(i, j, mean_or_zero(series.values_only()));
                } catch (const InsufficientDataError&) {
                    pg.set_weight(i, j, 0.0);
                }
            }
        }
        const auto part = community::detect_communities(
            pg, baseline_algorithm(method),
            community::DetectOptions{config.walk_length, config.tie_epsilon});
        result.modularities["proximity"] = part.modularity;
        for (const auto& comm : part.communities()) {
            std::vector<std::string> cluster;
            for (std::size_t idx : comm) cluster.push_back(with_scans[idx]);
            clusters.push_back(std::move(cluster));
        }
    } else {
        without_scans = ids;
    }
    if (!without_scans.empty()) clusters.push_back(without_scans);

    const auto full_audio_graph = baseline_audio_graph(method, traces, ids, config);

    for (const auto& cluster : clusters) {
        if (cluster.size() < 2) {
            for (const auto& id : cluster) {
                result.groups.push_back({id});
                result.ungrouped.push_back(id);
            }
            continue;
        }
        SimilarityGraph ag(cluster);
        for (std::size_t i = 0; i < cluster.size(); ++i) {
            for (std::size_t j = i + 1; j < cluster.size(); ++j) {
                ag.set_weight(i, j, full_audio_graph.weight(full_audio_graph.index_of(cluster[i]),
                                                            full_audio_graph.index_of(cluster[j])));
            }
        }
        const auto part = community::detect_communities(
            ag, baseline_algorithm(method),
            community::DetectOptions{config.walk_length, config.tie_epsilon});
        for (const auto& comm : part.communities()) {
            std::vector<std::string> members;
            for (std::size_t idx : comm) members.push_back(cluster[idx]);
            std::sort(members.begin(), members.end());
            if (members.size() >= 2) {
                result.groups.push_back(std::move(members));
            } else {
                result.groups.push_back(members);
                result.ungrouped.push_back(members.front());
            }
        }
    }

    // Final-partition cohesivity on the full audio graph.
    if (full_audio_graph.total_weight() > 0.0) {
        std::vector<int> assignment(ids.size(), -1);
        int c = 0;
        for (const auto& g : result.groups) {
            for (const auto& id : g) assignment[full_audio_graph.index_of(id)] = c;
            ++c;
        }
        for (int& a : assignment) {
            if (a == -1) a = c++;
        }
        result.accepting_modularity = community::modularity(full_audio_graph, assignment);
        result.modularities["audio"] = result.accepting_modularity;
    }

    result.decision_path = used_proximity ? "proximity+audio" : "audio-only";
    std::sort(result.groups.begin(), result.groups.end());
    std::sort(result.ungrouped.begin(), result.ungrouped.end());
    return result;
}

}  // namespace meetsense::baselines
