#ifndef MEETSENSE_BASELINES_HPP
#define MEETSENSE_BASELINES_HPP

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "meetsense/config.hpp"
#include "meetsense/detector.hpp"
#include "meetsense/types.hpp"

namespace meetsense::baselines {

enum class Method { groupsense, next2me, audiomatch };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

/// Per-window pairwise similarity under one of the baseline fingerprints.
struct FingerprintSeries {
    std::string subject_i;
    std::string subject_j;
    std::string method;
    std::vector<std::pair<long, double>> values;  // (window index, similarity)

    std::vector<double> values_only() const;
};

/// Top-n FFT magnitude bins per window (Next2Me's audio fingerprint).
std::vector<std::set<int>> next2me_top_bins(const AudioTrace& trace, int top_n,
                                            double window_s);

/// Jaccard similarity of the two subjects' top-n frequency sets per window.
FingerprintSeries next2me_similarity(const AudioTrace& trace_i, const AudioTrace& trace_j,
                                     int top_n = 6, double window_s = 1.0);

struct AudioMatchParams {
    double window_s = 0.064;   // Hamming window length
    double overlap = 0.5;      // fractional frame overlap
    int bands = 32;            // log-magnitude bands
    double band_low_hz = 300.0;
    double band_high_hz = 3400.0;
    double group_window_s = 1.0;  // frames pooled into one similarity value

    static AudioMatchParams from(const Config& cfg) {
        return {cfg.audiomatch_window_s, cfg.audiomatch_overlap, cfg.audiomatch_bands,
                cfg.audiomatch_band_low_hz, cfg.audiomatch_band_high_hz,
                cfg.next2me_window_s};
    }
};

/// 16-bit fingerprint words per STFT frame: each banded log-magnitude cell
/// compared against its 16 surrounding time-frequency cells.
std::vector<std::vector<std::uint16_t>> audiomatch_fingerprint(const AudioTrace& trace,
                                                               const AudioMatchParams& params = {});

/// Per-window similarity 1 - mean normalized Hamming distance between the
/// two subjects' fingerprints.
FingerprintSeries audiomatch_similarity(const AudioTrace& trace_i, const AudioTrace& trace_j,
                                        const AudioMatchParams& params = {});

/// Run a full baseline pipeline: proximity front-end (when scans exist),
/// then the method's audio similarity graph, then Louvain (Next2Me) or the
/// community default (AudioMatch). Method::groupsense delegates to
/// detector::detect.
detector::GroupResult baseline_detect(Method method,
                                      const std::vector<detector::SubjectData>& subjects,
                                      const Config& config);

}  // namespace meetsense::baselines

#endif
