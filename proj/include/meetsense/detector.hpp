#ifndef MEETSENSE_DETECTOR_HPP
#define MEETSENSE_DETECTOR_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

#include "meetsense/audio.hpp"
#include "meetsense/community.hpp"
#include "meetsense/config.hpp"
#include "meetsense/features.hpp"
#include "meetsense/types.hpp"

namespace meetsense::detector {

/// One subject's inputs: audio is required, scans may be empty (routes the
/// subject to the proximity-not-available branch).
struct SubjectData {
    AudioTrace audio;
    std::vector<ScanRecord> scans;
};

/// Refined pairwise features plus the raw series they came from.
struct FeatureTable {
    std::vector<std::string> subjects;  // sorted ids
    std::map<PairKey, features::RefinedFeature> proximity;
    std::map<PairKey, features::RefinedFeature> acoustic;
    std::map<PairKey, PairFeatureSeries> proximity_series;
    std::map<PairKey, PairFeatureSeries> acoustic_series;
    std::array<double, 2> window{0.0, 0.0};

    double proximity_weight(const std::string& a, const std::string& b) const;
    double acoustic_weight(const std::string& a, const std::string& b) const;
};

/// Detected partition with the decision provenance.
struct GroupResult {
    std::vector<std::vector<std::string>> groups;  // includes ungrouped singletons
    std::vector<std::string> ungrouped;            // subjects rejected at some stage
    std::map<std::string, double> modularities;    // per decision stage
    std::string decision_path;  // proximity+audio | weighted-combined | audio-only | rejected
    double accepting_modularity = 0.0;
    double best_weight = -1.0;  // w chosen by the weighted sweep, if it ran
    std::array<double, 2> window{0.0, 0.0};
};

/// Preprocess (bandpass + peak normalization), drift-align against the
/// first subject in id order, and truncate to the analysis window.
std::vector<AudioTrace> preprocess_and_align(const std::vector<SubjectData>& subjects,
                                             const Config& config);

/// Build the full feature table: per-segment acoustic similarity and
/// per-bucket proximity similarity, each refined per Algorithm 1.
FeatureTable compute_features(const std::vector<SubjectData>& subjects, const Config& config);

/// Split the population by scan availability and run the matching branch.
GroupResult detect(const std::vector<SubjectData>& subjects, const Config& config);

/// Proximity-available branch: proximity communities, modularity-gated,
/// refined by per-cluster acoustic detection or the weighted-feature sweep.
GroupResult proximity_available(const std::vector<std::string>& ids,
                                const FeatureTable& table, const Config& config);

/// Audio-only branch: acoustic communities gated on modularity.
GroupResult proximity_not_available(const std::vector<std::string>& ids,
                                    const FeatureTable& table, const Config& config);

}  // namespace meetsense::detector

#endif
