#ifndef MEETSENSE_IO_HPP
#define MEETSENSE_IO_HPP

#include <map>
#include <string>
#include <vector>

#include "meetsense/community.hpp"
#include "meetsense/config.hpp"
#include "meetsense/detector.hpp"
#include "meetsense/eval.hpp"
#include "meetsense/sim.hpp"
#include "meetsense/types.hpp"

namespace meetsense::io {

constexpr const char* kToolVersion = "0.1.0";

/// 16-bit PCM mono WAV. Other sample rates are accepted and recorded in the
/// returned trace; multi-channel or non-PCM files are rejected.
AudioTrace read_wav(const std::string& path, const std::string& subject_id = "");
void write_wav(const std::string& path, const AudioTrace& trace);

/// Scan CSV: subject_id,timestamp_s,bssid,rssi_dbm. Readings below -80 dBm
/// are dropped on read; rows are grouped per subject, ordered by timestamp.
std::map<std::string, std::vector<ScanRecord>> read_scans_csv(const std::string& path);
void write_scans_csv(const std::string& path,
                     const std::vector<ScanRecord>& scans);

/// Pair feature CSV: subject_i,subject_j,segment_index,value.
std::string feature_series_csv(const std::vector<PairFeatureSeries>& series);

/// Graph edge list CSV: node_i,node_j,weight.
community::SimilarityGraph read_graph_csv(const std::string& path);
void write_graph_csv(const std::string& path, const community::SimilarityGraph& graph);

/// Partition JSON: {"communities": [[ids...]...], "modularity": x}.
std::string partition_json(const community::SimilarityGraph& graph,
                           const community::Partition& partition);

/// Detection result JSON:
/// {"window": [t0,t1], "groups": [...], "decision_path": ..., "modularities": {...}}.
std::string group_result_json(const detector::GroupResult& result);

sim::GroundTruth read_truth_json(const std::string& path);
void write_truth_json(const std::string& path, const sim::GroundTruth& truth);

/// Dataset directory: <subject>.wav per subject + scans.csv + truth.json.
void write_dataset(const std::string& dir, const sim::Scenario& scenario,
                   const std::vector<AudioTrace>& traces,
                   const std::vector<ScanRecord>& scans, const sim::GroundTruth& truth);
eval::Dataset load_dataset(const std::string& audio_dir, const std::string& scans_csv = "",
                           const std::string& truth_json = "");

/// FNV-1a 64 of a file's bytes, hex encoded.
std::string file_hash(const std::string& path);

/// Manifest: config snapshot, input hashes, seed, tool version, timestamps.
void write_manifest(const std::string& path, const Config& config, std::uint64_t seed,
                    const std::map<std::string, std::string>& input_hashes);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

std::string format_fixed(double v, int decimals);

}  // namespace meetsense::io

#endif
