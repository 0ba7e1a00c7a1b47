#ifndef MEETSENSE_SIM_HPP
#define MEETSENSE_SIM_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "meetsense/types.hpp"

namespace meetsense::sim {

struct Waypoint {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
};

struct SubjectSpec {
    std::string id;
    std::vector<Waypoint> path;  // one waypoint = static position
    double device_gain = 1.0;    // linear AGC/build factor
    double clock_offset_s = 0.0; // positive: this device's recording lags
    std::string room;            // empty = open/shared space
};

struct Utterance {
    std::string speaker;
    double start_s = 0.0;
    double end_s = 0.0;
};

struct VoiceSpec {
    double fundamental_hz = 150.0;
    double harmonic_rolloff_db_per_octave = 6.0;
    int harmonics = 8;
    double syllable_rate_hz = 4.0;
    // Unvoiced (breath) energy as a fraction of the harmonic stack RMS;
    // realized as in-band noise lines shared by every listener.
    double breath_fraction = 0.35;
};

struct GroupSpec {
    std::vector<std::string> members;
    std::vector<Utterance> schedule;  // non-overlapping within the group
    VoiceSpec voice;
};

struct NoiseSpec {
    std::optional<double> snr_db;       // white noise relative to trace RMS
    std::optional<double> ambient_rms;  // absolute noise floor alternative
    double rssi_sigma_db = 2.0;
};

struct ApSpec {
    std::string id;
    double x = 0.0;
    double y = 0.0;
    double tx_power_dbm = -30.0;
    double path_loss_exponent = 3.0;
    std::string room;  // empty = open/shared space
};

struct Scenario {
    std::string name;
    double duration_s = 60.0;
    std::vector<SubjectSpec> subjects;
    std::vector<GroupSpec> groups;
    NoiseSpec noise;
    std::vector<ApSpec> access_points;
    double scan_interval_s = 60.0;
    // Flat attenuation applied once when source and receiver rooms differ
    // (a room label of "" means open space, which walls off nothing).
    double wall_loss_db = 18.0;
    double rssi_wall_loss_db = 10.0;
    std::uint64_t seed = 1;

    void validate() const;  // throws ScenarioError
    const SubjectSpec& subject(const std::string& id) const;
};

struct GroundTruth {
    std::array<double, 2> window{0.0, 0.0};
    std::vector<std::vector<std::string>> groups;
};

/// Piecewise-linear position lookup (1 Hz grid, interpolated per query).
std::array<double, 2> position_at(const SubjectSpec& subject, double t);

/// Synthesize each subject's waveform: harmonic voices with a syllabic
/// envelope, 1/d attenuation (clamped at 0.5 m), propagation delay, device
/// gain, clock offset, white noise at the configured SNR, then 16-bit
/// quantization at 44.1 kHz.
std::vector<AudioTrace> synth_audio(const Scenario& scenario);

/// Log-distance path-loss scans: rssi = tx - 10 n log10(d) + N(0, sigma);
/// readings below -80 dBm are dropped.
std::vector<ScanRecord> synth_scans(const Scenario& scenario, double interval_s);
std::vector<ScanRecord> synth_scans(const Scenario& scenario);

GroundTruth ground_truth(const Scenario& scenario);

/// Named desk-scale analogs of the paper's scenario taxonomy: S1..S7 plus
/// the G6/G7 walking pilot ("G6G7_WALK").
std::vector<std::string> scenario_names();
Scenario scenario_library(const std::string& name, std::uint64_t seed = 1);

std::string scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const std::string& text);
Scenario load_scenario(const std::string& path);

}  // namespace meetsense::sim

#endif
