#include "meetsense/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include <json.hpp>

#include "meetsense/proximity.hpp"

namespace meetsense::sim {
namespace {

using nlohmann::json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSpeedOfSound = 343.0;   // m/s
constexpr double kMinDistance = 0.5;      // attenuation clamp
constexpr double kVoiceAmplitude = 0.25;  // at the 1 m reference
constexpr double kEdgeRampS = 0.05;

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t mix_seed(std::uint64_t seed, const std::string& stream) {
    return seed * 0x9E3779B97F4A7C15ull ^ fnv1a(stream);
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller with explicit uniforms: identical output on every platform,
// unlike std::normal_distribution.
double normal01(std::mt19937_64& rng) {
    double u = uniform01(rng);
    if (u <= 0.0) u = 0x1.0p-53;
    const double v = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(kTwoPi * v);
}

// Deterministic per-speaker voice realization within a group.
struct VoiceRender {
    static constexpr int kBreathLines = 48;

    VoiceSpec spec;
    std::vector<double> harmonic_amps;
    std::vector<double> harmonic_phases;
    std::vector<double> breath_freqs;
    std::vector<double> breath_phases;
    double breath_amp = 0.0;
    double vibrato_rate;
    double vibrato_depth;
    double vibrato_phase;
    double syllable_rate;
    double syllable_phase;

    VoiceRender(const VoiceSpec& v, std::uint64_t seed) : spec(v) {
        std::mt19937_64 rng(seed);
        harmonic_amps.resize(v.harmonics);
        harmonic_phases.resize(v.harmonics);
        double stack_power = 0.0;
        for (int h = 0; h < v.harmonics; ++h) {
            const double octaves = std::log2(static_cast<double>(h + 1));
            harmonic_amps[h] =
                std::pow(10.0, -v.harmonic_rolloff_db_per_octave * octaves / 20.0);
            harmonic_phases[h] = kTwoPi * uniform01(rng);
            stack_power += 0.5 * harmonic_amps[h] * harmonic_amps[h];
        }
        vibrato_rate = 4.5 + uniform01(rng);          // Hz
        vibrato_depth = 0.012 + 0.006 * uniform01(rng);
        vibrato_phase = kTwoPi * uniform01(rng);
        syllable_rate = v.syllable_rate_hz * (0.9 + 0.2 * uniform01(rng));
        syllable_phase = kTwoPi * uniform01(rng);
        // Breath: fixed random spectral lines across the speech band; part
        // of the emitted source, so every listener hears the same ones.
        if (v.breath_fraction > 0.0) {
            breath_freqs.resize(kBreathLines);
            breath_phases.resize(kBreathLines);
            for (int k = 0; k < kBreathLines; ++k) {
                breath_freqs[k] = 320.0 + (3300.0 - 320.0) * uniform01(rng);
                breath_phases[k] = kTwoPi * uniform01(rng);
            }
            breath_amp = v.breath_fraction * std::sqrt(stack_power) *
                         std::sqrt(2.0 / kBreathLines);
        }
    }

    // Value of the emitted voice at time t inside utterance [start, end).
    double sample(double t, double start, double end) const {
        if (t < start || t >= end) return 0.0;
        double ramp = 1.0;
        if (t - start < kEdgeRampS) {
            ramp = 0.5 - 0.5 * std::cos(std::numbers::pi * (t - start) / kEdgeRampS);
        } else if (end - t < kEdgeRampS) {
            ramp = 0.5 - 0.5 * std::cos(std::numbers::pi * (end - t) / kEdgeRampS);
        }
        const double syllable =
            0.15 + 0.85 * (0.5 + 0.5 * std::sin(kTwoPi * syllable_rate * (t - start) +
                                                syllable_phase));
        // Phase-modulated harmonic stack (vibrato keeps the line spectrum
        // from being perfectly periodic).
        const double warp =
            t - vibrato_depth / (kTwoPi * vibrato_rate) *
                    std::cos(kTwoPi * vibrato_rate * t + vibrato_phase);
        double v = 0.0;
        for (std::size_t h = 0; h < harmonic_amps.size(); ++h) {
            v += harmonic_amps[h] *
                 std::sin(kTwoPi * (h + 1) * spec.fundamental_hz * warp + harmonic_phases[h]);
        }
        for (std::size_t k = 0; k < breath_freqs.size(); ++k) {
            v += breath_amp * std::sin(kTwoPi * breath_freqs[k] * t + breath_phases[k]);
        }
        return ramp * syllable * v;
    }
};

double distance(const std::array<double, 2>& a, const std::array<double, 2>& b) {
    const double dx = a[0] - b[0], dy = a[1] - b[1];
    return std::sqrt(dx * dx + dy * dy);
}

bool separated_by_wall(const std::string& room_a, const std::string& room_b) {
    return room_a != room_b;
}

}  // namespace

void Scenario::validate() const {
    if (duration_s <= 0.0) throw ScenarioError("scenario: duration must be positive");
    if (subjects.empty()) throw ScenarioError("scenario: no subjects");
    std::set<std::string> ids;
    for (const auto& s : subjects) {
        if (s.id.empty()) throw ScenarioError("scenario: empty subject id");
        if (!ids.insert(s.id).second) throw ScenarioError("scenario: duplicate subject " + s.id);
        if (s.path.empty()) throw ScenarioError("scenario: subject " + s.id + " has no position");
    }
    std::set<std::string> grouped;
    for (const auto& g : groups) {
        for (const auto& m : g.members) {
            if (!ids.count(m)) throw ScenarioError("scenario: group member " + m + " unknown");
            if (!grouped.insert(m).second) {
                throw ScenarioError("scenario: subject " + m + " is in more than one group");
            }
        }
        auto schedule = g.schedule;
        std::sort(schedule.begin(), schedule.end(),
                  [](const Utterance& a, const Utterance& b) { return a.start_s < b.start_s; });
        for (std::size_t i = 0; i < schedule.size(); ++i) {
            const auto& u = schedule[i];
            if (u.end_s <= u.start_s) throw ScenarioError("scenario: empty utterance");
            if (std::find(g.members.begin(), g.members.end(), u.speaker) == g.members.end()) {
                throw ScenarioError("scenario: speaker " + u.speaker + " not a group member");
            }
            if (i > 0 && u.start_s < schedule[i - 1].end_s) {
                throw ScenarioError("scenario: overlapping speakers within one group");
            }
        }
    }
}

const SubjectSpec& Scenario::subject(const std::string& id) const {
    for (const auto& s : subjects) {
        if (s.id == id) return s;
    }
    throw ScenarioError("scenario: unknown subject " + id);
}

std::array<double, 2> position_at(const SubjectSpec& subject, double t) {
    const auto& path = subject.path;
    if (path.size() == 1 || t <= path.front().t) return {path.front().x, path.front().y};
    if (t >= path.back().t) return {path.back().x, path.back().y};
    for (std::size_t i = 1; i < path.size(); ++i) {
        if (t <= path[i].t) {
            const double span = path[i].t - path[i - 1].t;
            const double a = span > 0.0 ? (t - path[i - 1].t) / span : 1.0;
            return {path[i - 1].x + a * (path[i].x - path[i - 1].x),
                    path[i - 1].y + a * (path[i].y - path[i - 1].y)};
        }
    }
    return {path.back().x, path.back().y};
}

namespace {

// Mobility is sampled on a 1 Hz grid and linearly interpolated per sample.
struct PositionTrack {
    std::vector<std::array<double, 2>> grid;  // 1 Hz

    PositionTrack(const SubjectSpec& s, double duration) {
        const auto n = static_cast<std::size_t>(std::ceil(duration)) + 2;
        grid.reserve(n);
        for (std::size_t k = 0; k < n; ++k) {
            grid.push_back(position_at(s, static_cast<double>(k)));
        }
    }
    std::array<double, 2> at(double t) const {
        if (t <= 0.0) return grid.front();
        const auto k = static_cast<std::size_t>(t);
        if (k + 1 >= grid.size()) return grid.back();
        const double a = t - static_cast<double>(k);
        return {grid[k][0] + a * (grid[k + 1][0] - grid[k][0]),
                grid[k][1] + a * (grid[k + 1][1] - grid[k][1])};
    }
};

}  // namespace

std::vector<AudioTrace> synth_audio(const Scenario& scenario) {
    scenario.validate();
    const int fs = 44100;
    const auto n_samples = static_cast<std::size_t>(std::llround(scenario.duration_s * fs));

    std::map<std::string, PositionTrack> tracks;
    std::map<std::string, std::string> rooms;
    for (const auto& s : scenario.subjects) {
        tracks.emplace(s.id, PositionTrack(s, scenario.duration_s));
        rooms[s.id] = s.room;
    }
    const double wall_gain = std::pow(10.0, -scenario.wall_loss_db / 20.0);

    // One deterministic voice per (group, speaker).
    std::map<std::pair<std::size_t, std::string>, VoiceRender> voices;
    for (std::size_t gi = 0; gi < scenario.groups.size(); ++gi) {
        for (const auto& u : scenario.groups[gi].schedule) {
            const auto key = std::make_pair(gi, u.speaker);
            if (!voices.count(key)) {
                voices.emplace(key, VoiceRender(scenario.groups[gi].voice,
                                                mix_seed(scenario.seed,
                                                         "voice/" + std::to_string(gi) + "/" +
                                                             u.speaker)));
            }
        }
    }

    std::vector<AudioTrace> out;
    out.reserve(scenario.subjects.size());
    for (const auto& subject : scenario.subjects) {
        AudioTrace trace;
        trace.subject_id = subject.id;
        trace.sample_rate_hz = fs;
        trace.start_time_s = 0.0;
        trace.samples.assign(n_samples, 0.0);
        const auto& listener = tracks.at(subject.id);

        for (std::size_t gi = 0; gi < scenario.groups.size(); ++gi) {
            for (const auto& u : scenario.groups[gi].schedule) {
                const auto& voice = voices.at({gi, u.speaker});
                const auto& speaker = tracks.at(u.speaker);
                const double room_gain =
                    separated_by_wall(rooms.at(subject.id), rooms.at(u.speaker)) ? wall_gain
                                                                                 : 1.0;
                // Conservative sample range: utterance span plus clock
                // offset and the largest plausible propagation delay.
                const double margin = 0.3;
                const auto n0 = static_cast<long long>(
                    std::floor((u.start_s + subject.clock_offset_s - margin) * fs));
                const auto n1 = static_cast<long long>(
                    std::ceil((u.end_s + subject.clock_offset_s + margin) * fs));
                for (long long n = std::max<long long>(0, n0);
                     n < std::min<long long>(n_samples, n1); ++n) {
                    const double t_world = static_cast<double>(n) / fs - subject.clock_offset_s;
                    const double d = distance(listener.at(t_world), speaker.at(t_world));
                    const double t_emit = t_world - d / kSpeedOfSound;
                    const double v = voice.sample(t_emit, u.start_s, u.end_s);
                    if (v == 0.0) continue;
                    trace.samples[static_cast<std::size_t>(n)] +=
                        subject.device_gain * room_gain * kVoiceAmplitude /
                        std::max(d, kMinDistance) * v;
                }
            }
        }

        double noise_sigma = 0.0;
        if (scenario.noise.snr_db) {
            double rms = 0.0;
            for (double v : trace.samples) rms += v * v;
            rms = std::sqrt(rms / static_cast<double>(n_samples));
            noise_sigma = rms * std::pow(10.0, -*scenario.noise.snr_db / 20.0);
        } else if (scenario.noise.ambient_rms) {
            noise_sigma = *scenario.noise.ambient_rms;
        }
        if (noise_sigma > 0.0) {
            std::mt19937_64 rng(mix_seed(scenario.seed, "noise/" + subject.id));
            for (double& v : trace.samples) v += noise_sigma * normal01(rng);
        }

        for (double& v : trace.samples) {
            v = std::clamp(v, -1.0, 1.0);
            v = std::round(v * 32767.0) / 32767.0;  // 16-bit grid
        }
        out.push_back(std::move(trace));
    }
    return out;
}

std::vector<ScanRecord> synth_scans(const Scenario& scenario, double interval_s) {
    scenario.validate();
    if (interval_s <= 0.0) throw ScenarioError("synth_scans: interval must be positive");

    std::vector<ScanRecord> out;
    for (const auto& subject : scenario.subjects) {
        std::mt19937_64 rng(mix_seed(scenario.seed, "scans/" + subject.id));
        const auto count = static_cast<long>(std::floor(scenario.duration_s / interval_s)) + 1;
        for (long k = 0; k < count; ++k) {
            ScanRecord scan;
            scan.subject_id = subject.id;
            scan.timestamp_s = static_cast<double>(k) * interval_s;
            const auto pos = position_at(subject, scan.timestamp_s);
            for (const auto& ap : scenario.access_points) {
                const double d = std::max(distance(pos, {ap.x, ap.y}), 1e-3);
                const double wall =
                    separated_by_wall(subject.room, ap.room) ? scenario.rssi_wall_loss_db : 0.0;
                const double rssi = ap.tx_power_dbm -
                                    10.0 * ap.path_loss_exponent * std::log10(d) - wall +
                                    scenario.noise.rssi_sigma_db * normal01(rng);
                scan.readings[ap.id] = rssi;
            }
            out.push_back(proximity::filter_readings(std::move(scan)));
        }
    }
    return out;
}

std::vector<ScanRecord> synth_scans(const Scenario& scenario) {
    return synth_scans(scenario, scenario.scan_interval_s);
}

GroundTruth ground_truth(const Scenario& scenario) {
    GroundTruth truth;
    truth.window = {0.0, scenario.duration_s};
    for (const auto& g : scenario.groups) {
        auto members = g.members;
        std::sort(members.begin(), members.end());
        truth.groups.push_back(std::move(members));
    }
    std::sort(truth.groups.begin(), truth.groups.end());
    return truth;
}

namespace {

SubjectSpec static_subject(const std::string& id, double x, double y, double gain,
                           double clock_offset, const std::string& room = "") {
    return SubjectSpec{id, {{0.0, x, y}}, gain, clock_offset, room};
}

// Rotating utterances over [0, duration) with ~1.2 s hand-over gaps.
std::vector<Utterance> rotating_schedule(const std::vector<std::string>& speakers,
                                         double duration, double utterance_s = 9.0,
                                         double gap_s = 1.2, double phase_s = 0.0) {
    std::vector<Utterance> schedule;
    double t = phase_s;
    std::size_t idx = 0;
    while (t + 1.0 < duration) {
        const double end = std::min(t + utterance_s, duration - 0.2);
        schedule.push_back({speakers[idx % speakers.size()], t, end});
        t = end + gap_s;
        ++idx;
    }
    return schedule;
}

GroupSpec make_group(std::vector<std::string> members, std::vector<std::string> speakers,
                     double f0, double duration, double utterance_s = 9.0,
                     double gap_s = 1.2, double phase_s = 0.0) {
    GroupSpec g;
    g.members = std::move(members);
    g.voice = VoiceSpec{f0, 6.0, 8, 4.0};
    g.schedule = rotating_schedule(speakers, duration, utterance_s, gap_s, phase_s);
    return g;
}

}  // namespace

std::vector<std::string> scenario_names() {
    return {"S1", "S2", "S3", "S4", "S5", "S6", "S7", "G6G7_WALK"};
}

Scenario scenario_library(const std::string& name, std::uint64_t seed) {
    Scenario sc;
    sc.name = name;
    sc.seed = seed;
    sc.duration_s = 60.0;
    sc.scan_interval_s = 10.0;  // desk-scale cadence: same scans-per-window
                                // ratio as one scan a minute over T >= 15 min
    sc.noise.snr_db = 20.0;
    sc.noise.rssi_sigma_db = 2.0;

    if (name == "S1") {
        // Two groups in neighbouring rooms (3 + 2), ~9 m apart, one ceiling
        // AP per room plus a corridor AP.
        sc.subjects = {static_subject("u1", 1.5, 2.0, 1.0, 0.3, "roomA"),
                       static_subject("u2", 2.5, 2.0, 1.3, -0.5, "roomA"),
                       static_subject("u3", 2.0, 2.8, 0.7, 0.8, "roomA"),
                       static_subject("u4", 10.6, 2.0, 1.1, -1.0, "roomB"),
                       static_subject("u5", 11.4, 2.0, 0.9, 0.0, "roomB")};
        sc.groups = {make_group({"u1", "u2", "u3"}, {"u1", "u3"}, 130.0, sc.duration_s),
                     make_group({"u4", "u5"}, {"u4"}, 210.0, sc.duration_s, 9.0, 1.2, 0.6)};
        sc.access_points = {{"apA", 2.0, 1.2, -30.0, 3.0, "roomA"},
                            {"apB", 11.0, 1.2, -30.0, 3.0, "roomB"},
                            {"apC", 6.5, 4.0, -30.0, 3.0, ""}};
    } else if (name == "S2") {
        // Three groups in different rooms (4 + 2 + 2), one AP per room.
        sc.subjects = {static_subject("u1", 1.5, 1.5, 1.0, 0.2, "office"),
                       static_subject("u2", 2.5, 1.5, 1.2, -0.4, "office"),
                       static_subject("u3", 1.5, 2.5, 0.8, 0.6, "office"),
                       static_subject("u4", 2.5, 2.5, 1.1, -0.8, "office"),
                       static_subject("u5", 11.6, 2.0, 0.9, 0.5, "library"),
                       static_subject("u6", 12.4, 2.0, 1.3, -0.2, "library"),
                       static_subject("u7", 6.6, 11.0, 1.0, 0.9, "lab"),
                       static_subject("u8", 7.4, 11.0, 0.7, -0.6, "lab")};
        sc.groups = {make_group({"u1", "u2", "u3", "u4"}, {"u1", "u4"}, 120.0, sc.duration_s),
                     make_group({"u5", "u6"}, {"u5"}, 175.0, sc.duration_s, 9.0, 1.2, 0.5),
                     make_group({"u7", "u8"}, {"u8"}, 240.0, sc.duration_s, 9.0, 1.2, 1.0)};
        sc.access_points = {{"ap1", 2.0, 0.8, -30.0, 3.0, "office"},
                            {"ap2", 12.0, 0.8, -30.0, 3.0, "library"},
                            {"ap3", 7.0, 12.2, -30.0, 3.0, "lab"}};
    } else if (name == "S3") {
        // Two groups of 3 at a noisy cafeteria, ~8 m apart, SNR 5 dB.
        sc.noise.snr_db = 5.0;
        sc.subjects = {static_subject("u1", 1.4, 2.0, 1.0, 0.4),
                       static_subject("u2", 2.6, 2.0, 1.2, -0.3),
                       static_subject("u3", 2.0, 2.9, 0.8, 0.7),
                       static_subject("u4", 9.4, 2.0, 1.1, -0.9),
                       static_subject("u5", 10.6, 2.0, 0.9, 0.2),
                       static_subject("u6", 10.0, 2.9, 1.3, -0.5)};
        sc.groups = {make_group({"u1", "u2", "u3"}, {"u1", "u2"}, 135.0, sc.duration_s),
                     make_group({"u4", "u5", "u6"}, {"u4", "u6"}, 205.0, sc.duration_s, 9.0,
                                1.2, 0.7)};
        sc.access_points = {{"ap1", 1.0, -1.5, -30.0, 3.0},
                            {"ap2", 11.0, -1.5, -30.0, 3.0},
                            {"ap3", 6.0, 7.0, -30.0, 3.0}};
    } else if (name == "S4") {
        // One large group: 7 subjects at a presentation, rotating speaker.
        sc.subjects.clear();
        for (int i = 0; i < 7; ++i) {
            const double angle = kTwoPi * i / 7.0;
            sc.subjects.push_back(static_subject("u" + std::to_string(i + 1),
                                                 5.0 + 1.6 * std::cos(angle),
                                                 5.0 + 1.6 * std::sin(angle),
                                                 0.8 + 0.1 * i, 0.1 * i - 0.3, "conf"));
        }
        sc.groups = {make_group({"u1", "u2", "u3", "u4", "u5", "u6", "u7"},
                                {"u1", "u4", "u6"}, 150.0, sc.duration_s, 14.0, 1.5)};
        sc.access_points = {{"ap1", 5.0, 5.5, -30.0, 3.0, "conf"},
                            {"ap2", 10.0, 0.0, -30.0, 3.0, ""},
                            {"ap3", 5.0, 11.0, -30.0, 3.0, ""}};
    } else if (name == "S5") {
        // Two groups of 3 at opposite cubicles of one large lab. The access
        // points sit outside the room, so proximity separates the cubicles
        // only weakly.
        sc.subjects = {static_subject("u1", 0.6, 1.0, 1.0, 0.5, "lab"),
                       static_subject("u2", 1.4, 1.0, 1.2, -0.4, "lab"),
                       static_subject("u3", 1.0, 1.8, 0.8, 0.2, "lab"),
                       static_subject("u4", 12.6, 1.0, 1.1, -0.7, "lab"),
                       static_subject("u5", 13.4, 1.0, 0.9, 0.3, "lab"),
                       static_subject("u6", 13.0, 1.8, 1.3, -0.1, "lab")};
        sc.groups = {make_group({"u1", "u2", "u3"}, {"u3", "u1"}, 125.0, sc.duration_s),
                     make_group({"u4", "u5", "u6"}, {"u5", "u4"}, 195.0, sc.duration_s, 9.0,
                                1.2, 0.4)};
        sc.access_points = {{"ap1", -3.5, 1.0, -30.0, 2.2},
                            {"ap2", 17.5, 1.0, -30.0, 2.2}};
    } else if (name == "S6") {
        // Two roaming groups in a corridor (3 + 2).
        sc.noise.snr_db = 15.0;
        auto walker = [&](const std::string& id, double ox, double oy, double gain,
                          double clock) {
            SubjectSpec s;
            s.id = id;
            s.device_gain = gain;
            s.clock_offset_s = clock;
            s.path = {{0.0, 1.0 + ox, 1.0 + oy},
                      {30.0, 1.0 + ox, 9.0 + oy},
                      {60.0, 8.0 + ox, 9.0 + oy}};
            return s;
        };
        auto walker_b = [&](const std::string& id, double ox, double oy, double gain,
                            double clock) {
            SubjectSpec s;
            s.id = id;
            s.device_gain = gain;
            s.clock_offset_s = clock;
            s.path = {{0.0, 9.0 + ox, 1.0 + oy},
                      {30.0, 9.0 + ox, 3.0 + oy},
                      {60.0, 14.0 + ox, 3.0 + oy}};
            return s;
        };
        sc.subjects = {walker("u1", 0.0, 0.0, 1.0, 0.3), walker("u2", 0.8, 0.0, 1.2, -0.5),
                       walker("u3", 0.4, 0.7, 0.8, 0.1), walker_b("u4", 0.0, 0.0, 1.1, -0.2),
                       walker_b("u5", 0.8, 0.0, 0.9, 0.6)};
        sc.groups = {make_group({"u1", "u2", "u3"}, {"u2", "u1"}, 140.0, sc.duration_s),
                     make_group({"u4", "u5"}, {"u4"}, 220.0, sc.duration_s, 9.0, 1.2, 0.5)};
        sc.access_points = {{"ap1", 0.0, 5.0, -30.0, 3.0},
                            {"ap2", 12.0, 0.0, -30.0, 3.0},
                            {"ap3", 12.0, 10.0, -30.0, 3.0}};
    } else if (name == "S7") {
        // Two roaming groups outdoors (5 + 2), wider field, more noise.
        sc.noise.snr_db = 10.0;
        auto roam = [&](const std::string& id, double ox, double oy, double gain, double clock,
                        double x0, double y0, double x1, double y1) {
            SubjectSpec s;
            s.id = id;
            s.device_gain = gain;
            s.clock_offset_s = clock;
            s.path = {{0.0, x0 + ox, y0 + oy}, {60.0, x1 + ox, y1 + oy}};
            return s;
        };
        sc.subjects = {roam("u1", 0.0, 0.0, 1.0, 0.4, 0, 0, 26, 0),
                       roam("u2", 1.0, 0.0, 1.2, -0.6, 0, 0, 26, 0),
                       roam("u3", 0.5, 0.9, 0.8, 0.2, 0, 0, 26, 0),
                       roam("u4", 1.5, 0.9, 1.1, -0.3, 0, 0, 26, 0),
                       roam("u5", 2.0, 0.0, 0.9, 0.7, 0, 0, 26, 0),
                       roam("u6", 0.0, 0.0, 1.3, -0.8, 14, 13, 40, 13),
                       roam("u7", 1.0, 0.0, 0.7, 0.5, 14, 13, 40, 13)};
        sc.groups = {make_group({"u1", "u2", "u3", "u4", "u5"}, {"u1", "u3", "u5"}, 130.0,
                                sc.duration_s),
                     make_group({"u6", "u7"}, {"u6"}, 190.0, sc.duration_s, 9.0, 1.2, 0.8)};
        sc.access_points = {{"ap1", 10.0, 6.0, -30.0, 3.0}, {"ap2", 28.0, 6.0, -30.0, 3.0}};
    } else if (name == "G6G7_WALK") {
        // The walking pilot: two groups 18 m apart; u2 leaves G6 at t=2 and
        // reaches G7 66 s later.
        sc.duration_s = 70.0;
        SubjectSpec mover;
        mover.id = "u2";
        mover.device_gain = 1.1;
        mover.clock_offset_s = -0.4;
        mover.path = {{0.0, 1.0, 0.8}, {2.0, 1.0, 0.8}, {68.0, 17.0, 0.8}, {70.0, 17.0, 0.8}};
        sc.subjects = {static_subject("u1", 0.0, 0.0, 1.0, 0.3), mover,
                       static_subject("u3", 1.0, -0.8, 0.9, 0.6),
                       static_subject("u4", 18.0, 0.0, 1.2, -0.5),
                       static_subject("u5", 17.2, 0.9, 0.8, 0.2),
                       static_subject("u6", 18.8, 0.9, 1.0, -0.2)};
        sc.groups = {make_group({"u1", "u2", "u3"}, {"u1"}, 120.0, sc.duration_s, 12.0, 1.0),
                     make_group({"u4", "u5", "u6"}, {"u4"}, 230.0, sc.duration_s, 12.0, 1.0,
                                0.5)};
        sc.access_points = {{"ap1", 0.0, -2.0, -30.0, 3.0}, {"ap2", 18.0, -2.0, -30.0, 3.0}};
    } else {
        throw ParameterError("unknown library scenario: " + name);
    }
    sc.validate();
    return sc;
}

std::string scenario_to_json(const Scenario& sc) {
    json j;
    j["name"] = sc.name;
    j["duration_s"] = sc.duration_s;
    j["seed"] = sc.seed;
    j["scan_interval_s"] = sc.scan_interval_s;
    j["wall_loss_db"] = sc.wall_loss_db;
    j["rssi_wall_loss_db"] = sc.rssi_wall_loss_db;
    json subjects = json::array();
    for (const auto& s : sc.subjects) {
        json path = json::array();
        for (const auto& w : s.path) path.push_back({{"t", w.t}, {"x", w.x}, {"y", w.y}});
        json subj = {{"id", s.id},
                     {"path", path},
                     {"device_gain", s.device_gain},
                     {"clock_offset_s", s.clock_offset_s}};
        if (!s.room.empty()) subj["room"] = s.room;
        subjects.push_back(subj);
    }
    j["subjects"] = subjects;
    json groups = json::array();
    for (const auto& g : sc.groups) {
        json schedule = json::array();
        for (const auto& u : g.schedule) {
            schedule.push_back({{"speaker", u.speaker}, {"start_s", u.start_s}, {"end_s", u.end_s}});
        }
        groups.push_back({{"members", g.members},
                          {"schedule", schedule},
                          {"voice",
                           {{"fundamental_hz", g.voice.fundamental_hz},
                            {"harmonic_rolloff_db_per_octave", g.voice.harmonic_rolloff_db_per_octave},
                            {"harmonics", g.voice.harmonics},
                            {"syllable_rate_hz", g.voice.syllable_rate_hz},
                            {"breath_fraction", g.voice.breath_fraction}}}});
    }
    j["groups"] = groups;
    json noise;
    if (sc.noise.snr_db) noise["snr_db"] = *sc.noise.snr_db;
    if (sc.noise.ambient_rms) noise["ambient_rms"] = *sc.noise.ambient_rms;
    noise["rssi_sigma_db"] = sc.noise.rssi_sigma_db;
    j["noise"] = noise;
    json aps = json::array();
    for (const auto& ap : sc.access_points) {
        json a = {{"id", ap.id},
                  {"x", ap.x},
                  {"y", ap.y},
                  {"tx_power_dbm", ap.tx_power_dbm},
                  {"path_loss_exponent", ap.path_loss_exponent}};
        if (!ap.room.empty()) a["room"] = ap.room;
        aps.push_back(a);
    }
    j["access_points"] = aps;
    return j.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
    const json j = json::parse(text);
    Scenario sc;
    sc.name = j.value("name", "scenario");
    sc.duration_s = j.at("duration_s").get<double>();
    sc.seed = j.value("seed", 1ull);
    sc.scan_interval_s = j.value("scan_interval_s", 60.0);
    sc.wall_loss_db = j.value("wall_loss_db", 18.0);
    sc.rssi_wall_loss_db = j.value("rssi_wall_loss_db", 10.0);
    for (const auto& s : j.at("subjects")) {
        SubjectSpec spec;
        spec.id = s.at("id").get<std::string>();
        for (const auto& w : s.at("path")) {
            spec.path.push_back({w.value("t", 0.0), w.at("x").get<double>(), w.at("y").get<double>()});
        }
        spec.device_gain = s.value("device_gain", 1.0);
        spec.clock_offset_s = s.value("clock_offset_s", 0.0);
        spec.room = s.value("room", std::string{});
        sc.subjects.push_back(std::move(spec));
    }
    for (const auto& g : j.value("groups", json::array())) {
        GroupSpec spec;
        spec.members = g.at("members").get<std::vector<std::string>>();
        if (g.contains("voice")) {
            const auto& v = g["voice"];
            spec.voice.fundamental_hz = v.value("fundamental_hz", 150.0);
            spec.voice.harmonic_rolloff_db_per_octave =
                v.value("harmonic_rolloff_db_per_octave", 6.0);
            spec.voice.harmonics = v.value("harmonics", 8);
            spec.voice.syllable_rate_hz = v.value("syllable_rate_hz", 4.0);
            spec.voice.breath_fraction = v.value("breath_fraction", 0.35);
        }
        for (const auto& u : g.value("schedule", json::array())) {
            spec.schedule.push_back({u.at("speaker").get<std::string>(),
                                     u.at("start_s").get<double>(),
                                     u.at("end_s").get<double>()});
        }
        sc.groups.push_back(std::move(spec));
    }
    if (j.contains("noise")) {
        const auto& n = j["noise"];
        if (n.contains("snr_db")) sc.noise.snr_db = n["snr_db"].get<double>();
        if (n.contains("ambient_rms")) sc.noise.ambient_rms = n["ambient_rms"].get<double>();
        sc.noise.rssi_sigma_db = n.value("rssi_sigma_db", 2.0);
    }
    for (const auto& ap : j.value("access_points", json::array())) {
        sc.access_points.push_back({ap.at("id").get<std::string>(), ap.at("x").get<double>(),
                                    ap.at("y").get<double>(), ap.value("tx_power_dbm", -30.0),
                                    ap.value("path_loss_exponent", 3.0),
                                    ap.value("room", std::string{})});
    }
    sc.validate();
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("scenario: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return scenario_from_json(text);
}

}  // namespace meetsense::sim
