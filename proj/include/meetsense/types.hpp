#ifndef MEETSENSE_TYPES_HPP
#define MEETSENSE_TYPES_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace meetsense {

// Error taxonomy shared by all modules. Callers distinguish recoverable
// data conditions (insufficient data, misaligned traces) from caller bugs
// (parameter errors) by type.
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct AlignmentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InsufficientDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateInputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateGraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InsufficientPopulationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One subject's recorded or simulated waveform plus its timebase.
struct AudioTrace {
    std::string subject_id;
    int sample_rate_hz = 44100;
    double start_time_s = 0.0;      // seconds since epoch, fractional
    std::vector<double> samples;

    double duration_s() const {
        return sample_rate_hz > 0
                   ? static_cast<double>(samples.size()) / sample_rate_hz
                   : 0.0;
    }
    double end_time_s() const { return start_time_s + duration_s(); }
};

/// One WiFi scan: access point id -> signal strength (dBm) at a timestamp.
/// Readings below the ingest cutoff (-80 dBm) are dropped before this struct
/// is built; see proximity::filter_readings.
struct ScanRecord {
    std::string subject_id;
    double timestamp_s = 0.0;
    std::map<std::string, double> readings;
};

/// Unordered subject pair, stored canonically (first <= second).
struct PairKey {
    std::string first;
    std::string second;

    PairKey() = default;
    PairKey(std::string a, std::string b) {
        if (b < a) std::swap(a, b);
        first = std::move(a);
        second = std::move(b);
    }
    bool operator<(const PairKey& o) const {
        return first != o.first ? first < o.first : second < o.second;
    }
    bool operator==(const PairKey& o) const {
        return first == o.first && second == o.second;
    }
};

/// Time-indexed pairwise similarity values (proximity F or acoustic C).
/// Indices are segment/bucket numbers; missing indices mean the value is
/// absent for that slot (silence, no common AP), not zero.
struct PairFeatureSeries {
    std::string subject_i;
    std::string subject_j;
    std::vector<std::pair<long, double>> values;  // (index, value), ascending

    std::vector<double> values_only() const {
        std::vector<double> out;
        out.reserve(values.size());
        for (const auto& [idx, v] : values) out.push_back(v);
        return out;
    }
    bool empty() const { return values.empty(); }
};

}  // namespace meetsense

#endif
