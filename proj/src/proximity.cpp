#include "meetsense/proximity.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace meetsense::proximity {
namespace {

// Pick one scan per bucket (the earliest), keyed by floor(t / bucket).
std::map<long, const ScanRecord*> bucketize(const std::vector<ScanRecord>& log,
                                            double bucket_s) {
    std::map<long, const ScanRecord*> out;
    for (const auto& scan : log) {
        const long b = static_cast<long>(std::floor(scan.timestamp_s / bucket_s));
        auto it = out.find(b);
        if (it == out.end() || scan.timestamp_s < it->second->timestamp_s) {
            out[b] = &scan;
        }
    }
    return out;
}

const ScanRecord* nearest_scan(const std::vector<ScanRecord>& log, double t, double slack_s) {
    const ScanRecord* best = nullptr;
    double best_dt = slack_s;
    for (const auto& scan : log) {
        const double dt = std::fabs(scan.timestamp_s - t);
        if (dt <= best_dt) {
            best_dt = dt;
            best = &scan;
        }
    }
    return best;
}

}  // namespace

ScanRecord filter_readings(ScanRecord scan, double cutoff_dbm) {
    for (auto it = scan.readings.begin(); it != scan.readings.end();) {
        if (it->second < cutoff_dbm) {
            it = scan.readings.erase(it);
        } else {
            ++it;
        }
    }
    return scan;
}

std::optional<double> pair_distance(const ScanRecord& scan_i, const ScanRecord& scan_j) {
    double sum = 0.0;
    int common = 0;
    for (const auto& [ap, rssi] : scan_i.readings) {
        auto it = scan_j.readings.find(ap);
        if (it == scan_j.readings.end()) continue;
        sum += std::fabs(rssi - it->second);
        ++common;
    }
    if (common == 0) return std::nullopt;
    return sum / common;
}

PairFeatureSeries proximity_similarity(const std::vector<ScanRecord>& log_i,
                                       const std::vector<ScanRecord>& log_j,
                                       double time_bucket_s, double distance_cap_db,
                                       double nearest_slack_s) {
    if (time_bucket_s <= 0.0 || distance_cap_db <= 0.0) {
        throw ParameterError("proximity_similarity: bucket and cap must be positive");
    }
    PairFeatureSeries series;
    series.subject_i = log_i.empty() ? "" : log_i.front().subject_id;
    series.subject_j = log_j.empty() ? "" : log_j.front().subject_id;

    const auto bi = bucketize(log_i, time_bucket_s);
    const auto bj = bucketize(log_j, time_bucket_s);

    std::map<long, std::pair<const ScanRecord*, const ScanRecord*>> matched;
    for (const auto& [b, scan] : bi) {
        auto it = bj.find(b);
        const ScanRecord* other = it != bj.end()
                                      ? it->second
                                      : nearest_scan(log_j, scan->timestamp_s, nearest_slack_s);
        if (other) matched[b] = {scan, other};
    }
    for (const auto& [b, scan] : bj) {
        if (matched.count(b)) continue;
        const ScanRecord* other = nearest_scan(log_i, scan->timestamp_s, nearest_slack_s);
        if (other) matched[b] = {other, scan};
    }

    for (const auto& [b, pair] : matched) {
        const auto d = pair_distance(*pair.first, *pair.second);
        if (!d) continue;
        const double sim = 1.0 - std::min(*d, distance_cap_db) / distance_cap_db;
        series.values.emplace_back(b, sim);
    }
    if (series.values.empty()) {
        throw InsufficientDataError("proximity_similarity: no bucket with a defined distance");
    }
    return series;
}

}  // namespace meetsense::proximity
