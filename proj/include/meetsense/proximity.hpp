#ifndef MEETSENSE_PROXIMITY_HPP
#define MEETSENSE_PROXIMITY_HPP

#include <optional>
#include <vector>

#include "meetsense/types.hpp"

namespace meetsense::proximity {

/// Minimum usable signal strength; weaker readings are dropped at ingest.
constexpr double kRssiCutoffDbm = -80.0;

/// Drop readings below the cutoff. Applied by the CSV reader and the
/// simulator before ScanRecords are built.
ScanRecord filter_readings(ScanRecord scan, double cutoff_dbm = kRssiCutoffDbm);

/// Manhattan distance between two scans: mean |rssi_i(ap) - rssi_j(ap)|
/// over access points visible to both. Absent when they share none.
std::optional<double> pair_distance(const ScanRecord& scan_i, const ScanRecord& scan_j);

/// Per-bucket proximity similarity 1 - min(d, cap)/cap for two scan logs.
/// Scans are matched by time bucket, falling back to the nearest scan within
/// +/- nearest_slack_s when buckets misalign. Buckets without a defined
/// distance are absent; zero defined buckets -> InsufficientDataError.
PairFeatureSeries proximity_similarity(const std::vector<ScanRecord>& log_i,
                                       const std::vector<ScanRecord>& log_j,
                                       double time_bucket_s = 60.0,
                                       double distance_cap_db = 30.0,
                                       double nearest_slack_s = 30.0);

}  // namespace meetsense::proximity

#endif
