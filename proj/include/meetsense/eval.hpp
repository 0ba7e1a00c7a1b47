#ifndef MEETSENSE_EVAL_HPP
#define MEETSENSE_EVAL_HPP

#include <set>
#include <string>
#include <vector>

#include "meetsense/baselines.hpp"
#include "meetsense/config.hpp"
#include "meetsense/detector.hpp"
#include "meetsense/sim.hpp"

namespace meetsense::eval {

/// F1 of one detected group against one ground-truth group:
/// 2|k intersect v| / (|k| + |v|). Empty detected group contributes 0.
double f1_pair(const std::set<std::string>& truth_group,
               const std::set<std::string>& detected_group);

/// Mean over detected groups of the best-matching truth F1. The denominator
/// counts detected groups, so spurious detections dilute the score. The
/// optimal_assignment flag matches each truth group at most once instead
/// (sensitivity variant).
double f1_overall(const std::vector<std::set<std::string>>& truth,
                  const std::vector<std::set<std::string>>& detected,
                  bool optimal_assignment = false);
double f1_overall(const std::vector<std::vector<std::string>>& truth,
                  const std::vector<std::vector<std::string>>& detected,
                  bool optimal_assignment = false);

/// In-memory dataset: per-subject audio + scans plus ground truth.
struct Dataset {
    std::string name;
    std::vector<detector::SubjectData> subjects;
    sim::GroundTruth truth;
};

Dataset dataset_from_scenario(const sim::Scenario& scenario);

struct EvalRow {
    std::string scenario;
    std::string method;
    double f1 = 0.0;
    double modularity = 0.0;
    std::string decision_path;
};

/// Detect with one method and score against the dataset's ground truth.
EvalRow run_method(const Dataset& dataset, baselines::Method method, const Config& config);

/// All three methods on one dataset (the Table-3-shaped comparison).
std::vector<EvalRow> compare_methods(const Dataset& dataset, const Config& config);

std::string rows_to_csv(const std::vector<EvalRow>& rows);

struct SweepPoint {
    double snr_db = 0.0;
    std::string method;
    double f1 = 0.0;
    double same_group_similarity = 0.0;
};

/// Re-run the scenario at each SNR for each method; same-group similarity
/// uses each method's own aggregate (refined cepstral correlation for
/// GroupSense, plain mean fingerprint similarity for the baselines).
std::vector<SweepPoint> noise_sweep(const sim::Scenario& base,
                                    const std::vector<double>& snr_grid_db,
                                    const std::vector<baselines::Method>& methods,
                                    const Config& config, int seeds_per_point = 1);

std::string sweep_to_csv(const std::vector<SweepPoint>& points);
std::string sweep_to_svg(const std::vector<SweepPoint>& points);

}  // namespace meetsense::eval

#endif
