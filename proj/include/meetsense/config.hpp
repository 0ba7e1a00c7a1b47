#ifndef MEETSENSE_CONFIG_HPP
#define MEETSENSE_CONFIG_HPP

#include <string>
#include <vector>

#include "meetsense/types.hpp"

namespace meetsense {

/// Every tunable of the pipeline in one auditable document. The JSON form
/// written by save() lists each default; a run's manifest embeds it.
struct Config {
    // audio preprocessing
    double bandpass_low_hz = 300.0;
    double bandpass_high_hz = 3400.0;
    double segment_len_s = 1.0;
    double max_shift_s = 30.0;

    // proximity
    double time_bucket_s = 60.0;
    double distance_cap_db = 30.0;
    double nearest_scan_slack_s = 30.0;

    // feature refinement
    double significance_alpha = 0.05;

    // community detection
    std::string community_algorithm = "walktrap";  // or "louvain"
    int walk_length = 4;
    double tie_epsilon = 0.01;

    // detector thresholds and gates
    double delta_p1 = 0.30;
    double delta_p2 = 0.10;
    double delta_alpha = 0.10;
    std::vector<double> weight_grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                       0.6, 0.7, 0.8, 0.9, 1.0};
    double window_T_s = 900.0;
    double single_group_floor = 0.2;
    double pair_accept_threshold = 0.3;

    // baselines
    int next2me_top_n = 6;
    double next2me_window_s = 1.0;
    double audiomatch_window_s = 0.064;
    double audiomatch_overlap = 0.5;
    int audiomatch_bands = 32;
    double audiomatch_band_low_hz = 300.0;
    double audiomatch_band_high_hz = 3400.0;

    void validate() const;  // throws ParameterError

    std::string to_json() const;
    static Config from_json(const std::string& text);
    static Config load(const std::string& path);
    void save(const std::string& path) const;
};

}  // namespace meetsense

#endif
