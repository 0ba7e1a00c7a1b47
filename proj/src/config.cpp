#include "meetsense/config.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

namespace meetsense {

using nlohmann::json;

void Config::validate() const {
    if (!(bandpass_low_hz > 0.0 && bandpass_low_hz < bandpass_high_hz)) {
        throw ParameterError("config: bandpass edges must satisfy 0 < low < high");
    }
    if (segment_len_s <= 0.0) throw ParameterError("config: segment_len_s must be positive");
    if (max_shift_s <= 0.0) throw ParameterError("config: max_shift_s must be positive");
    if (!(0.0 <= delta_p2 && delta_p2 < delta_p1 && delta_p1 <= 1.0)) {
        throw ParameterError("config: need 0 <= delta_p2 < delta_p1 <= 1");
    }
    if (weight_grid.empty()) throw ParameterError("config: weight grid is empty");
    bool has0 = false, has1 = false;
    for (double w : weight_grid) {
        if (w < 0.0 || w > 1.0) throw ParameterError("config: weight grid values must lie in [0,1]");
        has0 = has0 || w == 0.0;
        has1 = has1 || w == 1.0;
    }
    if (!has0 || !has1) throw ParameterError("config: weight grid must contain 0 and 1");
    if (window_T_s <= 0.0) throw ParameterError("config: window_T_s must be positive");
    if (community_algorithm != "walktrap" && community_algorithm != "louvain") {
        throw ParameterError("config: unknown community algorithm " + community_algorithm);
    }
    if (next2me_top_n <= 0) throw ParameterError("config: next2me_top_n must be positive");
    if (audiomatch_bands < 8) throw ParameterError("config: audiomatch needs at least 8 bands");
}

std::string Config::to_json() const {
    json j;
    j["audio"] = {{"bandpass_low_hz", bandpass_low_hz},
                  {"bandpass_high_hz", bandpass_high_hz},
                  {"segment_len_s", segment_len_s},
                  {"max_shift_s", max_shift_s}};
    j["proximity"] = {{"time_bucket_s", time_bucket_s},
                      {"distance_cap_db", distance_cap_db},
                      {"nearest_scan_slack_s", nearest_scan_slack_s}};
    j["features"] = {{"significance_alpha", significance_alpha}};
    j["community"] = {{"algorithm", community_algorithm},
                      {"walk_length", walk_length},
                      {"tie_epsilon", tie_epsilon}};
    j["detector"] = {{"delta_p1", delta_p1},
                     {"delta_p2", delta_p2},
                     {"delta_alpha", delta_alpha},
                     {"weight_grid", weight_grid},
                     {"window_T_s", window_T_s},
                     {"single_group_floor", single_group_floor},
                     {"pair_accept_threshold", pair_accept_threshold}};
    j["baselines"] = {{"next2me_top_n", next2me_top_n},
                      {"next2me_window_s", next2me_window_s},
                      {"audiomatch_window_s", audiomatch_window_s},
                      {"audiomatch_overlap", audiomatch_overlap},
                      {"audiomatch_bands", audiomatch_bands},
                      {"audiomatch_band_low_hz", audiomatch_band_low_hz},
                      {"audiomatch_band_high_hz", audiomatch_band_high_hz}};
    return j.dump(2) + "\n";
}

Config Config::from_json(const std::string& text) {
    Config c;
    json j = json::parse(text);
    auto get = [](const json& obj, const char* key, auto& into) {
        if (obj.contains(key)) into = obj.at(key).get<std::decay_t<decltype(into)>>();
    };
    if (j.contains("audio")) {
        const auto& a = j["audio"];
        get(a, "bandpass_low_hz", c.bandpass_low_hz);
        get(a, "bandpass_high_hz", c.bandpass_high_hz);
        get(a, "segment_len_s", c.segment_len_s);
        get(a, "max_shift_s", c.max_shift_s);
    }
    if (j.contains("proximity")) {
        const auto& p = j["proximity"];
        get(p, "time_bucket_s", c.time_bucket_s);
        get(p, "distance_cap_db", c.distance_cap_db);
        get(p, "nearest_scan_slack_s", c.nearest_scan_slack_s);
    }
    if (j.contains("features")) {
        get(j["features"], "significance_alpha", c.significance_alpha);
    }
    if (j.contains("community")) {
        const auto& cm = j["community"];
        get(cm, "algorithm", c.community_algorithm);
        get(cm, "walk_length", c.walk_length);
        get(cm, "tie_epsilon", c.tie_epsilon);
    }
    if (j.contains("detector")) {
        const auto& d = j["detector"];
        get(d, "delta_p1", c.delta_p1);
        get(d, "delta_p2", c.delta_p2);
        get(d, "delta_alpha", c.delta_alpha);
        get(d, "weight_grid", c.weight_grid);
        get(d, "window_T_s", c.window_T_s);
        get(d, "single_group_floor", c.single_group_floor);
        get(d, "pair_accept_threshold", c.pair_accept_threshold);
    }
    if (j.contains("baselines")) {
        const auto& b = j["baselines"];
        get(b, "next2me_top_n", c.next2me_top_n);
        get(b, "next2me_window_s", c.next2me_window_s);
        get(b, "audiomatch_window_s", c.audiomatch_window_s);
        get(b, "audiomatch_overlap", c.audiomatch_overlap);
        get(b, "audiomatch_bands", c.audiomatch_bands);
        get(b, "audiomatch_band_low_hz", c.audiomatch_band_low_hz);
        get(b, "audiomatch_band_high_hz", c.audiomatch_band_high_hz);
    }
    c.validate();
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json(text);
}

void Config::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("config: cannot write " + path);
    out << to_json();
}

}  // namespace meetsense
