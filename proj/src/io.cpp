#include "meetsense/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace meetsense::io {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint32_t read_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    return b[0] | (b[1] << 8) | (b[2] << 16) | (std::uint32_t(b[3]) << 24);
}

std::uint16_t read_u16(std::istream& in) {
    unsigned char b[2];
    in.read(reinterpret_cast<char*>(b), 2);
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

void write_u32(std::ostream& out, std::uint32_t v) {
    const char b[4] = {char(v & 0xff), char((v >> 8) & 0xff), char((v >> 16) & 0xff),
                       char((v >> 24) & 0xff)};
    out.write(b, 4);
}

void write_u16(std::ostream& out, std::uint16_t v) {
    const char b[2] = {char(v & 0xff), char((v >> 8) & 0xff)};
    out.write(b, 2);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

AudioTrace read_wav(const std::string& path, const std::string& subject_id) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("wav: cannot open " + path);

    char tag[5] = {0};
    in.read(tag, 4);
    if (std::strncmp(tag, "RIFF", 4) != 0) throw IoError("wav: not a RIFF file: " + path);
    read_u32(in);  // file size
    in.read(tag, 4);
    if (std::strncmp(tag, "WAVE", 4) != 0) throw IoError("wav: not a WAVE file: " + path);

    AudioTrace trace;
    trace.subject_id = subject_id.empty() ? fs::path(path).stem().string() : subject_id;

    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t sample_rate = 0;
    bool got_data = false;
    while (in.read(tag, 4)) {
        const std::uint32_t chunk = read_u32(in);
        if (std::strncmp(tag, "fmt ", 4) == 0) {
            format = read_u16(in);
            channels = read_u16(in);
            sample_rate = read_u32(in);
            read_u32(in);  // byte rate
            read_u16(in);  // block align
            bits = read_u16(in);
            if (chunk > 16) in.seekg(chunk - 16, std::ios::cur);
        } else if (std::strncmp(tag, "data", 4) == 0) {
            if (format != 1 || bits != 16) throw IoError("wav: expected 16-bit PCM: " + path);
            if (channels != 1) throw IoError("wav: expected mono: " + path);
            const std::size_t count = chunk / 2;
            trace.samples.resize(count);
            std::vector<char> raw(chunk);
            in.read(raw.data(), chunk);
            for (std::size_t i = 0; i < count; ++i) {
                const std::int16_t s = static_cast<std::int16_t>(
                    static_cast<unsigned char>(raw[2 * i]) |
                    (static_cast<unsigned char>(raw[2 * i + 1]) << 8));
                trace.samples[i] = static_cast<double>(s) / 32767.0;
            }
            got_data = true;
        } else {
            in.seekg(chunk + (chunk & 1), std::ios::cur);
        }
    }
    if (!got_data || sample_rate == 0) throw IoError("wav: missing data or fmt chunk: " + path);
    trace.sample_rate_hz = static_cast<int>(sample_rate);
    return trace;
}

void write_wav(const std::string& path, const AudioTrace& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("wav: cannot write " + path);

    const std::uint32_t n = static_cast<std::uint32_t>(trace.samples.size());
    const std::uint32_t data_bytes = n * 2;
    out.write("RIFF", 4);
    write_u32(out, 36 + data_bytes);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    write_u32(out, 16);
    write_u16(out, 1);  // PCM
    write_u16(out, 1);  // mono
    write_u32(out, static_cast<std::uint32_t>(trace.sample_rate_hz));
    write_u32(out, static_cast<std::uint32_t>(trace.sample_rate_hz) * 2);
    write_u16(out, 2);
    write_u16(out, 16);
    out.write("data", 4);
    write_u32(out, data_bytes);
    for (double v : trace.samples) {
        const double clamped = std::clamp(v, -1.0, 1.0);
        write_u16(out, static_cast<std::uint16_t>(
                           static_cast<std::int16_t>(std::lround(clamped * 32767.0))));
    }
}

std::map<std::string, std::vector<ScanRecord>> read_scans_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("scans: cannot open " + path);

    // subject -> timestamp -> readings
    std::map<std::string, std::map<double, std::map<std::string, double>>> staged;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("subject_id", 0) == 0) continue;  // header
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != 4) throw IoError("scans: malformed row: " + line);
        const double rssi = std::stod(fields[3]);
        if (rssi < -80.0) continue;  // ingest cutoff
        staged[fields[0]][std::stod(fields[1])][fields[2]] = rssi;
    }

    std::map<std::string, std::vector<ScanRecord>> out;
    for (auto& [subject, by_time] : staged) {
        for (auto& [t, readings] : by_time) {
            ScanRecord scan;
            scan.subject_id = subject;
            scan.timestamp_s = t;
            scan.readings = std::move(readings);
            out[subject].push_back(std::move(scan));
        }
    }
    return out;
}

void write_scans_csv(const std::string& path, const std::vector<ScanRecord>& scans) {
    std::ofstream out(path);
    if (!out) throw IoError("scans: cannot write " + path);
    out << "subject_id,timestamp_s,bssid,rssi_dbm\n";
    for (const auto& scan : scans) {
        for (const auto& [ap, rssi] : scan.readings) {
            out << scan.subject_id << ',' << format_fixed(scan.timestamp_s, 3) << ',' << ap
                << ',' << format_fixed(rssi, 2) << '\n';
        }
    }
}

std::string feature_series_csv(const std::vector<PairFeatureSeries>& series) {
    std::ostringstream out;
    out << "subject_i,subject_j,segment_index,value\n";
    for (const auto& s : series) {
        for (const auto& [idx, v] : s.values) {
            out << s.subject_i << ',' << s.subject_j << ',' << idx << ','
                << format_fixed(v, 6) << '\n';
        }
    }
    return out.str();
}

community::SimilarityGraph read_graph_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("graph: cannot open " + path);
    std::vector<std::tuple<std::string, std::string, double>> edges;
    std::vector<std::string> nodes;
    auto note_node = [&](const std::string& n) {
        if (std::find(nodes.begin(), nodes.end(), n) == nodes.end()) nodes.push_back(n);
    };
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("node_i", 0) == 0) continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != 3) throw IoError("graph: malformed row: " + line);
        note_node(fields[0]);
        note_node(fields[1]);
        edges.emplace_back(fields[0], fields[1], std::stod(fields[2]));
    }
    std::sort(nodes.begin(), nodes.end());
    community::SimilarityGraph g(nodes);
    for (const auto& [a, b, w] : edges) g.set_weight(a, b, w);
    return g;
}

void write_graph_csv(const std::string& path, const community::SimilarityGraph& graph) {
    std::ofstream out(path);
    if (!out) throw IoError("graph: cannot write " + path);
    out << "node_i,node_j,weight\n";
    for (std::size_t i = 0; i < graph.size(); ++i) {
        for (std::size_t j = i + 1; j < graph.size(); ++j) {
            out << graph.nodes()[i] << ',' << graph.nodes()[j] << ','
                << format_fixed(graph.weight(i, j), 6) << '\n';
        }
    }
}

std::string partition_json(const community::SimilarityGraph& graph,
                           const community::Partition& partition) {
    json j;
    json communities = json::array();
    for (const auto& comm : partition.communities()) {
        json ids = json::array();
        for (std::size_t idx : comm) ids.push_back(graph.nodes()[idx]);
        communities.push_back(ids);
    }
    j["communities"] = communities;
    j["modularity"] = partition.modularity;
    return j.dump(2) + "\n";
}

std::string group_result_json(const detector::GroupResult& result) {
    json j;
    j["window"] = {result.window[0], result.window[1]};
    j["groups"] = result.groups;
    j["ungrouped"] = result.ungrouped;
    j["decision_path"] = result.decision_path;
    j["modularities"] = result.modularities;
    j["accepting_modularity"] = result.accepting_modularity;
    if (result.best_weight >= 0.0) j["best_weight"] = result.best_weight;
    return j.dump(2) + "\n";
}

sim::GroundTruth read_truth_json(const std::string& path) {
    const json j = json::parse(read_text_file(path));
    sim::GroundTruth truth;
    if (j.contains("window")) {
        truth.window = {j["window"][0].get<double>(), j["window"][1].get<double>()};
    }
    truth.groups = j.at("groups").get<std::vector<std::vector<std::string>>>();
    return truth;
}

void write_truth_json(const std::string& path, const sim::GroundTruth& truth) {
    json j;
    j["window"] = {truth.window[0], truth.window[1]};
    j["groups"] = truth.groups;
    write_text_file(path, j.dump(2) + "\n");
}

void write_dataset(const std::string& dir, const sim::Scenario& scenario,
                   const std::vector<AudioTrace>& traces,
                   const std::vector<ScanRecord>& scans, const sim::GroundTruth& truth) {
    fs::create_directories(dir);
    for (const auto& t : traces) {
        write_wav((fs::path(dir) / (t.subject_id + ".wav")).string(), t);
    }
    write_scans_csv((fs::path(dir) / "scans.csv").string(), scans);
    write_truth_json((fs::path(dir) / "truth.json").string(), truth);
    write_text_file((fs::path(dir) / "scenario.json").string(), sim::scenario_to_json(scenario));
}

eval::Dataset load_dataset(const std::string& audio_dir, const std::string& scans_csv,
                           const std::string& truth_json) {
    eval::Dataset ds;
    ds.name = fs::path(audio_dir).filename().string();

    std::vector<std::string> wavs;
    for (const auto& entry : fs::directory_iterator(audio_dir)) {
        if (entry.path().extension() == ".wav") wavs.push_back(entry.path().string());
    }
    if (wavs.empty()) throw IoError("dataset: no .wav files in " + audio_dir);
    std::sort(wavs.begin(), wavs.end());

    std::string scans_path = scans_csv;
    if (scans_path.empty()) {
        const auto candidate = fs::path(audio_dir) / "scans.csv";
        if (fs::exists(candidate)) scans_path = candidate.string();
    }
    std::map<std::string, std::vector<ScanRecord>> scans;
    if (!scans_path.empty()) scans = read_scans_csv(scans_path);

    for (const auto& path : wavs) {
        detector::SubjectData sd;
        sd.audio = read_wav(path);
        auto it = scans.find(sd.audio.subject_id);
        if (it != scans.end()) sd.scans = it->second;
        ds.subjects.push_back(std::move(sd));
    }

    std::string truth_path = truth_json;
    if (truth_path.empty()) {
        const auto candidate = fs::path(audio_dir) / "truth.json";
        if (fs::exists(candidate)) truth_path = candidate.string();
    }
    if (!truth_path.empty()) ds.truth = read_truth_json(truth_path);
    return ds;
}

std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("hash: cannot open " + path);
    std::uint64_t h = 1469598103934665603ull;
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const auto got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
        if (!in) break;
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

void write_manifest(const std::string& path, const Config& config, std::uint64_t seed,
                    const std::map<std::string, std::string>& input_hashes) {
    json j;
    j["tool_version"] = kToolVersion;
    j["seed"] = seed;
    j["config"] = json::parse(config.to_json());
    j["input_hashes"] = input_hashes;
    const auto now = std::chrono::system_clock::now();
    j["timestamp_unix_s"] =
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    write_text_file(path, j.dump(2) + "\n");
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace meetsense::io
