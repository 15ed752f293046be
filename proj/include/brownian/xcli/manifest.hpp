#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "brownian/xcli/config.hpp"
#include "brownian/xcli/csv.hpp"

namespace brownian::xcli {

inline constexpr const char* kArtifactVersion = "0.1.0";

struct RunManifest {
    std::string experiment;
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    std::string version = kArtifactVersion;
    double wall_time_s = 0.0;
    int threads = 1;
    std::string config_text;
    std::vector<std::string> outputs;
};

inline std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline nlohmann::ordered_json to_json(const RunManifest& m, const ExperimentConfig& config) {
    nlohmann::ordered_json j;
    j["experiment"] = m.experiment;
    j["config_hash"] = hex64(m.config_hash);
    j["seed"] = m.seed;
    j["version"] = m.version;
    j["wall_time_s"] = m.wall_time_s;
    j["threads"] = m.threads;
    nlohmann::ordered_json cfg;
    for (const auto& f : config.schema()) cfg[f.name] = format_value(config.values().at(f.name));
    j["config"] = cfg;
    j["config_text"] = m.config_text;
    j["outputs"] = m.outputs;
    return j;
}

inline void write_manifest(const std::string& path, const RunManifest& m, const ExperimentConfig& config) {
    write_file(path, to_json(m, config).dump(2) + "\n");
}

}  // namespace brownian::xcli
