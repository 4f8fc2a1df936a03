// Copyright 2026 The qnfauth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qnf/constellation.hpp"

namespace qnf {

inline constexpr std::string_view kToolName = "qnfauth";
inline constexpr std::string_view kToolVersion = "0.1.0";

/// Parses a config JSON document and applies defaults. `seed_override`
/// replaces (or supplies) master_seed. Throws ConfigError naming the field
/// path for unknown, missing or ill-typed fields and violated constraints.
ConstellationConfig parse_config_json(std::string_view text, std::optional<uint64_t> seed_override = {});

/// Reads `path` and forwards to parse_config_json.
ConstellationConfig parse_config(const std::filesystem::path &path, std::optional<uint64_t> seed_override = {});

/// Device JSON: {"readout": [[p01, p10], ...], "p1": x, "p2": y, "device_seed": s}.
/// Throws ConfigError on malformed or out-of-range fields.
DeviceNoiseParams parse_device_json(std::string_view text);

/// Fully resolved config, every default spelled out. parse_config_json of
/// the result reproduces the config.
std::string config_to_json(const ConstellationConfig &config);

/// "table1-analog" (4 nodes, 5 qubits, k' = 10000, k = 1000, with a
/// regenerating adversary) or "fig4-analog" (same devices, fewer trials).
/// Both score the full outcome spectrum.
ConstellationConfig preset_config(std::string_view name, uint64_t seed);
std::vector<std::string> preset_names();

struct Artifact {
    std::string path;  ///< relative, '/'-separated
    std::string content;
};

/// Everything an experiment emits except the manifest, in a fixed order.
std::vector<Artifact> render_experiment_artifacts(const ConstellationConfig &config, const ExperimentResult &result);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

/// Manifest JSON listing each artifact with its digest.
Artifact render_manifest(const ConstellationConfig &config, const std::vector<Artifact> &artifacts);

/// Writes artifacts under `dir`, creating directories as needed.
void write_artifacts(const std::filesystem::path &dir, const std::vector<Artifact> &artifacts);

/// Paths listed in dir/manifest.json that are missing or fail their digest.
std::vector<std::string> verify_manifest(const std::filesystem::path &dir);

std::string read_file(const std::filesystem::path &path);

}  // namespace qnf
