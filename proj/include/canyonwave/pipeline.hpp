// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The canyonwave Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "canyonwave/hybrid.hpp"
#include "canyonwave/mapping.hpp"

namespace canyonwave {

enum class RunMode { SingleUser, MultiUser };

/// Everything a run depends on. Thread count and output locations never
/// influence results and are left out of the config hash.
struct RunConfig {
    std::filesystem::path scene_path;
    RunMode mode = RunMode::SingleUser;
    std::size_t oversampling = 1;
    std::optional<unsigned> feedback_bits; // empty = perfect CSIT
    Structure structure = Structure::FullyConnected;
    std::optional<std::size_t> users;      // required for multiuser runs
    std::size_t subarray_size = 0;
    std::size_t realizations = 10;
    std::uint64_t seed = 1;
    Baseband baseband = Baseband::ZeroForcing;
    bool smart_deployment = false;
    std::vector<double> targets = default_target_rates();
    bool throughput_scaling = false;
    std::filesystem::path out_dir = "out";
    unsigned threads = 1;
    std::optional<std::filesystem::path> ray_dump;
    std::optional<std::filesystem::path> ray_import;

    /// Throws UsageError on inconsistent fields.
    void validate() const;
};

/// Canonical JSON of the result-relevant fields plus the scene hash.
[[nodiscard]] nlohmann::json config_json(const RunConfig &config, const std::string &scene_hash);
[[nodiscard]] std::string config_hash(const RunConfig &config, const std::string &scene_hash);

struct RunSummary {
    std::string config_hash;
    std::string scene_hash;
    std::vector<std::filesystem::path> artifacts;
    CoverageReport coverage;
};

/// Loads the scene, builds every link, assembles the map(s) and writes into
/// out_dir: rate_map.csv, heatmap.ppm, heatmap.txt, coverage.json,
/// manifest.json and, for multiuser runs, ee_map.csv / ee_heatmap.ppm / ee_heatmap.txt.
RunSummary run(const RunConfig &config);

/// One side of a comparison.
struct CompareSide {
    std::filesystem::path scene_path;
    bool smart_deployment = false;
    std::size_t trucks = 0;
    std::string label;
};

struct CompareConfig {
    CompareSide a;
    CompareSide b;
    RunMode mode = RunMode::SingleUser;
    std::size_t oversampling = 1;
    std::optional<unsigned> feedback_bits;
    Structure structure = Structure::FullyConnected;
    std::optional<std::size_t> users;
    std::size_t realizations = 10;
    std::size_t traffic_realizations = 1;
    std::uint64_t seed = 1;
    std::vector<double> targets = default_target_rates();
    unsigned threads = 1;

    void validate() const;
};

/// Runs deployment_compare on both sides and returns
/// {"a": cell, "b": cell, "delta": b - a, "config_hash": ...}.
/// Throws GridMismatchError unless both scenes share the same vehicle grid.
[[nodiscard]] nlohmann::json compare(const CompareConfig &config);

/// {"error": {"kind": ..., "message": ...}}
[[nodiscard]] nlohmann::json error_json(const std::string &kind, const std::string &message);

} // namespace canyonwave
