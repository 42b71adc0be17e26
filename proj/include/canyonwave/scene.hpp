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
#include <string_view>
#include <vector>

#include "canyonwave/geometry.hpp"

namespace canyonwave {

/// Electrical properties of a surface. A perfect conductor ignores the other fields
/// and reflects with unit magnitude.
struct Material {
    std::string name;
    double relative_permittivity = 1.0;
    double conductivity = 0.0; // S/m
    double thickness = 0.0;    // m, kept for completeness; transmission is not modeled
    bool pec = false;
};

/// Extruded axis-aligned rectangle standing on z = 0.
struct Building {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;
    double height = 0.0;
    std::size_t material = 0; // index into Scene::materials

    [[nodiscard]] Box box() const { return {{min_x, min_y, 0.0}, {max_x, max_y, height}}; }
};

/// Blocking volume (a truck, a bus). Obstacles block rays but never reflect them.
struct Obstacle {
    Box box;
    std::size_t material = 0;
};

struct BasePlacement {
    Vec3 position;
    std::size_t array_rows = 1; // N, vertical
    std::size_t array_cols = 1; // M, horizontal
    double boresight_azimuth = 0.0; // rad, direction of the array normal
    double tx_power_dbm = 10.0;

    [[nodiscard]] std::size_t antennas() const { return array_rows * array_cols; }
};

struct VehicleGrid {
    double origin_x = 0.0;
    double origin_y = 0.0;
    std::size_t rows = 1;
    std::size_t cols = 1;
    double spacing = 5.0;
    double antenna_height = 1.5;
    std::size_t array_rows = 1;
    std::size_t array_cols = 1;

    [[nodiscard]] std::size_t size() const { return rows * cols; }
    [[nodiscard]] std::size_t antennas() const { return array_rows * array_cols; }
};

struct RfConfig {
    double carrier_hz = 28e9;
    double bandwidth_hz = 850e6;
};

/// The simulation world. Immutable after loading.
struct Scene {
    std::vector<Material> materials;
    std::vector<Building> buildings;
    std::vector<Obstacle> obstacles;
    std::vector<BasePlacement> bases;
    /// Alternative hand-placed deployment, empty when the file has none.
    std::vector<BasePlacement> smart_bases;
    VehicleGrid grid;
    std::optional<std::size_t> terrain_material;
    RfConfig rf;

    [[nodiscard]] const Material &material(std::size_t index) const { return materials.at(index); }
    [[nodiscard]] std::optional<std::size_t> find_material(std::string_view name) const;
};

/// Reads and validates a scene file. Throws ParseError or ValidationError.
[[nodiscard]] Scene load_scene(const std::filesystem::path &path);

/// Same as load_scene, from an in-memory document. `source` only labels errors.
[[nodiscard]] Scene parse_scene(std::string_view text, std::string_view source = "<memory>");

/// Canonical JSON serialization accepted by parse_scene.
[[nodiscard]] std::string scene_to_json(const Scene &scene);

/// Checks every Scene invariant, throwing ValidationError naming the offender.
void validate_scene(const Scene &scene);

/// Stable 64-bit digest of the canonical serialization, as 16 hex digits.
[[nodiscard]] std::string scene_hash(const Scene &scene);

/// Vehicle antenna positions in row-major order (row index along y, column along x).
[[nodiscard]] std::vector<Vec3> grid_positions(const Scene &scene);

/// Copy of `scene` whose active deployment is the smart (hand-placed) list.
[[nodiscard]] Scene with_smart_deployment(const Scene &scene);

/// Truck footprint used for synthetic traffic.
struct TruckShape {
    double length = 8.0;
    double width = 2.5;
    double height = 5.0;
};

/// Adds up to `count` PEC trucks at pseudorandom street positions keyed by
/// (seed, realization). Trucks avoid buildings, each other and vehicle antennas.
[[nodiscard]] Scene with_traffic(const Scene &scene, std::size_t count, std::uint64_t seed,
                                 std::uint64_t realization, const TruckShape &shape = {});

/// FNV-1a over bytes, used for provenance hashes.
[[nodiscard]] std::uint64_t fnv1a64(std::string_view bytes);
[[nodiscard]] std::string hex64(std::uint64_t value);

} // namespace canyonwave
