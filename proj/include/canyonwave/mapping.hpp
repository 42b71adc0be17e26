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
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "canyonwave/hybrid.hpp"
#include "canyonwave/phy.hpp"
#include "canyonwave/raytracer.hpp"
#include "canyonwave/scene.hpp"
#include "canyonwave/stats.hpp"

namespace canyonwave {

enum class LinkState { Los, Nlos, Dark };

/// Rays for (base index, grid point index), in absolute received power and global angles.
using RayLookup = std::function<RaySet(std::size_t base, std::size_t point)>;

[[nodiscard]] RayLookup traced_rays(const Scene &scene, TraceOptions options = {});

/// Serves externally produced rays (e.g. a ray dump); missing pairs are empty.
[[nodiscard]] RayLookup imported_rays(std::vector<RaySet> sets);

/// Channel for every (base, point) pair of a scene.
struct LinkTable {
    std::size_t bases = 0;
    std::size_t points = 0;
    ArrayGeometry bs_array;
    ArrayGeometry vehicle_array;
    std::vector<ChannelMatrix> channels; // base-major
    std::vector<LinkState> states;
    std::vector<RaySet> rays;            // as returned by the lookup

    [[nodiscard]] const ChannelMatrix &channel(std::size_t base, std::size_t point) const
    {
        return channels[base * points + point];
    }
    [[nodiscard]] LinkState state(std::size_t base, std::size_t point) const { return states[base * points + point]; }
};

/// Channel of one link: powers normalized by the BS transmit power (so that the
/// rate formulas apply P once), angles rotated into the array frames
/// (vehicle arrays face +x), then summed over rays.
[[nodiscard]] ChannelMatrix link_channel(const Scene &scene, std::size_t base, const RaySet &rays);

[[nodiscard]] LinkTable build_links(const Scene &scene, const RayLookup &lookup, unsigned threads = 1);

enum class Quantity { Rate, EnergyEfficiency };
enum class LocationFlag { Los, Nlos, Dark, Unserved };

[[nodiscard]] const char *to_string(Quantity q);
[[nodiscard]] const char *to_string(LocationFlag f);

/// Per-location results on the vehicle grid (row-major like grid_positions).
struct RateMap {
    std::size_t rows = 0;
    std::size_t cols = 0;
    Quantity quantity = Quantity::Rate;
    std::vector<Vec3> positions;
    std::vector<double> values;        // bit/s or bit/J; 0 where unserved
    std::vector<std::uint32_t> visits; // SU maps: 1 everywhere
    std::vector<LocationFlag> flags;
    std::vector<long> serving_base;    // -1 where unserved
    std::string scene_hash;
    std::string config_hash;
    std::uint64_t seed = 0;

    [[nodiscard]] std::size_t size() const { return values.size(); }
    /// Values at served locations only.
    [[nodiscard]] std::vector<double> served_values() const;
};

enum class BestBsPolicy { BestRate, Nearest };

/// Single-user TDMA map: every location gets the rate of its serving BS after an
/// exhaustive beam search with codebooks oversampled by `oversampling`.
[[nodiscard]] RateMap su_map(const Scene &scene, const LinkTable &links, std::size_t oversampling,
                             BestBsPolicy policy = BestBsPolicy::BestRate, unsigned threads = 1);

/// Convenience overload that ray traces the scene first.
[[nodiscard]] RateMap su_map(const Scene &scene, std::size_t oversampling, BestBsPolicy policy = BestBsPolicy::BestRate,
                             unsigned threads = 1);

struct MuMapOptions {
    HybridConfig hybrid;
    std::size_t realizations = 10;
    std::uint64_t seed = 1;
    std::size_t oversampling = 1;
    PowerModel power;
    Baseband baseband = Baseband::ZeroForcing;
    unsigned threads = 1;
};

struct MuMapResult {
    RateMap rate;
    RateMap energy_efficiency;
    /// Per-realization user rates / efficiencies pooled over every BS.
    std::vector<std::vector<double>> realization_rates;
    std::vector<std::vector<double>> realization_efficiency;
    std::vector<MultiuserSlot> slots; // realization-major, then base
    std::size_t singular_slots = 0;
    std::size_t skipped_cells = 0; // (realization, base) pairs with fewer than U users
};

/// Multiuser map: each realization every BS draws U distinct users of its cell
/// (points it serves best) uniformly at random, keyed by (seed, realization, base),
/// evaluates the hybrid slot and credits each user's rate to its location.
/// Location value = accumulated / visits.
[[nodiscard]] MuMapResult mu_map(const Scene &scene, const LinkTable &links, const MuMapOptions &options);

/// Bilinear raster with `factor` points inserted between neighbouring grid points.
struct Raster {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values; // row-major, NaN where no served support
};

/// Display helper; statistics must use the raw map.
[[nodiscard]] Raster interpolate_map(const RateMap &map, std::size_t factor = 8);

/// Binary PPM (P6), highest grid row at the top, linear blue-cyan-green-yellow-red
/// scale from `lo` to `hi`; NaN pixels are dark grey.
void write_heatmap_ppm(std::ostream &out, const Raster &raster, double lo, double hi, const std::string &comment);

/// `x_m,y_m,value,visits,flag` plus a leading '#' provenance comment.
void write_rate_map_csv(std::ostream &out, const RateMap &map);

/// Factorial comparison of deployments and traffic levels.
struct SceneVariant {
    std::string deployment; // e.g. "sparse" / "dense"
    std::string traffic;    // e.g. "light" / "heavy"
    std::string placement;  // e.g. "pseudorandom" / "smart"
    Scene scene;
    std::size_t trucks = 0; // blockers added per traffic realization
};

enum class MapMode { SingleUser, MultiUser };

struct CompareOptions {
    MapMode mode = MapMode::SingleUser;
    std::size_t oversampling = 1;
    MuMapOptions multiuser;
    std::size_t traffic_realizations = 1;
    std::uint64_t seed = 1;
    std::vector<double> targets = default_target_rates();
    TruckShape truck;
    unsigned threads = 1;
};

struct ComparisonCell {
    std::string deployment;
    std::string traffic;
    std::string placement;
    CoverageReport report;
};

/// Every variant is evaluated over the same traffic realizations
/// (with_traffic keyed by seed and realization index).
[[nodiscard]] std::vector<ComparisonCell> deployment_compare(const std::vector<SceneVariant> &variants,
                                                             const CompareOptions &options);

[[nodiscard]] nlohmann::json to_json(const ComparisonCell &cell);

} // namespace canyonwave
