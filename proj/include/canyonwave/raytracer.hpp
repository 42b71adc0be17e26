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

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "canyonwave/geometry.hpp"
#include "canyonwave/scene.hpp"
#include "canyonwave/units.hpp"

namespace canyonwave {

inline constexpr double speed_of_light = 299792458.0;  // m/s
inline constexpr double vacuum_permittivity = 8.8541878128e-12; // F/m

enum class Polarization { TE, TM };

/// One propagation path. Angles are in the global frame: azimuth from +x
/// towards +y in [-pi, pi], elevation measured from +z in [0, pi]. The
/// departure direction points from the transmitter to its first interaction,
/// the arrival direction from the receiver back to its last one.
struct Ray {
    double power_w = 0.0; // received power including the transmit power
    double phase = 0.0;   // rad, [0, 2 pi)
    double delay_s = 0.0;
    double aod_azimuth = 0.0;
    double aod_elevation = 0.0;
    double aoa_azimuth = 0.0;
    double aoa_elevation = 0.0;
    int bounces = 0;
};

/// Paths for one (tx, rx) pair, strongest first. May be empty.
struct RaySet {
    std::vector<Ray> rays;
    std::size_t tx_index = 0;
    std::size_t rx_index = 0;

    [[nodiscard]] bool has_los() const;
    [[nodiscard]] double total_power_w() const;
};

struct TraceOptions {
    int max_bounces = 2; // 0, 1 or 2
    Polarization polarization = Polarization::TE;
};

/// Fresnel reflection coefficient of a half-space of `material` for a wave
/// arriving at `incidence_angle` from the surface normal (0 <= angle < pi/2).
[[nodiscard]] std::complex<double> fresnel_reflection(const Material &material, double incidence_angle,
                                                      double carrier_hz, Polarization polarization);

/// Traces LOS plus single and double specular reflections off vertical building
/// faces (image-source method). Obstacles only block. Paths touching a solid
/// count as blocked.
[[nodiscard]] RaySet trace(const Scene &scene, const Vec3 &tx, const Vec3 &rx, double tx_power_dbm,
                           const TraceOptions &options = {});

/// Traces between scene.bases[base] and grid point `point`, tagging the indices.
[[nodiscard]] RaySet trace_link(const Scene &scene, std::size_t base, std::size_t point,
                                const TraceOptions &options = {});

/// Rotates azimuths into the local frames of the two arrays, whose normals point
/// along the given boresight azimuths.
[[nodiscard]] RaySet to_array_frame(const RaySet &rays, double tx_boresight, double rx_boresight);

/// Divides every ray power by the transmit power, leaving pure path gains.
[[nodiscard]] RaySet to_path_gains(const RaySet &rays, double tx_power_dbm);

/// Ray dump: header `tx_index,rx_index,power_dbm,phase_rad,delay_s,aod_az,aod_el,aoa_az,aoa_el,bounces`,
/// one row per ray. Lines starting with '#' are comments.
void write_rays_csv(std::ostream &out, std::span<const RaySet> sets, std::string_view comment = {});

/// Inverse of write_rays_csv. Rows are grouped by (tx_index, rx_index) in
/// ascending order; each group is re-sorted strongest first.
[[nodiscard]] std::vector<RaySet> read_rays_csv(std::istream &in);

/// Wraps into [-pi, pi].
[[nodiscard]] double wrap_angle(double radians);

} // namespace canyonwave
