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

#include <algorithm>
#include <cmath>
#include <utility>

namespace canyonwave {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 operator+(const Vec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr bool operator==(const Vec3 &) const = default;

    [[nodiscard]] constexpr double dot(const Vec3 &o) const { return x * o.x + y * o.y + z * o.z; }
    [[nodiscard]] double norm() const { return std::sqrt(dot(*this)); }
    [[nodiscard]] constexpr double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
};

/// Closed axis-aligned box.
struct Box {
    Vec3 lo;
    Vec3 hi;

    [[nodiscard]] constexpr bool contains(const Vec3 &p) const
    {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z && p.z <= hi.z;
    }
    [[nodiscard]] constexpr bool strictly_contains(const Vec3 &p) const
    {
        return p.x > lo.x && p.x < hi.x && p.y > lo.y && p.y < hi.y && p.z > lo.z && p.z < hi.z;
    }
    constexpr bool operator==(const Box &) const = default;
};

/// Exact slab test of the closed segment [a, b] against a closed box. Touching
/// a face, edge or corner counts as a hit.
[[nodiscard]] inline bool segment_hits_box(const Vec3 &a, const Vec3 &b, const Box &box)
{
    double t_enter = 0.0;
    double t_exit = 1.0;
    const Vec3 d = b - a;
    for (int axis = 0; axis < 3; ++axis) {
        const double origin = a[axis];
        const double delta = d[axis];
        const double lo = box.lo[axis];
        const double hi = box.hi[axis];
        if (delta == 0.0) {
            if (origin < lo || origin > hi)
                return false;
            continue;
        }
        double t0 = (lo - origin) / delta;
        double t1 = (hi - origin) / delta;
        if (t0 > t1)
            std::swap(t0, t1);
        t_enter = std::max(t_enter, t0);
        t_exit = std::min(t_exit, t1);
        if (t_enter > t_exit)
            return false;
    }
    return true;
}

} // namespace canyonwave
