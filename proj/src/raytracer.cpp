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

#include "canyonwave/raytracer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <string>
#include <utility>

#include "canyonwave/errors.hpp"

namespace canyonwave {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

/// Vertical face of a building. `axis` is the coordinate held constant.
struct Face {
    int axis = 0;
    double coord = 0.0;
    double outward = 1.0; // +1 when the outside is at larger coordinates
    double lo = 0.0;      // extent along the other horizontal axis
    double hi = 0.0;
    double height = 0.0;
    std::size_t building = 0;
    std::size_t material = 0;

    [[nodiscard]] bool outside(const Vec3 &p) const { return outward * (p[axis] - coord) > 0.0; }

    [[nodiscard]] Vec3 mirror(const Vec3 &p) const
    {
        Vec3 m = p;
        (axis == 0 ? m.x : m.y) = 2.0 * coord - p[axis];
        return m;
    }

    /// Crossing of segment a->b with the face plane, if it lands on the face.
    [[nodiscard]] bool hit(const Vec3 &a, const Vec3 &b, Vec3 &point) const
    {
        const double da = a[axis] - coord;
        const double db = b[axis] - coord;
        if (da * db >= 0.0)
            return false;
        const double t = da / (da - db);
        point = a + (b - a) * t;
        (axis == 0 ? point.x : point.y) = coord;
        const double other = point[1 - axis];
        return other >= lo && other <= hi && point.z >= 0.0 && point.z <= height;
    }
};

std::vector<Face> collect_faces(const Scene &scene)
{
    std::vector<Face> faces;
    faces.reserve(4 * scene.buildings.size());
    for (std::size_t i = 0; i < scene.buildings.size(); ++i) {
        const Building &b = scene.buildings[i];
        faces.push_back({0, b.min_x, -1.0, b.min_y, b.max_y, b.height, i, b.material});
        faces.push_back({0, b.max_x, +1.0, b.min_y, b.max_y, b.height, i, b.material});
        faces.push_back({1, b.min_y, -1.0, b.min_x, b.max_x, b.height, i, b.material});
        faces.push_back({1, b.max_y, +1.0, b.min_x, b.max_x, b.height, i, b.material});
    }
    return faces;
}

constexpr std::size_t no_building = static_cast<std::size_t>(-1);

bool blocked(const Scene &scene, const Vec3 &a, const Vec3 &b, std::size_t skip_a, std::size_t skip_b)
{
    for (std::size_t i = 0; i < scene.buildings.size(); ++i) {
        if (i == skip_a || i == skip_b)
            continue;
        if (segment_hits_box(a, b, scene.buildings[i].box()))
            return true;
    }
    return std::any_of(scene.obstacles.begin(), scene.obstacles.end(),
                       [&](const Obstacle &o) { return segment_hits_box(a, b, o.box); });
}

void direction_angles(const Vec3 &from, const Vec3 &to, double &azimuth, double &elevation)
{
    const Vec3 d = to - from;
    const double n = d.norm();
    azimuth = std::atan2(d.y, d.x);
    elevation = std::acos(std::clamp(d.z / n, -1.0, 1.0));
}

double incidence_angle(const Vec3 &from, const Vec3 &at, const Face &face)
{
    const Vec3 d = at - from;
    const double cos_i = std::abs(d[face.axis]) / d.norm();
    return std::acos(std::clamp(cos_i, 0.0, 1.0));
}

Ray make_ray(const std::vector<Vec3> &path, std::complex<double> reflection, double tx_power_w, double lambda,
             int bounces)
{
    double length = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i)
        length += (path[i] - path[i - 1]).norm();
    Ray ray;
    const double fs = lambda / (4.0 * std::numbers::pi * length);
    ray.power_w = tx_power_w * fs * fs * std::norm(reflection);
    double phase = std::fmod(two_pi * length / lambda + (bounces > 0 ? std::arg(reflection) : 0.0), two_pi);
    if (phase < 0.0)
        phase += two_pi;
    if (phase >= two_pi)
        phase = 0.0;
    ray.phase = phase;
    ray.delay_s = length / speed_of_light;
    direction_angles(path.front(), path[1], ray.aod_azimuth, ray.aod_elevation);
    direction_angles(path.back(), path[path.size() - 2], ray.aoa_azimuth, ray.aoa_elevation);
    ray.bounces = bounces;
    return ray;
}

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        std::string_view cell = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
        while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t'))
            cell.remove_prefix(1);
        while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r'))
            cell.remove_suffix(1);
        cells.push_back(cell);
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return cells;
}

template <typename T>
T parse_cell(std::string_view cell, std::size_t line, const char *column)
{
    T value{};
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size())
        throw ParseError("ray csv line " + std::to_string(line) + ": bad value for " + column + ": '" +
                         std::string(cell) + "'");
    return value;
}

void sort_rays(std::vector<Ray> &rays)
{
    std::stable_sort(rays.begin(), rays.end(), [](const Ray &a, const Ray &b) {
        if (a.power_w != b.power_w)
            return a.power_w > b.power_w;
        if (a.delay_s != b.delay_s)
            return a.delay_s < b.delay_s;
        return a.bounces < b.bounces;
    });
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

bool RaySet::has_los() const
{
    return std::any_of(rays.begin(), rays.end(), [](const Ray &r) { return r.bounces == 0; });
}

double RaySet::total_power_w() const
{
    double sum = 0.0;
    for (const Ray &r : rays)
        sum += r.power_w;
    return sum;
}

double wrap_angle(double radians)
{
    double a = std::remainder(radians, two_pi);
    if (a < -std::numbers::pi)
        a += two_pi;
    if (a > std::numbers::pi)
        a -= two_pi;
    return a;
}

std::complex<double> fresnel_reflection(const Material &material, double incidence_angle, double carrier_hz,
                                        Polarization polarization)
{
    if (!(incidence_angle >= 0.0 && incidence_angle < std::numbers::pi / 2))
        throw ValidationError("fresnel_reflection: incidence angle must lie in [0, pi/2)");
    if (material.pec)
        return polarization == Polarization::TE ? -1.0 : 1.0;

    const std::complex<double> eps(material.relative_permittivity,
                                   -material.conductivity / (two_pi * carrier_hz * vacuum_permittivity));
    const double cos_i = std::cos(incidence_angle);
    const double sin_i = std::sin(incidence_angle);
    const std::complex<double> root = std::sqrt(eps - sin_i * sin_i);
    if (polarization == Polarization::TE)
        return (cos_i - root) / (cos_i + root);
    return (eps * cos_i - root) / (eps * cos_i + root);
}

RaySet trace(const Scene &scene, const Vec3 &tx, const Vec3 &rx, double tx_power_dbm, const TraceOptions &options)
{
    if (tx == rx)
        throw ValidationError("trace: transmitter and receiver coincide");

    const double lambda = speed_of_light / scene.rf.carrier_hz;
    const double tx_power_w = dbm_to_watt(tx_power_dbm);
    const double f_c = scene.rf.carrier_hz;
    const Polarization pol = options.polarization;

    RaySet out;
    if (!blocked(scene, tx, rx, no_building, no_building))
        out.rays.push_back(make_ray({tx, rx}, 1.0, tx_power_w, lambda, 0));

    if (options.max_bounces >= 1) {
        const auto faces = collect_faces(scene);

        for (const Face &face : faces) {
            if (!face.outside(tx) || !face.outside(rx))
                continue;
            Vec3 p;
            if (!face.hit(face.mirror(tx), rx, p))
                continue;
            if (blocked(scene, tx, p, face.building, no_building) || blocked(scene, p, rx, face.building, no_building))
                continue;
            const auto gamma =
                fresnel_reflection(scene.material(face.material), incidence_angle(tx, p, face), f_c, pol);
            out.rays.push_back(make_ray({tx, p, rx}, gamma, tx_power_w, lambda, 1));
        }

        if (options.max_bounces >= 2) {
            for (std::size_t i = 0; i < faces.size(); ++i) {
                const Face &f1 = faces[i];
                if (!f1.outside(tx))
                    continue;
                const Vec3 image1 = f1.mirror(tx);
                for (std::size_t j = 0; j < faces.size(); ++j) {
                    if (i == j)
                        continue;
                    const Face &f2 = faces[j];
                    if (!f2.outside(rx))
                        continue;
                    const Vec3 image2 = f2.mirror(image1);
                    Vec3 p2;
                    if (!f2.hit(image2, rx, p2))
                        continue;
                    Vec3 p1;
                    if (!f1.hit(image1, p2, p1))
                        continue;
                    if (!f1.outside(p2) || !f2.outside(p1))
                        continue;
                    if (blocked(scene, tx, p1, f1.building, no_building) ||
                        blocked(scene, p1, p2, f1.building, f2.building) ||
                        blocked(scene, p2, rx, f2.building, no_building))
                        continue;
                    const auto g1 =
                        fresnel_reflection(scene.material(f1.material), incidence_angle(tx, p1, f1), f_c, pol);
                    const auto g2 =
                        fresnel_reflection(scene.material(f2.material), incidence_angle(p1, p2, f2), f_c, pol);
                    out.rays.push_back(make_ray({tx, p1, p2, rx}, g1 * g2, tx_power_w, lambda, 2));
                }
            }
        }
    }
    sort_rays(out.rays);
    return out;
}

RaySet trace_link(const Scene &scene, std::size_t base, std::size_t point, const TraceOptions &options)
{
    const BasePlacement &bs = scene.bases.at(base);
    const auto points = grid_positions(scene);
    RaySet rays = trace(scene, bs.position, points.at(point), bs.tx_power_dbm, options);
    rays.tx_index = base;
    rays.rx_index = point;
    return rays;
}

RaySet to_array_frame(const RaySet &rays, double tx_boresight, double rx_boresight)
{
    RaySet out = rays;
    for (Ray &r : out.rays) {
        r.aod_azimuth = wrap_angle(r.aod_azimuth - tx_boresight);
        r.aoa_azimuth = wrap_angle(r.aoa_azimuth - rx_boresight);
    }
    return out;
}

RaySet to_path_gains(const RaySet &rays, double tx_power_dbm)
{
    RaySet out = rays;
    const double p = dbm_to_watt(tx_power_dbm);
    for (Ray &r : out.rays)
        r.power_w /= p;
    return out;
}

void write_rays_csv(std::ostream &out, std::span<const RaySet> sets, std::string_view comment)
{
    if (!comment.empty())
        out << "# " << comment << '\n';
    out << "tx_index,rx_index,power_dbm,phase_rad,delay_s,aod_az,aod_el,aoa_az,aoa_el,bounces\n";
    for (const RaySet &set : sets) {
        for (const Ray &r : set.rays) {
            out << set.tx_index << ',' << set.rx_index << ',' << format_double(watt_to_dbm(r.power_w)) << ','
                << format_double(r.phase) << ',' << format_double(r.delay_s) << ',' << format_double(r.aod_azimuth)
                << ',' << format_double(r.aod_elevation) << ',' << format_double(r.aoa_azimuth) << ','
                << format_double(r.aoa_elevation) << ',' << r.bounces << '\n';
        }
    }
}

std::vector<RaySet> read_rays_csv(std::istream &in)
{
    static constexpr const char *columns[] = {"tx_index", "rx_index", "power_dbm", "phase_rad", "delay_s",
                                              "aod_az",   "aod_el",   "aoa_az",    "aoa_el",    "bounces"};
    std::map<std::pair<std::size_t, std::size_t>, RaySet> groups;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (!view.empty() && view.back() == '\r')
            view.remove_suffix(1);
        if (view.empty() || view.front() == '#')
            continue;
        const auto cells = split(view);
        if (!header_seen) {
            header_seen = true;
            bool ok = cells.size() == std::size(columns);
            for (std::size_t i = 0; ok && i < cells.size(); ++i)
                ok = cells[i] == columns[i];
            if (!ok)
                throw ParseError("ray csv line " + std::to_string(line_no) + ": unexpected header");
            continue;
        }
        if (cells.size() != std::size(columns))
            throw ParseError("ray csv line " + std::to_string(line_no) + ": expected " +
                             std::to_string(std::size(columns)) + " fields, got " + std::to_string(cells.size()));
        const auto tx = parse_cell<std::size_t>(cells[0], line_no, columns[0]);
        const auto rx = parse_cell<std::size_t>(cells[1], line_no, columns[1]);
        Ray r;
        const double dbm = parse_cell<double>(cells[2], line_no, columns[2]);
        r.power_w = std::isinf(dbm) && dbm < 0 ? 0.0 : dbm_to_watt(dbm);
        r.phase = parse_cell<double>(cells[3], line_no, columns[3]);
        r.delay_s = parse_cell<double>(cells[4], line_no, columns[4]);
        r.aod_azimuth = parse_cell<double>(cells[5], line_no, columns[5]);
        r.aod_elevation = parse_cell<double>(cells[6], line_no, columns[6]);
        r.aoa_azimuth = parse_cell<double>(cells[7], line_no, columns[7]);
        r.aoa_elevation = parse_cell<double>(cells[8], line_no, columns[8]);
        r.bounces = parse_cell<int>(cells[9], line_no, columns[9]);
        if (r.delay_s < 0.0 || r.aod_elevation < 0.0 || r.aod_elevation > std::numbers::pi ||
            r.aoa_elevation < 0.0 || r.aoa_elevation > std::numbers::pi)
            throw ParseError("ray csv line " + std::to_string(line_no) + ": value out of range");
        auto &set = groups[{tx, rx}];
        set.tx_index = tx;
        set.rx_index = rx;
        set.rays.push_back(r);
    }
    if (!header_seen)
        throw ParseError("ray csv: missing header");
    std::vector<RaySet> out;
    out.reserve(groups.size());
    for (auto &[key, set] : groups) {
        sort_rays(set.rays);
        out.push_back(std::move(set));
    }
    return out;
}

} // namespace canyonwave
