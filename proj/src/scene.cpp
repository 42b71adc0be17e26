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

#include "canyonwave/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "canyonwave/errors.hpp"
#include "canyonwave/random.hpp"

namespace canyonwave {

using nlohmann::json;

namespace {

std::string line_context(std::string_view text, std::size_t byte)
{
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

class Reader {
public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string &where, const std::string &what) const
    {
        throw ParseError(source_ + ": " + where + ": " + what);
    }

    void only_keys(const json &object, const std::string &where, std::initializer_list<const char *> allowed) const
    {
        if (!object.is_object())
            fail(where, "expected an object");
        for (const auto &[key, value] : object.items()) {
            const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char *k) { return key == k; });
            if (!known)
                fail(where + "." + key, "unknown key");
        }
    }

    const json &require(const json &object, const std::string &where, const char *key) const
    {
        auto it = object.find(key);
        if (it == object.end())
            fail(where + "." + key, "missing required key");
        return *it;
    }

    double number(const json &object, const std::string &where, const char *key) const
    {
        const json &v = require(object, where, key);
        if (!v.is_number())
            fail(where + "." + key, "expected a number");
        return v.get<double>();
    }

    double number_or(const json &object, const std::string &where, const char *key, double fallback) const
    {
        if (!object.contains(key))
            return fallback;
        return number(object, where, key);
    }

    std::size_t count(const json &object, const std::string &where, const char *key) const
    {
        const json &v = require(object, where, key);
        if (!v.is_number_integer() || v.get<long long>() < 0)
            fail(where + "." + key, "expected a non-negative integer");
        return v.get<std::size_t>();
    }

    std::string text(const json &object, const std::string &where, const char *key) const
    {
        const json &v = require(object, where, key);
        if (!v.is_string())
            fail(where + "." + key, "expected a string");
        return v.get<std::string>();
    }

    std::vector<double> vec(const json &object, const std::string &where, const char *key, std::size_t n) const
    {
        const json &v = require(object, where, key);
        if (!v.is_array() || v.size() != n)
            fail(where + "." + key, "expected an array of " + std::to_string(n) + " numbers");
        std::vector<double> out;
        for (const auto &e : v) {
            if (!e.is_number())
                fail(where + "." + key, "expected an array of " + std::to_string(n) + " numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    const json &array(const json &object, const std::string &where, const char *key, bool required) const
    {
        static const json empty = json::array();
        auto it = object.find(key);
        if (it == object.end()) {
            if (required)
                fail(where + "." + key, "missing required key");
            return empty;
        }
        if (!it->is_array())
            fail(where + "." + key, "expected an array");
        return *it;
    }

private:
    std::string source_;
};

std::size_t material_ref(const Scene &scene, const Reader &r, const json &object, const std::string &where)
{
    const std::string name = r.text(object, where, "material");
    auto index = scene.find_material(name);
    if (!index)
        r.fail(where + ".material", "unknown material '" + name + "'");
    return *index;
}

BasePlacement parse_base(const Reader &r, const json &b, const std::string &where)
{
    r.only_keys(b, where, {"position", "array_rows", "array_cols", "boresight_azimuth", "tx_power_dbm"});
    BasePlacement base;
    const auto p = r.vec(b, where, "position", 3);
    base.position = {p[0], p[1], p[2]};
    base.array_rows = r.count(b, where, "array_rows");
    base.array_cols = r.count(b, where, "array_cols");
    base.boresight_azimuth = r.number_or(b, where, "boresight_azimuth", 0.0);
    base.tx_power_dbm = r.number_or(b, where, "tx_power_dbm", 10.0);
    return base;
}

json base_to_json(const BasePlacement &b)
{
    return {{"position", {b.position.x, b.position.y, b.position.z}},
            {"array_rows", b.array_rows},
            {"array_cols", b.array_cols},
            {"boresight_azimuth", b.boresight_azimuth},
            {"tx_power_dbm", b.tx_power_dbm}};
}

void validate_base(const Scene &scene, const BasePlacement &b, const std::string &where)
{
    if (b.array_rows < 1 || b.array_cols < 1)
        throw ValidationError(where + ": array_rows and array_cols must be >= 1");
    for (std::size_t i = 0; i < scene.buildings.size(); ++i) {
        if (scene.buildings[i].box().strictly_contains(b.position))
            throw ValidationError(where + ": position lies inside buildings[" + std::to_string(i) + "]");
    }
}

} // namespace

std::optional<std::size_t> Scene::find_material(std::string_view name) const
{
    for (std::size_t i = 0; i < materials.size(); ++i) {
        if (materials[i].name == name)
            return i;
    }
    return std::nullopt;
}

void validate_scene(const Scene &scene)
{
    std::set<std::string> names;
    for (std::size_t i = 0; i < scene.materials.size(); ++i) {
        const Material &m = scene.materials[i];
        const std::string where = "materials[" + std::to_string(i) + "] '" + m.name + "'";
        if (!names.insert(m.name).second)
            throw ValidationError(where + ": duplicate material name");
        if (!m.pec && !(m.relative_permittivity >= 1.0))
            throw ValidationError(where + ": permittivity must be >= 1 unless pec is set");
        if (!(m.conductivity >= 0.0))
            throw ValidationError(where + ": conductivity must be >= 0");
        if (!(m.thickness >= 0.0))
            throw ValidationError(where + ": thickness must be >= 0");
    }
    const auto check_material = [&](std::size_t index, const std::string &where) {
        if (index >= scene.materials.size())
            throw ValidationError(where + ": material index out of range");
    };
    for (std::size_t i = 0; i < scene.buildings.size(); ++i) {
        const Building &b = scene.buildings[i];
        const std::string where = "buildings[" + std::to_string(i) + "]";
        if (!(b.max_x > b.min_x) || !(b.max_y > b.min_y))
            throw ValidationError(where + ": footprint must have positive area");
        if (!(b.height > 0.0))
            throw ValidationError(where + ": height must be > 0");
        check_material(b.material, where);
    }
    for (std::size_t i = 0; i < scene.obstacles.size(); ++i) {
        const Obstacle &o = scene.obstacles[i];
        const std::string where = "obstacles[" + std::to_string(i) + "]";
        if (!(o.box.hi.x > o.box.lo.x) || !(o.box.hi.y > o.box.lo.y) || !(o.box.hi.z > o.box.lo.z))
            throw ValidationError(where + ": box must have positive volume");
        check_material(o.material, where);
    }
    if (scene.terrain_material)
        check_material(*scene.terrain_material, "terrain");

    if (scene.bases.empty())
        throw ValidationError("bases: at least one base station is required");
    const std::size_t n_t = scene.bases.front().antennas();
    const auto check_bases = [&](const std::vector<BasePlacement> &list, const char *label) {
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string where = std::string(label) + "[" + std::to_string(i) + "]";
            validate_base(scene, list[i], where);
            if (list[i].antennas() != n_t)
                throw ValidationError(where + ": every base station must have the same antenna count (" +
                                      std::to_string(n_t) + ")");
        }
    };
    check_bases(scene.bases, "bases");
    check_bases(scene.smart_bases, "smart_bases");

    const VehicleGrid &g = scene.grid;
    if (!(g.spacing > 0.0))
        throw ValidationError("grid.spacing: must be > 0");
    if (g.rows * g.cols < 1)
        throw ValidationError("grid: rows * cols must be >= 1");
    if (g.array_rows < 1 || g.array_cols < 1)
        throw ValidationError("grid: array_rows and array_cols must be >= 1");
    if (!(g.antenna_height >= 0.0))
        throw ValidationError("grid.antenna_height: must be >= 0");

    if (!(scene.rf.carrier_hz > 0.0))
        throw ValidationError("rf.carrier_hz: must be > 0");
    if (!(scene.rf.bandwidth_hz > 0.0))
        throw ValidationError("rf.bandwidth_hz: must be > 0");

    const auto points = grid_positions(scene);
    for (std::size_t k = 0; k < points.size(); ++k) {
        for (std::size_t i = 0; i < scene.buildings.size(); ++i) {
            const Building &b = scene.buildings[i];
            const Vec3 &p = points[k];
            if (p.x > b.min_x && p.x < b.max_x && p.y > b.min_y && p.y < b.max_y)
                throw ValidationError("grid: point " + std::to_string(k) + " lies inside buildings[" +
                                      std::to_string(i) + "]");
        }
    }
}

Scene parse_scene(std::string_view text, std::string_view source)
{
    const Reader r{std::string(source)};
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        throw ParseError(std::string(source) + ": " + line_context(text, e.byte) + ": " + e.what());
    }
    r.only_keys(doc, "scene", {"materials", "buildings", "obstacles", "bases", "smart_bases", "grid", "rf", "terrain"});

    Scene scene;
    const json &materials = r.array(doc, "scene", "materials", true);
    for (std::size_t i = 0; i < materials.size(); ++i) {
        const json &m = materials[i];
        const std::string where = "materials[" + std::to_string(i) + "]";
        r.only_keys(m, where, {"name", "permittivity", "conductivity", "thickness", "pec"});
        Material mat;
        mat.name = r.text(m, where, "name");
        if (m.contains("pec")) {
            if (!m["pec"].is_boolean())
                r.fail(where + ".pec", "expected a boolean");
            mat.pec = m["pec"].get<bool>();
        }
        mat.relative_permittivity = mat.pec ? r.number_or(m, where, "permittivity", 1.0) : r.number(m, where, "permittivity");
        mat.conductivity = r.number_or(m, where, "conductivity", 0.0);
        mat.thickness = r.number_or(m, where, "thickness", 0.0);
        scene.materials.push_back(std::move(mat));
    }

    const json &buildings = r.array(doc, "scene", "buildings", true);
    for (std::size_t i = 0; i < buildings.size(); ++i) {
        const json &b = buildings[i];
        const std::string where = "buildings[" + std::to_string(i) + "]";
        r.only_keys(b, where, {"min", "max", "height", "material"});
        Building bld;
        const auto lo = r.vec(b, where, "min", 2);
        const auto hi = r.vec(b, where, "max", 2);
        bld.min_x = lo[0];
        bld.min_y = lo[1];
        bld.max_x = hi[0];
        bld.max_y = hi[1];
        bld.height = r.number(b, where, "height");
        bld.material = material_ref(scene, r, b, where);
        scene.buildings.push_back(bld);
    }

    const json &obstacles = r.array(doc, "scene", "obstacles", false);
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
        const json &o = obstacles[i];
        const std::string where = "obstacles[" + std::to_string(i) + "]";
        r.only_keys(o, where, {"min", "max", "material"});
        const auto lo = r.vec(o, where, "min", 3);
        const auto hi = r.vec(o, where, "max", 3);
        scene.obstacles.push_back({{{lo[0], lo[1], lo[2]}, {hi[0], hi[1], hi[2]}}, material_ref(scene, r, o, where)});
    }

    const json &bases = r.array(doc, "scene", "bases", true);
    for (std::size_t i = 0; i < bases.size(); ++i)
        scene.bases.push_back(parse_base(r, bases[i], "bases[" + std::to_string(i) + "]"));
    const json &smart = r.array(doc, "scene", "smart_bases", false);
    for (std::size_t i = 0; i < smart.size(); ++i)
        scene.smart_bases.push_back(parse_base(r, smart[i], "smart_bases[" + std::to_string(i) + "]"));

    const json &grid = r.require(doc, "scene", "grid");
    r.only_keys(grid, "grid", {"origin", "rows", "cols", "spacing", "antenna_height", "array_rows", "array_cols"});
    const auto origin = r.vec(grid, "grid", "origin", 2);
    scene.grid.origin_x = origin[0];
    scene.grid.origin_y = origin[1];
    scene.grid.rows = r.count(grid, "grid", "rows");
    scene.grid.cols = r.count(grid, "grid", "cols");
    scene.grid.spacing = r.number(grid, "grid", "spacing");
    scene.grid.antenna_height = r.number_or(grid, "grid", "antenna_height", 1.5);
    scene.grid.array_rows = r.count(grid, "grid", "array_rows");
    scene.grid.array_cols = r.count(grid, "grid", "array_cols");

    const json &rf = r.require(doc, "scene", "rf");
    r.only_keys(rf, "rf", {"carrier_hz", "bandwidth_hz"});
    scene.rf.carrier_hz = r.number(rf, "rf", "carrier_hz");
    scene.rf.bandwidth_hz = r.number(rf, "rf", "bandwidth_hz");

    if (doc.contains("terrain")) {
        const std::string name = r.text(doc, "scene", "terrain");
        scene.terrain_material = scene.find_material(name);
        if (!scene.terrain_material)
            r.fail("scene.terrain", "unknown material '" + name + "'");
    }

    validate_scene(scene);
    return scene;
}

Scene load_scene(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError(path.string() + ": cannot open file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scene(buffer.str(), path.string());
}

std::string scene_to_json(const Scene &scene)
{
    json doc;
    doc["materials"] = json::array();
    for (const auto &m : scene.materials) {
        json j = {{"name", m.name},
                  {"permittivity", m.relative_permittivity},
                  {"conductivity", m.conductivity},
                  {"thickness", m.thickness}};
        if (m.pec)
            j["pec"] = true;
        doc["materials"].push_back(j);
    }
    doc["buildings"] = json::array();
    for (const auto &b : scene.buildings) {
        doc["buildings"].push_back({{"min", {b.min_x, b.min_y}},
                                    {"max", {b.max_x, b.max_y}},
                                    {"height", b.height},
                                    {"material", scene.materials.at(b.material).name}});
    }
    doc["obstacles"] = json::array();
    for (const auto &o : scene.obstacles) {
        doc["obstacles"].push_back({{"min", {o.box.lo.x, o.box.lo.y, o.box.lo.z}},
                                    {"max", {o.box.hi.x, o.box.hi.y, o.box.hi.z}},
                                    {"material", scene.materials.at(o.material).name}});
    }
    doc["bases"] = json::array();
    for (const auto &b : scene.bases)
        doc["bases"].push_back(base_to_json(b));
    if (!scene.smart_bases.empty()) {
        doc["smart_bases"] = json::array();
        for (const auto &b : scene.smart_bases)
            doc["smart_bases"].push_back(base_to_json(b));
    }
    const VehicleGrid &g = scene.grid;
    doc["grid"] = {{"origin", {g.origin_x, g.origin_y}},
                   {"rows", g.rows},
                   {"cols", g.cols},
                   {"spacing", g.spacing},
                   {"antenna_height", g.antenna_height},
                   {"array_rows", g.array_rows},
                   {"array_cols", g.array_cols}};
    doc["rf"] = {{"carrier_hz", scene.rf.carrier_hz}, {"bandwidth_hz", scene.rf.bandwidth_hz}};
    if (scene.terrain_material)
        doc["terrain"] = scene.materials.at(*scene.terrain_material).name;
    return doc.dump(2);
}

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t value)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xf];
        value >>= 4;
    }
    return out;
}

std::string scene_hash(const Scene &scene) { return hex64(fnv1a64(scene_to_json(scene))); }

std::vector<Vec3> grid_positions(const Scene &scene)
{
    const VehicleGrid &g = scene.grid;
    std::vector<Vec3> points;
    points.reserve(g.size());
    for (std::size_t r = 0; r < g.rows; ++r) {
        for (std::size_t c = 0; c < g.cols; ++c) {
            points.push_back({g.origin_x + static_cast<double>(c) * g.spacing,
                              g.origin_y + static_cast<double>(r) * g.spacing, g.antenna_height});
        }
    }
    return points;
}

Scene with_smart_deployment(const Scene &scene)
{
    if (scene.smart_bases.empty())
        throw ValidationError("smart_bases: scene has no smart deployment");
    Scene out = scene;
    out.bases = scene.smart_bases;
    return out;
}

Scene with_traffic(const Scene &scene, std::size_t count, std::uint64_t seed, std::uint64_t realization,
                   const TruckShape &shape)
{
    Scene out = scene;
    if (count == 0)
        return out;

    std::size_t metal = 0;
    if (auto found = out.find_material("metal"); found && out.materials[*found].pec) {
        metal = *found;
    } else {
        Material m;
        m.name = "metal";
        m.pec = true;
        // avoid clobbering a user material that happens to be called "metal"
        while (out.find_material(m.name))
            m.name += "_";
        out.materials.push_back(m);
        metal = out.materials.size() - 1;
    }

    const auto points = grid_positions(scene);
    const VehicleGrid &g = scene.grid;
    const double x0 = g.origin_x - 0.5 * g.spacing;
    const double y0 = g.origin_y - 0.5 * g.spacing;
    const double span_x = static_cast<double>(g.cols) * g.spacing;
    const double span_y = static_cast<double>(g.rows) * g.spacing;

    KeyedStream rng(seed, {0x747261666669ull, realization});
    constexpr int max_attempts = 200;
    std::size_t placed = 0;
    for (int attempt = 0; attempt < max_attempts * static_cast<int>(count) && placed < count; ++attempt) {
        const bool along_x = span_x >= span_y;
        const double len_x = along_x ? shape.length : shape.width;
        const double len_y = along_x ? shape.width : shape.length;
        const double cx = x0 + rng.uniform() * span_x;
        const double cy = y0 + rng.uniform() * span_y;
        const Box box{{cx - 0.5 * len_x, cy - 0.5 * len_y, 0.0}, {cx + 0.5 * len_x, cy + 0.5 * len_y, shape.height}};

        const auto overlaps = [&](const Box &o) {
            return box.lo.x <= o.hi.x && box.hi.x >= o.lo.x && box.lo.y <= o.hi.y && box.hi.y >= o.lo.y;
        };
        bool ok = std::none_of(points.begin(), points.end(), [&](const Vec3 &p) {
            return p.x >= box.lo.x && p.x <= box.hi.x && p.y >= box.lo.y && p.y <= box.hi.y;
        });
        ok = ok && std::none_of(out.buildings.begin(), out.buildings.end(),
                                [&](const Building &b) { return overlaps(b.box()); });
        ok = ok && std::none_of(out.obstacles.begin(), out.obstacles.end(),
                                [&](const Obstacle &o) { return overlaps(o.box); });
        ok = ok && std::none_of(out.bases.begin(), out.bases.end(), [&](const BasePlacement &b) {
                 return b.position.x >= box.lo.x && b.position.x <= box.hi.x && b.position.y >= box.lo.y &&
                        b.position.y <= box.hi.y;
             });
        if (!ok)
            continue;
        out.obstacles.push_back({box, metal});
        ++placed;
    }
    return out;
}

} // namespace canyonwave
