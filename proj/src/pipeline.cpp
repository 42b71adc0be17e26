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

#include "canyonwave/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "canyonwave/errors.hpp"
#include "canyonwave/raytracer.hpp"

namespace canyonwave {

namespace {

constexpr const char *tool_version = "1.0.0";

const char *to_string(RunMode m) { return m == RunMode::SingleUser ? "su" : "mu"; }
const char *to_string(Structure s) { return s == Structure::FullyConnected ? "fc" : "pc"; }
const char *to_string(Baseband b) { return b == Baseband::ZeroForcing ? "zf" : "identity"; }

void check_targets(const std::vector<double> &targets)
{
    if (targets.empty())
        throw UsageError("at least one target rate is required");
    for (double t : targets) {
        if (!std::isfinite(t) || t < 0.0)
            throw UsageError("target rates must be finite and non-negative");
    }
}

std::ofstream open_output(const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot write " + path.string());
    return out;
}

void write_text(const std::filesystem::path &path, const std::string &text)
{
    auto out = open_output(path);
    out << text;
    if (!out)
        throw Error("failed writing " + path.string());
}

Scene load_variant(const std::filesystem::path &path, bool smart)
{
    Scene scene = load_scene(path);
    return smart ? with_smart_deployment(scene) : scene;
}

HybridConfig hybrid_config(Structure structure, std::size_t users, std::optional<unsigned> bits,
                           std::size_t subarray)
{
    HybridConfig cfg;
    cfg.structure = structure;
    cfg.users = users;
    cfg.feedback_bits = bits;
    cfg.subarray_size = subarray;
    return cfg;
}

std::pair<double, double> value_range(const RateMap &map)
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : map.served_values()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lo > hi)
        return {0.0, 0.0};
    return {lo, hi};
}

/// Writes <stem>.csv, <stem_heatmap>.ppm and the .txt sidecar with the scale.
void write_map_artifacts(const std::filesystem::path &dir, const std::string &csv_name,
                         const std::string &heatmap_stem, const RateMap &map, std::vector<std::filesystem::path> &out)
{
    {
        auto csv = open_output(dir / csv_name);
        write_rate_map_csv(csv, map);
    }
    out.push_back(csv_name);

    const auto [lo, hi] = value_range(map);
    const std::string units = map.quantity == Quantity::Rate ? "bit/s" : "bit/J";
    {
        auto ppm = open_output(dir / (heatmap_stem + ".ppm"));
        write_heatmap_ppm(ppm, interpolate_map(map, 8), lo, hi, "canyonwave config_hash=" + map.config_hash);
    }
    out.push_back(heatmap_stem + ".ppm");

    nlohmann::json side = {{"config_hash", map.config_hash},
                           {"quantity", to_string(map.quantity)},
                           {"units", units},
                           {"min", lo},
                           {"max", hi},
                           {"interpolation_factor", 8},
                           {"color_scale", "linear blue-cyan-green-yellow-red from min to max"},
                           {"no_data_color", "rgb(64,64,64)"},
                           {"orientation", "top row = largest y, left column = smallest x"}};
    std::ostringstream text;
    for (const auto &[key, value] : side.items())
        text << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
    write_text(dir / (heatmap_stem + ".txt"), text.str());
    out.push_back(heatmap_stem + ".txt");
}

nlohmann::json statistics_json(const std::vector<std::vector<double>> &realizations, const std::vector<double> &targets,
                               bool throughput)
{
    std::vector<double> pooled;
    for (const auto &r : realizations)
        pooled.insert(pooled.end(), r.begin(), r.end());
    nlohmann::json j;
    j["coverage"] = to_json(coverage(realizations, targets));
    nlohmann::json outage = nlohmann::json::array();
    for (double t : targets)
        outage.push_back({{"rate", t}, {"probability", outage_probability(pooled, t)}});
    j["outage"] = outage;
    nlohmann::json eps = nlohmann::json::array();
    for (double e : {0.01, 0.05, 0.1})
        eps.push_back({{"epsilon", e}, {"rate", rate_with_outage(pooled, e, throughput)}});
    j["rate_with_outage"] = eps;
    j["throughput_scaling"] = throughput;
    j["sample_count"] = pooled.size();
    return j;
}

bool same_grid(const VehicleGrid &a, const VehicleGrid &b)
{
    return a.origin_x == b.origin_x && a.origin_y == b.origin_y && a.rows == b.rows && a.cols == b.cols &&
           a.spacing == b.spacing && a.antenna_height == b.antenna_height && a.array_rows == b.array_rows &&
           a.array_cols == b.array_cols;
}

} // namespace

void RunConfig::validate() const
{
    if (scene_path.empty())
        throw UsageError("--scene is required");
    if (oversampling == 0)
        throw UsageError("--rho must be at least 1");
    check_targets(targets);
    if (mode == RunMode::MultiUser) {
        if (!users)
            throw UsageError("--mode mu requires --users");
        if (*users == 0)
            throw UsageError("--users must be at least 1");
        if (realizations == 0)
            throw UsageError("--realizations must be at least 1");
    }
}

nlohmann::json config_json(const RunConfig &config, const std::string &scene_hash)
{
    nlohmann::json j = {{"scene_hash", scene_hash},
                        {"mode", to_string(config.mode)},
                        {"rho", config.oversampling},
                        {"seed", config.seed},
                        {"targets", config.targets},
                        {"smart_deployment", config.smart_deployment},
                        {"throughput_scaling", config.throughput_scaling},
                        {"ray_import", config.ray_import.has_value()}};
    if (config.mode == RunMode::MultiUser) {
        j["structure"] = to_string(config.structure);
        j["users"] = config.users.value_or(0);
        j["subarray_size"] = config.subarray_size;
        j["realizations"] = config.realizations;
        j["baseband"] = to_string(config.baseband);
        if (config.feedback_bits)
            j["feedback_bits"] = *config.feedback_bits;
        else
            j["feedback_bits"] = "perfect";
    }
    return j;
}

std::string config_hash(const RunConfig &config, const std::string &scene_hash)
{
    return hex64(fnv1a64(config_json(config, scene_hash).dump()));
}

RunSummary run(const RunConfig &config)
{
    config.validate();
    Scene scene = load_variant(config.scene_path, config.smart_deployment);

    RayLookup lookup;
    if (config.ray_import) {
        std::ifstream in(*config.ray_import, std::ios::binary);
        if (!in)
            throw ParseError("cannot read ray file " + config.ray_import->string());
        lookup = imported_rays(read_rays_csv(in));
    } else {
        lookup = traced_rays(scene);
    }

    RunSummary summary;
    summary.scene_hash = scene_hash(scene);
    summary.config_hash = config_hash(config, summary.scene_hash);

    const LinkTable links = build_links(scene, lookup, config.threads);
    std::filesystem::create_directories(config.out_dir);

    if (config.ray_dump) {
        if (config.ray_dump->has_parent_path())
            std::filesystem::create_directories(config.ray_dump->parent_path());
        auto out = open_output(*config.ray_dump);
        write_rays_csv(out, links.rays, "canyonwave rays config_hash=" + summary.config_hash);
    }

    nlohmann::json stats;
    nlohmann::json extra = nlohmann::json::object();
    if (config.mode == RunMode::SingleUser) {
        RateMap map = su_map(scene, links, config.oversampling, BestBsPolicy::BestRate, config.threads);
        map.config_hash = summary.config_hash;
        map.seed = config.seed;
        write_map_artifacts(config.out_dir, "rate_map.csv", "heatmap", map, summary.artifacts);
        const std::vector<std::vector<double>> samples{map.served_values()};
        stats = statistics_json(samples, config.targets, config.throughput_scaling);
    } else {
        MuMapOptions options;
        options.hybrid = hybrid_config(config.structure, *config.users, config.feedback_bits, config.subarray_size);
        options.realizations = config.realizations;
        options.seed = config.seed;
        options.oversampling = config.oversampling;
        options.baseband = config.baseband;
        options.threads = config.threads;
        MuMapResult result = mu_map(scene, links, options);
        result.rate.config_hash = summary.config_hash;
        result.energy_efficiency.config_hash = summary.config_hash;
        write_map_artifacts(config.out_dir, "rate_map.csv", "heatmap", result.rate, summary.artifacts);
        write_map_artifacts(config.out_dir, "ee_map.csv", "ee_heatmap", result.energy_efficiency, summary.artifacts);
        stats = statistics_json(result.realization_rates, config.targets, config.throughput_scaling);
        double ee_sum = 0.0;
        std::size_t ee_count = 0;
        for (const auto &r : result.realization_efficiency) {
            for (double v : r) {
                ee_sum += v;
                ++ee_count;
            }
        }
        extra["mean_energy_efficiency"] = ee_count ? ee_sum / static_cast<double>(ee_count) : 0.0;
        extra["slots"] = result.slots.size();
        extra["singular_slots"] = result.singular_slots;
        extra["skipped_cells"] = result.skipped_cells;
        std::size_t unserved = 0;
        for (auto v : result.rate.visits)
            unserved += v == 0;
        extra["unserved_locations"] = unserved;
    }
    summary.coverage.target_rates = config.targets;
    {
        const auto &c = stats.at("coverage");
        summary.coverage.coverage_percent = c.at("coverage_percent").get<std::vector<double>>();
        summary.coverage.mean_rate = c.at("mean_rate").get<double>();
        summary.coverage.std_dev = c.at("std_dev").get<double>();
        summary.coverage.realization_count = c.at("realization_count").get<std::size_t>();
    }

    nlohmann::json cov = {{"config_hash", summary.config_hash}, {"scene_hash", summary.scene_hash}};
    cov.update(stats);
    cov.update(extra);
    write_text(config.out_dir / "coverage.json", cov.dump(2) + "\n");
    summary.artifacts.push_back("coverage.json");

    nlohmann::json manifest = {{"tool", "canyonwave"},
                               {"version", tool_version},
                               {"config", config_json(config, summary.scene_hash)},
                               {"config_hash", summary.config_hash},
                               {"scene_hash", summary.scene_hash},
                               {"scene_file", config.scene_path.filename().string()}};
    std::vector<std::string> names;
    for (const auto &a : summary.artifacts)
        names.push_back(a.string());
    names.push_back("manifest.json");
    manifest["artifacts"] = names;
    write_text(config.out_dir / "manifest.json", manifest.dump(2) + "\n");
    summary.artifacts.push_back("manifest.json");
    return summary;
}

void CompareConfig::validate() const
{
    if (a.scene_path.empty() || b.scene_path.empty())
        throw UsageError("--scene-a and --scene-b are required");
    if (oversampling == 0)
        throw UsageError("--rho must be at least 1");
    if (traffic_realizations == 0)
        throw UsageError("--traffic-realizations must be at least 1");
    check_targets(targets);
    if (mode == RunMode::MultiUser && (!users || *users == 0))
        throw UsageError("--mode mu requires --users");
}

nlohmann::json compare(const CompareConfig &config)
{
    config.validate();
    const Scene scene_a = load_variant(config.a.scene_path, config.a.smart_deployment);
    const Scene scene_b = load_variant(config.b.scene_path, config.b.smart_deployment);
    if (!same_grid(scene_a.grid, scene_b.grid))
        throw GridMismatchError("compare: scenes " + config.a.scene_path.string() + " and " +
                                config.b.scene_path.string() + " use different vehicle grids");

    CompareOptions options;
    options.mode = config.mode == RunMode::SingleUser ? MapMode::SingleUser : MapMode::MultiUser;
    options.oversampling = config.oversampling;
    options.traffic_realizations = config.traffic_realizations;
    options.seed = config.seed;
    options.targets = config.targets;
    options.threads = config.threads;
    if (config.mode == RunMode::MultiUser) {
        options.multiuser.hybrid = hybrid_config(config.structure, *config.users, config.feedback_bits, 0);
        options.multiuser.realizations = config.realizations;
        options.multiuser.oversampling = config.oversampling;
    }

    const auto variant = [](const CompareSide &side, const Scene &scene) {
        SceneVariant v;
        v.deployment = side.label.empty() ? side.scene_path.stem().string() : side.label;
        v.traffic = side.trucks == 0 ? "none" : std::to_string(side.trucks) + " trucks";
        v.placement = side.smart_deployment ? "smart" : "primary";
        v.scene = scene;
        v.trucks = side.trucks;
        return v;
    };
    const auto cells = deployment_compare({variant(config.a, scene_a), variant(config.b, scene_b)}, options);

    const CoverageReport &ra = cells[0].report;
    const CoverageReport &rb = cells[1].report;
    std::vector<double> coverage_delta;
    for (std::size_t i = 0; i < ra.coverage_percent.size(); ++i)
        coverage_delta.push_back(rb.coverage_percent[i] - ra.coverage_percent[i]);

    nlohmann::json cfg = {{"scene_hash_a", scene_hash(scene_a)},
                          {"scene_hash_b", scene_hash(scene_b)},
                          {"smart_a", config.a.smart_deployment},
                          {"smart_b", config.b.smart_deployment},
                          {"trucks_a", config.a.trucks},
                          {"trucks_b", config.b.trucks},
                          {"mode", to_string(config.mode)},
                          {"rho", config.oversampling},
                          {"traffic_realizations", config.traffic_realizations},
                          {"seed", config.seed},
                          {"targets", config.targets}};
    if (config.mode == RunMode::MultiUser) {
        cfg["structure"] = to_string(config.structure);
        cfg["users"] = *config.users;
        cfg["realizations"] = config.realizations;
        if (config.feedback_bits)
            cfg["feedback_bits"] = *config.feedback_bits;
        else
            cfg["feedback_bits"] = "perfect";
    }
    const std::string hash = hex64(fnv1a64(cfg.dump()));
    return {{"config_hash", hash},
            {"config", cfg},
            {"a", to_json(cells[0])},
            {"b", to_json(cells[1])},
            {"delta",
             {{"target_rates", ra.target_rates},
              {"coverage_percent", coverage_delta},
              {"mean_rate", rb.mean_rate - ra.mean_rate},
              {"std_dev", rb.std_dev - ra.std_dev}}}};
}

nlohmann::json error_json(const std::string &kind, const std::string &message)
{
    return {{"error", {{"kind", kind}, {"message", message}}}};
}

} // namespace canyonwave
