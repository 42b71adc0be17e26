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

#include "canyonwave/mapping.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <numeric>
#include <ostream>

#include "canyonwave/errors.hpp"
#include "canyonwave/parallel.hpp"
#include "canyonwave/random.hpp"

namespace canyonwave {

namespace {

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

LinkState classify(const RaySet &rays)
{
    if (rays.rays.empty())
        return LinkState::Dark;
    return rays.has_los() ? LinkState::Los : LinkState::Nlos;
}

LocationFlag to_flag(LinkState s)
{
    switch (s) {
    case LinkState::Los:
        return LocationFlag::Los;
    case LinkState::Nlos:
        return LocationFlag::Nlos;
    case LinkState::Dark:
        break;
    }
    return LocationFlag::Dark;
}

RateMap empty_map(const Scene &scene, Quantity quantity)
{
    RateMap map;
    map.rows = scene.grid.rows;
    map.cols = scene.grid.cols;
    map.quantity = quantity;
    map.positions = grid_positions(scene);
    const std::size_t n = map.positions.size();
    map.values.assign(n, 0.0);
    map.visits.assign(n, 0);
    map.flags.assign(n, LocationFlag::Unserved);
    map.serving_base.assign(n, -1);
    map.scene_hash = scene_hash(scene);
    return map;
}

LinkBudget budget_for(const Scene &scene, std::size_t base)
{
    return {scene.bases[base].tx_power_dbm, scene.rf.bandwidth_hz};
}

} // namespace

const char *to_string(Quantity q) { return q == Quantity::Rate ? "rate" : "energy-efficiency"; }

const char *to_string(LocationFlag f)
{
    switch (f) {
    case LocationFlag::Los:
        return "los";
    case LocationFlag::Nlos:
        return "nlos";
    case LocationFlag::Dark:
        return "dark";
    case LocationFlag::Unserved:
        break;
    }
    return "unserved";
}

std::vector<double> RateMap::served_values() const
{
    std::vector<double> out;
    out.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (flags[i] != LocationFlag::Unserved)
            out.push_back(values[i]);
    }
    return out;
}

RayLookup traced_rays(const Scene &scene, TraceOptions options)
{
    auto points = std::make_shared<const std::vector<Vec3>>(grid_positions(scene));
    return [&scene, points, options](std::size_t base, std::size_t point) {
        const BasePlacement &bs = scene.bases.at(base);
        RaySet rays = trace(scene, bs.position, points->at(point), bs.tx_power_dbm, options);
        rays.tx_index = base;
        rays.rx_index = point;
        return rays;
    };
}

RayLookup imported_rays(std::vector<RaySet> sets)
{
    auto index = std::make_shared<std::map<std::pair<std::size_t, std::size_t>, RaySet>>();
    for (auto &s : sets)
        (*index)[{s.tx_index, s.rx_index}] = std::move(s);
    return [index](std::size_t base, std::size_t point) {
        auto it = index->find({base, point});
        if (it == index->end()) {
            RaySet empty;
            empty.tx_index = base;
            empty.rx_index = point;
            return empty;
        }
        return it->second;
    };
}

ChannelMatrix link_channel(const Scene &scene, std::size_t base, const RaySet &rays)
{
    const BasePlacement &bs = scene.bases.at(base);
    const auto bs_array = ArrayGeometry::half_wavelength(bs.array_rows, bs.array_cols, scene.rf.carrier_hz);
    const auto vehicle_array =
        ArrayGeometry::half_wavelength(scene.grid.array_rows, scene.grid.array_cols, scene.rf.carrier_hz);
    const RaySet local = to_array_frame(to_path_gains(rays, bs.tx_power_dbm), bs.boresight_azimuth, 0.0);
    return synthesize_channel(local, bs_array, vehicle_array, scene.rf.carrier_hz);
}

LinkTable build_links(const Scene &scene, const RayLookup &lookup, unsigned threads)
{
    LinkTable table;
    table.bases = scene.bases.size();
    table.points = scene.grid.size();
    const BasePlacement &bs = scene.bases.front();
    table.bs_array = ArrayGeometry::half_wavelength(bs.array_rows, bs.array_cols, scene.rf.carrier_hz);
    table.vehicle_array =
        ArrayGeometry::half_wavelength(scene.grid.array_rows, scene.grid.array_cols, scene.rf.carrier_hz);
    const std::size_t n = table.bases * table.points;
    table.channels.resize(n);
    table.states.resize(n);
    table.rays.resize(n);
    parallel_for(n, threads, [&](std::size_t i) {
        const std::size_t base = i / table.points;
        const std::size_t point = i % table.points;
        RaySet rays = lookup(base, point);
        rays.tx_index = base;
        rays.rx_index = point;
        table.states[i] = classify(rays);
        table.channels[i] = link_channel(scene, base, rays);
        table.rays[i] = std::move(rays);
    });
    return table;
}

RateMap su_map(const Scene &scene, const LinkTable &links, std::size_t oversampling, BestBsPolicy policy,
               unsigned threads)
{
    if (scene.bases.empty())
        throw ValidationError("su_map: scene has no base stations");
    if (links.bases != scene.bases.size() || links.points != scene.grid.size())
        throw DimensionError("su_map: link table does not match the scene");

    const Codebook precoders = build_beam_codebook(links.bs_array, oversampling);
    const Codebook combiners = build_beam_codebook(links.vehicle_array, oversampling);

    RateMap map = empty_map(scene, Quantity::Rate);
    parallel_for(links.points, threads, [&](std::size_t p) {
        std::size_t serving = 0;
        double best = -1.0;
        if (policy == BestBsPolicy::Nearest) {
            double nearest = std::numeric_limits<double>::infinity();
            for (std::size_t b = 0; b < links.bases; ++b) {
                const double d = (scene.bases[b].position - map.positions[p]).norm();
                if (d < nearest) {
                    nearest = d;
                    serving = b;
                }
            }
            const BeamSelection sel = beam_search(links.channel(serving, p), precoders, combiners);
            best = su_rate(sel, budget_for(scene, serving));
        } else {
            for (std::size_t b = 0; b < links.bases; ++b) {
                const BeamSelection sel = beam_search(links.channel(b, p), precoders, combiners);
                const double rate = su_rate(sel, budget_for(scene, b));
                if (rate > best) {
                    best = rate;
                    serving = b;
                }
            }
        }
        map.values[p] = best;
        map.visits[p] = 1;
        map.serving_base[p] = static_cast<long>(serving);
        map.flags[p] = to_flag(links.state(serving, p));
    });
    return map;
}

RateMap su_map(const Scene &scene, std::size_t oversampling, BestBsPolicy policy, unsigned threads)
{
    const LinkTable links = build_links(scene, traced_rays(scene), threads);
    return su_map(scene, links, oversampling, policy, threads);
}

MuMapResult mu_map(const Scene &scene, const LinkTable &links, const MuMapOptions &options)
{
    const HybridConfig &cfg = options.hybrid;
    const std::size_t n_t = links.bs_array.size();
    cfg.validate(n_t);
    if (cfg.users > links.points)
        throw ValidationError("mu_map: more users per slot than grid points");
    if (links.bases != scene.bases.size() || links.points != scene.grid.size())
        throw DimensionError("mu_map: link table does not match the scene");

    const Codebook full_precoders = build_beam_codebook(links.bs_array, options.oversampling);
    const Codebook combiners = build_beam_codebook(links.vehicle_array, options.oversampling);
    const Codebook precoders = cfg.structure == Structure::FullyConnected
                                   ? full_precoders
                                   : build_beam_codebook(subarray_geometry(links.bs_array, cfg.subarray(n_t)),
                                                         options.oversampling);
    std::optional<Codebook> rvq;
    if (!cfg.perfect_csit())
        rvq = build_rvq_codebook(cfg.users, *cfg.feedback_bits, options.seed);

    // cell association: best single-user link
    std::vector<std::size_t> association(links.points, 0);
    if (links.bases > 1) {
        parallel_for(links.points, options.threads, [&](std::size_t p) {
            double best = -1.0;
            for (std::size_t b = 0; b < links.bases; ++b) {
                const double rate = su_rate(beam_search(links.channel(b, p), full_precoders, combiners),
                                            budget_for(scene, b));
                if (rate > best) {
                    best = rate;
                    association[p] = b;
                }
            }
        });
    }
    std::vector<std::vector<std::size_t>> cells(links.bases);
    for (std::size_t p = 0; p < links.points; ++p)
        cells[association[p]].push_back(p);

    constexpr std::uint64_t schedule_tag = 0x7363686564; // "sched"
    const std::size_t jobs = options.realizations * links.bases;
    std::vector<std::optional<MultiuserSlot>> results(jobs);
    parallel_for(jobs, options.threads, [&](std::size_t job) {
        const std::size_t r = job / links.bases;
        const std::size_t b = job % links.bases;
        std::vector<std::size_t> pool = cells[b];
        if (pool.size() < cfg.users)
            return;
        KeyedStream rng(options.seed, {schedule_tag, r, b});
        for (std::size_t i = 0; i < cfg.users; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(cfg.users);
        std::vector<ChannelMatrix> channels;
        channels.reserve(cfg.users);
        for (std::size_t p : pool)
            channels.push_back(links.channel(b, p));
        results[job] = evaluate_slot(channels, pool, precoders, combiners, rvq ? &*rvq : nullptr, cfg,
                                     budget_for(scene, b), options.power, options.baseband);
    });

    MuMapResult out;
    out.rate = empty_map(scene, Quantity::Rate);
    out.energy_efficiency = empty_map(scene, Quantity::EnergyEfficiency);
    out.rate.seed = options.seed;
    out.energy_efficiency.seed = options.seed;
    out.realization_rates.assign(options.realizations, {});
    out.realization_efficiency.assign(options.realizations, {});
    std::vector<double> rate_sum(links.points, 0.0);
    std::vector<double> ee_sum(links.points, 0.0);
    for (std::size_t job = 0; job < jobs; ++job) {
        const std::size_t r = job / links.bases;
        if (!results[job]) {
            ++out.skipped_cells;
            continue;
        }
        const MultiuserSlot &slot = *results[job];
        if (slot.singular)
            ++out.singular_slots;
        for (std::size_t u = 0; u < slot.user_indices.size(); ++u) {
            const std::size_t p = slot.user_indices[u];
            rate_sum[p] += slot.rate[u];
            ee_sum[p] += slot.energy_efficiency[u];
            ++out.rate.visits[p];
            out.realization_rates[r].push_back(slot.rate[u]);
            out.realization_efficiency[r].push_back(slot.energy_efficiency[u]);
        }
        out.slots.push_back(std::move(*results[job]));
    }
    for (std::size_t p = 0; p < links.points; ++p) {
        const std::uint32_t v = out.rate.visits[p];
        out.energy_efficiency.visits[p] = v;
        if (v == 0)
            continue;
        const auto base = association[p];
        const LocationFlag flag = to_flag(links.state(base, p));
        out.rate.values[p] = rate_sum[p] / v;
        out.energy_efficiency.values[p] = ee_sum[p] / v;
        out.rate.flags[p] = out.energy_efficiency.flags[p] = flag;
        out.rate.serving_base[p] = out.energy_efficiency.serving_base[p] = static_cast<long>(base);
    }
    return out;
}

Raster interpolate_map(const RateMap &map, std::size_t factor)
{
    Raster raster;
    const std::size_t step = factor + 1;
    raster.rows = map.rows > 1 ? (map.rows - 1) * step + 1 : map.rows;
    raster.cols = map.cols > 1 ? (map.cols - 1) * step + 1 : map.cols;
    raster.values.assign(raster.rows * raster.cols, std::numeric_limits<double>::quiet_NaN());

    const auto served = [&](std::size_t r, std::size_t c) {
        return map.flags[r * map.cols + c] != LocationFlag::Unserved;
    };
    for (std::size_t i = 0; i < raster.rows; ++i) {
        const std::size_t r0 = std::min(i / step, map.rows - 1);
        const std::size_t r1 = std::min(r0 + 1, map.rows - 1);
        const double ty = r1 == r0 ? 0.0 : static_cast<double>(i - r0 * step) / static_cast<double>(step);
        for (std::size_t j = 0; j < raster.cols; ++j) {
            const std::size_t c0 = std::min(j / step, map.cols - 1);
            const std::size_t c1 = std::min(c0 + 1, map.cols - 1);
            const double tx = c1 == c0 ? 0.0 : static_cast<double>(j - c0 * step) / static_cast<double>(step);
            const std::array<std::size_t, 4> rr{r0, r0, r1, r1};
            const std::array<std::size_t, 4> cc{c0, c1, c0, c1};
            const std::array<double, 4> w{(1 - ty) * (1 - tx), (1 - ty) * tx, ty * (1 - tx), ty * tx};
            double acc = 0.0;
            double weight = 0.0;
            for (int k = 0; k < 4; ++k) {
                if (w[k] == 0.0 || !served(rr[k], cc[k]))
                    continue;
                acc += w[k] * map.values[rr[k] * map.cols + cc[k]];
                weight += w[k];
            }
            if (weight > 0.0)
                raster.values[i * raster.cols + j] = acc / weight;
        }
    }
    return raster;
}

void write_heatmap_ppm(std::ostream &out, const Raster &raster, double lo, double hi, const std::string &comment)
{
    static constexpr std::array<std::array<double, 3>, 5> stops{{
        {0, 0, 255}, {0, 255, 255}, {0, 255, 0}, {255, 255, 0}, {255, 0, 0}}};
    out << "P6\n";
    if (!comment.empty())
        out << "# " << comment << '\n';
    out << raster.cols << ' ' << raster.rows << "\n255\n";
    const double span = hi - lo;
    for (std::size_t row = raster.rows; row-- > 0;) {
        for (std::size_t col = 0; col < raster.cols; ++col) {
            const double v = raster.values[row * raster.cols + col];
            std::array<unsigned char, 3> px{64, 64, 64};
            if (!std::isnan(v)) {
                const double t = span > 0.0 ? std::clamp((v - lo) / span, 0.0, 1.0) : 0.0;
                const double pos = t * 4.0;
                const auto seg = std::min<std::size_t>(static_cast<std::size_t>(pos), 3);
                const double f = pos - static_cast<double>(seg);
                for (int k = 0; k < 3; ++k)
                    px[k] = static_cast<unsigned char>(std::lround(stops[seg][k] + f * (stops[seg + 1][k] - stops[seg][k])));
            }
            out.write(reinterpret_cast<const char *>(px.data()), 3);
        }
    }
}

void write_rate_map_csv(std::ostream &out, const RateMap &map)
{
    out << "# canyonwave map quantity=" << to_string(map.quantity)
        << " units=" << (map.quantity == Quantity::Rate ? "bit/s" : "bit/J") << " scene_hash=" << map.scene_hash
        << " config_hash=" << map.config_hash << " seed=" << map.seed << '\n';
    out << "x_m,y_m,value,visits,flag\n";
    for (std::size_t i = 0; i < map.size(); ++i) {
        out << format_double(map.positions[i].x) << ',' << format_double(map.positions[i].y) << ','
            << format_double(map.values[i]) << ',' << map.visits[i] << ',' << to_string(map.flags[i]) << '\n';
    }
}

std::vector<ComparisonCell> deployment_compare(const std::vector<SceneVariant> &variants, const CompareOptions &options)
{
    if (variants.empty())
        throw ValidationError("deployment_compare: no variants");
    std::vector<ComparisonCell> cells;
    cells.reserve(variants.size());
    for (const SceneVariant &variant : variants) {
        std::vector<std::vector<double>> samples;
        samples.reserve(options.traffic_realizations);
        for (std::size_t t = 0; t < options.traffic_realizations; ++t) {
            const Scene scene = with_traffic(variant.scene, variant.trucks, options.seed, t, options.truck);
            const LinkTable links = build_links(scene, traced_rays(scene), options.threads);
            if (options.mode == MapMode::SingleUser) {
                samples.push_back(su_map(scene, links, options.oversampling, BestBsPolicy::BestRate, options.threads)
                                      .served_values());
            } else {
                MuMapOptions mu = options.multiuser;
                mu.threads = options.threads;
                mu.seed = options.seed + t;
                samples.push_back(mu_map(scene, links, mu).rate.served_values());
            }
        }
        cells.push_back({variant.deployment, variant.traffic, variant.placement, coverage(samples, options.targets)});
    }
    return cells;
}

nlohmann::json to_json(const ComparisonCell &cell)
{
    nlohmann::json j = to_json(cell.report);
    j["deployment"] = cell.deployment;
    j["traffic"] = cell.traffic;
    j["placement"] = cell.placement;
    return j;
}

} // namespace canyonwave
