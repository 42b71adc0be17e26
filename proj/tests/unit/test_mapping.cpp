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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "canyonwave/errors.hpp"
#include "canyonwave/mapping.hpp"
#include "canyonwave/random.hpp"

#include "fixtures.hpp"

using namespace canyonwave;
namespace fs = std::filesystem;

namespace {

const fs::path scenes{CANYONWAVE_SCENES};

Scene minimal() { return parse_scene(fixture::minimal_canyon().dump()); }

// Minimal canyon with a second, identical base further down the street.
Scene two_bases()
{
    auto doc = fixture::minimal_canyon();
    auto extra = doc["bases"][0];
    extra["position"] = {45, -9, 6};
    extra["boresight_azimuth"] = 1.5707963267948966;
    doc["bases"].push_back(extra);
    return parse_scene(doc.dump());
}

double single_link_rate(const Scene &s, std::size_t base, std::size_t point, std::size_t rho)
{
    const ChannelMatrix h = link_channel(s, base, trace_link(s, base, point));
    const Codebook f = build_beam_codebook(
        ArrayGeometry::half_wavelength(s.bases[base].array_rows, s.bases[base].array_cols, s.rf.carrier_hz), rho);
    const Codebook w = build_beam_codebook(
        ArrayGeometry::half_wavelength(s.grid.array_rows, s.grid.array_cols, s.rf.carrier_hz), rho);
    return su_rate(beam_search(h, f, w), LinkBudget{s.bases[base].tx_power_dbm, s.rf.bandwidth_hz});
}

RateMap synthetic_map(std::size_t rows, std::size_t cols, const std::vector<double> &values)
{
    RateMap m;
    m.rows = rows;
    m.cols = cols;
    m.values = values;
    m.visits.assign(values.size(), 1);
    m.flags.assign(values.size(), LocationFlag::Los);
    m.serving_base.assign(values.size(), 0);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            m.positions.push_back({5.0 * c, 5.0 * r, 1.5});
    return m;
}

} // namespace

TEST_CASE("single-user map with one base equals the per-link rate")
{
    const Scene s = minimal();
    const RateMap map = su_map(s, 2);
    REQUIRE(map.size() == 9);
    CHECK(map.quantity == Quantity::Rate);
    CHECK(map.scene_hash == scene_hash(s));
    for (std::size_t p = 0; p < map.size(); ++p) {
        CHECK(map.values[p] == doctest::Approx(single_link_rate(s, 0, p, 2)).epsilon(1e-12));
        CHECK(map.visits[p] == 1);
        CHECK(map.serving_base[p] == 0);
        CHECK(map.flags[p] == LocationFlag::Los);
    }
    CHECK(map.served_values().size() == 9);
}

TEST_CASE("best-rate association takes the better base")
{
    const Scene s = two_bases();
    const LinkTable links = build_links(s, traced_rays(s));
    CHECK(links.bases == 2);
    CHECK(links.points == 9);
    const RateMap best = su_map(s, links, 1);
    const RateMap near = su_map(s, links, 1, BestBsPolicy::Nearest);
    const auto points = grid_positions(s);
    bool both_used = false;
    for (std::size_t p = 0; p < 9; ++p) {
        const double r0 = single_link_rate(s, 0, p, 1);
        const double r1 = single_link_rate(s, 1, p, 1);
        CHECK(best.values[p] == doctest::Approx(std::max(r0, r1)).epsilon(1e-12));
        CHECK(best.serving_base[p] == (r1 > r0 ? 1 : 0));
        const long nearest = (s.bases[1].position - points[p]).norm() < (s.bases[0].position - points[p]).norm();
        CHECK(near.serving_base[p] == nearest);
        CHECK(near.values[p] <= best.values[p]);
        both_used = both_used || best.serving_base[p] != best.serving_base[0];
    }
    CHECK(both_used);
}

TEST_CASE("links without any path are dark but still on the map")
{
    Scene s = minimal();
    // a metal wall across the whole street hides the base from every point
    s.obstacles.push_back({{{0, -10, 0}, {60, 8, 40}}, *s.find_material("metal")});
    const RateMap map = su_map(s, 1);
    for (std::size_t p = 0; p < map.size(); ++p) {
        CHECK(map.flags[p] == LocationFlag::Dark);
        CHECK(map.values[p] == 0.0);
    }
}

TEST_CASE("imported rays reproduce traced maps")
{
    const Scene s = minimal();
    const LinkTable traced = build_links(s, traced_rays(s));
    std::stringstream csv;
    write_rays_csv(csv, traced.rays);
    const LinkTable imported = build_links(s, imported_rays(read_rays_csv(csv)));
    const RateMap a = su_map(s, traced, 1);
    const RateMap b = su_map(s, imported, 1);
    for (std::size_t p = 0; p < a.size(); ++p)
        CHECK(b.values[p] == doctest::Approx(a.values[p]).epsilon(1e-9));

    const LinkTable none = build_links(s, imported_rays({}));
    CHECK(none.state(0, 0) == LinkState::Dark);
}

TEST_CASE("multiuser map")
{
    Scene s = minimal();
    s.grid.rows = 2; // six locations
    const LinkTable links = build_links(s, traced_rays(s));

    SUBCASE("one realization serving everybody visits every location once")
    {
        MuMapOptions opt;
        opt.hybrid.users = 6;
        opt.realizations = 1;
        const MuMapResult r = mu_map(s, links, opt);
        for (std::size_t p = 0; p < 6; ++p)
            CHECK(r.rate.visits[p] == 1);
        REQUIRE(r.slots.size() == 1);
        CHECK(r.realization_rates.size() == 1);
        CHECK(r.realization_rates[0].size() == 6);
    }
    SUBCASE("hand accumulation over three realizations of two users")
    {
        MuMapOptions opt;
        opt.hybrid.users = 2;
        opt.hybrid.feedback_bits = 4;
        opt.realizations = 3;
        opt.seed = 17;
        const MuMapResult r = mu_map(s, links, opt);

        const Codebook f = build_beam_codebook(links.bs_array, 1);
        const Codebook w = build_beam_codebook(links.vehicle_array, 1);
        const Codebook rvq = build_rvq_codebook(2, 4, 17);
        std::vector<double> sum(6, 0.0);
        std::vector<double> ee(6, 0.0);
        std::vector<unsigned> visits(6, 0);
        for (std::uint64_t k = 0; k < 3; ++k) {
            std::vector<std::size_t> pool(6);
            std::iota(pool.begin(), pool.end(), std::size_t{0});
            KeyedStream rng(17, {0x7363686564, k, 0});
            for (std::size_t i = 0; i < 2; ++i)
                std::swap(pool[i], pool[i + rng.below(6 - i)]);
            pool.resize(2);
            CHECK(pool[0] != pool[1]);
            const std::vector<ChannelMatrix> h{links.channel(0, pool[0]), links.channel(0, pool[1])};
            const MultiuserSlot slot = evaluate_slot(h, pool, f, w, &rvq, opt.hybrid,
                                                     LinkBudget{10.0, 850e6}, PowerModel{});
            CHECK(r.slots[k].user_indices == pool);
            for (std::size_t u = 0; u < 2; ++u) {
                sum[pool[u]] += slot.rate[u];
                ee[pool[u]] += slot.energy_efficiency[u];
                ++visits[pool[u]];
            }
        }
        for (std::size_t p = 0; p < 6; ++p) {
            CHECK(r.rate.visits[p] == visits[p]);
            CHECK(r.energy_efficiency.visits[p] == visits[p]);
            if (visits[p] == 0) {
                CHECK(r.rate.flags[p] == LocationFlag::Unserved);
                CHECK(r.rate.values[p] == 0.0);
                continue;
            }
            CHECK(r.rate.values[p] == doctest::Approx(sum[p] / visits[p]).epsilon(1e-12));
            CHECK(r.energy_efficiency.values[p] == doctest::Approx(ee[p] / visits[p]).epsilon(1e-12));
        }
    }
    SUBCASE("thread count does not change a single bit")
    {
        MuMapOptions opt;
        opt.hybrid.users = 2;
        opt.hybrid.feedback_bits = 6;
        opt.realizations = 8;
        const MuMapResult a = mu_map(s, links, opt);
        opt.threads = 3;
        const MuMapResult b = mu_map(s, build_links(s, traced_rays(s), 3), opt);
        CHECK(a.rate.values == b.rate.values);
        CHECK(a.energy_efficiency.values == b.energy_efficiency.values);
        CHECK(a.realization_rates == b.realization_rates);
        opt.seed = 2;
        CHECK(mu_map(s, links, opt).rate.values != a.rate.values);
    }
    SUBCASE("cells smaller than a slot are skipped and counted")
    {
        const Scene two = two_bases();
        MuMapOptions opt;
        opt.hybrid.users = 6;
        opt.realizations = 2;
        const LinkTable two_links = build_links(two, traced_rays(two));
        const MuMapResult r = mu_map(two, two_links, opt);
        // at most one of the two cells can hold six of the nine points
        const RateMap su = su_map(two, two_links, 1);
        const auto in_cell0 =
            static_cast<std::size_t>(std::count(su.serving_base.begin(), su.serving_base.end(), 0L));
        const std::size_t small_cells = (in_cell0 < 6 ? 1 : 0) + (9 - in_cell0 < 6 ? 1 : 0);
        CHECK(small_cells >= 1);
        CHECK(r.skipped_cells == 2 * small_cells);
        CHECK(r.slots.size() == 2 * (2 - small_cells));
    }
    SUBCASE("argument checks")
    {
        MuMapOptions opt;
        opt.hybrid.users = 7;
        CHECK_THROWS_AS((void)mu_map(s, links, opt), ValidationError);
        opt.hybrid.users = 3;
        opt.hybrid.structure = Structure::PartiallyConnected;
        CHECK_THROWS_AS((void)mu_map(s, links, opt), ValidationError);
    }
}

TEST_CASE("interpolated rasters")
{
    SUBCASE("constant in, constant out")
    {
        const Raster r = interpolate_map(synthetic_map(3, 4, std::vector<double>(12, 7.5)), 8);
        CHECK(r.rows == 19);
        CHECK(r.cols == 28);
        for (double v : r.values)
            CHECK(v == doctest::Approx(7.5));
    }
    SUBCASE("a pair of points is filled linearly")
    {
        const Raster r = interpolate_map(synthetic_map(1, 2, {0.0, 9.0}), 8);
        REQUIRE(r.rows == 1);
        REQUIRE(r.cols == 10);
        for (std::size_t j = 0; j < 10; ++j)
            CHECK(r.values[j] == doctest::Approx(static_cast<double>(j)));
    }
    SUBCASE("bilinear in the middle of a cell")
    {
        const Raster r = interpolate_map(synthetic_map(2, 2, {0.0, 2.0, 4.0, 6.0}), 1);
        CHECK(r.values[1 * 3 + 1] == doctest::Approx(3.0));
    }
    SUBCASE("unserved points are not interpolated over")
    {
        RateMap m = synthetic_map(1, 3, {1.0, 100.0, 3.0});
        m.flags[1] = LocationFlag::Unserved;
        const Raster r = interpolate_map(m, 1);
        REQUIRE(r.cols == 5);
        CHECK(r.values[1] == doctest::Approx(1.0));
        CHECK(r.values[3] == doctest::Approx(3.0));
        CHECK(std::isnan(r.values[2]));
    }
    SUBCASE("statistics come from the raw grid")
    {
        const RateMap m = synthetic_map(2, 2, {1e8, 6e8, 2e9, 4e7});
        const auto before = coverage(m.served_values(), default_target_rates());
        (void)interpolate_map(m, 8);
        const auto after = coverage(m.served_values(), default_target_rates());
        CHECK(before.coverage_percent == after.coverage_percent);
        CHECK(before.mean_rate == after.mean_rate);
    }
}

TEST_CASE("map files")
{
    SUBCASE("CSV")
    {
        RateMap m = synthetic_map(1, 2, {1.5e9, 0.0});
        m.flags[1] = LocationFlag::Unserved;
        m.scene_hash = "abc";
        m.config_hash = "def";
        m.seed = 4;
        std::ostringstream out;
        write_rate_map_csv(out, m);
        CHECK(out.str() == "# canyonwave map quantity=rate units=bit/s scene_hash=abc config_hash=def seed=4\n"
                           "x_m,y_m,value,visits,flag\n"
                           "0,0,1500000000,1,los\n"
                           "5,0,0,1,unserved\n");
        m.quantity = Quantity::EnergyEfficiency;
        std::ostringstream ee;
        write_rate_map_csv(ee, m);
        CHECK(ee.str().find("quantity=energy-efficiency units=bit/J") != std::string::npos);
    }
    SUBCASE("PPM")
    {
        Raster r;
        r.rows = 2;
        r.cols = 3;
        r.values = {0.0, 5.0, 10.0, std::nan(""), 2.5, 7.5};
        std::ostringstream out;
        write_heatmap_ppm(out, r, 0.0, 10.0, "hello");
        const std::string header = "P6\n# hello\n3 2\n255\n";
        const std::string bytes = out.str();
        REQUIRE(bytes.size() == header.size() + 18);
        CHECK(bytes.substr(0, header.size()) == header);
        const auto px = [&](std::size_t i, int k) {
            return static_cast<unsigned char>(bytes[header.size() + 3 * i + static_cast<std::size_t>(k)]);
        };
        // top image row is raster row 1: NaN grey, then 2.5 (cyan), 7.5 (yellow)
        CHECK(px(0, 0) == 64);
        CHECK(px(0, 1) == 64);
        CHECK(px(1, 0) == 0);
        CHECK(px(1, 1) == 255);
        CHECK(px(1, 2) == 255);
        CHECK(px(2, 0) == 255);
        CHECK(px(2, 1) == 255);
        CHECK(px(2, 2) == 0);
        // bottom row: blue, green, red
        CHECK(px(3, 2) == 255);
        CHECK(px(4, 1) == 255);
        CHECK(px(4, 0) == 0);
        CHECK(px(5, 0) == 255);
        CHECK(px(5, 1) == 0);
    }
}

TEST_CASE("deployment comparison")
{
    const Scene corner_sparse = load_scene(scenes / "corner_sparse.json");
    const Scene corner_dense = load_scene(scenes / "corner_dense.json");

    SUBCASE("identical variants give identical statistics")
    {
        CompareOptions opt;
        const auto cells = deployment_compare({{"sparse", "light", "pseudorandom", corner_sparse, 0},
                                               {"sparse", "light", "pseudorandom", corner_sparse, 0}},
                                              opt);
        REQUIRE(cells.size() == 2);
        CHECK(cells[0].report.mean_rate == cells[1].report.mean_rate);
        CHECK(cells[0].report.coverage_percent == cells[1].report.coverage_percent);
        CHECK(to_json(cells[0]).at("deployment") == "sparse");
    }
    SUBCASE("densifying a corner does not lower the mean rate")
    {
        CompareOptions opt;
        opt.traffic_realizations = 2;
        const auto cells = deployment_compare({{"sparse", "heavy", "pseudorandom", corner_sparse, 2},
                                               {"dense", "heavy", "pseudorandom", corner_dense, 2}},
                                              opt);
        CHECK(cells[1].report.mean_rate >= cells[0].report.mean_rate);
        CHECK(cells[1].report.coverage_percent[2] >= cells[0].report.coverage_percent[2]);
    }
    SUBCASE("traffic matters less than density on the straightway")
    {
        const Scene sparse = load_scene(scenes / "straightway_sparse.json");
        const Scene dense = load_scene(scenes / "straightway_dense.json");
        for (std::uint64_t seed : {1, 2}) {
            CompareOptions opt;
            opt.seed = seed;
            opt.traffic_realizations = 2;
            const auto cells = deployment_compare({{"sparse", "light", "pseudorandom", sparse, 1},
                                                   {"sparse", "heavy", "pseudorandom", sparse, 4},
                                                   {"dense", "light", "pseudorandom", dense, 1}},
                                                  opt);
            const double traffic = std::abs(cells[1].report.mean_rate - cells[0].report.mean_rate);
            const double density = std::abs(cells[2].report.mean_rate - cells[0].report.mean_rate);
            CHECK(traffic < density);
        }
    }
    SUBCASE("no variants")
    {
        CHECK_THROWS_AS((void)deployment_compare({}, CompareOptions{}), ValidationError);
    }
}
