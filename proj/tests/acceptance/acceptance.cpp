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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "canyonwave/beamforming.hpp"
#include "canyonwave/hybrid.hpp"
#include "canyonwave/mapping.hpp"
#include "canyonwave/pipeline.hpp"
#include "canyonwave/stats.hpp"

#include "oracles.hpp"

namespace {

using namespace canyonwave;
namespace fs = std::filesystem;

const fs::path scenes{CANYONWAVE_SCENES};
constexpr std::uint64_t seed = 20240611;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *format, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

HybridConfig hybrid(Structure s, std::size_t users, std::optional<unsigned> bits = std::nullopt,
                    std::size_t subarray = 0)
{
    HybridConfig c;
    c.structure = s;
    c.users = users;
    c.feedback_bits = bits;
    c.subarray_size = subarray;
    return c;
}

/// Codebooks for one structure of the seeded slot model.
struct Books {
    Codebook precoders;
    Codebook combiners;
};

Books books(const oracle::LinkModel &m, const HybridConfig &cfg, std::size_t rho = 1)
{
    const ArrayGeometry bs = m.bs_array();
    const ArrayGeometry geom =
        cfg.structure == Structure::FullyConnected ? bs : subarray_geometry(bs, cfg.subarray(bs.size()));
    return {build_beam_codebook(geom, rho), build_beam_codebook(m.ue_array(), rho)};
}

std::vector<MultiuserSlot> seeded_slots(std::size_t count, std::uint64_t slot_seed, const HybridConfig &cfg,
                                        Baseband baseband = Baseband::ZeroForcing)
{
    const oracle::LinkModel model;
    const Books b = books(model, cfg);
    std::optional<Codebook> rvq;
    if (!cfg.perfect_csit())
        rvq = build_rvq_codebook(cfg.users, *cfg.feedback_bits, slot_seed);
    std::vector<std::size_t> idx(cfg.users);
    for (std::size_t u = 0; u < cfg.users; ++u)
        idx[u] = u;
    std::vector<MultiuserSlot> out;
    for (std::size_t s = 0; s < count; ++s) {
        const auto channels = oracle::random_slot(slot_seed, s, cfg.users, model);
        out.push_back(evaluate_slot(channels, idx, b.precoders, b.combiners, rvq ? &*rvq : nullptr, cfg, LinkBudget{},
                                    PowerModel{}, baseband));
    }
    return out;
}

double mean_rate(const std::vector<MultiuserSlot> &slots)
{
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto &s : slots)
        for (double r : s.rate) {
            sum += r;
            ++n;
        }
    return n ? sum / static_cast<double>(n) : 0.0;
}

double mean_ee(const std::vector<MultiuserSlot> &slots)
{
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto &s : slots)
        for (double r : s.energy_efficiency) {
            sum += r;
            ++n;
        }
    return n ? sum / static_cast<double>(n) : 0.0;
}

std::size_t singular_count(const std::vector<MultiuserSlot> &slots)
{
    return static_cast<std::size_t>(std::count_if(slots.begin(), slots.end(), [](const auto &s) { return s.singular; }));
}

// Slots shared by criteria 1 and 2: 100 slots per (U, structure) group on which
// zero forcing exists. Singular slots (duplicate analog beams) are skipped and counted.
struct NullingSet {
    std::vector<MultiuserSlot> slots;
    std::size_t skipped = 0;
};

const NullingSet &nulling_set()
{
    static const NullingSet set = [] {
        NullingSet s;
        const oracle::LinkModel model;
        for (std::size_t u : {2u, 4u}) {
            for (Structure st : {Structure::FullyConnected, Structure::PartiallyConnected}) {
                const HybridConfig cfg = hybrid(st, u);
                const Books b = books(model, cfg);
                std::vector<std::size_t> idx(u);
                for (std::size_t i = 0; i < u; ++i)
                    idx[i] = i;
                std::size_t kept = 0;
                for (std::uint64_t slot = 0; kept < 100; ++slot) {
                    const auto channels = oracle::random_slot(seed + u, slot, u, model);
                    MultiuserSlot m = evaluate_slot(channels, idx, b.precoders, b.combiners, nullptr, cfg,
                                                    LinkBudget{}, PowerModel{});
                    if (m.singular) {
                        ++s.skipped;
                        continue;
                    }
                    s.slots.push_back(std::move(m));
                    ++kept;
                }
            }
        }
        return s;
    }();
    return set;
}

Outcome zf_nulling()
{
    double worst = 0.0;
    std::size_t checked = 0;
    for (const auto &slot : nulling_set().slots) {
        for (const auto &t : slot.terms) {
            worst = std::max(worst, t.interference / t.signal);
            ++checked;
        }
    }
    const bool pass = checked > 0 && worst <= 1e-9;
    return {pass, fmt("100 slots per U in {2,4} x {fc,pc} (%zu singular draws skipped), %zu users, worst "
                      "interference/signal = %.3e",
                      nulling_set().skipped, checked, worst)};
}

Outcome normalization()
{
    double worst = 0.0;
    std::size_t columns = 0;
    for (const auto &slot : nulling_set().slots) {
        const CMatrix eff = slot.analog.f_rf * slot.f_bb;
        for (Eigen::Index u = 0; u < eff.cols(); ++u) {
            worst = std::max(worst, std::abs(eff.col(u).norm() - 1.0));
            ++columns;
        }
    }
    return {columns > 0 && worst <= 1e-9, fmt("%zu streams, max | ||F_RF f_u|| - 1 | = %.3e", columns, worst)};
}

Outcome codebook_nesting()
{
    const oracle::LinkModel model;
    const Codebook f1 = build_beam_codebook(model.bs_array(), 1);
    const Codebook w1 = build_beam_codebook(model.ue_array(), 1);
    const Codebook f4 = build_beam_codebook(model.bs_array(), 4);
    const Codebook w4 = build_beam_codebook(model.ue_array(), 4);
    std::size_t violations = 0;
    std::size_t strict = 0;
    double mean_gain_db = 0.0;
    for (std::size_t i = 0; i < 50; ++i) {
        const ChannelMatrix h = oracle::random_channel(seed, 1000 + i, 0, model);
        const double g1 = beam_search(h, f1, w1).effective_gain;
        const double g4 = beam_search(h, f4, w4).effective_gain;
        violations += !(g4 >= g1);
        strict += g4 > g1;
        mean_gain_db += 20.0 * std::log10(g4 / g1) / 50.0;
    }
    return {violations == 0, fmt("50 channels, gain(rho=4) >= gain(rho=1) in %zu/50 (strictly in %zu), mean "
                                 "improvement %.2f dB",
                                 50 - violations, strict, mean_gain_db)};
}

Outcome rank_one_oracle()
{
    const oracle::LinkModel model;
    std::size_t agree = 0;
    const std::size_t total = 100;
    for (std::size_t i = 0; i < total; ++i) {
        const std::size_t rho = 1 + i % 2;
        const Codebook f = build_beam_codebook(model.bs_array(), rho);
        const Codebook w = build_beam_codebook(model.ue_array(), rho);
        const auto r1 = oracle::random_rank_one(seed, i, model.bs_array(), model.ue_array());
        const BeamSelection sel = beam_search(r1.h, f, w);
        const std::size_t f_star = oracle::argmax_match(f, r1.a_t);
        const std::size_t w_star = oracle::argmax_match(w, r1.a_r);
        agree += sel.precoder_index == f_star && sel.combiner_index == w_star;
    }
    return {agree == total, fmt("%zu/%zu rank-1 channels (rho in {1,2}) select the separable argmax indices", agree,
                                total)};
}

Outcome quantization_ordering()
{
    const std::size_t slots = 50;
    const double r4 = mean_rate(seeded_slots(slots, seed + 5, hybrid(Structure::FullyConnected, 4, 4)));
    const double r8 = mean_rate(seeded_slots(slots, seed + 5, hybrid(Structure::FullyConnected, 4, 8)));
    const double r13 = mean_rate(seeded_slots(slots, seed + 5, hybrid(Structure::FullyConnected, 4, 13)));
    const auto perfect_slots = seeded_slots(slots, seed + 5, hybrid(Structure::FullyConnected, 4));
    const double rp = mean_rate(perfect_slots);
    const double slack = 0.01 * rp;
    const bool pass = r4 <= r8 + slack && r8 <= r13 + slack && r13 <= rp + slack;
    return {pass, fmt("U=4 fc, 50 slots: mean rate 4b %.4g <= 8b %.4g <= 13b %.4g <= perfect %.4g bit/s "
                      "(slack %.3g, singular %zu)",
                      r4, r8, r13, rp, slack, singular_count(perfect_slots))};
}

/// Same comparison on the committed canyon scene (reported, not gated).
struct CanyonMeans {
    double rate = 0.0;
    double ee = 0.0;
};

CanyonMeans canyon_means(const HybridConfig &cfg, std::size_t realizations, Baseband baseband)
{
    static const Scene scene = load_scene(scenes / "canyon.json");
    static const LinkTable links = build_links(scene, traced_rays(scene));
    MuMapOptions opt;
    opt.hybrid = cfg;
    opt.realizations = realizations;
    opt.seed = seed;
    opt.baseband = baseband;
    const MuMapResult r = mu_map(scene, links, opt);
    CanyonMeans m;
    std::size_t n = 0;
    for (std::size_t i = 0; i < r.realization_rates.size(); ++i) {
        for (std::size_t k = 0; k < r.realization_rates[i].size(); ++k) {
            m.rate += r.realization_rates[i][k];
            m.ee += r.realization_efficiency[i][k];
            ++n;
        }
    }
    if (n) {
        m.rate /= static_cast<double>(n);
        m.ee /= static_cast<double>(n);
    }
    return m;
}

Outcome structure_tradeoff()
{
    const HybridConfig fc = hybrid(Structure::FullyConnected, 4);
    const HybridConfig pc = hybrid(Structure::PartiallyConnected, 4, std::nullopt, 64);
    const PowerModel pm;
    const double den_fc = power_consumption(fc, pm, 256);
    const double den_pc = power_consumption(pc, pm, 256);
    const auto fc_slots = seeded_slots(50, seed + 6, fc);
    const auto pc_slots = seeded_slots(50, seed + 6, pc);
    const double rate_fc = mean_rate(fc_slots);
    const double rate_pc = mean_rate(pc_slots);
    const double ee_fc = mean_ee(fc_slots);
    const double ee_pc = mean_ee(pc_slots);
    const bool exact = den_fc == 46.24 && den_pc == 38.56;
    const bool pass = exact && rate_fc >= rate_pc && ee_pc >= ee_fc;
    const CanyonMeans cfc = canyon_means(fc, 15, Baseband::ZeroForcing);
    const CanyonMeans cpc = canyon_means(pc, 15, Baseband::ZeroForcing);
    return {pass, fmt("N_t=256 U=4 N_sub=64, 50 slots: denominators %.15g W / %.15g W (exact: %s); rate fc %.4g >= "
                      "pc %.4g: %s; EE pc %.4g >= fc %.4g bit/J: %s; canyon cross-check rate fc %.4g pc %.4g, EE fc "
                      "%.4g pc %.4g",
                      den_fc, den_pc, exact ? "yes" : "no", rate_fc, rate_pc, rate_fc >= rate_pc ? "yes" : "no", ee_pc,
                      ee_fc, ee_pc >= ee_fc ? "yes" : "no", cfc.rate, cpc.rate, cfc.ee, cpc.ee)};
}

Outcome user_count()
{
    const Scene scene = load_scene(scenes / "canyon.json");
    const LinkTable links = build_links(scene, traced_rays(scene));
    MuMapOptions opt;
    opt.realizations = 15;
    opt.seed = seed;
    opt.oversampling = 4;
    opt.hybrid = hybrid(Structure::FullyConnected, 6);
    const MuMapResult six = mu_map(scene, links, opt);
    opt.hybrid = hybrid(Structure::FullyConnected, 10);
    const MuMapResult ten = mu_map(scene, links, opt);
    const auto mean_of = [](const MuMapResult &r) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto &real : r.realization_rates)
            for (double v : real) {
                sum += v;
                ++n;
            }
        return sum / static_cast<double>(n);
    };
    const double m6 = mean_of(six);
    const double m10 = mean_of(ten);
    return {m10 <= m6, fmt("canyon, 15 realizations, rho=4: mean per-user rate U=10 %.4g <= U=6 %.4g bit/s "
                           "(singular slots %zu / %zu)",
                           m10, m6, ten.singular_slots, six.singular_slots)};
}

Outcome zf_vs_identity()
{
    const HybridConfig pc = hybrid(Structure::PartiallyConnected, 8, std::nullopt, 32);
    const double zf = mean_rate(seeded_slots(10, seed + 8, pc, Baseband::ZeroForcing));
    const double id = mean_rate(seeded_slots(10, seed + 8, pc, Baseband::Identity));
    const CanyonMeans czf = canyon_means(pc, 10, Baseband::ZeroForcing);
    const CanyonMeans cid = canyon_means(pc, 10, Baseband::Identity);
    return {zf >= id, fmt("pc 8 x 32, 10 slots: mean rate ZF %.4g >= identity %.4g bit/s; canyon cross-check ZF "
                          "%.4g identity %.4g",
                          zf, id, czf.rate, cid.rate)};
}

Outcome blockage_map()
{
    const Scene trucks = load_scene(scenes / "canyon_trucks.json");
    const Scene open = load_scene(scenes / "canyon.json");
    const LinkTable links = build_links(trucks, traced_rays(trucks));
    const LinkTable open_links = build_links(open, traced_rays(open));
    const RateMap map = su_map(trucks, links, 1);
    std::size_t reflected = 0;
    double blocked_sum = 0.0;
    double clear_sum = 0.0;
    std::size_t blocked = 0;
    std::size_t clear = 0;
    for (std::size_t p = 0; p < map.size(); ++p) {
        const bool was_los = open_links.state(0, p) == LinkState::Los;
        if (links.state(0, p) == LinkState::Los) {
            clear_sum += map.values[p];
            ++clear;
        } else if (was_los) {
            blocked_sum += map.values[p];
            ++blocked;
            const auto &rays = links.rays[p].rays;
            const bool wall = std::any_of(rays.begin(), rays.end(), [](const Ray &r) { return r.bounces > 0; });
            reflected += wall && map.values[p] > 0.0;
        }
    }
    const double mean_blocked = blocked ? blocked_sum / static_cast<double>(blocked) : 0.0;
    const double mean_clear = clear ? clear_sum / static_cast<double>(clear) : 0.0;
    const bool pass = reflected >= 1 && blocked > 0 && clear > 0 && mean_blocked < mean_clear;
    return {pass, fmt("%zu truck-blocked points (%zu served by reflections), mean blocked %.4g < unblocked %.4g bit/s",
                      blocked, reflected, mean_blocked, mean_clear)};
}

Outcome noise_constants()
{
    const double n850 = noise_power_dbm(850e6);
    const double n16 = noise_power_dbm(1.6e9);
    const bool pass = std::abs(n850 - -84.51) <= 0.01 && std::abs(n16 - -81.76) <= 0.01;
    return {pass, fmt("noise(850 MHz) = %.4f dBm, noise(1.6 GHz) = %.4f dBm", n850, n16)};
}

Outcome outage_hand_cases()
{
    const std::vector<double> s{1e9, 2e9, 3e9, 4e9, 5e9};
    const double p = outage_probability(s, 3e9);
    const double r = rate_with_outage(s, 0.2);
    return {p == 0.4 && r == 2e9, fmt("P_out(3 Gbps) = %.17g, R_0.2 = %.17g bit/s", p, r)};
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism(double elapsed_before)
{
    const auto start = std::chrono::steady_clock::now();
    const fs::path root = fs::temp_directory_path() / "canyonwave_acceptance";
    fs::remove_all(root);
    RunConfig cfg;
    cfg.scene_path = scenes / "canyon_trucks.json";
    cfg.mode = RunMode::MultiUser;
    cfg.users = 4;
    cfg.feedback_bits = 8;
    cfg.realizations = 10;
    cfg.oversampling = 2;
    cfg.seed = seed;
    std::vector<fs::path> dirs;
    std::size_t files = 0;
    bool identical = true;
    for (unsigned threads : {1u, 1u, 4u}) {
        cfg.threads = threads;
        cfg.out_dir = root / fmt("run%zu_t%u", dirs.size(), threads);
        const RunSummary summary = run(cfg);
        dirs.push_back(cfg.out_dir);
        files = summary.artifacts.size();
        for (const auto &a : summary.artifacts)
            identical = identical && slurp(dirs.front() / a) == slurp(cfg.out_dir / a) && !slurp(cfg.out_dir / a).empty();
    }
    fs::remove_all(root);
    const double own = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double total = elapsed_before + own;
    return {identical && total < 600.0,
            fmt("3 MU runs (threads 1, 1, 4): %zu artifacts each, byte-identical = %s; suite runtime %.1f s (< 600 s)",
                files, identical ? "yes" : "no", total)};
}

} // namespace

int main()
{
    const auto start = std::chrono::steady_clock::now();
    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
        {"zf-nulling", zf_nulling},
        {"normalization", normalization},
        {"codebook-nesting", codebook_nesting},
        {"rank-one-search", rank_one_oracle},
        {"quantization-ordering", quantization_ordering},
        {"structure-tradeoff", structure_tradeoff},
        {"user-count-degradation", user_count},
        {"zf-vs-identity", zf_vs_identity},
        {"blockage-map", blockage_map},
        {"noise-constants", noise_constants},
        {"outage-estimator", outage_hand_cases},
    };
    int failures = 0;
    int index = 1;
    const auto print = [&](const char *name, const Outcome &o, double seconds) {
        std::printf("%s %2d %-24s %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", index++, name, o.detail.c_str(), seconds);
        std::fflush(stdout);
        failures += !o.pass;
    };
    for (const auto &[name, fn] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        print(name, o, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        const double before = std::chrono::duration<double>(t0 - start).count();
        Outcome o;
        try {
            o = determinism(before);
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        print("determinism", o, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    std::printf("%d/12 criteria passed\n", 12 - failures);
    return failures == 0 ? 0 : 1;
}
