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

#include <cmath>

#include "canyonwave/beamforming.hpp"
#include "canyonwave/errors.hpp"
#include "canyonwave/random.hpp"

#include "oracles.hpp"

using namespace canyonwave;

TEST_CASE("thermal noise floor")
{
    CHECK(noise_power_dbm(1.0) == doctest::Approx(-173.8));
    CHECK(noise_power_dbm(850e6) == doctest::Approx(-84.51).epsilon(0.01 / 84.51));
    CHECK(noise_power_dbm(1.6e9) == doctest::Approx(-81.76).epsilon(0.01 / 81.76));
    CHECK(noise_power_dbm(850e6) == doctest::Approx(oracle::noise_dbm(850e6)).epsilon(1e-15));
    CHECK_THROWS_AS((void)noise_power_dbm(0.0), ValidationError);
    CHECK(LinkBudget{}.noise_w() == doctest::Approx(oracle::dbm_to_w(-84.50581074285708)).epsilon(1e-12));
}

TEST_CASE("beam search")
{
    const auto tx = ArrayGeometry::half_wavelength(4, 4, 28e9);
    const auto rx = ArrayGeometry::half_wavelength(2, 2, 28e9);
    const Codebook f1 = build_beam_codebook(tx, 1);
    const Codebook w1 = build_beam_codebook(rx, 1);

    SUBCASE("all-zero channel picks (0, 0)")
    {
        ChannelMatrix h;
        h.entries = CMatrix::Zero(4, 16);
        const BeamSelection s = beam_search(h, f1, w1);
        CHECK(s.effective_gain == 0.0);
        CHECK(s.precoder_index == 0);
        CHECK(s.combiner_index == 0);
    }
    SUBCASE("matched rank-one channel returns its own codewords")
    {
        const std::size_t pi = 2 * 4 + 1;
        const std::size_t ci = 1 * 2 + 0;
        ChannelMatrix h;
        h.entries = w1.vectors[ci] * f1.vectors[pi].adjoint();
        const BeamSelection s = beam_search(h, f1, w1);
        CHECK(s.precoder_index == pi);
        CHECK(s.combiner_index == ci);
        CHECK(s.effective_gain == doctest::Approx(1.0).epsilon(1e-13));
    }
    SUBCASE("seeded rank-one channels match the separable oracle")
    {
        for (std::size_t rho : {1, 2}) {
            const Codebook f = build_beam_codebook(tx, rho);
            const Codebook w = build_beam_codebook(rx, rho);
            for (std::uint64_t i = 0; i < 25; ++i) {
                const auto r = oracle::random_rank_one(77, i, tx, rx);
                const BeamSelection s = beam_search(r.h, f, w);
                CHECK(s.precoder_index == oracle::argmax_match(f, r.a_t));
                CHECK(s.combiner_index == oracle::argmax_match(w, r.a_r));
            }
        }
    }
    SUBCASE("multipath channels: brute force and random re-verification")
    {
        const oracle::LinkModel m;
        const Codebook f = build_beam_codebook(m.bs_array(), 1);
        const Codebook w = build_beam_codebook(m.ue_array(), 1);
        for (std::uint64_t i = 0; i < 4; ++i) {
            const ChannelMatrix h = oracle::random_channel(5, i, 0);
            const BeamSelection s = beam_search(h, f, w);
            CHECK(s.effective_gain == doctest::Approx(oracle::brute_force_best_gain(h, f, w)).epsilon(1e-12));
            CHECK(s.effective_gain ==
                  doctest::Approx(oracle::naive_gain(h, w.vectors[s.combiner_index], f.vectors[s.precoder_index]))
                      .epsilon(1e-12));
            KeyedStream rng(5, {i});
            for (int k = 0; k < 1000; ++k) {
                const auto &fv = f.vectors[rng.below(f.size())];
                const auto &wv = w.vectors[rng.below(w.size())];
                CHECK(oracle::naive_gain(h, wv, fv) <= s.effective_gain * (1 + 1e-12));
            }
        }
    }
    SUBCASE("contract violations")
    {
        ChannelMatrix h;
        h.entries = CMatrix::Zero(4, 16);
        CHECK_THROWS_AS((void)beam_search(h, Codebook{}, w1), EmptyCodebookError);
        CHECK_THROWS_AS((void)beam_search(h, f1, Codebook{}), EmptyCodebookError);
        CHECK_THROWS_AS((void)beam_search(h, w1, f1), DimensionError);
    }
}

TEST_CASE("single-user rate")
{
    LinkBudget budget{0.0, 850e6};

    SUBCASE("zero gain gives zero rate")
    {
        CHECK(su_rate(BeamSelection{0, 0, 0.0}, budget) == 0.0);
    }
    SUBCASE("unit gain at 0 dBm over 850 MHz")
    {
        const double r = su_rate(BeamSelection{0, 0, 1.0}, budget);
        CHECK(r == doctest::Approx(2.386e10).epsilon(0.005));
        CHECK(r == doctest::Approx(23861389289.81938).epsilon(1e-12));
    }
    SUBCASE("doubling the power adds about one bit per hertz at high SNR")
    {
        const double r0 = su_rate(BeamSelection{0, 0, 1.0}, budget);
        budget.tx_power_dbm = 10.0 * std::log10(2.0);
        const double r1 = su_rate(BeamSelection{0, 0, 1.0}, budget);
        CHECK(r1 - r0 == doctest::Approx(850e6).epsilon(1e-3));
    }
    SUBCASE("strictly increasing in gain and power")
    {
        double last = 0.0;
        for (double g = 1e-6; g < 1.0; g *= 3.0) {
            const double r = su_rate(BeamSelection{0, 0, g}, budget);
            CHECK(r > last);
            last = r;
        }
        const double low = su_rate(BeamSelection{0, 0, 1e-5}, budget);
        budget.tx_power_dbm = 1.0;
        CHECK(su_rate(BeamSelection{0, 0, 1e-5}, budget) > low);
    }
    SUBCASE("checked overload recomputes the gain")
    {
        const auto tx = ArrayGeometry::half_wavelength(4, 4, 28e9);
        const auto rx = ArrayGeometry::half_wavelength(2, 2, 28e9);
        const Codebook f = build_beam_codebook(tx, 1);
        const Codebook w = build_beam_codebook(rx, 1);
        const auto r = oracle::random_rank_one(3, 0, tx, rx);
        const BeamSelection s = beam_search(r.h, f, w);
        CHECK(su_rate(r.h, s, f, w, budget) == su_rate(s, budget));
        BeamSelection wrong = s;
        wrong.effective_gain *= 2.0;
        CHECK_THROWS_AS((void)su_rate(r.h, wrong, f, w, budget), ValidationError);
        wrong.precoder_index = f.size();
        CHECK_THROWS_AS((void)su_rate(r.h, wrong, f, w, budget), DimensionError);
    }
}
