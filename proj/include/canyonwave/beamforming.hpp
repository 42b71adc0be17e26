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

#include "canyonwave/phy.hpp"

namespace canyonwave {

/// Thermal noise over bandwidth B: -173.8 + 10 log10(B) dBm.
[[nodiscard]] double noise_power_dbm(double bandwidth_hz);

struct LinkBudget {
    double tx_power_dbm = 10.0;
    double bandwidth_hz = 850e6;

    [[nodiscard]] double noise_dbm() const { return noise_power_dbm(bandwidth_hz); }
    [[nodiscard]] double tx_power_w() const { return dbm_to_watt(tx_power_dbm); }
    [[nodiscard]] double noise_w() const { return dbm_to_watt(noise_dbm()); }
};

struct BeamSelection {
    std::size_t precoder_index = 0; // into the BS codebook
    std::size_t combiner_index = 0; // into the vehicle codebook
    double effective_gain = 0.0;    // |w^H H f|
};

/// |w^H H f| for the given codewords.
[[nodiscard]] double beam_gain(const ChannelMatrix &h, const CVector &combiner, const CVector &precoder);

/// Exhaustive search over every (combiner, precoder) pair for the largest
/// |w^H H f|. Ties go to the lowest (combiner_index, precoder_index).
[[nodiscard]] BeamSelection beam_search(const ChannelMatrix &h, const Codebook &precoders,
                                        const Codebook &combiners);

/// Single-user rate B log2(1 + P |w^H H f|^2 / sigma^2) in bit/s.
[[nodiscard]] double su_rate(const BeamSelection &selection, const LinkBudget &budget);

/// Same as above, checking the selection against H and the codebooks first.
[[nodiscard]] double su_rate(const ChannelMatrix &h, const BeamSelection &selection, const Codebook &precoders,
                             const Codebook &combiners, const LinkBudget &budget);

} // namespace canyonwave
