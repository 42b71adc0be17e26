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

#include "canyonwave/beamforming.hpp"

#include <cmath>
#include <string>

#include "canyonwave/errors.hpp"

namespace canyonwave {

double noise_power_dbm(double bandwidth_hz)
{
    if (!(bandwidth_hz > 0.0))
        throw ValidationError("noise_power: bandwidth must be > 0");
    return -173.8 + 10.0 * std::log10(bandwidth_hz);
}

double beam_gain(const ChannelMatrix &h, const CVector &combiner, const CVector &precoder)
{
    const CVector hf = h.entries * precoder;
    return std::abs(combiner.dot(hf));
}

BeamSelection beam_search(const ChannelMatrix &h, const Codebook &precoders, const Codebook &combiners)
{
    if (precoders.size() == 0 || combiners.size() == 0)
        throw EmptyCodebookError("beam_search: codebooks must not be empty");
    if (precoders.dimension() != h.tx_antennas() || combiners.dimension() != h.rx_antennas())
        throw DimensionError("beam_search: channel is " + std::to_string(h.rx_antennas()) + "x" +
                             std::to_string(h.tx_antennas()) + " but codebooks have dimensions " +
                             std::to_string(combiners.dimension()) + " (rx) and " +
                             std::to_string(precoders.dimension()) + " (tx)");

    BeamSelection best;
    best.effective_gain = -1.0;
    CVector hf(h.entries.rows());
    for (std::size_t j = 0; j < precoders.size(); ++j) {
        hf.noalias() = h.entries * precoders.vectors[j];
        for (std::size_t i = 0; i < combiners.size(); ++i) {
            const double g = std::abs(combiners.vectors[i].dot(hf));
            const bool better = g > best.effective_gain ||
                                (g == best.effective_gain &&
                                 (i < best.combiner_index || (i == best.combiner_index && j < best.precoder_index)));
            if (better) {
                best.effective_gain = g;
                best.combiner_index = i;
                best.precoder_index = j;
            }
        }
    }
    return best;
}

double su_rate(const BeamSelection &selection, const LinkBudget &budget)
{
    const double g = selection.effective_gain;
    const double snr = budget.tx_power_w() * g * g / budget.noise_w();
    return budget.bandwidth_hz * std::log2(1.0 + snr);
}

double su_rate(const ChannelMatrix &h, const BeamSelection &selection, const Codebook &precoders,
               const Codebook &combiners, const LinkBudget &budget)
{
    if (selection.precoder_index >= precoders.size() || selection.combiner_index >= combiners.size())
        throw DimensionError("su_rate: selection indexes outside the codebooks");
    const double g = beam_gain(h, combiners.vectors[selection.combiner_index], precoders.vectors[selection.precoder_index]);
    if (std::abs(g - selection.effective_gain) > 1e-12 * std::max(1.0, g))
        throw ValidationError("su_rate: selection gain does not match the channel");
    return su_rate(selection, budget);
}

} // namespace canyonwave
