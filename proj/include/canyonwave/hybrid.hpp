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
#include <optional>
#include <span>
#include <vector>

#include "canyonwave/beamforming.hpp"
#include "canyonwave/phy.hpp"

namespace canyonwave {

enum class Structure { FullyConnected, PartiallyConnected };

/// Multiuser hybrid precoder settings. One RF chain per served user.
struct HybridConfig {
    Structure structure = Structure::FullyConnected;
    std::size_t users = 1;                     // U, also the RF chain count
    std::optional<unsigned> feedback_bits;     // empty = perfect CSIT
    std::size_t subarray_size = 0;             // partially-connected only; 0 = N_t / U

    [[nodiscard]] std::size_t rf_chains() const { return users; }
    [[nodiscard]] bool perfect_csit() const { return !feedback_bits.has_value(); }
    [[nodiscard]] std::size_t subarray(std::size_t n_t) const { return subarray_size ? subarray_size : n_t / users; }
    void validate(std::size_t n_t) const;
};

/// Transmitter power draw, all in watts.
struct PowerModel {
    double common_w = 10.0;
    double rf_chain_w = 0.1;
    double amplifier_w = 0.1;
    double phase_shifter_w = 0.01;
};

/// Subarray of `full` holding `elements` consecutive entries of the flattened
/// array (whole columns when elements is a multiple of the row count).
[[nodiscard]] ArrayGeometry subarray_geometry(const ArrayGeometry &full, std::size_t elements);

struct AnalogStage {
    CMatrix f_rf; // N_t x U; block diagonal for the partially-connected structure
    std::vector<CVector> combiners;
    std::vector<BeamSelection> selections;
};

/// Per-user beam search. Fully-connected: column u is the best full-array
/// codeword for user u. Partially-connected: `precoders` is the subarray
/// codebook and block u (antennas [u N_sub, (u+1) N_sub)) is searched against
/// user u's channel restricted to those antennas.
[[nodiscard]] AnalogStage analog_stage(std::span<const ChannelMatrix> channels, const Codebook &precoders,
                                       const Codebook &combiners, const HybridConfig &config);

/// h_u with h_u^H = w_u^H H_u F_RF.
[[nodiscard]] CVector effective_channel(const ChannelMatrix &h, const CVector &combiner, const CMatrix &f_rf);

struct QuantizedChannel {
    CVector direction;
    std::size_t index = 0; // codeword index; 0 under perfect CSIT
};

/// RVQ feedback: the codeword maximizing |h^H c|, lowest index on ties.
[[nodiscard]] QuantizedChannel quantize_effective(const CVector &h, const Codebook &codebook);

/// Perfect CSIT: the unit-norm direction of h. A zero vector stays zero.
[[nodiscard]] QuantizedChannel perfect_feedback(const CVector &h);

/// Default condition-number limit above which a matrix is treated as singular.
inline constexpr double singular_condition_limit = 1e10;

/// Zero forcing on the stacked feedback (row u = q_u^H): F_BB = Q^H (Q Q^H)^{-1},
/// before normalization. Throws SingularMatrixError when Q is ill-conditioned.
[[nodiscard]] CMatrix zf_unnormalized(std::span<const CVector> quantized,
                                      double max_condition = singular_condition_limit);

/// Scales every column so that ||F_RF f_u|| = 1.
[[nodiscard]] CMatrix normalize_baseband(const CMatrix &f_rf, CMatrix f_bb);

/// Normalized zero-forcing baseband precoder.
[[nodiscard]] CMatrix zf_precoder(std::span<const CVector> quantized, const CMatrix &f_rf,
                                  double max_condition = singular_condition_limit);

/// F_BB = I_U followed by the same normalization (no digital precoding).
[[nodiscard]] CMatrix identity_baseband(const CMatrix &f_rf);

struct StreamTerms {
    double signal = 0.0;       // |w_u^H H_u F_RF f_u|^2
    double interference = 0.0; // sum over n != u of |w_u^H H_u F_RF f_n|^2
};

/// |w_u^H H_u F_RF f_n|^2 split into the own-stream and cross-stream parts.
[[nodiscard]] std::vector<StreamTerms> stream_terms(std::span<const ChannelMatrix> channels,
                                                    std::span<const CVector> combiners, const CMatrix &f_rf,
                                                    const CMatrix &f_bb);

/// Per-user SINR rates with transmit power split evenly over the U streams.
[[nodiscard]] std::vector<double> mu_rate(std::span<const ChannelMatrix> channels, std::span<const CVector> combiners,
                                          const CMatrix &f_rf, const CMatrix &f_bb, const LinkBudget &budget);

/// P_common + N_RF P_RF + N_t P_PA + N_PS P_PS, with N_PS = N_t N_RF
/// (fully-connected) or N_t (partially-connected).
[[nodiscard]] double power_consumption(const HybridConfig &config, const PowerModel &power, std::size_t n_t);

/// Rate per consumed watt, bit/J.
[[nodiscard]] double energy_efficiency(double rate, const HybridConfig &config, const PowerModel &power,
                                       std::size_t n_t);

enum class Baseband { ZeroForcing, Identity };

/// Full evaluation of one scheduling slot.
struct MultiuserSlot {
    std::vector<std::size_t> user_indices;
    AnalogStage analog;
    std::vector<CVector> effective;           // true h_u
    std::vector<QuantizedChannel> quantized;  // fed back
    CMatrix f_bb;
    std::vector<StreamTerms> terms;
    std::vector<double> rate;
    std::vector<double> energy_efficiency;
    bool singular = false; // rates forced to zero
};

/// Runs analog stage, feedback, baseband precoding and rate/EE evaluation.
/// `rvq` is required unless config.perfect_csit(). When the stacked feedback or
/// the analog precoder is rank deficient the slot is kept with all-zero rates
/// and `singular` set.
[[nodiscard]] MultiuserSlot evaluate_slot(std::span<const ChannelMatrix> channels,
                                          std::span<const std::size_t> user_indices, const Codebook &precoders,
                                          const Codebook &combiners, const Codebook *rvq, const HybridConfig &config,
                                          const LinkBudget &budget, const PowerModel &power,
                                          Baseband baseband = Baseband::ZeroForcing);

} // namespace canyonwave
