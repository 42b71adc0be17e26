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

#include "canyonwave/hybrid.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "canyonwave/errors.hpp"

namespace canyonwave {

namespace {

double condition_number(const CMatrix &m)
{
    const Eigen::JacobiSVD<CMatrix> svd(m);
    const auto &s = svd.singularValues();
    if (s.size() == 0)
        return std::numeric_limits<double>::infinity();
    const double smin = s[s.size() - 1];
    if (!(smin > 0.0))
        return std::numeric_limits<double>::infinity();
    return s[0] / smin;
}

} // namespace

void HybridConfig::validate(std::size_t n_t) const
{
    if (users < 1)
        throw ValidationError("HybridConfig: at least one user per slot is required");
    if (structure == Structure::PartiallyConnected) {
        const std::size_t sub = subarray(n_t);
        if (sub < 1 || users * sub != n_t)
            throw ValidationError("HybridConfig: partially-connected needs users * subarray_size == N_t (" +
                                  std::to_string(users) + " * " + std::to_string(sub) + " != " +
                                  std::to_string(n_t) + ")");
    }
}

ArrayGeometry subarray_geometry(const ArrayGeometry &full, std::size_t elements)
{
    ArrayGeometry sub = full;
    if (elements >= full.rows && elements % full.rows == 0 && elements / full.rows <= full.cols) {
        sub.cols = elements / full.rows;
    } else if (elements < full.rows && full.rows % elements == 0) {
        sub.rows = elements;
        sub.cols = 1;
    } else {
        throw ValidationError("subarray_geometry: " + std::to_string(elements) + " elements do not tile a " +
                              std::to_string(full.rows) + "x" + std::to_string(full.cols) + " array");
    }
    return sub;
}

AnalogStage analog_stage(std::span<const ChannelMatrix> channels, const Codebook &precoders,
                         const Codebook &combiners, const HybridConfig &config)
{
    if (channels.size() != config.users)
        throw DimensionError("analog_stage: expected " + std::to_string(config.users) + " channels, got " +
                             std::to_string(channels.size()));
    const std::size_t n_t = channels.front().tx_antennas();
    for (const auto &h : channels) {
        if (h.tx_antennas() != n_t || h.rx_antennas() != channels.front().rx_antennas())
            throw DimensionError("analog_stage: channels have inconsistent dimensions");
    }
    config.validate(n_t);

    const auto u_count = static_cast<Eigen::Index>(config.users);
    AnalogStage stage;
    stage.f_rf = CMatrix::Zero(static_cast<Eigen::Index>(n_t), u_count);
    stage.combiners.reserve(config.users);
    stage.selections.reserve(config.users);

    if (config.structure == Structure::FullyConnected) {
        for (std::size_t u = 0; u < config.users; ++u) {
            const BeamSelection sel = beam_search(channels[u], precoders, combiners);
            stage.f_rf.col(static_cast<Eigen::Index>(u)) = precoders.vectors[sel.precoder_index];
            stage.combiners.push_back(combiners.vectors[sel.combiner_index]);
            stage.selections.push_back(sel);
        }
        return stage;
    }

    const std::size_t sub = config.subarray(n_t);
    if (precoders.dimension() != sub)
        throw DimensionError("analog_stage: subarray codebook has dimension " + std::to_string(precoders.dimension()) +
                             ", expected " + std::to_string(sub));
    for (std::size_t u = 0; u < config.users; ++u) {
        const auto offset = static_cast<Eigen::Index>(u * sub);
        ChannelMatrix block;
        block.tx_index = channels[u].tx_index;
        block.rx_index = channels[u].rx_index;
        block.entries = channels[u].entries.middleCols(offset, static_cast<Eigen::Index>(sub));
        const BeamSelection sel = beam_search(block, precoders, combiners);
        stage.f_rf.col(static_cast<Eigen::Index>(u)).segment(offset, static_cast<Eigen::Index>(sub)) =
            precoders.vectors[sel.precoder_index];
        stage.combiners.push_back(combiners.vectors[sel.combiner_index]);
        stage.selections.push_back(sel);
    }
    return stage;
}

CVector effective_channel(const ChannelMatrix &h, const CVector &combiner, const CMatrix &f_rf)
{
    // (w^H H F)^H = F^H H^H w
    return f_rf.adjoint() * (h.entries.adjoint() * combiner);
}

QuantizedChannel quantize_effective(const CVector &h, const Codebook &codebook)
{
    if (codebook.size() == 0)
        throw EmptyCodebookError("quantize_effective: empty codebook");
    if (codebook.dimension() != static_cast<std::size_t>(h.size()))
        throw DimensionError("quantize_effective: codebook dimension " + std::to_string(codebook.dimension()) +
                             " does not match channel length " + std::to_string(h.size()));
    std::size_t best = 0;
    double best_metric = -1.0;
    for (std::size_t i = 0; i < codebook.size(); ++i) {
        const double metric = std::abs(h.dot(codebook.vectors[i]));
        if (metric > best_metric) {
            best_metric = metric;
            best = i;
        }
    }
    return {codebook.vectors[best], best};
}

QuantizedChannel perfect_feedback(const CVector &h)
{
    const double n = h.norm();
    if (n == 0.0)
        return {h, 0};
    return {h / n, 0};
}

CMatrix zf_unnormalized(std::span<const CVector> quantized, double max_condition)
{
    const auto u = static_cast<Eigen::Index>(quantized.size());
    if (u == 0)
        throw DimensionError("zf_precoder: no users");
    CMatrix stacked(u, u);
    for (Eigen::Index i = 0; i < u; ++i) {
        if (quantized[static_cast<std::size_t>(i)].size() != u)
            throw DimensionError("zf_precoder: feedback vectors must have length U");
        stacked.row(i) = quantized[static_cast<std::size_t>(i)].adjoint();
    }
    const double cond = condition_number(stacked);
    if (!(cond <= max_condition))
        throw SingularMatrixError("zf_precoder: stacked feedback matrix is singular (condition number " +
                                  std::to_string(cond) + ")");
    const CMatrix gram = stacked * stacked.adjoint();
    return stacked.adjoint() * gram.partialPivLu().solve(CMatrix::Identity(u, u));
}

CMatrix normalize_baseband(const CMatrix &f_rf, CMatrix f_bb)
{
    for (Eigen::Index u = 0; u < f_bb.cols(); ++u) {
        const double n = (f_rf * f_bb.col(u)).norm();
        if (!(n > 0.0))
            throw SingularMatrixError("normalize_baseband: stream " + std::to_string(u) + " has zero norm");
        f_bb.col(u) /= n;
    }
    return f_bb;
}

CMatrix zf_precoder(std::span<const CVector> quantized, const CMatrix &f_rf, double max_condition)
{
    return normalize_baseband(f_rf, zf_unnormalized(quantized, max_condition));
}

CMatrix identity_baseband(const CMatrix &f_rf)
{
    return normalize_baseband(f_rf, CMatrix::Identity(f_rf.cols(), f_rf.cols()));
}

std::vector<StreamTerms> stream_terms(std::span<const ChannelMatrix> channels, std::span<const CVector> combiners,
                                      const CMatrix &f_rf, const CMatrix &f_bb)
{
    if (channels.size() != combiners.size() || static_cast<std::size_t>(f_bb.cols()) != channels.size() ||
        f_rf.cols() != f_bb.rows())
        throw DimensionError("mu_rate: inconsistent slot dimensions");
    const CMatrix precoder = f_rf * f_bb;
    std::vector<StreamTerms> terms(channels.size());
    for (std::size_t u = 0; u < channels.size(); ++u) {
        if (channels[u].tx_antennas() != static_cast<std::size_t>(f_rf.rows()))
            throw DimensionError("mu_rate: channel and precoder disagree on N_t");
        const Eigen::RowVectorXcd row = combiners[u].adjoint() * channels[u].entries * precoder;
        for (Eigen::Index n = 0; n < row.size(); ++n) {
            const double p = std::norm(row[n]);
            if (static_cast<std::size_t>(n) == u)
                terms[u].signal = p;
            else
                terms[u].interference += p;
        }
    }
    return terms;
}

std::vector<double> mu_rate(std::span<const ChannelMatrix> channels, std::span<const CVector> combiners,
                            const CMatrix &f_rf, const CMatrix &f_bb, const LinkBudget &budget)
{
    const auto terms = stream_terms(channels, combiners, f_rf, f_bb);
    const double per_stream = budget.tx_power_w() / static_cast<double>(channels.size());
    const double noise = budget.noise_w();
    std::vector<double> rates;
    rates.reserve(terms.size());
    for (const auto &t : terms) {
        const double sinr = per_stream * t.signal / (per_stream * t.interference + noise);
        rates.push_back(budget.bandwidth_hz * std::log2(1.0 + sinr));
    }
    return rates;
}

double power_consumption(const HybridConfig &config, const PowerModel &power, std::size_t n_t)
{
    const auto n_rf = static_cast<double>(config.rf_chains());
    const auto antennas = static_cast<double>(n_t);
    const double n_ps = config.structure == Structure::FullyConnected ? antennas * n_rf : antennas;
    return power.common_w + n_rf * power.rf_chain_w + antennas * power.amplifier_w + n_ps * power.phase_shifter_w;
}

double energy_efficiency(double rate, const HybridConfig &config, const PowerModel &power, std::size_t n_t)
{
    if (rate < 0.0)
        throw ValidationError("energy_efficiency: rate must be >= 0");
    return rate / power_consumption(config, power, n_t);
}

MultiuserSlot evaluate_slot(std::span<const ChannelMatrix> channels, std::span<const std::size_t> user_indices,
                            const Codebook &precoders, const Codebook &combiners, const Codebook *rvq,
                            const HybridConfig &config, const LinkBudget &budget, const PowerModel &power,
                            Baseband baseband)
{
    if (!config.perfect_csit() && rvq == nullptr)
        throw ValidationError("evaluate_slot: limited feedback requires an RVQ codebook");

    MultiuserSlot slot;
    slot.user_indices.assign(user_indices.begin(), user_indices.end());
    slot.analog = analog_stage(channels, precoders, combiners, config);
    const std::size_t u_count = config.users;
    const std::size_t n_t = channels.front().tx_antennas();

    slot.effective.reserve(u_count);
    slot.quantized.reserve(u_count);
    for (std::size_t u = 0; u < u_count; ++u) {
        slot.effective.push_back(effective_channel(channels[u], slot.analog.combiners[u], slot.analog.f_rf));
        slot.quantized.push_back(config.perfect_csit() ? perfect_feedback(slot.effective.back())
                                                       : quantize_effective(slot.effective.back(), *rvq));
    }

    const auto zero_slot = [&] {
        slot.singular = true;
        slot.f_bb = CMatrix::Zero(static_cast<Eigen::Index>(u_count), static_cast<Eigen::Index>(u_count));
        slot.terms.assign(u_count, StreamTerms{});
        slot.rate.assign(u_count, 0.0);
        slot.energy_efficiency.assign(u_count, 0.0);
        return slot;
    };

    try {
        if (baseband == Baseband::ZeroForcing) {
            // duplicate analog beams leave fewer independent streams than users
            if (!(condition_number(slot.analog.f_rf) <= singular_condition_limit))
                return zero_slot();
            std::vector<CVector> feedback;
            feedback.reserve(u_count);
            for (const auto &q : slot.quantized)
                feedback.push_back(q.direction);
            slot.f_bb = zf_precoder(feedback, slot.analog.f_rf);
        } else {
            slot.f_bb = identity_baseband(slot.analog.f_rf);
        }
    } catch (const SingularMatrixError &) {
        return zero_slot();
    }

    slot.terms = stream_terms(channels, slot.analog.combiners, slot.analog.f_rf, slot.f_bb);
    slot.rate = mu_rate(channels, slot.analog.combiners, slot.analog.f_rf, slot.f_bb, budget);
    slot.energy_efficiency.reserve(u_count);
    for (double r : slot.rate)
        slot.energy_efficiency.push_back(energy_efficiency(r, config, power, n_t));
    return slot;
}

} // namespace canyonwave
