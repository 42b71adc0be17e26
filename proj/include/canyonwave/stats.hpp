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
#include <span>
#include <vector>

#include <json.hpp>

namespace canyonwave {

/// Service thresholds in bit/s: collective perception (1 Gbps), video sharing
/// (500 Mbps) and info sharing for level 2/3 automation (50 Mbps), in that order.
[[nodiscard]] std::vector<double> default_target_rates();

struct CoverageReport {
    std::vector<double> target_rates;     // bit/s
    std::vector<double> coverage_percent; // parallel to target_rates
    double mean_rate = 0.0;               // mean of the realization means
    double std_dev = 0.0;                 // sample std-dev of the realization means
    std::size_t realization_count = 0;
};

/// coverage(t) = 100 * #{r >= t} / #samples over all samples pooled;
/// mean_rate and std_dev summarize the per-realization means. Empty
/// realizations are ignored; throws EmptySampleError when nothing is left.
[[nodiscard]] CoverageReport coverage(std::span<const std::vector<double>> realizations,
                                      std::span<const double> targets);

/// Single-realization convenience overload.
[[nodiscard]] CoverageReport coverage(std::span<const double> samples, std::span<const double> targets);

/// Empirical P[rate < threshold].
[[nodiscard]] double outage_probability(std::span<const double> samples, double threshold);

/// Largest sample z with P[rate < z] <= epsilon. With `throughput` the result is
/// scaled by (1 - epsilon).
[[nodiscard]] double rate_with_outage(std::span<const double> samples, double epsilon, bool throughput = false);

[[nodiscard]] nlohmann::json to_json(const CoverageReport &report);

} // namespace canyonwave
