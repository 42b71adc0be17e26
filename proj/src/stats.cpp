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

#include "canyonwave/stats.hpp"

#include <algorithm>
#include <cmath>

#include "canyonwave/errors.hpp"

namespace canyonwave {

std::vector<double> default_target_rates() { return {1e9, 500e6, 50e6}; }

CoverageReport coverage(std::span<const std::vector<double>> realizations, std::span<const double> targets)
{
    CoverageReport report;
    report.target_rates.assign(targets.begin(), targets.end());

    std::vector<double> means;
    std::size_t total = 0;
    std::vector<std::size_t> hits(targets.size(), 0);
    for (const auto &samples : realizations) {
        if (samples.empty())
            continue;
        double sum = 0.0;
        for (double r : samples) {
            sum += r;
            for (std::size_t t = 0; t < targets.size(); ++t) {
                if (r >= targets[t])
                    ++hits[t];
            }
        }
        total += samples.size();
        means.push_back(sum / static_cast<double>(samples.size()));
    }
    if (total == 0)
        throw EmptySampleError("coverage: no samples");

    for (std::size_t t = 0; t < targets.size(); ++t)
        report.coverage_percent.push_back(100.0 * static_cast<double>(hits[t]) / static_cast<double>(total));

    report.realization_count = means.size();
    double sum = 0.0;
    for (double m : means)
        sum += m;
    report.mean_rate = sum / static_cast<double>(means.size());
    if (means.size() > 1) {
        double ss = 0.0;
        for (double m : means)
            ss += (m - report.mean_rate) * (m - report.mean_rate);
        report.std_dev = std::sqrt(ss / static_cast<double>(means.size() - 1));
    }
    return report;
}

CoverageReport coverage(std::span<const double> samples, std::span<const double> targets)
{
    const std::vector<double> single(samples.begin(), samples.end());
    return coverage(std::span<const std::vector<double>>(&single, 1), targets);
}

double outage_probability(std::span<const double> samples, double threshold)
{
    if (samples.empty())
        throw EmptySampleError("outage_probability: no samples");
    const auto below = std::count_if(samples.begin(), samples.end(), [&](double r) { return r < threshold; });
    return static_cast<double>(below) / static_cast<double>(samples.size());
}

double rate_with_outage(std::span<const double> samples, double epsilon, bool throughput)
{
    if (samples.empty())
        throw EmptySampleError("rate_with_outage: no samples");
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw ValidationError("rate_with_outage: epsilon must lie in [0, 1]");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    // P[rate < sorted[i]] = (index of the first copy of sorted[i]) / n, non-decreasing in i
    double best = sorted.front();
    std::size_t first = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i > 0 && sorted[i] != sorted[i - 1])
            first = i;
        if (static_cast<double>(first) / n <= epsilon)
            best = sorted[i];
        else
            break;
    }
    return throughput ? (1.0 - epsilon) * best : best;
}

nlohmann::json to_json(const CoverageReport &report)
{
    return {{"target_rates", report.target_rates},
            {"coverage_percent", report.coverage_percent},
            {"mean_rate", report.mean_rate},
            {"std_dev", report.std_dev},
            {"realization_count", report.realization_count}};
}

} // namespace canyonwave
