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

#include <cmath>
#include <limits>

namespace canyonwave {

/// P[W] = 10^((P[dBm] - 30) / 10)
[[nodiscard]] inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

[[nodiscard]] inline double watt_to_dbm(double watt)
{
    if (watt <= 0.0)
        return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(watt) + 30.0;
}

} // namespace canyonwave
