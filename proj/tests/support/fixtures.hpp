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

// Small scene documents shared by the unit tests.
#pragma once

#include <string>

#include <json.hpp>

namespace fixture {

/// Two facing concrete buildings, one 4x4 BS, a 3x3 vehicle grid in the street.
inline nlohmann::json minimal_canyon()
{
    return nlohmann::json::parse(R"({
      "materials": [
        {"name": "concrete", "permittivity": 15, "conductivity": 0.015, "thickness": 0.3},
        {"name": "metal", "pec": true}
      ],
      "buildings": [
        {"min": [0, 10], "max": [60, 30], "height": 20, "material": "concrete"},
        {"min": [0, -30], "max": [60, -10], "height": 20, "material": "concrete"}
      ],
      "obstacles": [],
      "bases": [
        {"position": [30, 9, 6], "array_rows": 4, "array_cols": 4, "boresight_azimuth": -1.5707963267948966,
         "tx_power_dbm": 10}
      ],
      "grid": {"origin": [20, -5], "rows": 3, "cols": 3, "spacing": 5, "antenna_height": 1.5,
               "array_rows": 2, "array_cols": 2},
      "rf": {"carrier_hz": 28e9, "bandwidth_hz": 850e6}
    })");
}

} // namespace fixture
