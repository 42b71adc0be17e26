# SPDX-License-Identifier: Apache-2.0
# Copyright 2026 The canyonwave Authors
#
# Licensed under the Apache License, Version 2.0 (the "License"); you may not
# use this file except in compliance with the License. You may obtain a copy
# of the License at http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.

"""mmWave V2I situational rate maps: ray tracing, hybrid beamforming, coverage statistics."""

from ._core import (
    BudgetError,
    CanyonwaveError,
    DimensionError,
    EmptyCodebookError,
    EmptySampleError,
    GridMismatchError,
    ParseError,
    Scene,
    SingularMatrixError,
    UsageError,
    ValidationError,
    beam_codebook,
    beam_search,
    coverage,
    default_target_rates,
    load_scene,
    noise_power_dbm,
    outage_probability,
    parse_scene,
    rate_with_outage,
    run,
    rvq_codebook,
    steering_vector,
    su_rate,
    trace,
)

__version__ = "1.0.0"

__all__ = [name for name in dir() if not name.startswith("_")]
