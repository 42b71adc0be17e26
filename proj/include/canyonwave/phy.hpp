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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "canyonwave/raytracer.hpp"

namespace canyonwave {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Uniform rectangular array with `rows` (N, vertical) by `cols` (M, horizontal)
/// elements. Element (p, q), p = column, q = row, is stored at index p * rows + q,
/// i.e. the row (elevation) index runs fastest.
struct ArrayGeometry {
    std::size_t rows = 1;
    std::size_t cols = 1;
    double spacing_h = 0.0; // d_h, m
    double spacing_v = 0.0; // d_v, m
    double wavelength = 0.0;

    /// Half-wavelength spacing at the given carrier.
    [[nodiscard]] static ArrayGeometry half_wavelength(std::size_t rows, std::size_t cols, double carrier_hz);

    [[nodiscard]] std::size_t size() const { return rows * cols; }
    void validate() const;
};

/// Unit-norm URA response toward (azimuth, elevation); azimuth is measured from the
/// array normal, elevation from the vertical axis.
[[nodiscard]] CVector steering_vector(const ArrayGeometry &geometry, double azimuth, double elevation);

struct ChannelMatrix {
    CMatrix entries; // N_r x N_t
    std::size_t tx_index = 0;
    std::size_t rx_index = 0;

    [[nodiscard]] std::size_t rx_antennas() const { return static_cast<std::size_t>(entries.rows()); }
    [[nodiscard]] std::size_t tx_antennas() const { return static_cast<std::size_t>(entries.cols()); }
};

/// Narrowband ray-sum channel
///   H = sum_l sqrt(p_l) e^{j phi_l} e^{j 2 pi f_c tau_l} a_r(aoa_l) a_t(aod_l)^H.
/// Ray angles must already be in the array frames (see to_array_frame).
[[nodiscard]] ChannelMatrix synthesize_channel(const RaySet &rays, const ArrayGeometry &tx,
                                               const ArrayGeometry &rx, double carrier_hz);

enum class CodebookKind { AnalogBeam, Rvq };

/// Grid point of an analog beam: sin(azimuth) and cos(elevation).
struct BeamDirection {
    double azimuth_sine = 0.0;
    double elevation_cosine = 0.0;

    [[nodiscard]] double azimuth() const;
    [[nodiscard]] double elevation() const;
};

struct Codebook {
    std::vector<CVector> vectors;
    CodebookKind kind = CodebookKind::AnalogBeam;
    std::size_t oversampling = 1; // analog beams only
    std::uint64_t seed = 0;       // RVQ only
    std::vector<BeamDirection> directions; // analog beams only, parallel to `vectors`

    [[nodiscard]] std::size_t size() const { return vectors.size(); }
    [[nodiscard]] std::size_t dimension() const
    {
        return vectors.empty() ? 0 : static_cast<std::size_t>(vectors.front().size());
    }
};

/// 3D beam codebook with (oversampling * cols) azimuth and (oversampling * rows)
/// elevation grid points. Codeword (k, l) is stored at k * (oversampling * rows) + l
/// and equals the Kronecker product of the azimuth beam (which depends on both k
/// and l) with the elevation beam l.
///
/// Grids are uniform in sin(azimuth) and cos(elevation):
///   sin(az_k) = 2k / (rho M), cos(el_l) = 2l / (rho N), wrapped into [-1, 1).
/// Every coarse grid point is reproduced bit-for-bit by any finer rho that is a
/// multiple of it, so searching a finer codebook can never lose gain.
[[nodiscard]] Codebook build_beam_codebook(const ArrayGeometry &geometry, std::size_t oversampling);

/// Largest RVQ size exponent allowed: CANYONWAVE_MAX_CODEBOOK_BITS when set, else 20.
[[nodiscard]] unsigned max_codebook_bits();

/// 2^bits vectors drawn uniformly on the complex unit sphere. Vector i depends
/// only on (seed, i), so a smaller codebook is a prefix of a larger one.
/// Throws BudgetError when bits exceeds `max_bits` (default max_codebook_bits()).
[[nodiscard]] Codebook build_rvq_codebook(std::size_t dimension, unsigned bits, std::uint64_t seed,
                                          std::optional<unsigned> max_bits = std::nullopt);

/// Debug export: `index,re0,im0,re1,im1,...`.
void write_codebook_csv(std::ostream &out, const Codebook &codebook);

} // namespace canyonwave
