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

#include "canyonwave/phy.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <ostream>
#include <string>

#include "canyonwave/errors.hpp"
#include "canyonwave/random.hpp"

namespace canyonwave {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

/// 2 * index / count folded into [-1, 1).
double grid_value(std::size_t index, std::size_t count)
{
    const double x = static_cast<double>(2 * index) / static_cast<double>(count);
    return x >= 1.0 ? x - 2.0 : x;
}

} // namespace

ArrayGeometry ArrayGeometry::half_wavelength(std::size_t rows, std::size_t cols, double carrier_hz)
{
    const double lambda = speed_of_light / carrier_hz;
    return {rows, cols, 0.5 * lambda, 0.5 * lambda, lambda};
}

void ArrayGeometry::validate() const
{
    if (rows < 1 || cols < 1)
        throw ValidationError("ArrayGeometry: rows and cols must be >= 1");
    if (!(spacing_h > 0.0) || !(spacing_v > 0.0))
        throw ValidationError("ArrayGeometry: element spacing must be > 0");
    if (!(wavelength > 0.0))
        throw ValidationError("ArrayGeometry: wavelength must be > 0");
}

CVector steering_vector(const ArrayGeometry &geometry, double azimuth, double elevation)
{
    const std::size_t n = geometry.rows;
    const std::size_t m = geometry.cols;
    const double k = two_pi / geometry.wavelength;
    const double horizontal = k * geometry.spacing_h * std::sin(azimuth) * std::sin(elevation);
    const double vertical = k * geometry.spacing_v * std::cos(elevation);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n * m));
    CVector a(static_cast<Eigen::Index>(n * m));
    for (std::size_t p = 0; p < m; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            const double phase = horizontal * static_cast<double>(p) + vertical * static_cast<double>(q);
            a[static_cast<Eigen::Index>(p * n + q)] = scale * std::polar(1.0, phase);
        }
    }
    return a;
}

ChannelMatrix synthesize_channel(const RaySet &rays, const ArrayGeometry &tx, const ArrayGeometry &rx,
                                 double carrier_hz)
{
    ChannelMatrix h;
    h.tx_index = rays.tx_index;
    h.rx_index = rays.rx_index;
    h.entries = CMatrix::Zero(static_cast<Eigen::Index>(rx.size()), static_cast<Eigen::Index>(tx.size()));
    for (const Ray &ray : rays.rays) {
        const double carrier_phase = std::fmod(two_pi * carrier_hz * ray.delay_s, two_pi);
        const Complex coefficient = std::sqrt(ray.power_w) * std::polar(1.0, ray.phase + carrier_phase);
        const CVector a_r = steering_vector(rx, ray.aoa_azimuth, ray.aoa_elevation);
        const CVector a_t = steering_vector(tx, ray.aod_azimuth, ray.aod_elevation);
        h.entries.noalias() += coefficient * (a_r * a_t.adjoint());
    }
    return h;
}

double BeamDirection::azimuth() const { return std::asin(azimuth_sine); }
double BeamDirection::elevation() const { return std::acos(elevation_cosine); }

Codebook build_beam_codebook(const ArrayGeometry &geometry, std::size_t oversampling)
{
    geometry.validate();
    if (oversampling < 1)
        throw ValidationError("build_beam_codebook: oversampling must be >= 1");

    const std::size_t n = geometry.rows;
    const std::size_t m = geometry.cols;
    const std::size_t az_count = oversampling * m;
    const std::size_t el_count = oversampling * n;
    const double k = two_pi / geometry.wavelength;

    // elevation beams delta_l
    std::vector<CVector> elevation_beams;
    std::vector<double> cosines(el_count);
    std::vector<double> sines(el_count);
    elevation_beams.reserve(el_count);
    for (std::size_t l = 0; l < el_count; ++l) {
        const double c = grid_value(l, el_count);
        cosines[l] = c;
        sines[l] = std::sqrt(1.0 - c * c);
        CVector delta(static_cast<Eigen::Index>(n));
        for (std::size_t q = 0; q < n; ++q)
            delta[static_cast<Eigen::Index>(q)] =
                std::polar(1.0 / std::sqrt(static_cast<double>(n)), k * static_cast<double>(q) * geometry.spacing_v * c);
        elevation_beams.push_back(std::move(delta));
    }

    Codebook book;
    book.kind = CodebookKind::AnalogBeam;
    book.oversampling = oversampling;
    book.vectors.reserve(az_count * el_count);
    book.directions.reserve(az_count * el_count);
    CVector nu(static_cast<Eigen::Index>(m));
    for (std::size_t kk = 0; kk < az_count; ++kk) {
        const double s = grid_value(kk, az_count);
        for (std::size_t l = 0; l < el_count; ++l) {
            // azimuth beam nu_{k,l}: couples to the elevation through sin(theta_l)
            for (std::size_t p = 0; p < m; ++p)
                nu[static_cast<Eigen::Index>(p)] = std::polar(
                    1.0 / std::sqrt(static_cast<double>(m)), k * static_cast<double>(p) * geometry.spacing_h * s * sines[l]);
            const CVector &delta = elevation_beams[l];
            CVector omega(static_cast<Eigen::Index>(m * n));
            for (std::size_t p = 0; p < m; ++p)
                omega.segment(static_cast<Eigen::Index>(p * n), static_cast<Eigen::Index>(n)) =
                    nu[static_cast<Eigen::Index>(p)] * delta;
            book.vectors.push_back(std::move(omega));
            book.directions.push_back({s, cosines[l]});
        }
    }
    return book;
}

unsigned max_codebook_bits()
{
    constexpr unsigned fallback = 20;
    const char *env = std::getenv("CANYONWAVE_MAX_CODEBOOK_BITS");
    if (env == nullptr || *env == '\0')
        return fallback;
    char *end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0' || v > 40)
        throw ValidationError("CANYONWAVE_MAX_CODEBOOK_BITS: expected an integer in [0, 40]");
    return static_cast<unsigned>(v);
}

Codebook build_rvq_codebook(std::size_t dimension, unsigned bits, std::uint64_t seed, std::optional<unsigned> max_bits)
{
    if (dimension < 1)
        throw ValidationError("build_rvq_codebook: dimension must be >= 1");
    if (bits < 1)
        throw ValidationError("build_rvq_codebook: bits must be >= 1");
    const unsigned cap = max_bits.value_or(max_codebook_bits());
    if (bits > cap)
        throw BudgetError("build_rvq_codebook: " + std::to_string(bits) + " feedback bits exceed the cap of " +
                          std::to_string(cap) + " (set CANYONWAVE_MAX_CODEBOOK_BITS to raise it)");

    constexpr std::uint64_t stream_tag = 0x525651; // "RVQ"
    const std::size_t count = std::size_t{1} << bits;
    Codebook book;
    book.kind = CodebookKind::Rvq;
    book.seed = seed;
    book.vectors.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        KeyedStream rng(seed, {stream_tag, i});
        CVector v(static_cast<Eigen::Index>(dimension));
        double norm = 0.0;
        do {
            for (std::size_t d = 0; d < dimension; ++d) {
                const double re = rng.normal();
                const double im = rng.normal();
                v[static_cast<Eigen::Index>(d)] = Complex(re, im);
            }
            norm = v.norm();
        } while (norm == 0.0);
        v /= norm;
        book.vectors.push_back(std::move(v));
    }
    return book;
}

void write_codebook_csv(std::ostream &out, const Codebook &codebook)
{
    out << "index";
    for (std::size_t d = 0; d < codebook.dimension(); ++d)
        out << ",re" << d << ",im" << d;
    out << '\n';
    char buf[64];
    for (std::size_t i = 0; i < codebook.size(); ++i) {
        out << i;
        for (const Complex &z : codebook.vectors[i]) {
            std::snprintf(buf, sizeof buf, ",%.17g,%.17g", z.real(), z.imag());
            out << buf;
        }
        out << '\n';
    }
}

} // namespace canyonwave
