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

// Python bindings for the canyonwave core. Thin wrappers only: every number
// comes straight from the C++ library.

#include <optional>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "canyonwave/beamforming.hpp"
#include "canyonwave/errors.hpp"
#include "canyonwave/phy.hpp"
#include "canyonwave/pipeline.hpp"
#include "canyonwave/raytracer.hpp"
#include "canyonwave/scene.hpp"
#include "canyonwave/stats.hpp"

namespace py = pybind11;
using namespace canyonwave;

namespace {

py::object to_python(const nlohmann::json &j) { return py::module_::import("json").attr("loads")(j.dump()); }

// codewords as rows, so that book[i] is codeword i
Eigen::MatrixXcd stack(const Codebook &book)
{
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(book.size()), static_cast<Eigen::Index>(book.dimension()));
    for (std::size_t i = 0; i < book.size(); ++i)
        m.row(static_cast<Eigen::Index>(i)) = book.vectors[i].transpose();
    return m;
}

Codebook unstack(const Eigen::MatrixXcd &rows)
{
    Codebook book;
    for (Eigen::Index i = 0; i < rows.rows(); ++i)
        book.vectors.push_back(rows.row(i).transpose());
    return book;
}

ArrayGeometry geometry(std::size_t rows, std::size_t cols, double carrier_hz)
{
    const auto g = ArrayGeometry::half_wavelength(rows, cols, carrier_hz);
    g.validate();
    return g;
}

py::dict ray_dict(const Ray &r)
{
    py::dict d;
    d["power_w"] = r.power_w;
    d["phase"] = r.phase;
    d["delay_s"] = r.delay_s;
    d["aod_azimuth"] = r.aod_azimuth;
    d["aod_elevation"] = r.aod_elevation;
    d["aoa_azimuth"] = r.aoa_azimuth;
    d["aoa_elevation"] = r.aoa_elevation;
    d["bounces"] = r.bounces;
    return d;
}

template <typename T>
T pick(const std::string &value, std::initializer_list<std::pair<const char *, T>> options, const char *what)
{
    for (const auto &[name, v] : options)
        if (value == name)
            return v;
    throw UsageError(std::string("unknown ") + what + " '" + value + "'");
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "canyonwave: mmWave V2I ray tracing, hybrid beamforming and situational rate maps";

    auto base = py::register_exception<Error>(m, "CanyonwaveError", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", base);
    py::register_exception<ValidationError>(m, "ValidationError", base);
    py::register_exception<DimensionError>(m, "DimensionError", base);
    py::register_exception<BudgetError>(m, "BudgetError", base);
    py::register_exception<EmptyCodebookError>(m, "EmptyCodebookError", base);
    py::register_exception<SingularMatrixError>(m, "SingularMatrixError", base);
    py::register_exception<EmptySampleError>(m, "EmptySampleError", base);
    py::register_exception<UsageError>(m, "UsageError", base);
    py::register_exception<GridMismatchError>(m, "GridMismatchError", base);

    py::class_<Scene>(m, "Scene")
        .def_property_readonly("building_count", [](const Scene &s) { return s.buildings.size(); })
        .def_property_readonly("obstacle_count", [](const Scene &s) { return s.obstacles.size(); })
        .def_property_readonly("base_count", [](const Scene &s) { return s.bases.size(); })
        .def_property_readonly("grid_shape", [](const Scene &s) { return py::make_tuple(s.grid.rows, s.grid.cols); })
        .def_property_readonly("carrier_hz", [](const Scene &s) { return s.rf.carrier_hz; })
        .def_property_readonly("bandwidth_hz", [](const Scene &s) { return s.rf.bandwidth_hz; })
        .def("hash", &scene_hash)
        .def("to_json", [](const Scene &s) { return scene_to_json(s); })
        .def("grid_positions",
             [](const Scene &s) {
                 const auto p = grid_positions(s);
                 Eigen::MatrixXd out(static_cast<Eigen::Index>(p.size()), 3);
                 for (std::size_t i = 0; i < p.size(); ++i)
                     out.row(static_cast<Eigen::Index>(i)) << p[i].x, p[i].y, p[i].z;
                 return out;
             })
        .def("with_smart_deployment", &with_smart_deployment)
        .def("with_traffic",
             [](const Scene &s, std::size_t trucks, std::uint64_t seed, std::uint64_t realization) {
                 return with_traffic(s, trucks, seed, realization);
             },
             py::arg("trucks"), py::arg("seed"), py::arg("realization") = 0);

    m.def("load_scene", &load_scene, py::arg("path"), "Load and validate a scene JSON file.");
    m.def("parse_scene", [](const std::string &text) { return parse_scene(text); }, py::arg("text"));

    m.def("trace",
          [](const Scene &s, std::size_t base, std::size_t point, int max_bounces) {
              TraceOptions opt;
              opt.max_bounces = max_bounces;
              py::list rays;
              for (const Ray &r : trace_link(s, base, point, opt).rays)
                  rays.append(ray_dict(r));
              return rays;
          },
          py::arg("scene"), py::arg("base"), py::arg("point"), py::arg("max_bounces") = 2,
          "Rays from base station `base` to grid point `point`, strongest first.");

    m.def("steering_vector",
          [](std::size_t rows, std::size_t cols, double azimuth, double elevation, double carrier_hz) {
              return Eigen::VectorXcd(steering_vector(geometry(rows, cols, carrier_hz), azimuth, elevation));
          },
          py::arg("rows"), py::arg("cols"), py::arg("azimuth"), py::arg("elevation"), py::arg("carrier_hz") = 28e9);

    m.def("beam_codebook",
          [](std::size_t rows, std::size_t cols, std::size_t rho, double carrier_hz) {
              return stack(build_beam_codebook(geometry(rows, cols, carrier_hz), rho));
          },
          py::arg("rows"), py::arg("cols"), py::arg("rho") = 1, py::arg("carrier_hz") = 28e9,
          "Analog beam codebook, one codeword per row.");

    m.def("rvq_codebook",
          [](std::size_t dimension, unsigned bits, std::uint64_t seed) {
              return stack(build_rvq_codebook(dimension, bits, seed));
          },
          py::arg("dimension"), py::arg("bits"), py::arg("seed"));

    m.def("beam_search",
          [](const Eigen::MatrixXcd &h, const Eigen::MatrixXcd &precoders, const Eigen::MatrixXcd &combiners) {
              ChannelMatrix ch;
              ch.entries = h;
              const BeamSelection s = beam_search(ch, unstack(precoders), unstack(combiners));
              return py::make_tuple(s.precoder_index, s.combiner_index, s.effective_gain);
          },
          py::arg("h"), py::arg("precoders"), py::arg("combiners"),
          "Exhaustive search; returns (precoder_index, combiner_index, gain).");

    m.def("su_rate",
          [](double gain, double tx_power_dbm, double bandwidth_hz) {
              return su_rate(BeamSelection{0, 0, gain}, LinkBudget{tx_power_dbm, bandwidth_hz});
          },
          py::arg("gain"), py::arg("tx_power_dbm") = 10.0, py::arg("bandwidth_hz") = 850e6);

    m.def("noise_power_dbm", &noise_power_dbm, py::arg("bandwidth_hz"));

    m.def("default_target_rates", &default_target_rates);
    m.def("coverage",
          [](const std::vector<double> &samples, std::optional<std::vector<double>> targets) {
              const auto t = targets.value_or(default_target_rates());
              return to_python(to_json(coverage(samples, t)));
          },
          py::arg("samples"), py::arg("targets") = py::none());
    m.def("outage_probability",
          [](const std::vector<double> &samples, double threshold) { return outage_probability(samples, threshold); },
          py::arg("samples"), py::arg("threshold"));
    m.def("rate_with_outage",
          [](const std::vector<double> &samples, double epsilon, bool throughput) {
              return rate_with_outage(samples, epsilon, throughput);
          },
          py::arg("samples"), py::arg("epsilon"), py::arg("throughput") = false);

    m.def("run",
          [](const std::filesystem::path &scene, const std::filesystem::path &out, const std::string &mode,
             std::size_t rho, std::optional<std::size_t> users, std::optional<unsigned> bits,
             const std::string &structure, std::size_t realizations, std::uint64_t seed, const std::string &baseband,
             bool smart, unsigned threads) {
              RunConfig cfg;
              cfg.scene_path = scene;
              cfg.out_dir = out;
              cfg.mode = pick<RunMode>(mode, {{"su", RunMode::SingleUser}, {"mu", RunMode::MultiUser}}, "mode");
              cfg.oversampling = rho;
              cfg.users = users;
              cfg.feedback_bits = bits;
              cfg.structure = pick<Structure>(
                  structure, {{"fc", Structure::FullyConnected}, {"pc", Structure::PartiallyConnected}}, "structure");
              cfg.realizations = realizations;
              cfg.seed = seed;
              cfg.baseband = pick<Baseband>(
                  baseband, {{"zf", Baseband::ZeroForcing}, {"identity", Baseband::Identity}}, "baseband");
              cfg.smart_deployment = smart;
              cfg.threads = threads;
              RunSummary s;
              {
                  py::gil_scoped_release release;
                  s = run(cfg);
              }
              py::dict d;
              d["config_hash"] = s.config_hash;
              d["scene_hash"] = s.scene_hash;
              std::vector<std::string> names;
              for (const auto &a : s.artifacts)
                  names.push_back(a.string());
              d["artifacts"] = names;
              d["coverage"] = to_python(to_json(s.coverage));
              return d;
          },
          py::arg("scene"), py::arg("out"), py::arg("mode") = "su", py::arg("rho") = 1, py::arg("users") = py::none(),
          py::arg("bits") = py::none(), py::arg("structure") = "fc", py::arg("realizations") = 10,
          py::arg("seed") = 1, py::arg("baseband") = "zf", py::arg("smart") = false, py::arg("threads") = 1,
          "Same as `canyonwave run`; writes the artifacts into `out` and returns a summary.");
}
