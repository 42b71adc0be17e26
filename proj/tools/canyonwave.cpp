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

// canyonwave command-line driver: scene file in, rate maps and statistics out.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "canyonwave/errors.hpp"
#include "canyonwave/pipeline.hpp"

namespace {

constexpr int exit_failure = 1;
constexpr int exit_usage = 2;

int report(const std::string &kind, const std::string &message, int code)
{
    std::cerr << canyonwave::error_json(kind, message).dump() << '\n';
    return code;
}

const std::map<std::string, canyonwave::RunMode> mode_names{{"su", canyonwave::RunMode::SingleUser},
                                                            {"mu", canyonwave::RunMode::MultiUser}};
const std::map<std::string, canyonwave::Structure> structure_names{
    {"fc", canyonwave::Structure::FullyConnected}, {"pc", canyonwave::Structure::PartiallyConnected}};
const std::map<std::string, canyonwave::Baseband> baseband_names{{"zf", canyonwave::Baseband::ZeroForcing},
                                                                 {"identity", canyonwave::Baseband::Identity}};
const std::map<std::string, bool> deployment_names{{"primary", false}, {"smart", true}};

} // namespace

int main(int argc, char **argv)
{
    using namespace canyonwave;

    CLI::App app{"canyonwave - mmWave V2I situational rate maps"};
    app.require_subcommand(1);

    RunConfig run_cfg;
    std::string scene;
    std::string out = "out";
    std::string ray_dump;
    std::string ray_import;
    unsigned bits = 0;
    std::size_t users = 0;
    auto *run_cmd = app.add_subcommand("run", "simulate one scene and write maps and statistics");
    run_cmd->add_option("--scene", scene, "scene JSON file")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--mode", run_cfg.mode, "su (TDMA single user) or mu (hybrid multiuser)")
        ->transform(CLI::CheckedTransformer(mode_names, CLI::ignore_case));
    run_cmd->add_option("--rho", run_cfg.oversampling, "codebook oversampling factor")->check(CLI::PositiveNumber);
    auto *bits_opt = run_cmd->add_option("--bits", bits, "RVQ feedback bits per user");
    auto *perfect_opt = run_cmd->add_flag("--perfect-csit", "unquantized feedback (default)");
    bits_opt->excludes(perfect_opt);
    run_cmd->add_option("--structure", run_cfg.structure, "fc or pc")
        ->transform(CLI::CheckedTransformer(structure_names, CLI::ignore_case));
    auto *users_opt = run_cmd->add_option("--users", users, "users per slot (one RF chain each)");
    run_cmd->add_option("--subarray", run_cfg.subarray_size, "antennas per RF chain (pc); default N_t / users");
    run_cmd->add_option("--realizations", run_cfg.realizations, "scheduling realizations (mu)");
    run_cmd->add_option("--baseband", run_cfg.baseband, "zf or identity")
        ->transform(CLI::CheckedTransformer(baseband_names, CLI::ignore_case));
    run_cmd->add_option("--bases", run_cfg.smart_deployment, "primary or smart deployment")
        ->transform(CLI::CheckedTransformer(deployment_names, CLI::ignore_case));
    run_cmd->add_option("--seed", run_cfg.seed, "seed for every random draw");
    run_cmd->add_option("--targets", run_cfg.targets, "target rates in bit/s")->delimiter(',');
    run_cmd->add_option("--out", out, "output directory");
    run_cmd->add_option("--threads", run_cfg.threads, "worker threads, 0 = all cores");
    run_cmd->add_option("--ray-dump", ray_dump, "write traced rays to this CSV");
    run_cmd->add_option("--ray-import", ray_import, "read rays from CSV instead of tracing")
        ->check(CLI::ExistingFile);
    run_cmd->add_flag("--throughput-scaling", run_cfg.throughput_scaling,
                      "scale rate-with-outage by (1 - epsilon)");

    CompareConfig cmp;
    std::string scene_a;
    std::string scene_b;
    std::string cmp_out = "comparison.json";
    unsigned cmp_bits = 0;
    std::size_t cmp_users = 0;
    auto *cmp_cmd = app.add_subcommand("compare", "compare two deployments on the same vehicle grid");
    cmp_cmd->add_option("--scene-a", scene_a, "first scene")->required()->check(CLI::ExistingFile);
    cmp_cmd->add_option("--scene-b", scene_b, "second scene")->required()->check(CLI::ExistingFile);
    cmp_cmd->add_option("--bases-a", cmp.a.smart_deployment, "primary or smart")
        ->transform(CLI::CheckedTransformer(deployment_names, CLI::ignore_case));
    cmp_cmd->add_option("--bases-b", cmp.b.smart_deployment, "primary or smart")
        ->transform(CLI::CheckedTransformer(deployment_names, CLI::ignore_case));
    cmp_cmd->add_option("--trucks-a", cmp.a.trucks, "blocking trucks per traffic realization (side a)");
    cmp_cmd->add_option("--trucks-b", cmp.b.trucks, "blocking trucks per traffic realization (side b)");
    cmp_cmd->add_option("--label-a", cmp.a.label, "name for side a");
    cmp_cmd->add_option("--label-b", cmp.b.label, "name for side b");
    cmp_cmd->add_option("--traffic-realizations", cmp.traffic_realizations, "traffic draws per side");
    cmp_cmd->add_option("--mode", cmp.mode, "su or mu")
        ->transform(CLI::CheckedTransformer(mode_names, CLI::ignore_case));
    cmp_cmd->add_option("--rho", cmp.oversampling, "codebook oversampling factor")->check(CLI::PositiveNumber);
    auto *cmp_bits_opt = cmp_cmd->add_option("--bits", cmp_bits, "RVQ feedback bits per user");
    cmp_cmd->add_option("--structure", cmp.structure, "fc or pc")
        ->transform(CLI::CheckedTransformer(structure_names, CLI::ignore_case));
    auto *cmp_users_opt = cmp_cmd->add_option("--users", cmp_users, "users per slot");
    cmp_cmd->add_option("--realizations", cmp.realizations, "scheduling realizations (mu)");
    cmp_cmd->add_option("--seed", cmp.seed, "seed for every random draw");
    cmp_cmd->add_option("--targets", cmp.targets, "target rates in bit/s")->delimiter(',');
    cmp_cmd->add_option("--out", cmp_out, "output JSON file");
    cmp_cmd->add_option("--threads", cmp.threads, "worker threads, 0 = all cores");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        return report("usage", e.what(), exit_usage);
    }

    try {
        if (run_cmd->parsed()) {
            run_cfg.scene_path = scene;
            run_cfg.out_dir = out;
            if (*bits_opt)
                run_cfg.feedback_bits = bits;
            if (*users_opt)
                run_cfg.users = users;
            if (!ray_dump.empty())
                run_cfg.ray_dump = ray_dump;
            if (!ray_import.empty())
                run_cfg.ray_import = ray_import;
            const RunSummary summary = run(run_cfg);
            std::cout << nlohmann::json{{"config_hash", summary.config_hash},
                                        {"scene_hash", summary.scene_hash},
                                        {"out", run_cfg.out_dir.string()},
                                        {"coverage", to_json(summary.coverage)}}
                             .dump()
                      << '\n';
        } else {
            cmp.a.scene_path = scene_a;
            cmp.b.scene_path = scene_b;
            if (*cmp_bits_opt)
                cmp.feedback_bits = cmp_bits;
            if (*cmp_users_opt)
                cmp.users = cmp_users;
            const nlohmann::json table = compare(cmp);
            std::ofstream file(cmp_out, std::ios::binary | std::ios::trunc);
            if (!file)
                throw Error("cannot write " + cmp_out);
            file << table.dump(2) << '\n';
            std::cout << table.dump() << '\n';
        }
    } catch (const UsageError &e) {
        return report(e.kind(), e.what(), exit_usage);
    } catch (const Error &e) {
        return report(e.kind(), e.what(), exit_failure);
    } catch (const std::exception &e) {
        return report("internal", e.what(), exit_failure);
    }
    return 0;
}
