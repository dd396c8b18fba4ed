// Copyright 2026 The decotop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "decotop/scan.hpp"
#include "decotop/verify.hpp"

int main(int argc, char **argv) {
    CLI::App app{"decotop: decohered topological stabilizer state toolkit"};
    app.require_subcommand(1);

    // verify
    auto *verify = app.add_subcommand("verify", "run the exact identity check suite");
    std::string filter, inject, json_out;
    verify->add_option("--filter", filter, "run only checks whose name contains this");
    verify->add_option("--inject-fault", inject, "test mode: corrupt the named check");
    verify->add_option("--json", json_out, "also write a JSON report here");

    // scan
    auto *scan = app.add_subcommand("scan", "run a (L, p) observable campaign");
    std::string config_path, out_dir;
    uint64_t seed = 1;
    int jobs = (int)std::thread::hardware_concurrency();
    bool resume = false;
    scan->add_option("--config", config_path, "config file (key = value)")->required();
    scan->add_option("--seed", seed, "master seed");
    scan->add_option("--jobs", jobs, "worker threads");
    scan->add_option("--out", out_dir, "override the config's output directory");
    scan->add_flag("--resume", resume, "reuse rows from an existing output file");

    // thresholds
    app.add_subcommand("thresholds", "print the formula-derived threshold table");

    // export
    auto *exp = app.add_subcommand("export", "re-emit a scan CSV in another format");
    std::string exp_in, exp_format = "csv", exp_out;
    exp->add_option("--in", exp_in, "input CSV (or exported JSON)")->required();
    exp->add_option("--format", exp_format, "csv | gnuplot-dat | json");
    exp->add_option("--out", exp_out, "output path")->required();

    // analyze
    auto *ana = app.add_subcommand("analyze", "finite-size crossing analysis of a scan CSV");
    std::string ana_in, ana_obs = "thooft2d", ana_json;
    ana->add_option("--in", ana_in, "input CSV")->required();
    ana->add_option("--observable", ana_obs, "observable column to analyze");
    ana->add_option("--json", ana_json, "write the crossing report here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) {
            decotop::runner::VerifyOptions opt{filter, inject};
            auto results = decotop::runner::run_verify(opt);
            std::cout << decotop::runner::render_verify_report(results);
            if (!json_out.empty()) {
                std::ofstream out(json_out);
                out << decotop::runner::verify_report_json(results);
            }
            return decotop::runner::all_pass(results) ? 0 : 1;
        }
        if (scan->parsed()) {
            decotop::runner::ExperimentConfig cfg =
                decotop::runner::parse_config_file(config_path);
            if (!out_dir.empty()) {
                cfg.out_dir = out_dir;
            }
            auto outcome = decotop::runner::run_scan(cfg, seed, jobs, resume);
            std::cout << "wrote " << outcome.csv_path.string() << " ("
                      << outcome.computed_cells << " cells computed, " << outcome.reused_cells
                      << " reused)\n";
            return 0;
        }
        if (app.get_subcommand("thresholds")->parsed()) {
            std::cout << decotop::runner::thresholds_table();
            return 0;
        }
        if (exp->parsed()) {
            if (!std::filesystem::exists(exp_in)) {
                std::cerr << "export: missing input: " << exp_in << "\n";
                return 2;
            }
            decotop::runner::export_table(exp_in, exp_format, exp_out);
            return 0;
        }
        if (ana->parsed()) {
            if (!std::filesystem::exists(ana_in)) {
                std::cerr << "analyze: missing input: " << ana_in << "\n";
                return 2;
            }
            auto r = decotop::runner::analyze_crossing(ana_in, ana_obs, ana_json);
            if (r.found) {
                std::printf("crossing: p* = %.6f +- %.6f (%zu pair estimates)\n", r.p_star,
                            r.uncertainty, r.size_pairs.size());
            } else {
                std::printf("crossing: none found in the scanned range\n");
            }
            return 0;
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
