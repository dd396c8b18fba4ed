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

#ifndef DECOTOP_SCAN_HPP
#define DECOTOP_SCAN_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "decotop/analysis.hpp"

namespace decotop::runner {

constexpr const char *kCodeVersion = "decotop 0.1.0";

// Flat key = value configuration with [section] headers; see configs/.
struct ExperimentConfig {
    std::string observable = "thooft2d";  // thooft2d | wilson3d-gauge |
                                          // wilson3d-plaquette | thooft3d-ising
    std::string backend = "transfer";     // exact | transfer | sampled
    std::vector<int> sizes;
    std::vector<double> p_grid;
    int n_samples = 1000;
    std::string out_dir = "runs/scan";
    std::string name = "scan";

    std::string canonical_text() const;  // config echo used in manifests
};

ExperimentConfig parse_config_text(const std::string &text);
ExperimentConfig parse_config_file(const std::filesystem::path &path);

struct CsvRow {
    std::string model;
    int size = 0;
    double p = 0;
    std::string observable;
    std::string geometry;
    double mean = 0;
    double std_err = 0;
    long n_samples = 0;
    std::string method;
    uint64_t seed = 0;
};

std::string csv_header();
std::string format_csv_row(const CsvRow &row);

struct ScanOutcome {
    std::filesystem::path csv_path;
    std::filesystem::path manifest_path;
    int computed_cells = 0;
    int reused_cells = 0;
};

// Runs the scan over (size, p) cells with a worker pool; output rows are
// written in canonical order regardless of completion order, so the bytes do
// not depend on the job count. With resume, rows present in an existing
// output file are reused verbatim.
ScanOutcome run_scan(const ExperimentConfig &config, uint64_t master_seed, int jobs, bool resume);

// Lossless re-emission of a scan CSV as csv / gnuplot-dat / json.
void export_table(const std::filesystem::path &input, const std::string &format,
                  const std::filesystem::path &output);

// Curves grouped by size for one observable column of a scan CSV.
std::map<int, std::vector<analysis::CurvePoint>> load_curves(const std::filesystem::path &csv,
                                                             const std::string &observable);

// Crossing analysis of a scan CSV; also writes a small JSON report when
// json_out is nonempty.
analysis::CrossingResult analyze_crossing(const std::filesystem::path &csv,
                                          const std::string &observable,
                                          const std::filesystem::path &json_out);

// Formula-derived threshold table (printable).
std::string thresholds_table();

uint64_t fnv1a_digest(const std::string &bytes);

}  // namespace decotop::runner

#endif
