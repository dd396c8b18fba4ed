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

#include "decotop/scan.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "decotop/observables.hpp"
#include "decotop/rng.hpp"

namespace decotop::runner {

namespace {

std::string trim(const std::string &s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    size_t b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        out.push_back(trim(item));
    }
    return out;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> parse_p_grid(const std::string &text) {
    // Either a comma list or "start:stop:step" (inclusive).
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        auto parts = split(text, ':');
        if (parts.size() != 3) {
            throw std::invalid_argument("config: p grid range must be start:stop:step");
        }
        double start = std::stod(parts[0]), stop = std::stod(parts[1]), step = std::stod(parts[2]);
        if (step <= 0) {
            throw std::invalid_argument("config: p grid step must be positive");
        }
        for (double p = start; p <= stop + 1e-12; p += step) {
            out.push_back(p);
        }
        return out;
    }
    for (const std::string &s : split(text, ',')) {
        if (!s.empty()) {
            out.push_back(std::stod(s));
        }
    }
    return out;
}

}  // namespace

std::string ExperimentConfig::canonical_text() const {
    std::ostringstream os;
    os << "[scan]\n";
    os << "name = " << name << "\n";
    os << "observable = " << observable << "\n";
    os << "backend = " << backend << "\n";
    os << "sizes = ";
    for (size_t i = 0; i < sizes.size(); i++) {
        os << (i ? "," : "") << sizes[i];
    }
    os << "\n";
    os << "p = ";
    for (size_t i = 0; i < p_grid.size(); i++) {
        os << (i ? "," : "") << fmt_double(p_grid[i]);
    }
    os << "\n";
    os << "samples = " << n_samples << "\n";
    os << "out = " << out_dir << "\n";
    return os.str();
}

ExperimentConfig parse_config_text(const std::string &text) {
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string line;
    std::string section;
    while (std::getline(ss, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') {
            continue;
        }
        if (t.front() == '[' && t.back() == ']') {
            section = t.substr(1, t.size() - 2);
            continue;
        }
        size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: expected key = value, got: " + t);
        }
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (key == "name") {
            cfg.name = val;
        } else if (key == "observable") {
            cfg.observable = val;
        } else if (key == "backend") {
            cfg.backend = val;
        } else if (key == "sizes" || key == "L") {
            cfg.sizes.clear();
            for (const std::string &s : split(val, ',')) {
                cfg.sizes.push_back(std::stoi(s));
            }
        } else if (key == "p") {
            cfg.p_grid = parse_p_grid(val);
        } else if (key == "samples") {
            cfg.n_samples = std::stoi(val);
        } else if (key == "out") {
            cfg.out_dir = val;
        } else {
            throw std::invalid_argument("config: unknown key: " + key);
        }
    }
    if (cfg.sizes.empty() || cfg.p_grid.empty()) {
        throw std::invalid_argument("config: sizes and p grid are required");
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("config: cannot open " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string csv_header() {
    return "model,L,p,observable,geometry,mean,stderr,n_samples,method,seed";
}

std::string format_csv_row(const CsvRow &row) {
    std::ostringstream os;
    os << row.model << ',' << row.size << ',' << fmt_double(row.p) << ',' << row.observable << ','
       << row.geometry << ',' << fmt_double(row.mean) << ',' << fmt_double(row.std_err) << ','
       << row.n_samples << ',' << row.method << ',' << row.seed;
    return os.str();
}

namespace {

struct Cell {
    int size_idx;
    int p_idx;
};

std::vector<std::string> compute_cell(const ExperimentConfig &cfg, int size, double p,
                                      uint64_t cell_seed) {
    std::vector<CsvRow> rows;
    if (cfg.observable == "thooft2d") {
        obs::OrderParameterResult r =
            cfg.backend == "exact" ? obs::thooft_2d_exact(p, size)
                                   : obs::thooft_2d_sampled(p, size, cfg.n_samples, cell_seed);
        rows.push_back({"ising2d", size, p, "thooft2d", "dualloop-y", r.estimate.mean,
                        r.estimate.std_err, r.estimate.n, r.estimate.method, cell_seed});
        rows.push_back({"ising2d", size, p, "thooft2d-meandf", "dualloop-y", r.mean_df, 0,
                        r.estimate.n, r.estimate.method, cell_seed});
    } else if (cfg.observable == "wilson3d-gauge" || cfg.observable == "wilson3d-plaquette" ||
               cfg.observable == "thooft3d-ising") {
        statmech::ModelKind kind = cfg.observable == "wilson3d-gauge"
                                       ? statmech::ModelKind::gauge_ising3d
                                   : cfg.observable == "wilson3d-plaquette"
                                       ? statmech::ModelKind::plaquette_ising3d
                                       : statmech::ModelKind::ising3d;
        obs::OrderParameterResult r =
            cfg.backend == "exact"
                ? obs::wilson_3d_exact(p, size, kind)
                : obs::wilson_3d_sampled(p, size, kind, cfg.n_samples, cell_seed);
        const char *geom = kind == statmech::ModelKind::ising3d ? "membrane-z" : "loop-z";
        rows.push_back({statmech::model_name(kind), size, p, cfg.observable, geom,
                        r.estimate.mean, r.estimate.std_err, r.estimate.n, r.estimate.method,
                        cell_seed});
    } else {
        throw std::invalid_argument("scan: unknown observable " + cfg.observable);
    }
    std::vector<std::string> lines;
    for (const CsvRow &r : rows) {
        lines.push_back(format_csv_row(r));
    }
    return lines;
}

}  // namespace

uint64_t fnv1a_digest(const std::string &bytes) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

void validate_config(const ExperimentConfig &cfg) {
    static const std::vector<std::string> observables = {
        "thooft2d", "wilson3d-gauge", "wilson3d-plaquette", "thooft3d-ising"};
    bool known = false;
    for (const auto &o : observables) {
        known = known || o == cfg.observable;
    }
    if (!known) {
        throw std::invalid_argument("config: unknown observable " + cfg.observable);
    }
    if (cfg.backend != "exact" && cfg.backend != "transfer" && cfg.backend != "sampled") {
        throw std::invalid_argument("config: backend must be exact|transfer|sampled");
    }
    for (double p : cfg.p_grid) {
        if (p < 0 || p > 0.5) {
            throw std::invalid_argument("config: p values must lie in [0, 0.5]");
        }
    }
    for (int size : cfg.sizes) {
        if (size < 2) {
            throw std::invalid_argument("config: sizes must be >= 2");
        }
    }
    if (cfg.n_samples < 1) {
        throw std::invalid_argument("config: samples must be positive");
    }
    if (cfg.name.empty() || cfg.name.find_first_of("/\\,") != std::string::npos) {
        throw std::invalid_argument("config: bad run name");
    }
}

}  // namespace

ScanOutcome run_scan(const ExperimentConfig &cfg, uint64_t master_seed, int jobs, bool resume) {
    namespace fs = std::filesystem;
    validate_config(cfg);
    fs::create_directories(cfg.out_dir);
    fs::path csv_path = fs::path(cfg.out_dir) / (cfg.name + ".csv");
    fs::path manifest_path = fs::path(cfg.out_dir) / (cfg.name + ".manifest.json");

    // Keyed reuse of rows from a partial previous run.
    std::map<std::string, std::vector<std::string>> reusable;
    if (resume && fs::exists(csv_path)) {
        if (fs::exists(manifest_path)) {
            std::ifstream mf(manifest_path);
            nlohmann::json m = nlohmann::json::parse(mf, nullptr, false);
            if (!m.is_discarded()) {
                if (m.value("master_seed", master_seed) != master_seed ||
                    m.value("config", std::string()) != cfg.canonical_text()) {
                    throw std::runtime_error("resume: existing manifest does not match");
                }
            }
        }
        std::ifstream in(csv_path);
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            if (line.empty()) {
                continue;
            }
            auto f = split(line, ',');
            if (f.size() < 10) {
                continue;  // truncated tail line
            }
            std::string key = f[1] + "|" + f[2];
            reusable[key].push_back(line);
        }
    }

    std::vector<Cell> cells;
    for (int si = 0; si < (int)cfg.sizes.size(); si++) {
        for (int pi = 0; pi < (int)cfg.p_grid.size(); pi++) {
            cells.push_back({si, pi});
        }
    }
    std::vector<std::vector<std::string>> results(cells.size());
    std::vector<uint8_t> reused(cells.size(), 0);

    // Pre-mark reusable cells; a cell counts only when all its rows survived
    // the interrupt.
    size_t rows_per_cell = cfg.observable == "thooft2d" ? 2 : 1;
    for (size_t i = 0; i < cells.size(); i++) {
        int size = cfg.sizes[cells[i].size_idx];
        double p = cfg.p_grid[cells[i].p_idx];
        std::ostringstream key;
        key << size << "|" << fmt_double(p);
        auto it = reusable.find(key.str());
        if (it != reusable.end() && it->second.size() == rows_per_cell) {
            results[i] = it->second;
            reused[i] = 1;
        }
    }

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= cells.size()) {
                return;
            }
            if (reused[i]) {
                continue;
            }
            int size = cfg.sizes[cells[i].size_idx];
            double p = cfg.p_grid[cells[i].p_idx];
            uint64_t cell_seed = derive_seed(master_seed, cells[i].size_idx, cells[i].p_idx);
            try {
                results[i] = compute_cell(cfg, size, p, cell_seed);
            } catch (const std::exception &e) {
                // Per-cell budget violations are reported in place; the scan
                // keeps going.
                std::ostringstream os;
                os << "# error L=" << size << " p=" << fmt_double(p) << ": " << e.what();
                results[i] = {os.str()};
            }
        }
    };
    int nthreads = std::max(1, jobs);
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; t++) {
        pool.emplace_back(worker);
    }
    for (auto &th : pool) {
        th.join();
    }

    std::string body = csv_header() + "\n";
    for (const auto &lines : results) {
        for (const std::string &l : lines) {
            body += l;
            body += "\n";
        }
    }
    {
        std::ofstream out(csv_path, std::ios::binary | std::ios::trunc);
        out << body;
    }
    nlohmann::json manifest;
    manifest["command"] = "scan";
    manifest["config"] = cfg.canonical_text();
    manifest["master_seed"] = master_seed;
    manifest["code_version"] = kCodeVersion;
    manifest["convention_version"] = lattice::kConventionVersion;
    manifest["created"] = (long)time(nullptr);
    char dig[32];
    std::snprintf(dig, sizeof dig, "%016llx", (unsigned long long)fnv1a_digest(body));
    manifest["body_digest"] = dig;
    {
        std::ofstream out(manifest_path, std::ios::binary | std::ios::trunc);
        out << manifest.dump(2) << "\n";
    }

    ScanOutcome outc;
    outc.csv_path = csv_path;
    outc.manifest_path = manifest_path;
    for (size_t i = 0; i < cells.size(); i++) {
        (reused[i] ? outc.reused_cells : outc.computed_cells)++;
    }
    return outc;
}

void export_table(const std::filesystem::path &input, const std::string &format,
                  const std::filesystem::path &output) {
    std::ifstream in(input);
    if (!in) {
        throw std::runtime_error("export: missing input: " + input.string());
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) {
            lines.push_back(line);
        }
    }
    if (lines.empty()) {
        throw std::runtime_error("export: empty input: " + input.string());
    }
    std::ofstream out(output, std::ios::binary | std::ios::trunc);
    if (format == "csv") {
        // Either a scan CSV or the json re-import of one.
        if (lines[0].front() == '{') {
            std::ifstream jin(input);
            nlohmann::json j = nlohmann::json::parse(jin);
            out << j["header"].get<std::string>() << "\n";
            for (const auto &r : j["rows"]) {
                out << r.get<std::string>() << "\n";
            }
        } else {
            for (const std::string &l : lines) {
                out << l << "\n";
            }
        }
        return;
    }
    if (format == "json") {
        nlohmann::json j;
        j["schema"] = csv_header();
        j["header"] = lines[0];
        j["rows"] = nlohmann::json::array();
        for (size_t i = 1; i < lines.size(); i++) {
            j["rows"].push_back(lines[i]);
        }
        out << j.dump(2) << "\n";
        return;
    }
    if (format == "gnuplot-dat") {
        out << "# " << lines[0] << "\n";
        out << "# groups separated by blank lines share the L column\n";
        std::map<int, std::vector<std::string>> groups;
        for (size_t i = 1; i < lines.size(); i++) {
            if (lines[i].empty() || lines[i][0] == '#') {
                continue;
            }
            auto f = split(lines[i], ',');
            groups[std::stoi(f[1])].push_back(lines[i]);
        }
        bool first = true;
        for (const auto &[size, rows] : groups) {
            if (!first) {
                out << "\n";
            }
            first = false;
            out << "# L = " << size << "\n";
            for (const std::string &r : rows) {
                auto f = split(r, ',');
                out << f[2] << " " << f[5] << " " << f[6] << "\n";
            }
        }
        return;
    }
    throw std::invalid_argument("export: unknown format " + format);
}

std::map<int, std::vector<analysis::CurvePoint>> load_curves(const std::filesystem::path &csv,
                                                             const std::string &observable) {
    std::ifstream in(csv);
    if (!in) {
        throw std::runtime_error("analyze: missing input: " + csv.string());
    }
    std::map<int, std::vector<analysis::CurvePoint>> curves;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        auto f = split(line, ',');
        if (f.size() < 10 || f[3] != observable) {
            continue;
        }
        curves[std::stoi(f[1])].push_back({std::stod(f[2]), std::stod(f[5]), std::stod(f[6])});
    }
    return curves;
}

analysis::CrossingResult analyze_crossing(const std::filesystem::path &csv,
                                          const std::string &observable,
                                          const std::filesystem::path &json_out) {
    auto curves = load_curves(csv, observable);
    analysis::CrossingResult r = analysis::crossing_find(curves);
    if (!json_out.empty()) {
        std::ifstream in(csv, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        nlohmann::json j;
        j["observable"] = observable;
        j["found"] = r.found;
        j["p_star"] = r.p_star;
        j["err"] = r.uncertainty;
        char dig[32];
        std::snprintf(dig, sizeof dig, "%016llx", (unsigned long long)fnv1a_digest(ss.str()));
        j["inputs_hash"] = dig;
        std::ofstream out(json_out, std::ios::binary | std::ios::trunc);
        out << j.dump(2) << "\n";
    }
    return r;
}

std::string thresholds_table() {
    std::ostringstream os;
    analysis::ClosedFormPc2 pc2 = analysis::pc2_closed_form();
    os << "threshold                         value      reference\n";
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-32s  %.6f  from p_ref = %.3f\n", "2d non-optimal",
                  analysis::non_optimal_threshold(analysis::ThresholdConstants::p_2d_rbim),
                  analysis::ThresholdConstants::p_2d_rbim);
    os << buf;
    std::snprintf(buf, sizeof buf, "%-32s  %.6f  from p_ref = %.3f\n", "3d non-optimal",
                  analysis::non_optimal_threshold(analysis::ThresholdConstants::p_3d_rbim),
                  analysis::ThresholdConstants::p_3d_rbim);
    os << buf;
    std::snprintf(buf, sizeof buf, "%-32s  %.10f  (closed form)\n", "rho2 closed form", pc2.p_c);
    os << buf;
    std::snprintf(buf, sizeof buf, "%-32s  %.10f  (closed form)\n", "rho2 critical coupling",
                  pc2.k_c);
    os << buf;
    for (double p : {analysis::ThresholdConstants::p_2d_rbim,
                     analysis::ThresholdConstants::p_3d_rpgm,
                     analysis::ThresholdConstants::p_3d_rbim,
                     analysis::ThresholdConstants::p_3d_plaquette}) {
        auto nb = analysis::nishimori_beta(p);
        std::snprintf(buf, sizeof buf, "beta_nishimori(p = %.3f)          %.10f\n", p, nb.beta);
        os << buf;
    }
    return os.str();
}

}  // namespace decotop::runner
