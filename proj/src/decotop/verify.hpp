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

#ifndef DECOTOP_VERIFY_HPP
#define DECOTOP_VERIFY_HPP

#include <string>
#include <vector>

namespace decotop::runner {

struct CheckResult {
    std::string name;
    std::string params;
    double deviation = 0;
    double threshold = 0;
    bool pass = false;
};

struct VerifyOptions {
    std::string filter;        // run only checks whose name contains this
    std::string inject_fault;  // test mode: corrupt the named check
};

// The exact identity battery on the 2x2 torus (with a couple of 3x3
// amplitude-path items). Individual failures do not stop the run.
std::vector<CheckResult> run_verify(const VerifyOptions &options);

std::string render_verify_report(const std::vector<CheckResult> &results);
std::string verify_report_json(const std::vector<CheckResult> &results);
bool all_pass(const std::vector<CheckResult> &results);

}  // namespace decotop::runner

#endif
