// Copyright 2026 The cqlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Every command is a pure function of its parameter
// set, which is what a run record stores and what replay re-executes.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cqlab/io.hpp"

namespace cqlab::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2, kResource = 3 };

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct Execution {
  Json outputs = Json::object();
  // Verification commands set this on failure.
  bool failed = false;
};

// Runs `command` from its resolved parameters. `info` receives the text
// summary, `data` receives CSV when the parameters route it to stdout.
Execution execute(const std::string& command, const Json& params, std::ostream& info, std::ostream& data);

}  // namespace cqlab::cli
