// Copyright 2026 The openqdyn Authors
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

// Scenario runner behind the openqdyn executable. Every command is first
// turned into a scenario {kind, inputs, solverOverrides, seed} and executed
// by the same code path as `openqdyn run scenario.json`.

#ifndef OPENQDYN_CLI_HPP_
#define OPENQDYN_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "openqdyn/json_io.hpp"

namespace openqdyn::cli {

using io::json;

struct CatalogEntry {
  std::string id;
  std::string anchor;       // what the scenario reproduces
  std::string description;
};

const std::vector<CatalogEntry>& listPaperExamples();

struct Report {
  json document;            // full machine-readable report
  bool undecided = false;   // some verdict was UNDECIDED (exit code 2)
};

/// Validates and executes {kind, inputs, solverOverrides, seed}.
/// Throws io::SchemaError or std::invalid_argument on bad input.
Report runScenario(const json& scenario);

/// Human-readable rendering of a report.
std::string renderText(const json& document);

/// Full command line entry point; returns the process exit code
/// (0 success, 2 undecided, 1 input error).
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace openqdyn::cli

#endif  // OPENQDYN_CLI_HPP_
