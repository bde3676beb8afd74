// Copyright 2026 The hotspin Authors
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


#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hotspin/device.hpp"
#include "json.hpp"

namespace hotspin {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitUnknownKind = 3,
  kExitProfile = 4,
  kExitFit = 5,
  kExitModule = 6,
  kExitLock = 7,
};

inline constexpr const char* kReportSchema = "hotspin.report/1";
inline constexpr const char* kErrorSchema = "hotspin.error/1";

const std::vector<std::string>& experiment_kinds();

struct RunConfig {
  std::string kind;
  std::optional<std::uint64_t> seed;
  nlohmann::json profile = "1K-0.79T";  // bundled name, JSON file path or inline object
  int shots = 0;                        // 0: kind default
  nlohmann::json params = nlohmann::json::object();
  std::string out_dir = "out";
  std::string base_dir = ".";  // relative paths in the config resolve here
  unsigned threads = 0;        // 0: leave the process setting alone
  bool timing = false;

  static RunConfig from_json(const nlohmann::json& j, const std::string& base_dir = ".");
  nlohmann::json to_json() const;  // echo written into the report
  void validate() const;
};

DeviceProfile resolve_profile(const nlohmann::json& ref, const std::string& base_dir = ".");

struct RunResult {
  int exit_code = kExitOk;
  nlohmann::json report;                    // report.json (or error JSON)
  std::map<std::string, std::string> raw;  // relative path -> contents
};

// Runs the experiment without touching the filesystem (except inputs).
RunResult run_experiment(const RunConfig& cfg);

// Full batch execution: takes the output-directory lock, runs, writes
// report.json and raw/*, or error.json on failure. Returns the exit code.
int execute(const RunConfig& cfg);

nlohmann::json error_json(int exit_code, const std::string& type, const std::string& message);

struct Table1Options {
  std::vector<std::string> profiles{"0.1K-0.79T", "1K-0.79T"};
  int readout_shots = 20000;
  int init_runs = 2000;
  int coherence_shots = 300;
  int rb_sequences = 20;
  int rb_shots = 50;
  int fbt_sequences = 150;  // per length
  int hmm_chains = 1000;
  int hmm_reads = 20;
};

nlohmann::json reproduce_table1(const Table1Options& opt, std::uint64_t seed);

}  // namespace hotspin
