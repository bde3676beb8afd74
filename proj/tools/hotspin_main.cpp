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


// Batch runner: hotspin --config run.json [--seed N] [--out DIR] [--threads N]

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hotspin/errors.hpp"
#include "hotspin/runner.hpp"

namespace {

int fail(int code, const std::string& type, const std::string& msg) {
  std::cerr << hotspin::error_json(code, type, msg).dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hotspin batch experiment runner"};
  std::string config_path, out, profile, kind;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool timing = false, list_kinds = false;
  app.add_option("--config", config_path, "JSON run configuration");
  auto* seed_opt = app.add_option("--seed", seed, "root seed (overrides the config)");
  app.add_option("--out", out, "output directory (overrides the config)");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--profile", profile, "bundled profile name or profile JSON path");
  app.add_option("--kind", kind, "experiment kind (overrides the config)");
  app.add_flag("--timing", timing, "record wall time in the report");
  app.add_flag("--list-kinds", list_kinds, "print the experiment kinds and exit");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail(hotspin::kExitValidation, "validation", e.what());
  }
  if (list_kinds) {
    for (const auto& k : hotspin::experiment_kinds()) std::cout << k << '\n';
    return 0;
  }

  nlohmann::json j = nlohmann::json::object();
  std::string base = ".";
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) return fail(hotspin::kExitValidation, "validation", "cannot read " + config_path);
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      return fail(hotspin::kExitValidation, "validation", e.what());
    }
    base = std::filesystem::path(config_path).parent_path().string();
    if (base.empty()) base = ".";
  }
  if (!kind.empty()) j["kind"] = kind;
  if (*seed_opt) j["seed"] = seed;
  if (!profile.empty()) j["profile"] = profile;

  hotspin::RunConfig cfg;
  try {
    cfg = hotspin::RunConfig::from_json(j, base);
  } catch (const hotspin::Error& e) {
    return fail(hotspin::kExitValidation, e.kind(), e.what());
  }
  if (!out.empty()) cfg.out_dir = out;
  cfg.threads = threads;
  cfg.timing = timing;

  const int code = hotspin::execute(cfg);
  if (code == hotspin::kExitLock)
    return fail(code, "lock", "output directory " + cfg.out_dir + " is in use");
  if (code != hotspin::kExitOk) {
    std::ifstream err(std::filesystem::path(cfg.out_dir) / "error.json");
    if (err) {
      std::stringstream ss;
      ss << err.rdbuf();
      std::cerr << ss.str();
    } else if (code == hotspin::kExitFit) {
      std::cerr << "fit failed; see " << cfg.out_dir << "/report.json\n";
    }
  } else {
    std::cout << cfg.out_dir << "/report.json\n";
  }
  return code;
}
