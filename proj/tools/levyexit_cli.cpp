/*
   Copyright 2026 The levyexit Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <iostream>

#include <CLI11.hpp>

#include "levyexit/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"first-exit experiments for heavy-tailed Levy perturbations of attractors"};

  std::string config_path;
  levyexit::RunOverrides overrides;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string out_dir;

  app.add_option("--config", config_path, "experiment config (JSON)")->required();
  app.add_flag("--validate-only", overrides.validate_only,
               "parse and validate, print derived quantities, run nothing");
  auto* seed_opt = app.add_option("--seed", seed, "override mc.base_seed");
  auto* workers_opt =
      app.add_option("--workers", workers, "worker threads (default: LEVYEXIT_WORKERS or hardware)");
  auto* out_opt = app.add_option("--out", out_dir, "override the output directory");

  CLI11_PARSE(app, argc, argv);

  if (*seed_opt) overrides.seed = seed;
  if (*workers_opt) overrides.workers = workers;
  if (*out_opt) overrides.out_dir = out_dir;

  try {
    const auto cfg = levyexit::load_config(config_path);
    const auto result = levyexit::run(cfg, overrides, std::cout);
    return result.exit_code;
  } catch (const levyexit::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const levyexit::NoExitError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  }
}
