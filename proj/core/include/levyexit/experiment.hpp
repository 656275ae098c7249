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

#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "levyexit/config.hpp"
#include "levyexit/predictor.hpp"
#include "levyexit/stats.hpp"

namespace levyexit {

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;  // absent: LEVYEXIT_WORKERS env var, else hardware
  std::optional<std::string> out_dir;
  bool validate_only = false;
};

struct EpsResult {
  double eps = 0.0;
  ExitLawPrediction prediction;
  ExperimentSummary mc_summary;
  KsReport ks;
  double mean_normalized = 0.0;
  double truncated_fraction = 0.0;
  std::vector<std::pair<std::string, FractionReport>> locations;
  bool passed = true;
};

struct RunResult {
  std::string scenario;
  std::vector<EpsResult> eps_results;
  bool ks_pass = true;          // every eps
  bool locations_pass = true;
  bool truncation_ok = true;
  bool mean_norm_ok = true;
  int exit_code = 0;  // 0 ok, 1 assertion failure, 4 excessive truncation
};

/// Full pipeline for one config: detect the attractor once, build the
/// predictor, then per epsilon run the Monte Carlo, the goodness-of-fit
/// tests, and emit prediction.json / records_eps*.csv / summary.json /
/// convergence.csv under the output directory. With validate_only the
/// derived quantities (rho^eps, beta_eps, rate) are printed and nothing runs.
RunResult run(const ExperimentConfig& cfg, const RunOverrides& overrides, std::ostream& log);

/// Worker count resolution: override > LEVYEXIT_WORKERS > hardware.
int resolve_workers(const std::optional<int>& override_value);

}  // namespace levyexit
