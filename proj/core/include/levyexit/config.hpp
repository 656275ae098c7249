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

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "levyexit/coupling.hpp"
#include "levyexit/dynamics.hpp"
#include "levyexit/geometry.hpp"
#include "levyexit/levy.hpp"
#include "levyexit/montecarlo.hpp"

namespace levyexit {

/// A fully validated experiment description: field, domain, coupling, Levy
/// model, epsilon grid, targets, Monte Carlo settings, outputs, assertions.
/// Invalid configs raise ConfigError naming the offending key.
struct ExperimentConfig {
  std::string scenario;

  VectorField field;
  Vec attractor_seed;  // seed for attractor detection, inside the domain
  std::optional<Domain> domain;
  std::optional<JumpCoupling> coupling;
  std::optional<LevyModel> levy;

  std::vector<double> eps;
  double gamma = 0.1;
  double rho = 0.25;

  std::vector<std::pair<std::string, TargetSet>> targets;

  // mc
  long n_paths = 1000;
  std::uint64_t base_seed = 1;
  double ode_step = 1e-3;
  SmallNoiseMode small_noise = SmallNoiseMode::off;
  std::optional<double> r_min;
  double t_max_factor = 50.0;
  std::optional<Vec> start;  // absent: the attractor point with the best margin

  // outputs
  std::string out_dir = "out";
  std::set<std::string> formats{"csv", "json"};

  // assertions; the KS gate applies at the smallest eps of the grid (the
  // closest point to the limit the corollary speaks about), all eps reported
  double ks_level = 0.01;
  bool check_ks = true;
  double max_truncated_fraction = 0.1;
  bool check_locations = true;
  std::optional<std::pair<double, double>> mean_norm_range;

  // predictor / attractor detection
  int n_angles = 1024;
  bool boundary_check = true;
  DetectOptions detect;
};

ExperimentConfig parse_config_json(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

}  // namespace levyexit
