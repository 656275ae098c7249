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

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "levyexit/coupling.hpp"
#include "levyexit/dynamics.hpp"
#include "levyexit/geometry.hpp"
#include "levyexit/levy.hpp"

namespace levyexit {

enum class SmallNoiseMode { off, compound_gaussian };

struct SimConfig {
  double eps = 0.0;
  double gamma = 0.1;   // start-point inset exponent, in (0, 1/5)
  double rho = 0.25;    // threshold exponent, in (0, 1/2)
  double ode_step = 1e-3;
  SmallNoiseMode small_noise = SmallNoiseMode::off;
  std::optional<double> r_min;  // inner cutoff of the simulated mid band
  double t_max = 0.0;           // absolute cutoff; callers set t_max_factor / rate
  long n_paths = 0;
  std::uint64_t base_seed = 0;
  double crossing_tol = 1e-8;   // bisection tolerance for mid-flight exits

  /// Checks the theorem's parameter regime, including
  /// 1 - rho - (5/2) gamma > 0 so that eps rho^eps / delta_eps^{5/2} -> 0.
  void validate() const;
};

struct ExitRecord {
  long path_id = 0;
  double exit_time = 0.0;
  Vec exit_point;
  bool exited_at_jump = false;
  long n_jumps = 0;  // large-jump epochs strictly before the exit time
  bool truncated = false;
};

/// Everything one path needs; shared read-only across workers.
struct PathScenario {
  const VectorField* field = nullptr;
  const Domain* dom = nullptr;
  const JumpCoupling* coupling = nullptr;
  const LevyModel* model = nullptr;
  JumpDecomposition decomp;
  Vec x0;
};

/// One first-exit path of the big/small-jump scheme: deterministic flow (plus
/// optional small-noise increments) between EXP(beta_eps) epochs, one large
/// jump applied at each epoch, membership checked every step with the
/// crossing time bisected to crossing_tol when the continuous part exits.
ExitRecord simulate_path(const SimConfig& cfg, const PathScenario& sc, long path_id,
                         RngStream rng);

struct ExperimentSummary {
  long n_paths = 0;
  long n_truncated = 0;
  long n_exited_at_jump = 0;
  long n_errors = 0;  // flow blow-ups, recorded as truncated
  double mean_exit_time = 0.0;
  double var_exit_time = 0.0;
  double jump_exit_fraction = 0.0;  // among untruncated exits
  std::map<std::string, long> target_hits;
  std::vector<std::string> warnings;
};

struct ExperimentResult {
  std::vector<ExitRecord> records;  // ordered by path_id
  ExperimentSummary summary;
};

/// Runs n_paths paths on a worker pool. Path i draws from the counter-based
/// stream (base_seed, i), so results are bitwise independent of the worker
/// count and schedule; records are collected by path_id.
ExperimentResult run_experiment(const SimConfig& cfg, const PathScenario& sc,
                                const std::map<std::string, TargetSet>& targets, int workers = 1);

/// CSV emission, header:
/// path_id,exit_time,exit_x0..exit_x{d-1},exited_at_jump,n_jumps,truncated
void write_records_csv(std::ostream& os, const std::vector<ExitRecord>& records, int dim);

}  // namespace levyexit
