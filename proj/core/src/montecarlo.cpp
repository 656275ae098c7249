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

#include "levyexit/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>

namespace levyexit {

void SimConfig::validate() const {
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("sim: eps must be in (0,1)");
  if (!(gamma > 0.0 && gamma < 0.2)) throw ConfigError("sim: gamma must be in (0, 1/5)");
  if (!(rho > 0.0 && rho < 0.5)) throw ConfigError("sim: rho must be in (0, 1/2)");
  if (!(1.0 - rho - 2.5 * gamma > 0.0))
    throw ConfigError("sim: need 1 - rho - (5/2) gamma > 0 (eps rho^eps / delta^{5/2} -> 0)");
  if (!(ode_step > 0.0)) throw ConfigError("sim: ode_step must be positive");
  if (!(t_max > 0.0)) throw ConfigError("sim: t_max must be positive");
  if (n_paths < 1) throw ConfigError("sim: n_paths must be >= 1");
  if (!(crossing_tol > 0.0)) throw ConfigError("sim: crossing_tol must be positive");
  if (r_min && !(*r_min > 0.0)) throw ConfigError("sim: r_min must be positive");
}

namespace {

// Small-noise increments enter the state through Phi(x) for multiplicative
// couplings (Euler-order linearization; exact for ito, O(eps^2 ||z||^2) for
// marcus within one step).
Vec apply_small(const JumpCoupling& c, const Vec& x, const Vec& incr) {
  if (c.kind() == JumpCoupling::Kind::additive) return incr;
  return c.phi().apply(x, incr);
}

// First crossing time of the deterministic RK4 segment [0, h] from x_in
// (inside) to outside; returns the time and the just-outside state.
double bisect_crossing(FlowStepper& stepper, const Domain& dom, const Vec& x_in, double h,
                       double tol, Vec& x_exit) {
  double lo = 0.0, hi = h;
  Vec x = x_in;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    x = x_in;
    stepper.step(x, mid);
    (dom.contains(x) ? lo : hi) = mid;
  }
  x_exit = x_in;
  stepper.step(x_exit, hi);
  return hi;
}

}  // namespace

ExitRecord simulate_path(const SimConfig& cfg, const PathScenario& sc, long path_id,
                         RngStream rng) {
  const double delta_eps = std::pow(cfg.eps, cfg.gamma);
  if (!(ReducedDomain{*sc.dom, delta_eps}.contains(sc.x0)))
    throw ConfigError("simulate_path: start point not in the reduced domain D_{eps^gamma}");

  ExitRecord rec;
  rec.path_id = path_id;

  const bool noise = cfg.small_noise == SmallNoiseMode::compound_gaussian;
  FlowStepper stepper(*sc.field);
  Vec x = sc.x0;
  Vec x_before(sc.field->dim);
  double t = 0.0;
  long jumps_done = 0;

  while (true) {
    const double tau = sample_waiting_time(sc.decomp, rng);
    const bool cut = t + tau >= cfg.t_max;
    const double segment = cut ? cfg.t_max - t : tau;

    double done = 0.0;
    while (done < segment) {
      const double h = std::min(cfg.ode_step, segment - done);
      x_before = x;
      stepper.step(x, h);
      if (!x.allFinite()) throw FlowBlowupError("simulate_path: flow blow-up", t + done + h);
      if (!sc.dom->contains(x)) {
        Vec x_exit;
        const double tc = bisect_crossing(stepper, *sc.dom, x_before, h, cfg.crossing_tol, x_exit);
        rec.exit_time = t + done + tc;
        rec.exit_point = x_exit;
        rec.exited_at_jump = false;
        rec.n_jumps = jumps_done;
        return rec;
      }
      if (noise) {
        const Vec incr = small_jump_increment(sc.decomp, *sc.model, h, rng);
        x += apply_small(*sc.coupling, x, incr);
        if (!sc.dom->contains(x)) {
          rec.exit_time = t + done + h;
          rec.exit_point = x;
          rec.exited_at_jump = false;
          rec.n_jumps = jumps_done;
          return rec;
        }
      }
      done += h;
    }
    t += segment;

    if (cut) {
      rec.exit_time = cfg.t_max;
      rec.exit_point = x;
      rec.truncated = true;
      rec.n_jumps = jumps_done;
      return rec;
    }

    // large-jump epoch
    const Vec w = sample_large_jump(sc.decomp, *sc.model, rng);
    x += sc.coupling->jump_increment(x, Vec(cfg.eps * w));
    if (!sc.dom->contains(x)) {
      rec.exit_time = t;
      rec.exit_point = x;
      rec.exited_at_jump = true;
      rec.n_jumps = jumps_done;
      return rec;
    }
    ++jumps_done;
  }
}

ExperimentResult run_experiment(const SimConfig& cfg, const PathScenario& sc,
                                const std::map<std::string, TargetSet>& targets, int workers) {
  cfg.validate();
  ExperimentResult res;
  res.records.resize(cfg.n_paths);

  std::atomic<long> next{0};
  std::mutex warn_mutex;
  std::vector<std::string> warnings;
  std::atomic<long> n_errors{0};

  auto work = [&]() {
    while (true) {
      const long i = next.fetch_add(1);
      if (i >= cfg.n_paths) break;
      try {
        res.records[i] = simulate_path(cfg, sc, i, RngStream(cfg.base_seed, i));
      } catch (const FlowBlowupError& e) {
        ExitRecord rec;
        rec.path_id = i;
        rec.exit_time = e.time;
        rec.exit_point = sc.x0;
        rec.truncated = true;
        res.records[i] = std::move(rec);
        ++n_errors;
        std::scoped_lock lock(warn_mutex);
        warnings.push_back("path " + std::to_string(i) + ": " + e.what());
      }
    }
  };

  const int n_workers =
      static_cast<int>(std::max<long>(1, std::min<long>(workers, cfg.n_paths)));
  if (n_workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int k = 0; k < n_workers; ++k) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  auto& s = res.summary;
  s.n_paths = cfg.n_paths;
  s.n_errors = n_errors.load();
  s.warnings = std::move(warnings);
  double sum = 0.0, sum2 = 0.0;
  long n_ok = 0;
  for (const auto& rec : res.records) {
    if (rec.truncated) {
      ++s.n_truncated;
      continue;
    }
    ++n_ok;
    sum += rec.exit_time;
    sum2 += rec.exit_time * rec.exit_time;
    if (rec.exited_at_jump) ++s.n_exited_at_jump;
    for (const auto& [name, target] : targets)
      if (target.contains(rec.exit_point)) ++s.target_hits[name];
  }
  for (const auto& [name, target] : targets) s.target_hits.try_emplace(name, 0);
  if (n_ok > 0) {
    s.mean_exit_time = sum / n_ok;
    s.var_exit_time = std::max(0.0, sum2 / n_ok - s.mean_exit_time * s.mean_exit_time);
    s.jump_exit_fraction = static_cast<double>(s.n_exited_at_jump) / n_ok;
  }
  if (s.n_truncated > cfg.n_paths / 10)
    s.warnings.push_back("more than 10% of paths truncated at t_max; "
                         "exit-rate statistics are unreliable");
  return res;
}

void write_records_csv(std::ostream& os, const std::vector<ExitRecord>& records, int dim) {
  os << "path_id,exit_time";
  for (int i = 0; i < dim; ++i) os << ",exit_x" << i;
  os << ",exited_at_jump,n_jumps,truncated\n";
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  for (const auto& r : records) {
    os << r.path_id << ',';
    put(r.exit_time);
    for (int i = 0; i < dim; ++i) {
      os << ',';
      put(r.exit_point.size() > i ? r.exit_point[i] : 0.0);
    }
    os << ',' << (r.exited_at_jump ? 1 : 0) << ',' << r.n_jumps << ','
       << (r.truncated ? 1 : 0) << '\n';
  }
}

}  // namespace levyexit
