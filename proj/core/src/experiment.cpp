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

#include "levyexit/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>

#include <json.hpp>

namespace levyexit {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt_eps(double eps) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", eps);
  return buf;
}

ordered_json prediction_to_json(const ExitLawPrediction& p) {
  ordered_json j;
  j["eps"] = p.eps;
  j["q_exit"] = p.q_exit;
  j["h_eps"] = p.h_eps;
  j["rate"] = p.rate;
  j["lambda_eps"] = p.lambda_eps;
  ordered_json loc = ordered_json::object();
  for (const auto& [name, v] : p.location_law) loc[name] = v;
  j["location_law"] = loc;
  ordered_json diag;
  diag["n_angles"] = p.n_angles;
  diag["q_exit_refined"] = p.q_exit_refined;
  diag["q_exit_rel_change"] = p.q_exit_rel_change;
  if (p.shell.checked) {
    diag["boundary_shell_widths"] = p.shell.widths;
    diag["boundary_shell_masses"] = p.shell.masses;
    diag["boundary_shell_ok"] = p.shell.ok;
  }
  j["diagnostics"] = diag;
  return j;
}

Vec pick_start(const ExperimentConfig& cfg, const ErgodicMeasure& P, double delta_eps) {
  if (cfg.start) {
    if (!(ReducedDomain{*cfg.domain, delta_eps}.contains(*cfg.start)))
      throw ConfigError("mc.start: start point must lie in the reduced domain D_{eps^gamma} "
                        "(inset " + std::to_string(delta_eps) + ")");
    return *cfg.start;
  }
  // deepest attractor point
  const Vec* best = &P.points.front();
  double best_sd = cfg.domain->signed_distance(*best);
  for (const auto& p : P.points) {
    const double sd = cfg.domain->signed_distance(p);
    if (sd > best_sd) {
      best_sd = sd;
      best = &p;
    }
  }
  if (best_sd <= delta_eps)
    throw ConfigError("no attractor point lies in D_{eps^gamma}; lower gamma or eps");
  return *best;
}

}  // namespace

int resolve_workers(const std::optional<int>& override_value) {
  if (override_value) return std::max(1, *override_value);
  if (const char* env = std::getenv("LEVYEXIT_WORKERS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

RunResult run(const ExperimentConfig& cfg, const RunOverrides& overrides, std::ostream& log) {
  namespace fs = std::filesystem;
  RunResult result;
  result.scenario = cfg.scenario;

  const std::uint64_t base_seed = overrides.seed.value_or(cfg.base_seed);
  const std::string out_dir = overrides.out_dir.value_or(cfg.out_dir);
  const int workers = resolve_workers(overrides.workers);

  // attractor and predictor are per-scenario, cached across the eps grid
  const ErgodicMeasure P =
      detect_attractor(cfg.field, *cfg.domain, cfg.attractor_seed, cfg.detect);
  log << "attractor: "
      << (P.kind == ErgodicMeasure::Kind::fixed_point ? "fixed point" : "limit cycle");
  if (P.kind == ErgodicMeasure::Kind::limit_cycle) log << " (period " << P.period << ")";
  log << ", boundary margin " << P.margin << "\n";

  std::map<std::string, TargetSet> targets(cfg.targets.begin(), cfg.targets.end());
  PredictOptions popt;
  popt.n_angles = cfg.n_angles;
  popt.boundary_check = cfg.boundary_check;
  ExitRatePredictor predictor(P, *cfg.domain, *cfg.coupling, *cfg.levy, targets, popt);

  if (overrides.validate_only) {
    for (double eps : cfg.eps) {
      const auto decomp = make_decomposition(*cfg.levy, eps, cfg.rho, cfg.r_min);
      const auto pred = predictor.predict(eps);
      log << "eps=" << fmt_eps(eps) << "  rho^eps=" << decomp.threshold
          << "  beta_eps=" << decomp.beta << "  q_exit=" << pred.q_exit
          << "  rate=" << pred.rate << "\n";
    }
    log << "validate-only: configuration OK\n";
    return result;
  }

  const bool want_csv = cfg.formats.count("csv") > 0;
  const bool want_json = cfg.formats.count("json") > 0;
  fs::create_directories(out_dir);

  std::vector<std::string> target_names;
  for (const auto& [name, t] : targets) target_names.push_back(name);

  std::string convergence;
  convergence = "eps,rate,mc_mean_normalized,ks_p";
  for (const auto& name : target_names) convergence += ",frac_" + name;
  convergence += "\n";

  const double eps_min = *std::min_element(cfg.eps.begin(), cfg.eps.end());

  for (double eps : cfg.eps) {
    EpsResult er;
    er.eps = eps;
    er.prediction = predictor.predict(eps);

    SimConfig sim;
    sim.eps = eps;
    sim.gamma = cfg.gamma;
    sim.rho = cfg.rho;
    sim.ode_step = cfg.ode_step;
    sim.small_noise = cfg.small_noise;
    sim.r_min = cfg.r_min;
    sim.t_max = cfg.t_max_factor / er.prediction.rate;
    sim.n_paths = cfg.n_paths;
    sim.base_seed = base_seed;

    PathScenario sc;
    sc.field = &cfg.field;
    sc.dom = &*cfg.domain;
    sc.coupling = &*cfg.coupling;
    sc.model = &*cfg.levy;
    sc.decomp = make_decomposition(*cfg.levy, eps, cfg.rho, cfg.r_min);
    sc.x0 = pick_start(cfg, P, std::pow(eps, cfg.gamma));

    log << "eps=" << fmt_eps(eps) << ": rate=" << er.prediction.rate << ", " << cfg.n_paths
        << " paths on " << workers << " workers...\n";
    const ExperimentResult mc = run_experiment(sim, sc, targets, workers);
    er.mc_summary = mc.summary;
    er.truncated_fraction =
        static_cast<double>(mc.summary.n_truncated) / static_cast<double>(cfg.n_paths);

    std::vector<double> exit_times;
    exit_times.reserve(mc.records.size());
    for (const auto& r : mc.records)
      if (!r.truncated) exit_times.push_back(r.exit_time);
    if (exit_times.size() >= 8) {
      er.ks = ks_exponential(exit_times, er.prediction.rate, cfg.ks_level);
      er.mean_normalized = er.prediction.rate * mc.summary.mean_exit_time;
    } else {
      er.ks.pass = false;
      er.mc_summary.warnings.push_back("fewer than 8 untruncated exits; KS not run");
    }

    const long n_ok = static_cast<long>(exit_times.size());
    for (const auto& name : target_names) {
      const double predicted = er.prediction.location_law.at(name);
      const long hits = er.mc_summary.target_hits.at(name);
      er.locations.emplace_back(name, fraction_test(hits, std::max(n_ok, 1L), predicted));
    }

    if (want_csv) {
      std::ofstream recs(fs::path(out_dir) / ("records_eps" + fmt_eps(eps) + ".csv"));
      write_records_csv(recs, mc.records, cfg.domain->dim());
    }

    char row[256];
    std::snprintf(row, sizeof row, "%s,%.17g,%.17g,%.17g", fmt_eps(eps).c_str(),
                  er.prediction.rate, er.mean_normalized, er.ks.p_value);
    convergence += row;
    for (const auto& [name, rep] : er.locations) {
      std::snprintf(row, sizeof row, ",%.17g", rep.fraction);
      convergence += row;
    }
    convergence += "\n";

    // assertion bookkeeping; the KS gate sits at the smallest eps
    if (cfg.check_ks && eps == eps_min && !er.ks.pass) {
      result.ks_pass = false;
      er.passed = false;
    }
    if (er.truncated_fraction > cfg.max_truncated_fraction) {
      result.truncation_ok = false;
      er.passed = false;
    }
    if (cfg.check_locations)
      for (const auto& [name, rep] : er.locations)
        if (!rep.pass) {
          result.locations_pass = false;
          er.passed = false;
        }
    if (cfg.mean_norm_range &&
        (er.mean_normalized < cfg.mean_norm_range->first ||
         er.mean_normalized > cfg.mean_norm_range->second)) {
      result.mean_norm_ok = false;
      er.passed = false;
    }

    log << "  mean_norm=" << er.mean_normalized << " ks_p=" << er.ks.p_value
        << " truncated=" << er.mc_summary.n_truncated
        << " jump_exit_fraction=" << er.mc_summary.jump_exit_fraction << "\n";
    result.eps_results.push_back(std::move(er));
  }

  if (want_csv) {
    std::ofstream conv(fs::path(out_dir) / "convergence.csv");
    conv << convergence;
  }

  if (want_json) {
    ordered_json pred_json;
    pred_json["scenario"] = cfg.scenario;
    pred_json["predictions"] = ordered_json::array();
    for (const auto& er : result.eps_results)
      pred_json["predictions"].push_back(prediction_to_json(er.prediction));
    std::ofstream pred_out(fs::path(out_dir) / "prediction.json");
    pred_out << pred_json.dump(2) << "\n";

    ordered_json summary;
    summary["scenario"] = cfg.scenario;
    summary["ks_pass"] = result.ks_pass;
    summary["eps_results"] = ordered_json::array();
    for (const auto& er : result.eps_results) {
      ordered_json e;
      e["eps"] = er.eps;
      e["prediction"] = prediction_to_json(er.prediction);
      ordered_json mc;
      mc["n"] = er.mc_summary.n_paths;
      mc["mean_norm"] = er.mean_normalized;
      mc["mean_exit_time"] = er.mc_summary.mean_exit_time;
      mc["var_exit_time"] = er.mc_summary.var_exit_time;
      mc["n_truncated"] = er.mc_summary.n_truncated;
      mc["jump_exit_fraction"] = er.mc_summary.jump_exit_fraction;
      ordered_json ks;
      ks["n"] = er.ks.n;
      ks["statistic"] = er.ks.statistic;
      ks["p_value"] = er.ks.p_value;
      ks["level"] = er.ks.level;
      ks["pass"] = er.ks.pass;
      mc["ks"] = ks;
      e["mc"] = mc;
      ordered_json locs = ordered_json::object();
      for (const auto& [name, rep] : er.locations) {
        ordered_json l;
        l["fraction"] = rep.fraction;
        l["predicted"] = rep.predicted;
        l["wilson_lo"] = rep.interval.lo;
        l["wilson_hi"] = rep.interval.hi;
        l["pass"] = rep.pass;
        locs[name] = l;
      }
      e["locations"] = locs;
      e["warnings"] = er.mc_summary.warnings;
      summary["eps_results"].push_back(e);
    }
    std::ofstream sum_out(fs::path(out_dir) / "summary.json");
    sum_out << summary.dump(2) << "\n";
  }

  if (!result.truncation_ok) {
    result.exit_code = 4;
    log << "FAIL: truncated fraction exceeded " << cfg.max_truncated_fraction
        << "; increase t_max_factor or n_paths\n";
  } else if (!result.ks_pass || !result.locations_pass || !result.mean_norm_ok) {
    result.exit_code = 1;
    log << "FAIL: " << (!result.ks_pass ? "KS " : "") << (!result.locations_pass ? "location " : "")
        << (!result.mean_norm_ok ? "mean-normalization " : "") << "assertion(s) failed\n";
  } else {
    log << "all configured assertions passed\n";
  }
  return result;
}

}  // namespace levyexit
