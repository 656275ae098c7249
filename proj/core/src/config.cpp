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

#include "levyexit/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace levyexit {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw ConfigError("config error at key '" + key + "': " + why);
}

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) bad(path + key, "missing");
  return j.at(key);
}

double num(const json& j, const std::string& key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number()) bad(path + key, "expected a number");
  return v.get<double>();
}

double num_or(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) bad(key, "expected a number");
  return j.at(key).get<double>();
}

std::string str(const json& j, const std::string& key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_string()) bad(path + key, "expected a string");
  return v.get<std::string>();
}

Vec vec(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) bad(path, "expected a nonempty array of numbers");
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) bad(path, "expected numbers");
    out[i] = v[i].get<double>();
  }
  return out;
}

Domain parse_domain(const json& j) {
  const std::string kind = str(j, "kind", "domain.");
  if (kind == "ball")
    return Domain::ball(vec(require(j, "center", "domain."), "domain.center"),
                        num(j, "radius", "domain."));
  if (kind == "annulus")
    return Domain::annulus(vec(require(j, "center", "domain."), "domain.center"),
                           num(j, "r_in", "domain."), num(j, "r_out", "domain."));
  if (kind == "polygon") {
    const json& vs = require(j, "vertices", "domain.");
    if (!vs.is_array() || vs.size() < 3) bad("domain.vertices", "expected >= 3 vertices");
    std::vector<Eigen::Vector2d> verts;
    for (const auto& v : vs) {
      const Vec p = vec(v, "domain.vertices[]");
      if (p.size() != 2) bad("domain.vertices", "vertices must be 2-D");
      verts.emplace_back(p[0], p[1]);
    }
    return Domain::polygon(std::move(verts));
  }
  bad("domain.kind", "one of ball|annulus|polygon (levelset domains are API-only)");
}

PhiField parse_phi(const json& j, const std::string& path) {
  const std::string kind = str(j, "kind", path);
  const int dim = static_cast<int>(num_or(j, "dim", 2));
  if (kind == "identity") return PhiField::identity(dim);
  if (kind == "scalar") return PhiField::scalar(dim, num(j, "value", path));
  if (kind == "diag") return PhiField::diagonal(vec(require(j, "values", path), path + "values"));
  if (kind == "state_diagonal") return PhiField::state_diagonal(dim);
  if (kind == "constant") {
    const json& rows = require(j, "rows", path);
    if (!rows.is_array() || rows.empty()) bad(path + "rows", "expected a matrix");
    const std::size_t ncol = rows[0].size();
    Mat m(rows.size(), ncol);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const Vec row = vec(rows[r], path + "rows[]");
      if (static_cast<std::size_t>(row.size()) != ncol) bad(path + "rows", "ragged matrix");
      m.row(r) = row;
    }
    return PhiField::constant(std::move(m));
  }
  bad(path + "kind", "one of identity|scalar|diag|constant|state_diagonal");
}

JumpCoupling parse_coupling(const json& j, int dim) {
  const std::string kind = str(j, "kind", "coupling.");
  JumpCoupling c = [&] {
    if (kind == "additive") return JumpCoupling::additive(dim);
    if (kind == "ito") return JumpCoupling::ito(parse_phi(require(j, "phi", "coupling."),
                                                          "coupling.phi."));
    if (kind == "marcus") return JumpCoupling::marcus(parse_phi(require(j, "phi", "coupling."),
                                                                "coupling.phi."));
    bad("coupling.kind", "one of additive|ito|marcus");
  }();
  c.lipschitz_bound = num_or(j, "lipschitz", 1.0);
  return c;
}

LevyModel parse_levy(const json& j) {
  const double alpha = num(j, "alpha", "levy.");
  const int dim = static_cast<int>(num_or(j, "dim", 2));
  SpectralMeasure spectral = [&]() {
    if (!j.contains("spectral")) return SpectralMeasure::isotropic(dim);
    const json& s = j.at("spectral");
    const std::string kind = str(s, "kind", "levy.spectral.");
    if (kind == "isotropic") return SpectralMeasure::isotropic(dim);
    if (kind == "atoms") {
      const json& ds = require(s, "directions", "levy.spectral.");
      const json& ws = require(s, "weights", "levy.spectral.");
      std::vector<Vec> dirs;
      for (const auto& d : ds) dirs.push_back(vec(d, "levy.spectral.directions[]"));
      std::vector<double> weights;
      for (const auto& w : ws) weights.push_back(w.get<double>());
      return SpectralMeasure::atoms(std::move(dirs), std::move(weights));
    }
    bad("levy.spectral.kind", "one of isotropic|atoms");
  }();

  double tail_scale;
  if (j.contains("tail_scale")) {
    tail_scale = num(j, "tail_scale", "levy.");
  } else if (spectral.is_isotropic() && dim == 2) {
    tail_scale = kTwoPi / alpha;  // the case-study measure dy/||y||^{2+alpha}
  } else {
    bad("levy.tail_scale", "required unless the model is isotropic 2-D");
  }

  LevyModel model(alpha, dim, std::move(spectral), tail_scale);
  if (j.contains("slowly_varying")) {
    const json& sv = j.at("slowly_varying");
    const std::string kind = str(sv, "kind", "levy.slowly_varying.");
    if (kind == "constant") {
      const double value = num_or(sv, "value", 1.0);
      if (value <= 0.0) bad("levy.slowly_varying.value", "must be positive");
      model.set_slowly_varying([value](double) { return value; }, true);
    } else if (kind == "log_shift") {
      const double scale = num_or(sv, "scale", 1.0);
      model.set_slowly_varying(
          [scale](double r) { return 1.0 + scale / std::log(std::exp(1.0) + r); }, false);
    } else {
      bad("levy.slowly_varying.kind", "one of constant|log_shift");
    }
  }
  if (j.contains("drift")) model.set_drift(vec(j.at("drift"), "levy.drift"));
  if (j.contains("gaussian_diag"))
    model.set_gaussian_diag(vec(j.at("gaussian_diag"), "levy.gaussian_diag"));
  return model;
}

TargetSet parse_target(const json& j, const std::string& path) {
  const std::string kind = str(j, "kind", path);
  if (kind == "ball")
    return TargetSet::ball(vec(require(j, "center", path), path + "center"),
                           num(j, "radius", path));
  if (kind == "half_space")
    return TargetSet::half_space(vec(require(j, "normal", path), path + "normal"),
                                 num(j, "offset", path));
  if (kind == "complement")
    return TargetSet::complement(parse_target(require(j, "of", path), path + "of."));
  if (kind == "intersection" || kind == "union") {
    const json& parts = require(j, "of", path);
    if (!parts.is_array() || parts.empty()) bad(path + "of", "expected a nonempty array");
    std::vector<TargetSet> sets;
    for (const auto& p : parts) sets.push_back(parse_target(p, path + "of[]."));
    return kind == "intersection" ? TargetSet::intersection(std::move(sets))
                                  : TargetSet::set_union(std::move(sets));
  }
  bad(path + "kind", "one of ball|half_space|complement|intersection|union");
}

VectorField parse_field(const json& j, Vec& seed_out, const Domain& dom) {
  const std::string kind = str(j, "kind", "field.");
  VectorField f;
  if (kind == "linear") {
    f = VectorField::linear_decay(dom.dim());
  } else if (kind == "van_der_pol") {
    if (dom.dim() != 2) bad("field.kind", "van_der_pol requires a 2-D domain");
    f = VectorField::van_der_pol(num_or(j, "mu", 1.0));
  } else {
    bad("field.kind", "one of linear|van_der_pol");
  }
  if (j.contains("seed")) {
    seed_out = vec(j.at("seed"), "field.seed");
    if (seed_out.size() != dom.dim()) bad("field.seed", "dimension mismatch with the domain");
  } else {
    seed_out = 0.5 * (dom.bounding_box().lo + dom.bounding_box().hi);
  }
  if (!dom.contains(seed_out))
    bad("field.seed", "attractor-detection seed must lie inside the domain");
  return f;
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  ExperimentConfig cfg;
  cfg.scenario = str(j, "scenario", "");
  cfg.domain = parse_domain(require(j, "domain", ""));
  cfg.field = parse_field(require(j, "field", ""), cfg.attractor_seed, *cfg.domain);
  cfg.coupling = parse_coupling(require(j, "coupling", ""), cfg.domain->dim());
  cfg.levy = parse_levy(require(j, "levy", ""));

  if (cfg.levy->dim() != cfg.coupling->jump_dim())
    bad("levy.dim", "jump dimension must match the coupling");
  if (cfg.coupling->state_dim() != cfg.domain->dim())
    bad("coupling", "state dimension must match the domain");

  const json& eps = require(j, "eps", "");
  if (!eps.is_array() || eps.empty()) bad("eps", "expected a nonempty array");
  for (const auto& e : eps) {
    const double v = e.get<double>();
    if (!(v > 0.0 && v < 1.0)) bad("eps", "every value must be in (0,1)");
    cfg.eps.push_back(v);
  }
  cfg.gamma = num_or(j, "gamma", 0.1);
  cfg.rho = num_or(j, "rho", 0.25);
  if (!(cfg.gamma > 0.0 && cfg.gamma < 0.2)) bad("gamma", "must be in (0, 1/5)");
  if (!(cfg.rho > 0.0 && cfg.rho < 0.5)) bad("rho", "must be in (0, 1/2)");
  if (!(1.0 - cfg.rho - 2.5 * cfg.gamma > 0.0))
    bad("gamma", "regime violated: need 1 - rho - (5/2) gamma > 0");

  if (j.contains("targets")) {
    const json& ts = j.at("targets");
    if (!ts.is_object()) bad("targets", "expected an object of named sets");
    for (const auto& [name, t] : ts.items())
      cfg.targets.emplace_back(name, parse_target(t, "targets." + name + "."));
  }

  if (j.contains("mc")) {
    const json& mc = j.at("mc");
    cfg.n_paths = static_cast<long>(num_or(mc, "n_paths", 1000));
    if (cfg.n_paths < 1) bad("mc.n_paths", "must be >= 1");
    if (mc.contains("base_seed")) cfg.base_seed = mc.at("base_seed").get<std::uint64_t>();
    cfg.ode_step = num_or(mc, "ode_step", 1e-3);
    if (!(cfg.ode_step > 0.0)) bad("mc.ode_step", "must be positive");
    if (mc.contains("small_noise")) {
      const std::string m = str(mc, "small_noise", "mc.");
      if (m == "off")
        cfg.small_noise = SmallNoiseMode::off;
      else if (m == "compound_gaussian")
        cfg.small_noise = SmallNoiseMode::compound_gaussian;
      else
        bad("mc.small_noise", "one of off|compound_gaussian");
    }
    if (mc.contains("r_min")) {
      cfg.r_min = num(mc, "r_min", "mc.");
      if (!(*cfg.r_min > 0.0)) bad("mc.r_min", "must be positive");
    }
    cfg.t_max_factor = num_or(mc, "t_max_factor", 50.0);
    if (!(cfg.t_max_factor > 0.0)) bad("mc.t_max_factor", "must be positive");
    if (mc.contains("start") && !mc.at("start").is_string())
      cfg.start = vec(mc.at("start"), "mc.start");
  }

  if (j.contains("outputs")) {
    const json& out = j.at("outputs");
    cfg.out_dir = out.contains("dir") ? str(out, "dir", "outputs.") : cfg.out_dir;
    if (out.contains("formats")) {
      cfg.formats.clear();
      for (const auto& f : out.at("formats")) {
        const std::string v = f.get<std::string>();
        if (v != "csv" && v != "json") bad("outputs.formats", "entries must be csv|json");
        cfg.formats.insert(v);
      }
    }
  }

  if (j.contains("assertions")) {
    const json& as = j.at("assertions");
    cfg.ks_level = num_or(as, "ks_level", 0.01);
    if (as.contains("check_ks")) cfg.check_ks = as.at("check_ks").get<bool>();
    cfg.max_truncated_fraction = num_or(as, "max_truncated_fraction", 0.1);
    if (as.contains("check_locations")) cfg.check_locations = as.at("check_locations").get<bool>();
    if (as.contains("mean_norm_range")) {
      const Vec r = vec(as.at("mean_norm_range"), "assertions.mean_norm_range");
      if (r.size() != 2 || !(r[0] < r[1])) bad("assertions.mean_norm_range", "expected [lo, hi]");
      cfg.mean_norm_range = {r[0], r[1]};
    }
  }

  if (j.contains("predictor")) {
    const json& p = j.at("predictor");
    cfg.n_angles = static_cast<int>(num_or(p, "n_angles", 1024));
    if (cfg.n_angles < 4) bad("predictor.n_angles", "must be >= 4");
    if (p.contains("boundary_check")) cfg.boundary_check = p.at("boundary_check").get<bool>();
  }

  if (j.contains("detect")) {
    const json& d = j.at("detect");
    cfg.detect.transient_time = num_or(d, "transient_time", cfg.detect.transient_time);
    cfg.detect.step = num_or(d, "step", cfg.detect.step);
    cfg.detect.cycle_points = static_cast<int>(num_or(d, "cycle_points", cfg.detect.cycle_points));
    cfg.detect.probe_time = num_or(d, "probe_time", cfg.detect.probe_time);
  }

  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_json(ss.str());
}

}  // namespace levyexit
