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

#include "levyexit/predictor.hpp"

#include <cmath>

namespace levyexit {

namespace {

RaySectionOptions resolved_ray(const PredictOptions& opt, const Domain& dom) {
  RaySectionOptions ray = opt.ray;
  if (ray.scale <= 0.0) ray.scale = std::max(dom.scale(), 1.0);
  return ray;
}

double point_mass(const Vec& y, const TargetSet& target, const JumpCoupling& coupling,
                  const LevyModel& model, int n_angles, const RaySectionOptions& ray) {
  double acc = 0.0;
  for (const auto& [u, w] : model.spectral().quadrature(n_angles))
    acc += w * mu_radial_mass(ray_section(target, y, coupling, u, ray), model.alpha());
  return acc;
}

}  // namespace

double exit_set_mass(const Vec& y, const TargetSet& target, const JumpCoupling& coupling,
                     const LevyModel& model, const PredictOptions& opt) {
  RaySectionOptions ray = opt.ray;
  if (ray.scale <= 0.0) ray.scale = std::max(1.0, y.norm());
  return point_mass(y, target, coupling, model, opt.n_angles, ray);
}

double q_measure(const ErgodicMeasure& P, const TargetSet& target, const JumpCoupling& coupling,
                 const LevyModel& model, const PredictOptions& opt) {
  RaySectionOptions ray = opt.ray;
  if (ray.scale <= 0.0) ray.scale = 1.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < P.points.size(); ++i)
    acc += P.weights[i] * point_mass(P.points[i], target, coupling, model, opt.n_angles, ray);
  return acc;
}

ExitRatePredictor::ExitRatePredictor(ErgodicMeasure P, Domain dom, JumpCoupling coupling,
                                     LevyModel model, std::map<std::string, TargetSet> targets,
                                     PredictOptions opt)
    : P_(std::move(P)),
      dom_(std::move(dom)),
      coupling_(std::move(coupling)),
      model_(std::move(model)),
      targets_(std::move(targets)),
      opt_(opt) {
  if (P_.points.empty()) throw ConfigError("predictor: empty ergodic measure");
  opt_.ray = resolved_ray(opt_, dom_);

  const TargetSet dc = TargetSet::domain_complement(dom_);
  const auto quad = model_.spectral().quadrature(opt_.n_angles);

  // D^c masses, and the retained sections when lambda_eps has no closed form
  q_exit_ = 0.0;
  const bool keep_sections = !model_.ell_is_constant();
  for (std::size_t i = 0; i < P_.points.size(); ++i) {
    double mass_i = 0.0;
    for (const auto& [u, w] : quad) {
      const IntervalList iv = ray_section(dc, P_.points[i], coupling_, u, opt_.ray);
      mass_i += w * mu_radial_mass(iv, model_.alpha());
      if (keep_sections)
        for (const auto& it : iv.intervals())
          dc_sections_.push_back({it.lo, it.hi, P_.weights[i] * w});
    }
    q_exit_ += P_.weights[i] * mass_i;
  }
  if (!(q_exit_ > 0.0))
    throw NoExitError("predictor: Q(D^c) = 0, the theorem's exit hypothesis fails");

  q_exit_refined_ = averaged_mass(dc, 2 * opt_.n_angles);

  for (const auto& [name, U] : targets_) {
    const TargetSet clipped = TargetSet::intersection({U, dc});
    location_law_[name] = averaged_mass(clipped, opt_.n_angles) / q_exit_;
  }

  if (opt_.boundary_check) {
    shell_.checked = true;
    shell_.widths = opt_.shell_widths;
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < opt_.shell_widths.size(); ++k) {
      const double m = averaged_mass(boundary_shell(dom_, opt_.shell_widths[k]), opt_.n_angles);
      shell_.masses[k] = m;
      if (m > prev * (1.0 + 1e-9)) shell_.ok = false;
      prev = m;
    }
    if (shell_.masses.back() > 1e-3 * q_exit_) shell_.ok = false;
  }
}

double ExitRatePredictor::averaged_mass(const TargetSet& target, int n_angles) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < P_.points.size(); ++i)
    acc += P_.weights[i] * point_mass(P_.points[i], target, coupling_, model_, n_angles, opt_.ray);
  return acc;
}

ExitLawPrediction ExitRatePredictor::predict(double eps) const {
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("predict: eps must be in (0,1)");
  ExitLawPrediction p;
  p.eps = eps;
  p.q_exit = q_exit_;
  p.h_eps = model_.tail_mass(1.0 / eps);
  p.rate = q_exit_ * p.h_eps;
  if (model_.ell_is_constant()) {
    // nu is exactly self-similar: nu(E/eps) = h_eps mu(E)
    p.lambda_eps = q_exit_ * p.h_eps;
  } else {
    double acc = 0.0;
    for (const auto& s : dc_sections_) {
      const double hi_mass = std::isinf(s.hi) ? 0.0 : model_.tail_mass(s.hi / eps);
      acc += s.w * (model_.tail_mass(s.lo / eps) - hi_mass);
    }
    p.lambda_eps = acc;
  }
  p.location_law = location_law_;
  p.q_exit_refined = q_exit_refined_;
  p.q_exit_rel_change = std::abs(q_exit_refined_ - q_exit_) / q_exit_;
  p.shell = shell_;
  p.n_angles = opt_.n_angles;
  return p;
}

ExitLawPrediction predict(const ErgodicMeasure& P, const Domain& dom,
                          const std::map<std::string, TargetSet>& targets,
                          const JumpCoupling& coupling, const LevyModel& model, double eps,
                          const PredictOptions& opt) {
  ExitRatePredictor ctx(P, dom, coupling, model, targets, opt);
  return ctx.predict(eps);
}

HoleMassStudy hole_mass_study(const ErgodicMeasure& P, const Vec& hole_center,
                              const std::vector<double>& radii, const JumpCoupling& coupling,
                              const LevyModel& model, const PredictOptions& opt) {
  HoleMassStudy study;
  study.radii = radii;
  for (double r : radii)
    study.masses.push_back(q_measure(P, TargetSet::ball(hole_center, r), coupling, model, opt));
  // mass of a shrinking ball vanishes like its area; extrapolate linearly in
  // r^2 from the two smallest radii
  if (radii.size() >= 2) {
    const std::size_t n = radii.size();
    const double r1 = radii[n - 2], r2 = radii[n - 1];
    const double m1 = study.masses[n - 2], m2 = study.masses[n - 1];
    const double slope = (m1 - m2) / (r1 * r1 - r2 * r2);
    study.extrapolated = std::max(0.0, m2 - slope * r2 * r2);
  } else if (!study.masses.empty()) {
    study.extrapolated = study.masses.back();
  }
  return study;
}

}  // namespace levyexit
