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

#include <array>
#include <map>
#include <string>

#include "levyexit/coupling.hpp"
#include "levyexit/dynamics.hpp"
#include "levyexit/geometry.hpp"
#include "levyexit/levy.hpp"

namespace levyexit {

struct PredictOptions {
  int n_angles = 1024;
  bool boundary_check = true;
  std::array<double, 3> shell_widths{1e-2, 1e-3, 1e-4};
  RaySectionOptions ray;  // ray.scale <= 0 means "use the domain scale"
};

/// mu(E^{target}(y)) with E^{target}(y) = {z : y + G(y, z) in target},
/// integrated over the spectral quadrature with closed-form radial masses.
double exit_set_mass(const Vec& y, const TargetSet& target, const JumpCoupling& coupling,
                     const LevyModel& model, const PredictOptions& opt = {});

/// Q(U) = int_A mu(E^U(y)) P(dy).
double q_measure(const ErgodicMeasure& P, const TargetSet& target, const JumpCoupling& coupling,
                 const LevyModel& model, const PredictOptions& opt = {});

struct BoundaryShellDiag {
  std::array<double, 3> widths{};
  std::array<double, 3> masses{};
  bool checked = false;
  bool ok = true;  // masses decreasing and small relative to q_exit
};

struct ExitLawPrediction {
  double eps = 0.0;
  double q_exit = 0.0;      // Q(D^c)
  double h_eps = 0.0;       // h(1/eps)
  double rate = 0.0;        // Q(D^c) h_eps: the exit-time normalizer
  double lambda_eps = 0.0;  // int nu(E^{D^c}(y)/eps) P(dy)
  std::map<std::string, double> location_law;  // Q(U cap D^c) / Q(D^c)

  // diagnostics
  double q_exit_refined = 0.0;     // doubled angular resolution
  double q_exit_rel_change = 0.0;  // |refined - base| / base
  BoundaryShellDiag shell;
  int n_angles = 0;
};

/// Precomputes the attractor-point ray sections once; evaluating the
/// prediction at each eps is then closed-form. Throws NoExitError when
/// Q(D^c) = 0.
class ExitRatePredictor {
 public:
  ExitRatePredictor(ErgodicMeasure P, Domain dom, JumpCoupling coupling, LevyModel model,
                    std::map<std::string, TargetSet> targets, PredictOptions opt = {});

  ExitLawPrediction predict(double eps) const;
  double q_exit() const { return q_exit_; }
  const std::map<std::string, double>& location_law() const { return location_law_; }
  const ErgodicMeasure& measure() const { return P_; }

 private:
  double averaged_mass(const TargetSet& target, int n_angles) const;

  ErgodicMeasure P_;
  Domain dom_;
  JumpCoupling coupling_;
  LevyModel model_;
  std::map<std::string, TargetSet> targets_;
  PredictOptions opt_;

  double q_exit_ = 0.0;
  double q_exit_refined_ = 0.0;
  std::map<std::string, double> location_law_;
  BoundaryShellDiag shell_;
  // retained D^c section data (lo, hi, weight) for finite-eps nu masses when
  // the slowly varying part is not constant; otherwise lambda_eps is exact
  struct WeightedInterval {
    double lo, hi, w;
  };
  std::vector<WeightedInterval> dc_sections_;
};

/// One-call form of the prediction.
ExitLawPrediction predict(const ErgodicMeasure& P, const Domain& dom,
                          const std::map<std::string, TargetSet>& targets,
                          const JumpCoupling& coupling, const LevyModel& model, double eps,
                          const PredictOptions& opt = {});

/// Q-mass of shrinking balls around `hole_center` under the coupling, plus a
/// linear extrapolation to radius zero; mirrors the removal of an unstable
/// point from the domain.
struct HoleMassStudy {
  std::vector<double> radii;
  std::vector<double> masses;
  double extrapolated = 0.0;
};
HoleMassStudy hole_mass_study(const ErgodicMeasure& P, const Vec& hole_center,
                              const std::vector<double>& radii, const JumpCoupling& coupling,
                              const LevyModel& model, const PredictOptions& opt = {});

}  // namespace levyexit
