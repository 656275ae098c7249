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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "levyexit/common.hpp"
#include "levyexit/geometry.hpp"

namespace levyexit {

struct VectorField {
  int dim = 0;
  std::function<void(const Vec&, Vec&)> f;
  std::function<Mat(const Vec&)> jacobian;  // optional
  std::string name;

  /// f(u) = -u in any dimension (stable fixed point at the origin).
  static VectorField linear_decay(int dim);
  /// Standard Van der Pol form: f1 = u2, f2 = -u1 + mu (1 - u1^2) u2.
  static VectorField van_der_pol(double mu = 1.0);

  Vec eval(const Vec& x) const {
    Vec out(dim);
    f(x, out);
    return out;
  }
};

/// Classical fixed-step RK4 with reusable workspace. The final partial step
/// is shortened so the requested time is hit exactly.
class FlowStepper {
 public:
  explicit FlowStepper(const VectorField& field) : field_(&field) { resize(field.dim); }

  void step(Vec& x, double h);
  /// Advance by t >= 0 with base step `step`; throws FlowBlowupError if the
  /// state becomes non-finite (time stamp included).
  void advance(Vec& x, double t, double step, double t_offset = 0.0);

 private:
  void resize(int d) {
    k1_.resize(d);
    k2_.resize(d);
    k3_.resize(d);
    k4_.resize(d);
    tmp_.resize(d);
  }
  const VectorField* field_;
  Vec k1_, k2_, k3_, k4_, tmp_;
};

/// u(t; x) of du/dt = f(u).
Vec flow(const VectorField& field, Vec x, double t, double step);

/// Weighted point cloud approximating the invariant measure P on the
/// attractor: a single point mass at a stable fixed point, or M points at
/// uniform time spacing T/M along a detected limit cycle.
struct ErgodicMeasure {
  enum class Kind { fixed_point, limit_cycle };
  Kind kind = Kind::fixed_point;
  std::vector<Vec> points;
  std::vector<double> weights;
  double period = 0.0;          // T for limit cycles, 0 otherwise
  double margin = 0.0;          // min signed distance of the cloud to the boundary
  double closure_error = 0.0;   // distance between successive Poincare returns
};

struct DetectOptions {
  double transient_time = 50.0;  // horizon S before any classification
  double step = 1e-3;
  double probe_time = 20.0;      // window for the running mean / fixed-point test
  double fixed_point_tol = 1e-8;
  double closure_tol = 1e-6;
  double max_return_time = 200.0;
  int cycle_points = 512;        // M
};

/// Flows past the transient, then classifies the attractor: fixed point
/// (||f|| below tolerance) or limit cycle via a Poincare section through the
/// trajectory's running mean with bisection-refined crossing times. Chaotic
/// or quasi-periodic behavior raises AttractorError.
ErgodicMeasure detect_attractor(const VectorField& field, const Domain& dom, const Vec& seed,
                                const DetectOptions& opt = {});

double ergodic_average(const ErgodicMeasure& m, const std::function<double(const Vec&)>& phi);

struct InwardReport {
  double min_inner_product = 0.0;  // min <f, inward normal> over the samples
  Vec argmin;
  int n_samples = 0;
  bool flagged = false;  // true when the minimum is <= 0
};

/// Samples boundary points and reports the worst inner product of the field
/// with the inward normal. Diagnostic only.
InwardReport check_inward(const VectorField& field, const Domain& dom, int n_samples);

/// Sampled local Lipschitz estimate of f on the domain's bounding box.
double lipschitz_estimate(const VectorField& field, const Domain& dom, int n_pairs,
                          std::uint64_t seed = 0x5eed);

}  // namespace levyexit
