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
#include <vector>

#include "levyexit/common.hpp"
#include "levyexit/geometry.hpp"
#include "levyexit/rng.hpp"

namespace levyexit {

/// Angular part of the Levy measure: either the uniform measure on the unit
/// sphere or a normalized set of weighted directions.
class SpectralMeasure {
 public:
  static SpectralMeasure isotropic(int dim);
  /// Directions are normalized; weights must be nonnegative and sum to 1
  /// within 1e-12.
  static SpectralMeasure atoms(std::vector<Vec> directions, std::vector<double> weights);

  bool is_isotropic() const { return isotropic_; }
  int dim() const { return dim_; }

  /// Weighted direction nodes for angular quadrature. Isotropic 2-D models
  /// use midpoint angles (periodic trapezoid); 3-D uses a Fibonacci sphere;
  /// atomic measures return their own atoms regardless of n.
  std::vector<std::pair<Vec, double>> quadrature(int n) const;

  Vec sample(RngStream& rng) const;
  Vec mean_direction() const;
  Mat direction_second_moment() const;  // E[u u^T] under the angular measure

 private:
  SpectralMeasure() = default;
  bool isotropic_ = true;
  int dim_ = 2;
  std::vector<Vec> dirs_;
  std::vector<double> weights_;
};

/// Regularly varying Levy measure of index -alpha: tail h(r) = nu(||y|| >= r)
/// = tail_scale / (r^alpha * ell(r)) with ell slowly varying (default 1).
/// The optional triplet parts (drift b, diagonal Gaussian covariance) default
/// to zero as in the pure-jump case study.
class LevyModel {
 public:
  LevyModel(double alpha, int dim, SpectralMeasure spectral, double tail_scale);

  /// nu(dy) = dy / ||y||^{2+alpha} in R^2: tail_scale = 2*pi/alpha, uniform
  /// angular measure.
  static LevyModel isotropic_stable_2d(double alpha);

  /// Replace the slowly varying part (constant 1 by default). `is_constant`
  /// unlocks the closed-form sampling and moment paths.
  void set_slowly_varying(std::function<double(double)> ell, bool is_constant);
  void set_drift(Vec b);
  void set_gaussian_diag(Vec a_diag);

  double alpha() const { return alpha_; }
  int dim() const { return dim_; }
  double tail_scale() const { return tail_scale_; }
  const SpectralMeasure& spectral() const { return spectral_; }
  bool ell_is_constant() const { return ell_const_; }
  const Vec& drift() const { return drift_; }
  const Vec& gaussian_diag() const { return gauss_diag_; }

  /// h(r) = nu(||y|| >= r); r must be positive.
  double tail_mass(double r) const;

  /// Coefficient of the pure power tail, h(r) = power_coeff * r^{-alpha},
  /// valid when ell is constant.
  double power_coeff() const;

  /// nu-mass of a radial interval union along one spectral direction.
  double nu_radial_mass(const IntervalList& iv) const;

  /// First/second radial moments of nu over (a, b]: int r^k nu_r(dr).
  double radial_moment1(double a, double b) const;
  double radial_moment2(double a, double b) const;  // a = 0 allowed for alpha < 2

  /// Inverse of the conditional tail: the radius R with
  /// P(R >= r | R >= floor) = u, i.e. h(R) = u * h(floor).
  double tail_quantile(double u, double floor_radius) const;

 private:
  double alpha_;
  int dim_;
  SpectralMeasure spectral_;
  double tail_scale_;
  std::function<double(double)> ell_;
  bool ell_const_ = true;
  Vec drift_, gauss_diag_;
};

/// Limit-measure mass of a radial interval union along one direction:
/// sum of lo^{-alpha} - hi^{-alpha}. Normalized so mu(||y|| >= R) = R^{-alpha}
/// for the isotropic model, i.e. mu(A) = lim_r nu(rA)/h(r).
double mu_radial_mass(const IntervalList& iv, double alpha);

/// mu(E) for a set given by its ray sections, integrated over the spectral
/// quadrature. Sections touching r = 0 raise InfiniteMassError; empty
/// sections contribute 0.
double limit_measure(const LevyModel& model,
                     const std::function<IntervalList(const Vec&)>& ray_sections,
                     int n_angles = 1024);

/// epsilon-dependent big/small-jump split of the driving process at the
/// threshold rho^eps = eps^{-rho}.
struct JumpDecomposition {
  double epsilon = 0.0;
  double rho_exponent = 0.0;
  double threshold = 0.0;   // rho^eps
  double beta = 0.0;        // nu(||z|| > rho^eps) = h(rho^eps)
  Vec drift_shift;          // b_eps = b + int_{1<||z||<=rho^eps} z nu(dz)
  double r_min = 0.0;       // inner cutoff of the simulated mid band

  // precomputed small-jump machinery
  double lambda_mid = 0.0;  // nu(r_min < ||z|| <= rho^eps)
  Vec mid_compensator;      // int_{mid band} z nu(dz)
  Mat gauss_sqrt;           // sqrt of int_{||z||<=r_min} z z^T nu(dz); empty if unavailable
  bool gauss_available = false;
};

/// Builds the decomposition; r_min defaults to min(eps^2, 0.01 * rho^eps).
/// The Gaussian small-ball correction needs a constant slowly varying part
/// and alpha < 2; otherwise the decomposition still supports large jumps and
/// waiting times but small_jump_increment refuses to run.
JumpDecomposition make_decomposition(const LevyModel& model, double eps, double rho = 0.25,
                                     std::optional<double> r_min = std::nullopt);

/// One large jump W ~ nu( . , B_{rho^eps}^c) / beta; always ||W|| >= rho^eps.
Vec sample_large_jump(const JumpDecomposition& d, const LevyModel& model, RngStream& rng);

/// Waiting time between large jumps, EXP(beta_eps).
double sample_waiting_time(const JumpDecomposition& d, RngStream& rng);

/// Increment of eps * xi^eps over dt: drift b_eps dt, compensated mid-band
/// compound Poisson jumps, and the moment-matched Gaussian stand-in for jumps
/// below r_min (plus the optional Brownian part).
Vec small_jump_increment(const JumpDecomposition& d, const LevyModel& model, double dt,
                         RngStream& rng);

}  // namespace levyexit
