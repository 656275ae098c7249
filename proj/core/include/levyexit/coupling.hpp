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

#include "levyexit/common.hpp"

namespace levyexit {

/// Marcus unit-time flow did not converge or blew up; carries the partial time.
class MarcusFlowError : public std::runtime_error {
 public:
  MarcusFlowError(const std::string& what, double partial_time)
      : std::runtime_error(what), partial_time(partial_time) {}
  double partial_time;
};

/// State-dependent noise matrix Phi : R^d -> R^{d x m}.
class PhiField {
 public:
  static PhiField identity(int dim);
  static PhiField scalar(int dim, double factor);
  static PhiField constant(Mat m);
  static PhiField diagonal(Vec diag);
  /// Phi(x) = diag(x): the jump scales coordinate-wise with the state.
  static PhiField state_diagonal(int dim);
  static PhiField custom(int rows, int cols, std::function<Mat(const Vec&)> fn, std::string name);

  Mat eval(const Vec& x) const;
  /// Phi(x) * z without forming the matrix where the structure allows.
  Vec apply(const Vec& x, const Vec& z) const;
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool is_constant() const { return kind_ == Kind::constant_like; }
  const std::string& name() const { return name_; }

 private:
  friend class JumpCoupling;
  enum class Kind { constant_like, state_diagonal, custom };
  PhiField() = default;
  Kind kind_ = Kind::constant_like;
  int rows_ = 0, cols_ = 0;
  Mat m_;
  std::function<Mat(const Vec&)> fn_;
  std::string name_;
};

/// The jump-to-displacement map G(x, z). Conventions:
///   additive:    G(x, z) = z
///   ito(Phi):    G(x, z) = Phi(x) z
///   marcus(Phi): G(x, z) = y(1) - x where dy/ds = Phi(y) z, y(0) = x,
/// so x + G(x, z) is the post-jump state in every mode.
class JumpCoupling {
 public:
  enum class Kind { additive, ito, marcus };

  static JumpCoupling additive(int dim);
  static JumpCoupling ito(PhiField phi);
  static JumpCoupling marcus(PhiField phi);

  Kind kind() const { return kind_; }
  int state_dim() const { return dim_; }
  int jump_dim() const { return jump_dim_; }
  const PhiField& phi() const { return phi_; }

  /// Displacement G(x, z). Marcus flows are integrated by fixed-substep RK4
  /// starting at 64 substeps, doubling until 1e-10 relative agreement.
  Vec jump_increment(const Vec& x, const Vec& z) const;

  /// True for additive/ito: G(x, r u) = r * linear_direction(x, u).
  bool linear_in_jump() const { return kind_ != Kind::marcus; }
  Vec linear_direction(const Vec& x, const Vec& u) const;

  struct Inverse {
    std::function<Vec(const Vec&)> map;  // displacement -> jump
    bool singular = false;               // Phi(x) not invertible: the zero map
  };
  /// Inverse displacement map at x (the exit-set G^- convention: singular
  /// matrices invert to the zero map, flagged). Throws for marcus couplings,
  /// whose exit sets are computed by forward ray sections only.
  Inverse displacement_inverse(const Vec& x) const;

  /// Configured Lipschitz bound L for the large-jump coefficient (diagnostic).
  double lipschitz_bound = 1.0;

 private:
  JumpCoupling() = default;
  Kind kind_ = Kind::additive;
  int dim_ = 0, jump_dim_ = 0;
  PhiField phi_;
};

struct LipschitzReport {
  double max_ratio = 0.0;      // sampled sup ||G(x,w)-G(y,w)|| / ||x-y||
  double bound_at_max = 0.0;   // L exp(L (||w|| ^ L)) at the maximizing sample
  bool within_bound = true;
  int n_samples = 0;
};

/// Sampled check of the large-jump Lipschitz hypothesis on a box; reported,
/// never asserted, for user couplings.
LipschitzReport lipschitz_report(const JumpCoupling& c, const Vec& box_lo, const Vec& box_hi,
                                 double jump_radius, int n_samples, std::uint64_t seed);

}  // namespace levyexit
