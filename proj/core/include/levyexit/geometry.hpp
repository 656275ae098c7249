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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "levyexit/common.hpp"

namespace levyexit {

struct BoundingBox {
  Vec lo, hi;
  bool contains(const Vec& x) const {
    for (int i = 0; i < lo.size(); ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }
  double diameter() const { return (hi - lo).norm(); }
};

// --------------------------------------------------------------------------
// Sorted disjoint unions of radial intervals in (0, inf); the half-open ray
// arithmetic behind every mu/nu evaluation.
// --------------------------------------------------------------------------

struct RadialInterval {
  double lo = 0.0;
  double hi = 0.0;  // may be +inf
};

class IntervalList {
 public:
  IntervalList() = default;
  explicit IntervalList(std::vector<RadialInterval> iv) : iv_(std::move(iv)) { normalize(); }

  static IntervalList empty() { return IntervalList(); }
  static IntervalList all() {
    return IntervalList({{0.0, std::numeric_limits<double>::infinity()}});
  }

  const std::vector<RadialInterval>& intervals() const { return iv_; }
  bool is_empty() const { return iv_.empty(); }
  bool covers(double r) const;

  IntervalList complement() const;  // within (0, inf)
  static IntervalList intersect(const IntervalList& a, const IntervalList& b);
  static IntervalList unite(const IntervalList& a, const IntervalList& b);

  /// The section of a set scaled by s equals the section scaled by s.
  IntervalList scaled(double s) const;

  void push(double lo, double hi);
  void normalize();  // sort, clamp to [0,inf), merge overlaps, drop empties

 private:
  std::vector<RadialInterval> iv_;
};

// --------------------------------------------------------------------------
// Bounded domain D with open-set membership and signed boundary distance
// (positive inside). Exit means "not in D": the boundary counts as exited.
// --------------------------------------------------------------------------

class Domain {
 public:
  enum class Kind { ball, annulus, polygon, levelset };

  static Domain ball(Vec center, double radius);
  static Domain annulus(Vec center, double r_in, double r_out);
  static Domain polygon(std::vector<Eigen::Vector2d> vertices);
  // Membership is V(x) < level within the box; the signed distance is the
  // first-order estimate (level - V)/|grad V| and only as good as V is smooth.
  static Domain levelset(std::function<double(const Vec&)> v, double level, BoundingBox box);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool contains(const Vec& x) const;
  double signed_distance(const Vec& x) const;
  const BoundingBox& bounding_box() const { return box_; }
  /// Characteristic length used to size root-bracketing grids.
  double scale() const { return box_.diameter(); }

  const Vec& center() const { return center_; }
  double radius() const { return radius_; }
  double inner_radius() const { return r_in_; }
  const std::vector<Eigen::Vector2d>& vertices() const { return verts_; }

 private:
  Domain() = default;
  Kind kind_ = Kind::ball;
  int dim_ = 0;
  BoundingBox box_;
  // ball / annulus
  Vec center_;
  double radius_ = 0.0, r_in_ = 0.0;
  // polygon
  std::vector<Eigen::Vector2d> verts_;
  // levelset
  std::function<double(const Vec&)> v_;
  double level_ = 0.0;
  double grad_step_ = 1e-6;
};

/// D_delta = D minus a delta-shell around the boundary.
struct ReducedDomain {
  Domain base;
  double delta;
  bool contains(const Vec& x) const { return base.signed_distance(x) > delta; }
};

// --------------------------------------------------------------------------
// Target-set algebra for exit sets: balls, half-spaces, complements,
// intersections, unions, whole domains, and opaque membership functions.
// --------------------------------------------------------------------------

class TargetSet {
 public:
  enum class Kind { ball, half_space, complement, intersection, set_union, domain, membership };

  static TargetSet ball(Vec center, double radius);
  /// {x : <normal, x> >= offset}; the normal need not be unit length.
  static TargetSet half_space(Vec normal, double offset);
  static TargetSet complement(TargetSet inner);
  static TargetSet intersection(std::vector<TargetSet> parts);
  static TargetSet set_union(std::vector<TargetSet> parts);
  static TargetSet domain(Domain d);
  static TargetSet domain_complement(Domain d);
  /// Opaque membership; sections of such sets always go through bracketing.
  static TargetSet membership(std::function<bool(const Vec&)> fn, std::string label);

  Kind kind() const { return kind_; }
  bool contains(const Vec& x) const;

  /// True when radial sections can be assembled in closed form.
  bool closed_form() const;

  /// {r > 0 : origin + r*dir in set}, exact combinator arithmetic.
  /// Throws for membership/levelset nodes; use the bracketing path instead.
  IntervalList radial_section(const Vec& origin, const Vec& dir) const;

  /// The set {a*x : x in set}; used by the scaling property tests.
  TargetSet scaled(double a) const;

 private:
  TargetSet() = default;
  Kind kind_ = Kind::ball;
  Vec center_, normal_;
  double radius_ = 0.0, offset_ = 0.0;
  std::vector<TargetSet> parts_;
  std::shared_ptr<const Domain> dom_;
  std::function<bool(const Vec&)> member_;
  std::string label_;
};

// --------------------------------------------------------------------------
// Ray sections of targets through a jump coupling.
// --------------------------------------------------------------------------

class JumpCoupling;  // coupling.hpp

struct RaySectionOptions {
  int points_per_decade = 256;
  double decades_below = 6.0;  // grid spans [scale*10^-below, scale*10^+above]
  double decades_above = 6.0;
  double rel_tol = 1e-10;
  double scale = 1.0;
};

/// {r > 0 : origin + G(origin, r*u) in target}. Exact for linear-in-jump
/// couplings over the closed-form algebra; log-grid bracketing + bisection
/// otherwise. Throws InfiniteMassError when the target is still reachable at
/// the smallest grid radius (the section would touch r = 0).
IntervalList ray_section(const TargetSet& target, const Vec& origin, const JumpCoupling& coupling,
                         const Vec& u, const RaySectionOptions& opt = {});

/// Radial section along a straight state-space ray (additive coupling).
IntervalList ray_section_additive(const TargetSet& target, const Vec& origin, const Vec& dir,
                                  const RaySectionOptions& opt = {});

/// Shell of half-width w around the boundary of D, as a target set. Closed
/// form for ball/annulus; membership-based (|sd| <= w) otherwise.
TargetSet boundary_shell(const Domain& d, double width);

}  // namespace levyexit
