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

#include "levyexit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "levyexit/coupling.hpp"

namespace levyexit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------- intervals

bool IntervalList::covers(double r) const {
  for (const auto& it : iv_) {
    if (r >= it.lo && r <= it.hi) return true;
    if (it.lo > r) break;
  }
  return false;
}

void IntervalList::push(double lo, double hi) {
  if (!(hi > lo)) return;
  iv_.push_back({std::max(lo, 0.0), hi});
}

void IntervalList::normalize() {
  std::erase_if(iv_, [](const RadialInterval& it) { return !(it.hi > it.lo); });
  std::sort(iv_.begin(), iv_.end(),
            [](const RadialInterval& a, const RadialInterval& b) { return a.lo < b.lo; });
  std::vector<RadialInterval> merged;
  for (const auto& it : iv_) {
    if (!merged.empty() && it.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, it.hi);
    } else {
      merged.push_back(it);
    }
  }
  iv_ = std::move(merged);
}

IntervalList IntervalList::complement() const {
  IntervalList out;
  double cursor = 0.0;
  for (const auto& it : iv_) {
    if (it.lo > cursor) out.push(cursor, it.lo);
    cursor = it.hi;
    if (cursor == kInf) break;
  }
  if (cursor < kInf) out.push(cursor, kInf);
  out.normalize();
  return out;
}

IntervalList IntervalList::intersect(const IntervalList& a, const IntervalList& b) {
  IntervalList out;
  for (const auto& x : a.iv_) {
    for (const auto& y : b.iv_) {
      const double lo = std::max(x.lo, y.lo);
      const double hi = std::min(x.hi, y.hi);
      if (hi > lo) out.push(lo, hi);
    }
  }
  out.normalize();
  return out;
}

IntervalList IntervalList::unite(const IntervalList& a, const IntervalList& b) {
  IntervalList out;
  for (const auto& x : a.iv_) out.push(x.lo, x.hi);
  for (const auto& y : b.iv_) out.push(y.lo, y.hi);
  out.normalize();
  return out;
}

IntervalList IntervalList::scaled(double s) const {
  IntervalList out;
  for (const auto& it : iv_) out.push(it.lo * s, it.hi * s);
  out.normalize();
  return out;
}

// ------------------------------------------------------------------ domains

Domain Domain::ball(Vec center, double radius) {
  if (radius <= 0.0) throw ConfigError("ball: radius must be positive");
  Domain d;
  d.kind_ = Kind::ball;
  d.dim_ = static_cast<int>(center.size());
  d.center_ = std::move(center);
  d.radius_ = radius;
  d.box_.lo = d.center_.array() - radius;
  d.box_.hi = d.center_.array() + radius;
  return d;
}

Domain Domain::annulus(Vec center, double r_in, double r_out) {
  if (!(0.0 < r_in && r_in < r_out))
    throw ConfigError("annulus: need 0 < r_in < r_out");
  Domain d;
  d.kind_ = Kind::annulus;
  d.dim_ = static_cast<int>(center.size());
  d.center_ = std::move(center);
  d.r_in_ = r_in;
  d.radius_ = r_out;
  d.box_.lo = d.center_.array() - r_out;
  d.box_.hi = d.center_.array() + r_out;
  return d;
}

Domain Domain::polygon(std::vector<Eigen::Vector2d> vertices) {
  if (vertices.size() < 3) throw ConfigError("polygon: need at least 3 vertices");
  Domain d;
  d.kind_ = Kind::polygon;
  d.dim_ = 2;
  d.verts_ = std::move(vertices);
  Eigen::Vector2d lo = d.verts_[0], hi = d.verts_[0];
  for (const auto& v : d.verts_) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  d.box_.lo = lo;
  d.box_.hi = hi;
  return d;
}

Domain Domain::levelset(std::function<double(const Vec&)> v, double level, BoundingBox box) {
  Domain d;
  d.kind_ = Kind::levelset;
  d.dim_ = static_cast<int>(box.lo.size());
  d.v_ = std::move(v);
  d.level_ = level;
  d.box_ = std::move(box);
  return d;
}

bool Domain::contains(const Vec& x) const {
  switch (kind_) {
    case Kind::ball:
      return (x - center_).norm() < radius_;
    case Kind::annulus: {
      const double r = (x - center_).norm();
      return r > r_in_ && r < radius_;
    }
    case Kind::polygon: {
      // even-odd crossing rule
      bool inside = false;
      const std::size_t n = verts_.size();
      for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const auto& a = verts_[i];
        const auto& b = verts_[j];
        if ((a.y() > x[1]) != (b.y() > x[1])) {
          const double cross = (b.x() - a.x()) * (x[1] - a.y()) / (b.y() - a.y()) + a.x();
          if (x[0] < cross) inside = !inside;
        }
      }
      return inside;
    }
    case Kind::levelset:
      return box_.contains(x) && v_(x) < level_;
  }
  return false;
}

double Domain::signed_distance(const Vec& x) const {
  switch (kind_) {
    case Kind::ball:
      return radius_ - (x - center_).norm();
    case Kind::annulus: {
      const double r = (x - center_).norm();
      return std::min(r - r_in_, radius_ - r);
    }
    case Kind::polygon: {
      double best = kInf;
      const std::size_t n = verts_.size();
      const Eigen::Vector2d p(x[0], x[1]);
      for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Eigen::Vector2d a = verts_[j], b = verts_[i];
        const Eigen::Vector2d ab = b - a;
        const double t = std::clamp(ab.dot(p - a) / ab.squaredNorm(), 0.0, 1.0);
        best = std::min(best, (p - (a + t * ab)).norm());
      }
      return contains(x) ? best : -best;
    }
    case Kind::levelset: {
      // first-order estimate; clipped against the bounding box
      const double val = level_ - v_(x);
      Vec g(dim_);
      Vec xp = x;
      for (int i = 0; i < dim_; ++i) {
        const double h = grad_step_ * std::max(1.0, std::abs(x[i]));
        xp[i] = x[i] + h;
        const double vp = v_(xp);
        xp[i] = x[i] - h;
        const double vm = v_(xp);
        xp[i] = x[i];
        g[i] = (vp - vm) / (2.0 * h);
      }
      const double gn = g.norm();
      double sd = gn > 1e-14 ? val / gn : val;
      if (!box_.contains(x)) sd = std::min(sd, -1e-12);
      return sd;
    }
  }
  return -kInf;
}

// -------------------------------------------------------------- target sets

TargetSet TargetSet::ball(Vec center, double radius) {
  TargetSet t;
  t.kind_ = Kind::ball;
  t.center_ = std::move(center);
  t.radius_ = radius;
  return t;
}

TargetSet TargetSet::half_space(Vec normal, double offset) {
  if (normal.norm() == 0.0) throw ConfigError("half_space: zero normal");
  TargetSet t;
  t.kind_ = Kind::half_space;
  t.normal_ = std::move(normal);
  t.offset_ = offset;
  return t;
}

TargetSet TargetSet::complement(TargetSet inner) {
  TargetSet t;
  t.kind_ = Kind::complement;
  t.parts_.push_back(std::move(inner));
  return t;
}

TargetSet TargetSet::intersection(std::vector<TargetSet> parts) {
  TargetSet t;
  t.kind_ = Kind::intersection;
  t.parts_ = std::move(parts);
  return t;
}

TargetSet TargetSet::set_union(std::vector<TargetSet> parts) {
  TargetSet t;
  t.kind_ = Kind::set_union;
  t.parts_ = std::move(parts);
  return t;
}

TargetSet TargetSet::domain(Domain d) {
  TargetSet t;
  t.kind_ = Kind::domain;
  t.dom_ = std::make_shared<Domain>(std::move(d));
  return t;
}

TargetSet TargetSet::domain_complement(Domain d) { return complement(domain(std::move(d))); }

TargetSet TargetSet::membership(std::function<bool(const Vec&)> fn, std::string label) {
  TargetSet t;
  t.kind_ = Kind::membership;
  t.member_ = std::move(fn);
  t.label_ = std::move(label);
  return t;
}

bool TargetSet::contains(const Vec& x) const {
  switch (kind_) {
    case Kind::ball:
      return (x - center_).norm() <= radius_;
    case Kind::half_space:
      return normal_.dot(x) >= offset_;
    case Kind::complement:
      return !parts_[0].contains(x);
    case Kind::intersection:
      for (const auto& p : parts_)
        if (!p.contains(x)) return false;
      return true;
    case Kind::set_union:
      for (const auto& p : parts_)
        if (p.contains(x)) return true;
      return false;
    case Kind::domain:
      return dom_->contains(x);
    case Kind::membership:
      return member_(x);
  }
  return false;
}

bool TargetSet::closed_form() const {
  switch (kind_) {
    case Kind::ball:
    case Kind::half_space:
      return true;
    case Kind::complement:
    case Kind::intersection:
    case Kind::set_union:
      return std::all_of(parts_.begin(), parts_.end(),
                         [](const TargetSet& p) { return p.closed_form(); });
    case Kind::domain:
      return dom_->kind() != Domain::Kind::levelset;
    case Kind::membership:
      return false;
  }
  return false;
}

namespace {

// {r : ||o + r v - c|| <= R} from the quadratic in r.
IntervalList ball_section(const Vec& o, const Vec& v, const Vec& c, double R) {
  const Vec w = o - c;
  const double a = v.squaredNorm();
  const double b = 2.0 * v.dot(w);
  const double q = w.squaredNorm() - R * R;
  if (a == 0.0) return q <= 0.0 ? IntervalList::all() : IntervalList::empty();
  const double disc = b * b - 4.0 * a * q;
  if (disc < 0.0) return IntervalList::empty();
  const double s = std::sqrt(disc);
  const double r0 = (-b - s) / (2.0 * a);
  const double r1 = (-b + s) / (2.0 * a);
  if (r1 <= 0.0) return IntervalList::empty();
  IntervalList out;
  out.push(std::max(r0, 0.0), r1);
  out.normalize();
  return out;
}

IntervalList half_space_section(const Vec& o, const Vec& v, const Vec& n, double b) {
  const double c0 = n.dot(o) - b;  // value at r = 0
  const double c1 = n.dot(v);
  if (c1 == 0.0) return c0 >= 0.0 ? IntervalList::all() : IntervalList::empty();
  const double root = -c0 / c1;
  IntervalList out;
  if (c1 > 0.0) {
    out.push(std::max(root, 0.0), kInf);
  } else if (root > 0.0) {
    out.push(0.0, root);
  }
  out.normalize();
  return out;
}

// Ray sections of a 2-D polygon: edge crossings + midpoint membership.
IntervalList polygon_section(const Domain& dom, const Vec& o, const Vec& v) {
  const auto& verts = dom.vertices();
  std::vector<double> rs;
  const std::size_t n = verts.size();
  const Eigen::Vector2d o2(o[0], o[1]), v2(v[0], v[1]);
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Eigen::Vector2d a = verts[j], b = verts[i];
    const Eigen::Vector2d e = b - a;
    const double det = v2.x() * (-e.y()) - v2.y() * (-e.x());
    if (std::abs(det) < 1e-300) continue;
    // o + r v = a + t e
    const Eigen::Vector2d rhs = a - o2;
    const double r = (rhs.x() * (-e.y()) - rhs.y() * (-e.x())) / det;
    const double t = (v2.x() * rhs.y() - v2.y() * rhs.x()) / det;
    if (r > 0.0 && t >= 0.0 && t <= 1.0) rs.push_back(r);
  }
  std::sort(rs.begin(), rs.end());
  rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
  IntervalList out;
  double prev = 0.0;
  for (std::size_t i = 0; i <= rs.size(); ++i) {
    const double next = i < rs.size() ? rs[i] : kInf;
    const double mid = std::isinf(next) ? prev + std::max(1.0, prev) : 0.5 * (prev + next);
    Vec p(2);
    p << o2.x() + mid * v2.x(), o2.y() + mid * v2.y();
    if (dom.contains(p)) out.push(prev, next);
    prev = next;
    if (std::isinf(prev)) break;
  }
  out.normalize();
  return out;
}

}  // namespace

IntervalList TargetSet::radial_section(const Vec& origin, const Vec& dir) const {
  switch (kind_) {
    case Kind::ball:
      return ball_section(origin, dir, center_, radius_);
    case Kind::half_space:
      return half_space_section(origin, dir, normal_, offset_);
    case Kind::complement:
      return parts_[0].radial_section(origin, dir).complement();
    case Kind::intersection: {
      IntervalList acc = IntervalList::all();
      for (const auto& p : parts_) acc = IntervalList::intersect(acc, p.radial_section(origin, dir));
      return acc;
    }
    case Kind::set_union: {
      IntervalList acc;
      for (const auto& p : parts_) acc = IntervalList::unite(acc, p.radial_section(origin, dir));
      return acc;
    }
    case Kind::domain: {
      switch (dom_->kind()) {
        case Domain::Kind::ball:
          return ball_section(origin, dir, dom_->center(), dom_->radius());
        case Domain::Kind::annulus: {
          auto outer = ball_section(origin, dir, dom_->center(), dom_->radius());
          auto inner = ball_section(origin, dir, dom_->center(), dom_->inner_radius());
          return IntervalList::intersect(outer, inner.complement());
        }
        case Domain::Kind::polygon:
          return polygon_section(*dom_, origin, dir);
        case Domain::Kind::levelset:
          throw std::logic_error("radial_section: levelset domains need the bracketing path");
      }
      return IntervalList::empty();
    }
    case Kind::membership:
      throw std::logic_error("radial_section: membership sets need the bracketing path");
  }
  return IntervalList::empty();
}

TargetSet TargetSet::scaled(double a) const {
  if (a <= 0.0) throw ConfigError("TargetSet::scaled: factor must be positive");
  switch (kind_) {
    case Kind::ball:
      return ball(Vec(a * center_), a * radius_);
    case Kind::half_space:
      return half_space(normal_, a * offset_);
    case Kind::complement:
      return complement(parts_[0].scaled(a));
    case Kind::intersection:
    case Kind::set_union: {
      std::vector<TargetSet> parts;
      parts.reserve(parts_.size());
      for (const auto& p : parts_) parts.push_back(p.scaled(a));
      return kind_ == Kind::intersection ? intersection(std::move(parts))
                                         : set_union(std::move(parts));
    }
    case Kind::domain: {
      switch (dom_->kind()) {
        case Domain::Kind::ball:
          return domain(Domain::ball(Vec(a * dom_->center()), a * dom_->radius()));
        case Domain::Kind::annulus:
          return domain(Domain::annulus(Vec(a * dom_->center()), a * dom_->inner_radius(),
                                        a * dom_->radius()));
        default:
          break;
      }
      throw ConfigError("TargetSet::scaled: unsupported domain kind");
    }
    case Kind::membership:
      throw ConfigError("TargetSet::scaled: opaque membership sets cannot be scaled");
  }
  throw std::logic_error("unreachable");
}

// ------------------------------------------------------------- ray sections

namespace {

// Log-grid scan + bisection for couplings or sets without closed sections.
IntervalList bracketed_section(const std::function<bool(double)>& member,
                               const RaySectionOptions& opt) {
  const double r_lo = opt.scale * std::pow(10.0, -opt.decades_below);
  const double r_hi = opt.scale * std::pow(10.0, opt.decades_above);
  const double decades = opt.decades_below + opt.decades_above;
  const long n = std::lround(decades * opt.points_per_decade);
  const double step = std::log(r_hi / r_lo) / static_cast<double>(n);

  bool prev = member(r_lo);
  if (prev)
    throw InfiniteMassError(
        "ray section: target reachable at the smallest grid radius; "
        "the limit measure of this configuration is infinite");

  auto refine = [&](double a, double b, bool want_entry) {
    // keeps member(a) == !want_entry XOR ... : bisect to rel_tol on the edge
    for (int it = 0; it < 200 && (b - a) > opt.rel_tol * b; ++it) {
      const double m = std::sqrt(a * b);
      if (member(m) == want_entry)
        b = m;
      else
        a = m;
    }
    return 0.5 * (a + b);
  };

  IntervalList out;
  double r_prev = r_lo;
  double open_lo = 0.0;
  for (long i = 1; i <= n; ++i) {
    const double r = i == n ? r_hi : r_lo * std::exp(step * static_cast<double>(i));
    const bool cur = member(r);
    if (cur != prev) {
      const double edge = refine(r_prev, r, cur);
      if (cur)
        open_lo = edge;
      else
        out.push(open_lo, edge);
      prev = cur;
    }
    r_prev = r;
  }
  if (prev) out.push(open_lo, kInf);
  out.normalize();
  return out;
}

}  // namespace

IntervalList ray_section_additive(const TargetSet& target, const Vec& origin, const Vec& dir,
                                  const RaySectionOptions& opt) {
  if (target.closed_form()) return target.radial_section(origin, dir);
  auto member = [&](double r) { return target.contains(Vec(origin + r * dir)); };
  return bracketed_section(member, opt);
}

IntervalList ray_section(const TargetSet& target, const Vec& origin, const JumpCoupling& coupling,
                         const Vec& u, const RaySectionOptions& opt) {
  if (coupling.linear_in_jump()) {
    const Vec v = coupling.linear_direction(origin, u);
    if (v.norm() == 0.0) {
      // degenerate direction: displacement is identically zero along this ray
      return target.contains(origin) ? IntervalList::all() : IntervalList::empty();
    }
    return ray_section_additive(target, origin, v, opt);
  }
  auto member = [&](double r) {
    return target.contains(Vec(origin + coupling.jump_increment(origin, Vec(r * u))));
  };
  return bracketed_section(member, opt);
}

TargetSet boundary_shell(const Domain& d, double width) {
  switch (d.kind()) {
    case Domain::Kind::ball:
      return TargetSet::intersection(
          {TargetSet::ball(d.center(), d.radius() + width),
           TargetSet::complement(TargetSet::ball(d.center(), std::max(d.radius() - width, 0.0)))});
    case Domain::Kind::annulus: {
      auto outer = TargetSet::intersection(
          {TargetSet::ball(d.center(), d.radius() + width),
           TargetSet::complement(TargetSet::ball(d.center(), d.radius() - width))});
      auto inner = TargetSet::intersection(
          {TargetSet::ball(d.center(), d.inner_radius() + width),
           TargetSet::complement(
               TargetSet::ball(d.center(), std::max(d.inner_radius() - width, 0.0)))});
      return TargetSet::set_union({std::move(outer), std::move(inner)});
    }
    default: {
      Domain copy = d;
      return TargetSet::membership(
          [copy, width](const Vec& x) { return std::abs(copy.signed_distance(x)) <= width; },
          "boundary_shell");
    }
  }
}

}  // namespace levyexit
