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

#include "levyexit/dynamics.hpp"

#include <cmath>

#include "levyexit/rng.hpp"

namespace levyexit {

VectorField VectorField::linear_decay(int dim) {
  VectorField v;
  v.dim = dim;
  v.f = [](const Vec& x, Vec& out) { out = -x; };
  v.jacobian = [dim](const Vec&) { return Mat(-Mat::Identity(dim, dim)); };
  v.name = "linear";
  return v;
}

VectorField VectorField::van_der_pol(double mu) {
  VectorField v;
  v.dim = 2;
  v.f = [mu](const Vec& x, Vec& out) {
    out[0] = x[1];
    out[1] = -x[0] + mu * (1.0 - x[0] * x[0]) * x[1];
  };
  v.jacobian = [mu](const Vec& x) {
    Mat j(2, 2);
    j << 0.0, 1.0, -1.0 - 2.0 * mu * x[0] * x[1], mu * (1.0 - x[0] * x[0]);
    return j;
  };
  v.name = "van_der_pol";
  return v;
}

void FlowStepper::step(Vec& x, double h) {
  field_->f(x, k1_);
  tmp_ = x + (0.5 * h) * k1_;
  field_->f(tmp_, k2_);
  tmp_ = x + (0.5 * h) * k2_;
  field_->f(tmp_, k3_);
  tmp_ = x + h * k3_;
  field_->f(tmp_, k4_);
  x += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
}

void FlowStepper::advance(Vec& x, double t, double step_size, double t_offset) {
  if (t < 0.0) throw std::domain_error("flow: t must be nonnegative");
  if (!(step_size > 0.0)) throw std::domain_error("flow: step must be positive");
  const long n = static_cast<long>(std::floor(t / step_size));
  for (long i = 0; i < n; ++i) {
    step(x, step_size);
    if (!x.allFinite())
      throw FlowBlowupError("flow blow-up", t_offset + (i + 1) * step_size);
  }
  const double rem = t - static_cast<double>(n) * step_size;
  if (rem > 1e-15 * std::max(1.0, t)) {
    step(x, rem);
    if (!x.allFinite()) throw FlowBlowupError("flow blow-up", t_offset + t);
  }
}

Vec flow(const VectorField& field, Vec x, double t, double step) {
  FlowStepper s(field);
  s.advance(x, t, step);
  return x;
}

namespace {

// Refine the crossing time of s(y) = <n, y - c> = 0 inside one step by
// bisection, re-integrating partial RK4 steps from the step's start state.
double refine_crossing(FlowStepper& stepper, const Vec& x0, double h, const Vec& n, const Vec& c,
                       Vec& x_at_crossing) {
  double lo = 0.0, hi = h;
  Vec x = x0;
  for (int i = 0; i < 100 && (hi - lo) > 1e-13 * std::max(1.0, h); ++i) {
    const double mid = 0.5 * (lo + hi);
    x = x0;
    stepper.step(x, mid);
    if (n.dot(x - c) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  x_at_crossing = x0;
  stepper.step(x_at_crossing, hi);
  return hi;
}

}  // namespace

ErgodicMeasure detect_attractor(const VectorField& field, const Domain& dom, const Vec& seed,
                                const DetectOptions& opt) {
  if (!dom.contains(seed)) throw AttractorError("detect_attractor: seed outside the domain");
  FlowStepper stepper(field);
  Vec x = seed;
  stepper.advance(x, opt.transient_time, opt.step);

  // probe window: running mean + fixed-point test
  Vec mean = Vec::Zero(field.dim);
  Vec fx(field.dim);
  const long probe_steps = std::lround(opt.probe_time / opt.step);
  double fnorm_end = 0.0;
  for (long i = 0; i < probe_steps; ++i) {
    stepper.step(x, opt.step);
    mean += x;
  }
  mean /= static_cast<double>(probe_steps);
  field.f(x, fx);
  fnorm_end = fx.norm();

  ErgodicMeasure out;
  if (fnorm_end < opt.fixed_point_tol * (1.0 + x.norm())) {
    // let the flow settle further so the reported point is as stationary as
    // the integrator allows
    for (int rounds = 0; rounds < 10; ++rounds) {
      stepper.advance(x, opt.probe_time, opt.step);
      field.f(x, fx);
      if (fx.norm() < 1e-14 * (1.0 + x.norm())) break;
    }
    out.kind = ErgodicMeasure::Kind::fixed_point;
    out.points = {x};
    out.weights = {1.0};
    out.margin = dom.signed_distance(x);
    if (!dom.contains(x)) throw AttractorError("detect_attractor: fixed point left the domain");
    return out;
  }

  // limit cycle: Poincare section through the running mean, normal along the
  // current flow direction; positive crossings only
  const Vec section_normal = fx / fnorm_end;
  const Vec section_point = mean;
  auto side = [&](const Vec& y) { return section_normal.dot(y - section_point); };

  std::vector<double> crossing_times;
  std::vector<Vec> crossing_points;
  double t = 0.0;
  double s_prev = side(x);
  Vec x_prev = x;
  const long max_steps = std::lround(opt.max_return_time / opt.step);
  for (long i = 0; i < max_steps && crossing_points.size() < 5; ++i) {
    x_prev = x;
    stepper.step(x, opt.step);
    t += opt.step;
    const double s_cur = side(x);
    if (s_prev < 0.0 && s_cur >= 0.0) {
      field.f(x, fx);
      if (section_normal.dot(fx) > 0.0) {
        Vec xc;
        const double dt = refine_crossing(stepper, x_prev, opt.step, section_normal,
                                          section_point, xc);
        crossing_times.push_back(t - opt.step + dt);
        crossing_points.push_back(xc);
      }
    }
    s_prev = s_cur;
  }
  if (crossing_points.size() < 2)
    throw AttractorError("detect_attractor: no periodic return within the horizon");

  const double scale = std::max(1.0, crossing_points[0].norm());
  double closure = 0.0;
  for (std::size_t i = 1; i < crossing_points.size(); ++i)
    closure = std::max(closure, (crossing_points[i] - crossing_points[0]).norm());
  if (closure > opt.closure_tol * scale)
    throw AttractorError(
        "detect_attractor: returns do not close up (quasi-periodic or chaotic attractor?)");

  const double period = (crossing_times.back() - crossing_times.front()) /
                        static_cast<double>(crossing_times.size() - 1);

  out.kind = ErgodicMeasure::Kind::limit_cycle;
  out.period = period;
  out.closure_error = closure;
  const int m = opt.cycle_points;
  out.points.reserve(m);
  out.weights.assign(m, 1.0 / m);
  Vec p = crossing_points[0];
  const double dt_cycle = period / m;
  double margin = std::numeric_limits<double>::infinity();
  for (int j = 0; j < m; ++j) {
    out.points.push_back(p);
    margin = std::min(margin, dom.signed_distance(p));
    stepper.advance(p, dt_cycle, std::min(opt.step, dt_cycle));
  }
  out.margin = margin;
  if (margin <= 0.0)
    throw AttractorError("detect_attractor: cycle pokes outside the domain");
  return out;
}

double ergodic_average(const ErgodicMeasure& m, const std::function<double(const Vec&)>& phi) {
  double acc = 0.0;
  for (std::size_t i = 0; i < m.points.size(); ++i) acc += m.weights[i] * phi(m.points[i]);
  return acc;
}

namespace {

// Boundary samples with inward normals for the built-in domain kinds.
void boundary_samples(const Domain& dom, int n, std::vector<Vec>& pts, std::vector<Vec>& normals) {
  switch (dom.kind()) {
    case Domain::Kind::ball: {
      for (int j = 0; j < n; ++j) {
        const double th = kTwoPi * (j + 0.5) / n;
        Vec u = Vec::Zero(dom.dim());
        u[0] = std::cos(th);
        u[1] = dom.dim() > 1 ? std::sin(th) : 0.0;
        pts.push_back(dom.center() + dom.radius() * u);
        normals.push_back(-u);
      }
      break;
    }
    case Domain::Kind::annulus: {
      const int half = std::max(1, n / 2);
      for (int j = 0; j < half; ++j) {
        const double th = kTwoPi * (j + 0.5) / half;
        Vec u(dom.dim());
        u[0] = std::cos(th);
        u[1] = std::sin(th);
        pts.push_back(dom.center() + dom.radius() * u);
        normals.push_back(-u);  // outer circle: inward is toward the center
        pts.push_back(dom.center() + dom.inner_radius() * u);
        normals.push_back(u);   // inner circle: inward is away from the hole
      }
      break;
    }
    case Domain::Kind::polygon: {
      const auto& vs = dom.vertices();
      double perimeter = 0.0;
      for (std::size_t i = 0, j = vs.size() - 1; i < vs.size(); j = i++)
        perimeter += (vs[i] - vs[j]).norm();
      const double spacing = perimeter / n;
      for (std::size_t i = 0, j = vs.size() - 1; i < vs.size(); j = i++) {
        const Eigen::Vector2d a = vs[j], b = vs[i];
        const Eigen::Vector2d e = b - a;
        const double len = e.norm();
        const Eigen::Vector2d left(-e.y() / len, e.x() / len);
        // orient the normal by testing a nudge for membership
        const int k = std::max(1, static_cast<int>(len / spacing));
        for (int q = 0; q < k; ++q) {
          const Eigen::Vector2d p = a + (q + 0.5) / k * e;
          Vec pv(2), nv(2);
          pv << p.x(), p.y();
          Vec probe(2);
          probe << p.x() + 1e-7 * left.x(), p.y() + 1e-7 * left.y();
          const double sgn = dom.contains(probe) ? 1.0 : -1.0;
          nv << sgn * left.x(), sgn * left.y();
          pts.push_back(pv);
          normals.push_back(nv);
        }
      }
      break;
    }
    case Domain::Kind::levelset: {
      // walk random rays from the box center until the sign of sd flips
      RngStream rng(0xb0dd1e, 17);
      const Vec c = 0.5 * (dom.bounding_box().lo + dom.bounding_box().hi);
      const double span = dom.bounding_box().diameter();
      int found = 0;
      for (int tries = 0; tries < 50 * n && found < n; ++tries) {
        Vec u(dom.dim());
        for (int i = 0; i < dom.dim(); ++i) u[i] = rng.normal();
        u.normalize();
        if (!dom.contains(c)) break;
        double lo = 0.0, hi = span;
        if (dom.contains(Vec(c + hi * u))) continue;
        for (int it = 0; it < 80; ++it) {
          const double mid = 0.5 * (lo + hi);
          (dom.contains(Vec(c + mid * u)) ? lo : hi) = mid;
        }
        const Vec p = c + (0.5 * (lo + hi)) * u;
        // inward normal from the signed-distance gradient (finite differences)
        Vec g(dom.dim());
        for (int i = 0; i < dom.dim(); ++i) {
          Vec pp = p, pm = p;
          const double h = 1e-6 * std::max(1.0, std::abs(p[i]));
          pp[i] += h;
          pm[i] -= h;
          g[i] = (dom.signed_distance(pp) - dom.signed_distance(pm)) / (2.0 * h);
        }
        if (g.norm() < 1e-12) continue;
        pts.push_back(p);
        normals.push_back(g / g.norm());
        ++found;
      }
      break;
    }
  }
}

}  // namespace

InwardReport check_inward(const VectorField& field, const Domain& dom, int n_samples) {
  if (n_samples < 1) throw std::domain_error("check_inward: n_samples >= 1");
  std::vector<Vec> pts, normals;
  boundary_samples(dom, n_samples, pts, normals);
  InwardReport rep;
  rep.n_samples = static_cast<int>(pts.size());
  rep.min_inner_product = std::numeric_limits<double>::infinity();
  Vec fx(field.dim);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    field.f(pts[i], fx);
    const double ip = fx.dot(normals[i]);
    if (ip < rep.min_inner_product) {
      rep.min_inner_product = ip;
      rep.argmin = pts[i];
    }
  }
  rep.flagged = !(rep.min_inner_product > 0.0);
  return rep;
}

double lipschitz_estimate(const VectorField& field, const Domain& dom, int n_pairs,
                          std::uint64_t seed) {
  RngStream rng(seed, 41);
  const auto& box = dom.bounding_box();
  double best = 0.0;
  Vec x(field.dim), y(field.dim), fx(field.dim), fy(field.dim);
  for (int s = 0; s < n_pairs; ++s) {
    for (int i = 0; i < field.dim; ++i) {
      x[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * rng.uniform01();
      y[i] = x[i] + 1e-3 * (2.0 * rng.uniform01() - 1.0) * std::max(1.0, std::abs(x[i]));
    }
    const double dist = (x - y).norm();
    if (dist < 1e-15) continue;
    field.f(x, fx);
    field.f(y, fy);
    best = std::max(best, (fx - fy).norm() / dist);
  }
  return best;
}

}  // namespace levyexit
