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

#include "levyexit/coupling.hpp"

#include <cmath>

#include "levyexit/rng.hpp"

namespace levyexit {

// ---------------------------------------------------------------- PhiField

PhiField PhiField::identity(int dim) {
  PhiField p;
  p.kind_ = Kind::constant_like;
  p.rows_ = p.cols_ = dim;
  p.m_ = Mat::Identity(dim, dim);
  p.name_ = "identity";
  return p;
}

PhiField PhiField::scalar(int dim, double factor) {
  PhiField p;
  p.kind_ = Kind::constant_like;
  p.rows_ = p.cols_ = dim;
  p.m_ = factor * Mat::Identity(dim, dim);
  p.name_ = "scalar";
  return p;
}

PhiField PhiField::constant(Mat m) {
  PhiField p;
  p.kind_ = Kind::constant_like;
  p.rows_ = static_cast<int>(m.rows());
  p.cols_ = static_cast<int>(m.cols());
  p.m_ = std::move(m);
  p.name_ = "constant";
  return p;
}

PhiField PhiField::diagonal(Vec diag) {
  PhiField p;
  p.kind_ = Kind::constant_like;
  p.rows_ = p.cols_ = static_cast<int>(diag.size());
  p.m_ = diag.asDiagonal();
  p.name_ = "diagonal";
  return p;
}

PhiField PhiField::state_diagonal(int dim) {
  PhiField p;
  p.kind_ = Kind::state_diagonal;
  p.rows_ = p.cols_ = dim;
  p.name_ = "state_diagonal";
  return p;
}

PhiField PhiField::custom(int rows, int cols, std::function<Mat(const Vec&)> fn, std::string name) {
  PhiField p;
  p.kind_ = Kind::custom;
  p.rows_ = rows;
  p.cols_ = cols;
  p.fn_ = std::move(fn);
  p.name_ = std::move(name);
  return p;
}

Mat PhiField::eval(const Vec& x) const {
  switch (kind_) {
    case Kind::constant_like:
      return m_;
    case Kind::state_diagonal:
      return Mat(x.asDiagonal());
    case Kind::custom:
      return fn_(x);
  }
  return Mat();
}

Vec PhiField::apply(const Vec& x, const Vec& z) const {
  switch (kind_) {
    case Kind::constant_like:
      return m_ * z;
    case Kind::state_diagonal:
      return x.cwiseProduct(z);
    case Kind::custom:
      return fn_(x) * z;
  }
  return Vec();
}

// ------------------------------------------------------------ JumpCoupling

JumpCoupling JumpCoupling::additive(int dim) {
  JumpCoupling c;
  c.kind_ = Kind::additive;
  c.dim_ = c.jump_dim_ = dim;
  return c;
}

JumpCoupling JumpCoupling::ito(PhiField phi) {
  JumpCoupling c;
  c.kind_ = Kind::ito;
  c.dim_ = phi.rows();
  c.jump_dim_ = phi.cols();
  c.phi_ = std::move(phi);
  return c;
}

JumpCoupling JumpCoupling::marcus(PhiField phi) {
  JumpCoupling c;
  c.kind_ = Kind::marcus;
  c.dim_ = phi.rows();
  c.jump_dim_ = phi.cols();
  c.phi_ = std::move(phi);
  return c;
}

namespace {

// One unit-time pass of dy/ds = Phi(y) z with n RK4 substeps.
Vec marcus_flow(const PhiField& phi, const Vec& x, const Vec& z, int n) {
  const double h = 1.0 / static_cast<double>(n);
  Vec y = x;
  Vec k1, k2, k3, k4;
  for (int i = 0; i < n; ++i) {
    k1 = phi.apply(y, z);
    k2 = phi.apply(y + (0.5 * h) * k1, z);
    k3 = phi.apply(y + (0.5 * h) * k2, z);
    k4 = phi.apply(y + h * k3, z);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!y.allFinite())
      throw MarcusFlowError("marcus flow blow-up within unit time",
                            static_cast<double>(i + 1) * h);
  }
  return y;
}

}  // namespace

Vec JumpCoupling::jump_increment(const Vec& x, const Vec& z) const {
  switch (kind_) {
    case Kind::additive:
      return z;
    case Kind::ito:
      return phi_.apply(x, z);
    case Kind::marcus: {
      int n = 64;
      Vec y = marcus_flow(phi_, x, z, n);
      const double scale = std::max(1.0, y.norm());
      for (; n <= (1 << 14); ) {
        n *= 2;
        Vec y2 = marcus_flow(phi_, x, z, n);
        const double diff = (y2 - y).norm();
        y = std::move(y2);
        if (diff <= 1e-10 * scale) return y - x;
      }
      throw MarcusFlowError("marcus flow: substep doubling did not reach 1e-10 agreement", 1.0);
    }
  }
  return Vec();
}

Vec JumpCoupling::linear_direction(const Vec& x, const Vec& u) const {
  switch (kind_) {
    case Kind::additive:
      return u;
    case Kind::ito:
      return phi_.apply(x, u);
    case Kind::marcus:
      throw std::logic_error("linear_direction: marcus coupling is not linear in the jump");
  }
  return Vec();
}

JumpCoupling::Inverse JumpCoupling::displacement_inverse(const Vec& x) const {
  switch (kind_) {
    case Kind::additive: {
      Inverse inv;
      inv.map = [](const Vec& d) { return d; };
      return inv;
    }
    case Kind::ito: {
      if (jump_dim_ != dim_)
        throw ConfigError("displacement_inverse: ito coupling needs square Phi");
      const Mat m = phi_.eval(x);
      Eigen::FullPivLU<Mat> lu(m);
      Inverse inv;
      if (!lu.isInvertible()) {
        // exit-set convention: singular matrices invert to the zero map
        const int dim = dim_;
        inv.singular = true;
        inv.map = [dim](const Vec&) { return Vec(Vec::Zero(dim)); };
        return inv;
      }
      const Mat minv = lu.inverse();
      inv.map = [minv](const Vec& d) { return Vec(minv * d); };
      return inv;
    }
    case Kind::marcus:
      throw ConfigError(
          "displacement_inverse: no closed inverse for marcus couplings; "
          "use forward ray sections");
  }
  return Inverse{};
}

LipschitzReport lipschitz_report(const JumpCoupling& c, const Vec& box_lo, const Vec& box_hi,
                                 double jump_radius, int n_samples, std::uint64_t seed) {
  RngStream rng(seed, 0x11b5c417);
  const int d = c.state_dim();
  const int m = c.jump_dim();
  const double L = c.lipschitz_bound;
  LipschitzReport rep;
  rep.n_samples = n_samples;
  for (int s = 0; s < n_samples; ++s) {
    Vec x(d), y(d), w(m);
    for (int i = 0; i < d; ++i) {
      x[i] = box_lo[i] + (box_hi[i] - box_lo[i]) * rng.uniform01();
      y[i] = box_lo[i] + (box_hi[i] - box_lo[i]) * rng.uniform01();
    }
    for (int i = 0; i < m; ++i) w[i] = jump_radius * (2.0 * rng.uniform01() - 1.0);
    const double dist = (x - y).norm();
    if (dist < 1e-12) continue;
    const double ratio = (c.jump_increment(x, w) - c.jump_increment(y, w)).norm() / dist;
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.bound_at_max = L * std::exp(L * std::min(w.norm(), L));
    }
  }
  rep.within_bound = rep.max_ratio <= rep.bound_at_max + 1e-9;
  return rep;
}

}  // namespace levyexit
