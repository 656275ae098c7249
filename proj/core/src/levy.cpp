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

#include "levyexit/levy.hpp"

#include <algorithm>
#include <cmath>

namespace levyexit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  const double h = (b - a) / (2.0 * panels);
  double acc = f(a) + f(b);
  for (int i = 1; i < 2 * panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}
}  // namespace

// ---------------------------------------------------------------- spectral

SpectralMeasure SpectralMeasure::isotropic(int dim) {
  if (dim < 1) throw ConfigError("spectral: dim must be positive");
  SpectralMeasure s;
  s.isotropic_ = true;
  s.dim_ = dim;
  return s;
}

SpectralMeasure SpectralMeasure::atoms(std::vector<Vec> directions, std::vector<double> weights) {
  if (directions.empty() || directions.size() != weights.size())
    throw ConfigError("spectral atoms: directions/weights size mismatch");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw ConfigError("spectral atoms: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ConfigError("spectral atoms: weights must sum to 1");
  SpectralMeasure s;
  s.isotropic_ = false;
  s.dim_ = static_cast<int>(directions[0].size());
  for (auto& d : directions) {
    const double n = d.norm();
    if (n == 0.0) throw ConfigError("spectral atoms: zero direction");
    s.dirs_.push_back(d / n);
  }
  s.weights_ = std::move(weights);
  return s;
}

std::vector<std::pair<Vec, double>> SpectralMeasure::quadrature(int n) const {
  std::vector<std::pair<Vec, double>> nodes;
  if (!isotropic_) {
    nodes.reserve(dirs_.size());
    for (std::size_t i = 0; i < dirs_.size(); ++i) nodes.emplace_back(dirs_[i], weights_[i]);
    return nodes;
  }
  if (dim_ == 1) {
    Vec plus(1), minus(1);
    plus << 1.0;
    minus << -1.0;
    nodes.emplace_back(plus, 0.5);
    nodes.emplace_back(minus, 0.5);
    return nodes;
  }
  if (dim_ == 2) {
    // midpoint angles: the periodic trapezoid rule, and no node sits exactly
    // on a coordinate axis for the usual power-of-two counts
    nodes.reserve(n);
    const double w = 1.0 / n;
    for (int j = 0; j < n; ++j) {
      const double th = kTwoPi * (j + 0.5) / n;
      Vec u(2);
      u << std::cos(th), std::sin(th);
      nodes.emplace_back(std::move(u), w);
    }
    return nodes;
  }
  if (dim_ == 3) {
    // Fibonacci sphere, equal weights
    nodes.reserve(n);
    const double golden = kTwoPi * (1.0 - 1.0 / 1.6180339887498949);
    const double w = 1.0 / n;
    for (int j = 0; j < n; ++j) {
      const double z = 1.0 - 2.0 * (j + 0.5) / n;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * j;
      Vec u(3);
      u << rho * std::cos(phi), rho * std::sin(phi), z;
      nodes.emplace_back(std::move(u), w);
    }
    return nodes;
  }
  throw ConfigError("spectral quadrature: isotropic measures supported for dim <= 3");
}

Vec SpectralMeasure::sample(RngStream& rng) const {
  if (isotropic_) {
    Vec u(dim_);
    double n2 = 0.0;
    do {
      for (int i = 0; i < dim_; ++i) u[i] = rng.normal();
      n2 = u.squaredNorm();
    } while (n2 == 0.0);
    return u / std::sqrt(n2);
  }
  const double x = rng.uniform01();
  double acc = 0.0;
  for (std::size_t i = 0; i < dirs_.size(); ++i) {
    acc += weights_[i];
    if (x < acc) return dirs_[i];
  }
  return dirs_.back();
}

Vec SpectralMeasure::mean_direction() const {
  Vec m = Vec::Zero(dim_);
  if (!isotropic_)
    for (std::size_t i = 0; i < dirs_.size(); ++i) m += weights_[i] * dirs_[i];
  return m;
}

Mat SpectralMeasure::direction_second_moment() const {
  if (isotropic_) return Mat::Identity(dim_, dim_) / static_cast<double>(dim_);
  Mat m = Mat::Zero(dim_, dim_);
  for (std::size_t i = 0; i < dirs_.size(); ++i) m += weights_[i] * dirs_[i] * dirs_[i].transpose();
  return m;
}

// ------------------------------------------------------------------- model

LevyModel::LevyModel(double alpha, int dim, SpectralMeasure spectral, double tail_scale)
    : alpha_(alpha), dim_(dim), spectral_(std::move(spectral)), tail_scale_(tail_scale) {
  if (alpha <= 0.0) throw ConfigError("levy: alpha must be positive");
  if (tail_scale <= 0.0) throw ConfigError("levy: tail_scale must be positive");
  if (spectral_.dim() != dim) throw ConfigError("levy: spectral dimension mismatch");
  ell_ = [](double) { return 1.0; };
  ell_const_ = true;
  drift_ = Vec::Zero(dim);
  gauss_diag_ = Vec::Zero(dim);
}

LevyModel LevyModel::isotropic_stable_2d(double alpha) {
  return LevyModel(alpha, 2, SpectralMeasure::isotropic(2), kTwoPi / alpha);
}

void LevyModel::set_slowly_varying(std::function<double(double)> ell, bool is_constant) {
  ell_ = std::move(ell);
  ell_const_ = is_constant;
}

void LevyModel::set_drift(Vec b) {
  if (b.size() != dim_) throw ConfigError("levy: drift dimension mismatch");
  drift_ = std::move(b);
}

void LevyModel::set_gaussian_diag(Vec a_diag) {
  if (a_diag.size() != dim_) throw ConfigError("levy: gaussian diag dimension mismatch");
  for (int i = 0; i < a_diag.size(); ++i)
    if (a_diag[i] < 0.0) throw ConfigError("levy: gaussian diag must be nonnegative");
  gauss_diag_ = std::move(a_diag);
}

double LevyModel::tail_mass(double r) const {
  if (!(r > 0.0)) throw std::domain_error("tail_mass: r must be positive");
  return tail_scale_ / (std::pow(r, alpha_) * ell_(r));
}

double LevyModel::power_coeff() const {
  if (!ell_const_)
    throw ConfigError("power_coeff: slowly varying part is not constant");
  return tail_scale_ / ell_(1.0);
}

double LevyModel::nu_radial_mass(const IntervalList& iv) const {
  double acc = 0.0;
  for (const auto& it : iv.intervals()) {
    if (it.lo <= 0.0)
      throw InfiniteMassError("nu mass: interval touches r = 0");
    acc += tail_mass(it.lo) - (std::isinf(it.hi) ? 0.0 : tail_mass(it.hi));
  }
  return acc;
}

double LevyModel::radial_moment1(double a, double b) const {
  if (!(0.0 < a && a < b)) throw std::domain_error("radial_moment1: need 0 < a < b");
  if (ell_const_) {
    const double c = power_coeff() * alpha_;
    if (std::abs(alpha_ - 1.0) < 1e-14) return c * std::log(b / a);
    return c * (std::pow(b, 1.0 - alpha_) - std::pow(a, 1.0 - alpha_)) / (1.0 - alpha_);
  }
  // int_a^b r (-dh) = a h(a) - b h(b) + int_a^b h(r) dr
  const double tail_part = a * tail_mass(a) - b * tail_mass(b);
  return tail_part + simpson([this](double r) { return tail_mass(r); }, a, b, 2048);
}

double LevyModel::radial_moment2(double a, double b) const {
  if (!(0.0 <= a && a < b)) throw std::domain_error("radial_moment2: need 0 <= a < b");
  if (alpha_ >= 2.0)
    throw ConfigError("radial_moment2: finite only for alpha < 2 with a power tail");
  if (!ell_const_)
    throw ConfigError("radial_moment2: closed form needs a constant slowly varying part");
  const double c = power_coeff() * alpha_ / (2.0 - alpha_);
  return c * (std::pow(b, 2.0 - alpha_) - std::pow(a, 2.0 - alpha_));
}

double LevyModel::tail_quantile(double u, double floor_radius) const {
  if (!(u > 0.0 && u <= 1.0)) throw std::domain_error("tail_quantile: u in (0,1]");
  if (ell_const_) return floor_radius * std::pow(u, -1.0 / alpha_);
  // bisection on log r for h(r) = u h(floor); h decreasing
  const double target = u * tail_mass(floor_radius);
  double lo = floor_radius, hi = floor_radius * 2.0;
  while (tail_mass(hi) > target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw std::runtime_error("tail_quantile: inversion ran away");
  }
  for (int i = 0; i < 200 && (hi - lo) > 1e-14 * hi; ++i) {
    const double m = std::sqrt(lo * hi);
    (tail_mass(m) > target ? lo : hi) = m;
  }
  return 0.5 * (lo + hi);
}

// --------------------------------------------------------------- mu masses

double mu_radial_mass(const IntervalList& iv, double alpha) {
  double acc = 0.0;
  for (const auto& it : iv.intervals()) {
    if (it.lo <= 0.0)
      throw InfiniteMassError("limit measure: section touches r = 0 (set not bounded away "
                              "from the origin)");
    acc += std::pow(it.lo, -alpha) - (std::isinf(it.hi) ? 0.0 : std::pow(it.hi, -alpha));
  }
  return acc;
}

double limit_measure(const LevyModel& model,
                     const std::function<IntervalList(const Vec&)>& ray_sections, int n_angles) {
  double acc = 0.0;
  for (const auto& [u, w] : model.spectral().quadrature(n_angles))
    acc += w * mu_radial_mass(ray_sections(u), model.alpha());
  return acc;
}

// ------------------------------------------------------------ decomposition

JumpDecomposition make_decomposition(const LevyModel& model, double eps, double rho,
                                     std::optional<double> r_min) {
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("decomposition: eps must be in (0,1)");
  if (!(rho > 0.0 && rho < 0.5)) throw ConfigError("decomposition: rho must be in (0, 1/2)");
  JumpDecomposition d;
  d.epsilon = eps;
  d.rho_exponent = rho;
  d.threshold = std::pow(eps, -rho);
  d.beta = model.tail_mass(d.threshold);
  d.drift_shift = model.drift() + model.spectral().mean_direction() *
                                      model.radial_moment1(1.0, d.threshold);
  d.r_min = r_min.value_or(std::min(eps * eps, 0.01 * d.threshold));
  if (!(d.r_min > 0.0 && d.r_min < d.threshold))
    throw ConfigError("decomposition: r_min must lie in (0, rho^eps)");

  d.lambda_mid = model.tail_mass(d.r_min) - d.beta;
  d.mid_compensator = model.spectral().mean_direction() *
                      model.radial_moment1(d.r_min, d.threshold);
  if (model.ell_is_constant() && model.alpha() < 2.0) {
    const Mat cov = model.spectral().direction_second_moment() *
                    model.radial_moment2(0.0, d.r_min);
    Eigen::SelfAdjointEigenSolver<Mat> es(cov);
    const Vec lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    d.gauss_sqrt = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
    d.gauss_available = true;
  }
  return d;
}

Vec sample_large_jump(const JumpDecomposition& d, const LevyModel& model, RngStream& rng) {
  if (!(d.beta > 0.0)) throw std::domain_error("sample_large_jump: no large jumps (beta = 0)");
  const double r = model.tail_quantile(rng.uniform_oo(), d.threshold);
  return r * model.spectral().sample(rng);
}

double sample_waiting_time(const JumpDecomposition& d, RngStream& rng) {
  if (!(d.beta > 0.0)) throw std::domain_error("sample_waiting_time: no large jumps (beta = 0)");
  return rng.exponential(d.beta);
}

Vec small_jump_increment(const JumpDecomposition& d, const LevyModel& model, double dt,
                         RngStream& rng) {
  if (!(dt > 0.0)) throw std::domain_error("small_jump_increment: dt must be positive");
  if (!d.gauss_available)
    throw ConfigError(
        "small_jump_increment: gaussian correction needs a constant slowly varying part "
        "and alpha < 2");
  Vec incr = (d.drift_shift - d.mid_compensator) * dt;
  const long n = rng.poisson(d.lambda_mid * dt);
  for (long k = 0; k < n; ++k) {
    // mid-band radius: invert the tail restricted to (r_min, rho^eps]
    const double u = rng.uniform_oo();
    const double target = d.beta + u * d.lambda_mid;
    double r;
    if (model.ell_is_constant()) {
      r = std::pow(target / model.power_coeff(), -1.0 / model.alpha());
    } else {
      double lo = d.r_min, hi = d.threshold;
      for (int i = 0; i < 200 && (hi - lo) > 1e-14 * hi; ++i) {
        const double m = 0.5 * (lo + hi);
        (model.tail_mass(m) > target ? lo : hi) = m;
      }
      r = 0.5 * (lo + hi);
    }
    incr += r * model.spectral().sample(rng);
  }
  Vec g(model.dim());
  for (int i = 0; i < model.dim(); ++i) g[i] = rng.normal();
  incr += std::sqrt(dt) * (d.gauss_sqrt * g);
  if ((model.gaussian_diag().array() > 0.0).any()) {
    for (int i = 0; i < model.dim(); ++i)
      incr[i] += std::sqrt(dt * model.gaussian_diag()[i]) * rng.normal();
  }
  return d.epsilon * incr;
}

}  // namespace levyexit
