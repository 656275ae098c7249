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

#include "levyexit/stats.hpp"

#include <algorithm>
#include <cmath>

namespace levyexit {

double kolmogorov_sf(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 1.0) {
    // theta-function form: P(K <= x) = sqrt(2 pi)/x sum exp(-(2k-1)^2 pi^2 / (8 x^2))
    const double c = 9.869604401089358 / (8.0 * x * x);  // pi^2 / (8 x^2)
    double cdf = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double term = std::exp(-c * (2 * k - 1) * (2 * k - 1));
      cdf += term;
      if (term < 1e-10 * cdf) break;
    }
    cdf *= std::sqrt(2.0 * 3.141592653589793) / x;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sf = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * x * x);
    sf += term;
    if (std::abs(term) < 1e-10 * std::max(std::abs(sf), 1e-300)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sf, 0.0, 1.0);
}

KsReport ks_exponential(std::span<const double> samples, double rate, double level) {
  const int n = static_cast<int>(samples.size());
  if (n < 8) throw std::domain_error("ks_exponential: need at least 8 samples");
  if (!(rate > 0.0)) throw std::domain_error("ks_exponential: rate must be positive");
  std::vector<double> u(samples.begin(), samples.end());
  for (double& s : u) {
    if (!(s > 0.0)) throw std::domain_error("ks_exponential: samples must be positive");
    s = -std::expm1(-rate * s);  // F(s) = 1 - exp(-rate s)
  }
  std::sort(u.begin(), u.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double fe_hi = static_cast<double>(i + 1) / n;
    const double fe_lo = static_cast<double>(i) / n;
    d = std::max(d, std::max(fe_hi - u[i], u[i] - fe_lo));
  }
  KsReport rep;
  rep.n = n;
  rep.statistic = d;
  rep.p_value = kolmogorov_sf(std::sqrt(static_cast<double>(n)) * d);
  rep.level = level;
  rep.pass = rep.p_value >= level;
  return rep;
}

WilsonInterval wilson_interval(long successes, long n, double confidence) {
  if (n <= 0) throw std::domain_error("wilson_interval: n must be positive");
  // two-sided normal quantile via inverse erf (Acklam-style rational fit is
  // overkill here: confidence is one of a handful of fixed levels)
  double z;
  if (std::abs(confidence - 0.99) < 1e-12)
    z = 2.5758293035489004;
  else if (std::abs(confidence - 0.95) < 1e-12)
    z = 1.9599639845400545;
  else if (std::abs(confidence - 0.999) < 1e-12)
    z = 3.2905267314918945;
  else
    throw std::domain_error("wilson_interval: supported confidences are 0.95, 0.99, 0.999");
  const double phat = static_cast<double>(successes) / n;
  const double z2n = z * z / n;
  const double denom = 1.0 + z2n;
  const double center = (phat + 0.5 * z2n) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + 0.25 * z2n / n) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

FractionReport fraction_test(long hits, long n, double predicted, double confidence) {
  if (n <= 0) throw std::domain_error("fraction_test: no samples");
  FractionReport rep;
  rep.n = n;
  rep.hits = hits;
  rep.fraction = static_cast<double>(hits) / n;
  rep.predicted = predicted;
  rep.interval = wilson_interval(hits, n, confidence);
  rep.pass = predicted >= rep.interval.lo && predicted <= rep.interval.hi;
  return rep;
}

double ecdf(std::vector<double> samples, double x) {
  if (samples.empty()) throw std::domain_error("ecdf: empty sample");
  std::sort(samples.begin(), samples.end());
  const auto it = std::upper_bound(samples.begin(), samples.end(), x);
  return static_cast<double>(it - samples.begin()) / static_cast<double>(samples.size());
}

}  // namespace levyexit
