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

#include <span>
#include <vector>

#include "levyexit/common.hpp"

namespace levyexit {

struct KsReport {
  int n = 0;
  double statistic = 0.0;  // D_n
  double p_value = 0.0;    // asymptotic Kolmogorov distribution
  double level = 0.01;
  bool pass = false;
};

/// Survival function of the Kolmogorov distribution, P(K > x); both series
/// branches, terms truncated at relative 1e-10.
double kolmogorov_sf(double x);

/// Two-sided KS test of the samples against EXP(rate). Requires n >= 8 and
/// strictly positive samples.
KsReport ks_exponential(std::span<const double> samples, double rate, double level = 0.01);

struct WilsonInterval {
  double lo = 0.0, hi = 1.0;
};

/// Wilson score interval for a binomial proportion at the given two-sided
/// confidence (e.g. 0.99).
WilsonInterval wilson_interval(long successes, long n, double confidence = 0.99);

struct FractionReport {
  long n = 0;
  long hits = 0;
  double fraction = 0.0;
  double predicted = 0.0;
  WilsonInterval interval;
  bool pass = false;  // predicted inside the interval
};

/// Empirical fraction of hits vs a predicted probability, Wilson 99% gate.
FractionReport fraction_test(long hits, long n, double predicted, double confidence = 0.99);

/// Evaluation of the empirical CDF of `samples` (sorted internally) at x.
double ecdf(std::vector<double> samples, double x);

}  // namespace levyexit
