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

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace levyexit {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Invalid model/run configuration (bad parameter regime, bad keys, ...).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A measured set reaches the origin of jump space: the limit measure is infinite.
class InfiniteMassError : public std::runtime_error {
 public:
  explicit InfiniteMassError(const std::string& what) : std::runtime_error(what) {}
};

/// ODE state became non-finite; carries the integration time reached.
class FlowBlowupError : public std::runtime_error {
 public:
  FlowBlowupError(const std::string& what, double t)
      : std::runtime_error(what + " (t=" + std::to_string(t) + ")"), time(t) {}
  double time;
};

/// No attractor (fixed point or periodic orbit) found within the horizon.
class AttractorError : public std::runtime_error {
 public:
  explicit AttractorError(const std::string& what) : std::runtime_error(what) {}
};

/// The configured scenario has Q(D^c) = 0: no exits in the small-noise limit.
class NoExitError : public std::runtime_error {
 public:
  explicit NoExitError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace levyexit
