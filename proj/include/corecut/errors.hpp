// Copyright 2026 The corecut Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CORECUT_ERRORS_HPP
#define CORECUT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace corecut {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

struct EmptyCoalition : Error {
  EmptyCoalition() : Error("coalition must be nonempty") {}
};

struct TooManyPlayers : Error {
  explicit TooManyPlayers(const std::string& what) : Error(what) {}
};

struct TooManyGoods : Error {
  explicit TooManyGoods(const std::string& what) : Error(what) {}
};

/// Raised when the LP engine detects an ill-conditioned basis or fails to
/// make progress for numerical reasons.  Carries the offending condition
/// estimate when one is available.
struct NumericalBreakdown : Error {
  double condition_estimate = 0.0;
  explicit NumericalBreakdown(const std::string& what, double cond = 0.0)
      : Error(what), condition_estimate(cond) {}
};

struct SingularBasis : NumericalBreakdown {
  explicit SingularBasis(const std::string& what) : NumericalBreakdown(what) {}
};

struct PointNotInterior : Error {
  explicit PointNotInterior(const std::string& what) : Error(what) {}
};

struct AllRaysInterior : Error {
  explicit AllRaysInterior(const std::string& what) : Error(what) {}
};

struct NonPositiveIncumbentUtility : Error {
  explicit NonPositiveIncumbentUtility(const std::string& what) : Error(what) {}
};

struct BadMoments : Error {
  explicit BadMoments(const std::string& what) : Error(what) {}
};

struct BadInstance : Error {
  explicit BadInstance(const std::string& what) : Error(what) {}
};

struct EmptyScenario : Error {
  EmptyScenario() : Error("transit scenario produced no riders with nonzero valuations") {}
};

struct NegativeDistance : Error {
  NegativeDistance() : Error("distance must be nonnegative") {}
};

/// File or schema problem while reading an instance; names the offending
/// field so the message is actionable.
struct ParseError : Error {
  std::string field;
  ParseError(const std::string& field_, const std::string& what)
      : Error("parse error at '" + field_ + "': " + what), field(field_) {}
};

}  // namespace corecut

#endif  // CORECUT_ERRORS_HPP
