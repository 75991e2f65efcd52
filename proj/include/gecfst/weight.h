// Copyright 2026 The gecfst Authors
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

#ifndef GECFST_WEIGHT_H_
#define GECFST_WEIGHT_H_

#include <cmath>
#include <limits>
#include <ostream>

namespace gecfst {

inline constexpr double kDelta = 1e-9;

// Tropical semiring: Plus is min, Times is +, Zero is +inf, One is 0.
class TropicalWeight {
 public:
  constexpr TropicalWeight() = default;
  constexpr explicit TropicalWeight(double value) : value_(value) {}

  static constexpr TropicalWeight Zero() {
    return TropicalWeight(std::numeric_limits<double>::infinity());
  }
  static constexpr TropicalWeight One() { return TropicalWeight(0.0); }

  constexpr double Value() const { return value_; }

  // False for NaN and -inf; +inf (Zero) is a member.
  bool Member() const {
    return !std::isnan(value_) && value_ != -std::numeric_limits<double>::infinity();
  }
  bool IsZero() const { return value_ == std::numeric_limits<double>::infinity(); }

  friend constexpr bool operator==(TropicalWeight a, TropicalWeight b) {
    return a.value_ == b.value_;
  }
  friend constexpr bool operator!=(TropicalWeight a, TropicalWeight b) {
    return !(a == b);
  }

 private:
  double value_ = std::numeric_limits<double>::infinity();
};

using Weight = TropicalWeight;

inline constexpr Weight Plus(Weight a, Weight b) {
  return a.Value() < b.Value() ? a : b;
}

inline constexpr Weight Times(Weight a, Weight b) {
  // inf + x stays inf for finite x; both operands are never -inf.
  return Weight(a.Value() + b.Value());
}

// Left-division a / b such that Times(b, Divide(a, b)) == a.
inline Weight Divide(Weight a, Weight b) {
  if (b.IsZero()) return Weight(std::numeric_limits<double>::quiet_NaN());
  if (a.IsZero()) return Weight::Zero();
  return Weight(a.Value() - b.Value());
}

inline bool ApproxEqual(Weight a, Weight b, double delta = kDelta) {
  if (a.IsZero() || b.IsZero()) return a.IsZero() && b.IsZero();
  return std::fabs(a.Value() - b.Value()) <= delta;
}

// Strict less in the natural (cost) order; used for tie-breaking.
inline constexpr bool NaturalLess(Weight a, Weight b) { return a.Value() < b.Value(); }

inline std::ostream &operator<<(std::ostream &os, Weight w) {
  if (w.IsZero()) return os << "Infinity";
  return os << w.Value();
}

}  // namespace gecfst

#endif  // GECFST_WEIGHT_H_
