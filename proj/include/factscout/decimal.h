// Copyright 2026 The FactScout Authors.
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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace factscout {

// Exact base-10 number: value = mantissa * 10^-scale. Always kept in
// canonical form (scale >= 0, no trailing zero digits when scale > 0), so
// structural equality is numeric equality and to_string() is unique.
class Decimal {
 public:
  Decimal() = default;

  // Throws Error(kOutOfRange) when the result does not fit.
  static Decimal from_parts(int64_t mantissa, int scale);

  // Plain decimal literal: optional sign, digits, optional fraction. No
  // grouping separators, no exponent.
  static std::optional<Decimal> parse(std::string_view text);

  // Multiply by 10^exponent (exponent >= 0). Throws Error(kOutOfRange).
  Decimal shifted(int exponent) const;

  int64_t mantissa() const { return mantissa_; }
  int scale() const { return scale_; }

  double to_double() const;
  std::string to_string() const;

  friend bool operator==(const Decimal &, const Decimal &) = default;

 private:
  Decimal(int64_t mantissa, int scale) : mantissa_(mantissa), scale_(scale) {}
  void canonicalize();

  int64_t mantissa_ = 0;
  int scale_ = 0;
};

}  // namespace factscout
