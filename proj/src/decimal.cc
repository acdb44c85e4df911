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

#include "factscout/decimal.h"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "factscout/error.h"

namespace factscout {

namespace {

constexpr int kMaxScale = 18;

bool fits(__int128 v) {
  return v >= std::numeric_limits<int64_t>::min() &&
         v <= std::numeric_limits<int64_t>::max();
}

}  // namespace

Decimal Decimal::from_parts(int64_t mantissa, int scale) {
  __int128 m = mantissa;
  // Negative scales are folded into the mantissa.
  while (scale < 0) {
    m *= 10;
    if (!fits(m)) throw Error(ErrorCode::kOutOfRange, "decimal overflow");
    ++scale;
  }
  Decimal d(static_cast<int64_t>(m), scale);
  d.canonicalize();
  if (d.scale_ > kMaxScale) {
    throw Error(ErrorCode::kOutOfRange, "decimal scale too large");
  }
  return d;
}

void Decimal::canonicalize() {
  if (mantissa_ == 0) {
    scale_ = 0;
    return;
  }
  while (scale_ > 0 && mantissa_ % 10 == 0) {
    mantissa_ /= 10;
    --scale_;
  }
}

std::optional<Decimal> Decimal::parse(std::string_view text) {
  size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    negative = text[i] == '-';
    ++i;
  }
  __int128 m = 0;
  int scale = 0;
  int digits = 0;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (seen_point) return std::nullopt;
      seen_point = true;
      continue;
    }
    if (c < '0' || c > '9') return std::nullopt;
    m = m * 10 + (c - '0');
    if (!fits(m)) return std::nullopt;
    ++digits;
    if (seen_point) ++scale;
  }
  if (digits == 0 || scale > kMaxScale) return std::nullopt;
  if (seen_point && text.back() == '.') return std::nullopt;
  if (negative) m = -m;
  Decimal d(static_cast<int64_t>(m), scale);
  d.canonicalize();
  return d;
}

Decimal Decimal::shifted(int exponent) const {
  __int128 m = mantissa_;
  int scale = scale_;
  for (int k = 0; k < exponent; ++k) {
    if (scale > 0) {
      --scale;
    } else {
      m *= 10;
      if (!fits(m)) throw Error(ErrorCode::kOutOfRange, "decimal overflow");
    }
  }
  Decimal d(static_cast<int64_t>(m), scale);
  d.canonicalize();
  return d;
}

double Decimal::to_double() const {
  return std::strtod(to_string().c_str(), nullptr);
}

std::string Decimal::to_string() const {
  bool negative = mantissa_ < 0;
  // Work on the unsigned magnitude so INT64_MIN renders correctly.
  unsigned long long magnitude =
      negative ? 0ULL - static_cast<unsigned long long>(mantissa_)
               : static_cast<unsigned long long>(mantissa_);
  std::string digits = std::to_string(magnitude);
  if (scale_ > 0) {
    if (static_cast<int>(digits.size()) <= scale_) {
      digits.insert(0, scale_ - digits.size() + 1, '0');
    }
    digits.insert(digits.size() - scale_, 1, '.');
  }
  return negative ? "-" + digits : digits;
}

}  // namespace factscout
