#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <string>

namespace cogledger {

// Decimal fixed point with 6 fractional digits, stored as integer micro-units.
struct Fixed6 {
  static constexpr std::int64_t kScale = 1'000'000;

  std::int64_t micros = 0;

  static constexpr Fixed6 one() { return {kScale}; }
  // Rounds half away from zero.
  static Fixed6 from_double(double v) { return {std::llround(v * static_cast<double>(kScale))}; }

  double to_double() const { return static_cast<double>(micros) / static_cast<double>(kScale); }

  std::string str() const {
    char buf[32];
    std::int64_t whole = micros / kScale;
    std::int64_t frac = micros % kScale;
    if (micros < 0) {
      std::snprintf(buf, sizeof buf, "-%lld.%06lld", static_cast<long long>(-whole),
                    static_cast<long long>(-frac));
    } else {
      std::snprintf(buf, sizeof buf, "%lld.%06lld", static_cast<long long>(whole),
                    static_cast<long long>(frac));
    }
    return buf;
  }

  auto operator<=>(const Fixed6&) const = default;
};

}  // namespace cogledger
