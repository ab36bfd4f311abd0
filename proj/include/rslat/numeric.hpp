#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

namespace rslat {

// full keeps machine precision; round2 rounds each published intermediate to
// two decimals, the way the worked figures were produced.
enum class Rounding { full, round2 };

inline constexpr double kTieEpsilon = 1e-12;

inline bool nearly_equal(double a, double b, double eps = kTieEpsilon) {
  return std::fabs(a - b) <= eps;
}

// Round half away from zero at `decimals` places. The small fuzz absorbs binary
// representation error so that 0.545 (stored as 0.54499999...) rounds to 0.55.
inline double round_places(double x, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const double y = std::fabs(x) * scale;
  const double r = std::floor(y + 0.5 + 1e-7);
  return std::copysign(r / scale, x);
}

inline double round2(double x) { return round_places(x, 2); }

inline double apply(Rounding mode, double x) {
  return mode == Rounding::round2 ? round2(x) : x;
}

// Fixed-point rendering, ties to even. Computation rounds half away from zero;
// display does not, so a full-precision 0.125 prints as 0.12.
inline std::string format_fixed(double x, int decimals) {
  double scale = 1.0;
  for (int i = 0; i < decimals; ++i) scale *= 10.0;
  const double y = std::fabs(x) * scale;
  const double base = std::floor(y);
  const double frac = y - base;
  auto units = static_cast<std::uint64_t>(base);
  if (std::fabs(frac - 0.5) <= 1e-7) units += units % 2;
  else if (frac > 0.5) ++units;
  std::string digits = std::to_string(units);
  if (static_cast<int>(digits.size()) <= decimals)
    digits.insert(0, static_cast<std::size_t>(decimals + 1 - static_cast<int>(digits.size())), '0');
  std::string out;
  if (x < 0 && units != 0) out.push_back('-');
  out.append(digits, 0, digits.size() - static_cast<std::size_t>(decimals));
  if (decimals > 0) {
    out.push_back('.');
    out.append(digits, digits.size() - static_cast<std::size_t>(decimals));
  }
  return out;
}

inline std::string format_value(double x, Rounding mode) {
  return format_fixed(x, mode == Rounding::round2 ? 2 : 6);
}

// Shortest text that reads back to the identical double.
inline std::string format_exact(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::optional<double> parse_double(std::string_view s) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
  Int v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace rslat
