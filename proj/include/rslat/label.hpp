#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace rslat {

// Hard ceiling on lattice order; the configurable default cap sits below it.
inline constexpr int kMaxOrder = 24;
inline constexpr int kDefaultOrderCap = 16;

using FactId = int;  // 1-based

// n-bit node label. Bit i-1 stands for fact f_i; text form prints f_n first.
struct Label {
  std::uint32_t bits = 0;
  int width = 0;

  constexpr Label() = default;
  constexpr Label(std::uint32_t b, int w) : bits(b), width(w) {}

  int level() const { return std::popcount(bits); }
  bool has(FactId f) const { return f >= 1 && f <= width && ((bits >> (f - 1)) & 1u) != 0; }

  std::vector<FactId> facts() const {
    std::vector<FactId> out;
    for (int i = 0; i < width; ++i)
      if ((bits >> i) & 1u) out.push_back(i + 1);
    return out;
  }

  std::string str() const {
    std::string s(static_cast<std::size_t>(width), '0');
    for (int i = 0; i < width; ++i)
      if ((bits >> i) & 1u) s[static_cast<std::size_t>(width - 1 - i)] = '1';
    return s;
  }

  static Label parse(std::string_view s) {
    if (s.empty() || s.size() > static_cast<std::size_t>(kMaxOrder))
      throw Error(ErrorCode::out_of_range, "label '" + std::string(s) + "'");
    std::uint32_t b = 0;
    for (char c : s) {
      if (c != '0' && c != '1') throw Error(ErrorCode::out_of_range, "label '" + std::string(s) + "'");
      b = (b << 1) | static_cast<std::uint32_t>(c - '0');
    }
    return {b, static_cast<int>(s.size())};
  }

  auto operator<=>(const Label&) const = default;
};

inline Label single_fact_label(FactId f, int n) { return {1u << (f - 1), n}; }

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

// The ordinal-th (1-based) label of the level in ascending numeric order
// (combinatorial number system unranking).
inline Label label_at(int level, std::uint64_t ordinal, int n) {
  if (n < 0 || n > kMaxOrder || level < 0 || level > n || ordinal < 1 || ordinal > binomial(n, level))
    throw Error(ErrorCode::out_of_range, "label_at(" + std::to_string(level) + ", " +
                                             std::to_string(ordinal) + ", " + std::to_string(n) + ")");
  std::uint64_t rank = ordinal - 1;
  std::uint32_t bits = 0;
  int top = n - 1;
  for (int k = level; k >= 1; --k) {
    int c = top;
    while (binomial(c, k) > rank) --c;
    bits |= 1u << c;
    rank -= binomial(c, k);
    top = c - 1;
  }
  return {bits, n};
}

// Inverse of label_at: 1-based position within the label's level.
inline std::uint64_t ordinal_of(Label l) {
  std::uint64_t rank = 0;
  int k = 0;
  for (int i = 0; i < l.width; ++i)
    if ((l.bits >> i) & 1u) rank += binomial(i, ++k);
  return rank + 1;
}

// Clear the j-th set bit counted from the left, for j = 1..level.
inline std::vector<Label> predecessor_labels(Label l) {
  std::vector<Label> out;
  for (int i = l.width - 1; i >= 0; --i)
    if ((l.bits >> i) & 1u) out.push_back({l.bits & ~(1u << i), l.width});
  return out;
}

// Set the j-th clear bit counted from the right, for j = 1..(n - level).
inline std::vector<Label> successor_labels(Label l, int n) {
  std::vector<Label> out;
  for (int i = 0; i < n; ++i)
    if (!((l.bits >> i) & 1u)) out.push_back({l.bits | (1u << i), n});
  return out;
}

inline std::vector<Label> successor_labels(Label l) { return successor_labels(l, l.width); }

}  // namespace rslat
