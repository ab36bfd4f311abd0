#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "numeric.hpp"

namespace rslat {

// Ternary decision value: 0 surely absent, 1 surely present, 2 inconclusive.
enum class TruthValue : std::uint8_t { absent = 0, present = 1, inconclusive = 2 };

inline int to_int(TruthValue v) { return static_cast<int>(v); }

inline TruthValue truth_value_from_int(int v) {
  if (v < 0 || v > 2) throw Error(ErrorCode::out_of_range, "truth value " + std::to_string(v));
  return static_cast<TruthValue>(v);
}

// q acceptability levels; level 1 is the most trusted.
struct SourceGrading {
  int q = 5;

  explicit SourceGrading(int levels = 5) : q(levels) {
    if (q < 1) throw Error(ErrorCode::out_of_range, "grading needs q >= 1");
  }

  int weight(int level) const {
    if (level < 1 || level > q)
      throw Error(ErrorCode::out_of_range, "level " + std::to_string(level));
    return q - level + 1;
  }
};

// Source counts indexed by assertion kind m (1 present, 2 absent, 3 inconclusive)
// and acceptability level j, both 1-based.
class EvidenceProfile {
 public:
  explicit EvidenceProfile(int q = 5) : q_(q), counts_(static_cast<std::size_t>(3 * q), 0) {
    if (q < 1) throw Error(ErrorCode::out_of_range, "profile needs q >= 1");
  }

  int q() const { return q_; }

  std::uint64_t at(int m, int level) const { return counts_[index(m, level)]; }
  std::uint64_t& at(int m, int level) { return counts_[index(m, level)]; }

  bool operator==(const EvidenceProfile&) const = default;

 private:
  std::size_t index(int m, int level) const {
    if (m < 1 || m > 3) throw Error(ErrorCode::out_of_range, "assertion kind " + std::to_string(m));
    if (level < 1 || level > q_)
      throw Error(ErrorCode::out_of_range, "level " + std::to_string(level));
    return static_cast<std::size_t>((m - 1) * q_ + (level - 1));
  }

  int q_;
  std::vector<std::uint64_t> counts_;
};

struct TruthTriple {
  double tv1 = 0;
  double tv2 = 0;
  double tv3 = 0;

  double operator[](int m) const { return m == 1 ? tv1 : m == 2 ? tv2 : tv3; }
  bool operator==(const TruthTriple&) const = default;
};

inline TruthTriple apply(Rounding mode, const TruthTriple& t) {
  return {apply(mode, t.tv1), apply(mode, t.tv2), apply(mode, t.tv3)};
}

class PresenceMatrix {
 public:
  explicit PresenceMatrix(int q = 5) : q_(q), cells_(static_cast<std::size_t>(3 * q), false) {}

  int q() const { return q_; }
  bool at(int row, int col) const { return cells_[static_cast<std::size_t>((row - 1) * q_ + (col - 1))]; }
  void set(int row, int col, bool v = true) {
    cells_[static_cast<std::size_t>((row - 1) * q_ + (col - 1))] = v;
  }

  bool any() const {
    for (bool c : cells_)
      if (c) return true;
    return false;
  }

  bool operator==(const PresenceMatrix&) const = default;

 private:
  int q_;
  std::vector<bool> cells_;
};

inline TruthTriple truth_triple(const EvidenceProfile& profile, const SourceGrading& grading) {
  std::array<double, 3> mass{};
  for (int m = 1; m <= 3; ++m)
    for (int j = 1; j <= profile.q(); ++j)
      mass[m - 1] += static_cast<double>(grading.weight(j)) * static_cast<double>(profile.at(m, j));
  const double w = mass[0] + mass[1] + mass[2];
  if (w <= 0) throw Error(ErrorCode::zero_evidence, "profile carries no weighted evidence");
  return {mass[0] / w, mass[1] / w, mass[2] / w};
}

inline PresenceMatrix presence_matrix(const EvidenceProfile& profile) {
  PresenceMatrix m(profile.q());
  for (int x = 1; x <= 3; ++x)
    for (int y = 1; y <= profile.q(); ++y) m.set(x, y, profile.at(x, y) > 0);
  return m;
}

struct Resolution {
  TruthValue vd;
  double cf;
  bool operator==(const Resolution&) const = default;
};

namespace detail {

inline Resolution decide_row(int row, const TruthTriple& t) {
  switch (row) {
    case 1: return {TruthValue::present, t.tv1};
    case 2: return {TruthValue::absent, t.tv2};
    default: return {TruthValue::inconclusive, t.tv3};
  }
}

inline unsigned column_rows(const PresenceMatrix& m, int col) {
  unsigned rows = 0;
  for (int x = 1; x <= 3; ++x)
    if (m.at(x, col)) rows |= 1u << (x - 1);
  return rows;
}

inline int single_row(unsigned rows) {
  switch (rows) {
    case 1u: return 1;
    case 2u: return 2;
    case 4u: return 3;
    default: return 0;
  }
}

// After column `from`, the first column where exactly one of rows a, b holds a 1.
inline int first_exclusive(const PresenceMatrix& m, int from, int a, int b) {
  for (int y = from + 1; y <= m.q(); ++y) {
    const bool ha = m.at(a, y), hb = m.at(b, y);
    if (ha != hb) return ha ? a : b;
  }
  return 0;
}

// After column `from`, the first column where row a or b holds a 1; a wins when both do.
inline int first_either(const PresenceMatrix& m, int from, int a, int b) {
  for (int y = from + 1; y <= m.q(); ++y) {
    if (m.at(a, y)) return a;
    if (m.at(b, y)) return b;
  }
  return 0;
}

inline Resolution resolve_pair(const PresenceMatrix& m, const TruthTriple& t, int y, int a, int b) {
  const double ta = t[a], tb = t[b];
  if (!nearly_equal(ta, tb)) {
    // Case (1,3) publishes the winning row's own value; see resolve_decision.
    return decide_row(ta > tb ? a : b, t);
  }
  if (int row = first_exclusive(m, y, a, b)) return decide_row(row, t);
  return {TruthValue::inconclusive, (a == 1 && b == 2) ? t.tv1 : t.tv3};
}

inline Resolution resolve_all_equal(const PresenceMatrix& m, const TruthTriple& t, int y) {
  for (int col = y + 1; col <= m.q(); ++col) {
    const unsigned rows = column_rows(m, col);
    if (rows == 0u || rows == 7u) continue;
    if (int row = single_row(rows)) return decide_row(row, t);
    const int a = (rows & 1u) ? 1 : 2;
    const int b = (rows & 4u) ? 3 : 2;
    if (int row = first_either(m, col, a, b)) return decide_row(row, t);
    return {TruthValue::inconclusive, (a == 1 && b == 2) ? t.tv1 : t.tv3};
  }
  return {TruthValue::inconclusive, t.tv3};
}

inline Resolution resolve_three(const PresenceMatrix& m, const TruthTriple& t, int y) {
  const double a = t.tv1, b = t.tv2, c = t.tv3;
  const bool ab = nearly_equal(a, b), ac = nearly_equal(a, c), bc = nearly_equal(b, c);
  if (ab && ac && bc) return resolve_all_equal(m, t, y);
  if (!ab && !ac && !bc) {
    if (a > b && a > c) return decide_row(1, t);
    if (b > a && b > c) return decide_row(2, t);
    return decide_row(3, t);
  }
  // Exactly one tied pair. A strictly larger third value wins outright.
  if (ab) return c > a ? decide_row(3, t) : Resolution{TruthValue::inconclusive, t.tv1};
  if (ac) return b > a ? decide_row(2, t) : Resolution{TruthValue::inconclusive, t.tv3};
  return a > b ? decide_row(1, t) : Resolution{TruthValue::inconclusive, t.tv3};
}

}  // namespace detail

// Column-wise resolution of a presence matrix into (vd, cf). Triples are
// compared with kTieEpsilon so rounded inputs tie the way printed values do.
inline Resolution resolve_decision(const PresenceMatrix& m, const TruthTriple& t) {
  unsigned used_rows = 0;
  int first_col = 0;
  for (int y = 1; y <= m.q(); ++y) {
    const unsigned rows = detail::column_rows(m, y);
    used_rows |= rows;
    if (rows != 0u && first_col == 0) first_col = y;
  }
  if (used_rows == 0u) throw Error(ErrorCode::empty_matrix, "no knowledge source asserts anything");
  if (int row = detail::single_row(used_rows)) return detail::decide_row(row, t);

  const unsigned rows = detail::column_rows(m, first_col);
  if (int row = detail::single_row(rows)) return detail::decide_row(row, t);
  switch (rows) {
    case 3u: return detail::resolve_pair(m, t, first_col, 1, 2);
    case 5u: return detail::resolve_pair(m, t, first_col, 1, 3);
    case 6u: return detail::resolve_pair(m, t, first_col, 2, 3);
    default: return detail::resolve_three(m, t, first_col);
  }
}

inline double conditional_weight(int priority, int n) {
  if (n < 1 || priority < 1 || priority > n)
    throw Error(ErrorCode::out_of_range,
                "priority " + std::to_string(priority) + " of " + std::to_string(n));
  return static_cast<double>(priority) / static_cast<double>(n);
}

}  // namespace rslat
