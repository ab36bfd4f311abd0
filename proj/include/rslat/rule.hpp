#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "evidence.hpp"
#include "label.hpp"

namespace rslat {

// Product term: `care` marks the facts that appear, `value` their polarity.
struct Term {
  std::uint32_t care = 0;
  std::uint32_t value = 0;

  int literals() const { return std::popcount(care); }
  bool covers(std::uint32_t bits) const { return (bits & care) == value; }
  auto operator<=>(const Term&) const = default;
};

struct SopExpression {
  int n = 0;
  std::vector<Term> terms;  // sorted

  bool eval(std::uint32_t bits) const {
    for (const auto& t : terms)
      if (t.covers(bits)) return true;
    return false;
  }

  int literal_count() const {
    int c = 0;
    for (const auto& t : terms) c += t.literals();
    return c;
  }

  bool operator==(const SopExpression&) const = default;
};

using LiteralFormatter = std::function<std::string(FactId, bool positive)>;

// Literals shared by every term are pulled out front: f3 & (!f1 | !f2).
inline std::string render_sop(const SopExpression& e, const LiteralFormatter& lit, const std::string& and_op,
                              const std::string& or_op, const std::string& truth = "TRUE") {
  if (e.terms.empty()) return "FALSE";
  std::uint32_t common = ~0u;
  const std::uint32_t v0 = e.terms.front().value;
  for (const auto& t : e.terms) common &= t.care & ~(t.value ^ v0);
  auto conj = [&](std::uint32_t care, std::uint32_t value) {
    std::string s;
    for (int i = e.n - 1; i >= 0; --i) {
      if (!((care >> i) & 1u)) continue;
      if (!s.empty()) s += and_op;
      s += lit(i + 1, ((value >> i) & 1u) != 0);
    }
    return s;
  };
  std::string head = conj(common, v0 & common);
  if (e.terms.size() == 1) return head.empty() ? truth : head;
  std::string alts;
  for (const auto& t : e.terms) {
    const std::uint32_t rest = t.care & ~common;
    std::string part = conj(rest, t.value & rest);
    if (std::popcount(rest) > 1) part = "(" + part + ")";
    if (!alts.empty()) alts += or_op;
    alts += part;
  }
  if (head.empty()) return alts;
  return head + and_op + "(" + alts + ")";
}

inline std::string render_compact(const SopExpression& e) {
  return render_sop(
      e, [](FactId f, bool pos) { return (pos ? "f" : "!f") + std::to_string(f); }, " & ", " | ");
}

enum class RuleKind { certain, possible, uncertain };
enum class Region { lower1, lower2, boundary, upper1, upper2 };

inline const char* kind_name(RuleKind k) {
  switch (k) {
    case RuleKind::certain: return "certain";
    case RuleKind::possible: return "possible";
    case RuleKind::uncertain: return "uncertain";
  }
  return "";
}

inline const char* region_name(Region r) {
  switch (r) {
    case Region::lower1: return "lower1";
    case Region::lower2: return "lower2";
    case Region::boundary: return "boundary";
    case Region::upper1: return "upper1";
    case Region::upper2: return "upper2";
  }
  return "";
}

inline RuleKind region_kind(Region r) {
  switch (r) {
    case Region::lower1:
    case Region::lower2: return RuleKind::certain;
    case Region::boundary: return RuleKind::uncertain;
    default: return RuleKind::possible;
  }
}

inline TruthValue region_vd(Region r) {
  switch (r) {
    case Region::lower1:
    case Region::upper1: return TruthValue::present;
    case Region::lower2:
    case Region::upper2: return TruthValue::absent;
    default: return TruthValue::inconclusive;
  }
}

// Node vds a region is drawn from.
inline bool region_admits(Region r, TruthValue vd) {
  switch (r) {
    case Region::lower1: return vd == TruthValue::present;
    case Region::lower2: return vd == TruthValue::absent;
    case Region::boundary: return vd == TruthValue::inconclusive;
    case Region::upper1: return vd != TruthValue::absent;
    case Region::upper2: return vd != TruthValue::present;
  }
  return false;
}

struct RuleMetrics {
  double support = 0;
  double strength = 0;
  double certainty = 0;
  double coverage = 0;
};

struct MinimizedRule {
  SopExpression condition;
  std::string disease;
  TruthValue vd = TruthValue::present;
  RuleKind kind = RuleKind::certain;
  Region region = Region::lower1;
  std::set<Label> source_labels;
  RuleMetrics metrics;
};

}  // namespace rslat
