#pragma once

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "lattice.hpp"
#include "roughset.hpp"
#include "rule.hpp"

namespace rslat {

inline constexpr double kPropertyTolerance = 1e-9;

inline double disease_mass(const Lattice& kb, const std::string& disease) {
  double p = 0;
  kb.for_each_node([&](const LatticeNode& nd) {
    if (const DecisionEntry* e = nd.decision(disease)) p += e->cf;
  });
  return p;
}

// Summed CF of the disease over nodes accepted by `pick`.
template <typename Pick>
double class_mass(const Lattice& kb, const std::string& disease, Pick&& pick) {
  double m = 0;
  kb.for_each_node([&](const LatticeNode& nd) {
    if (const DecisionEntry* e = nd.decision(disease))
      if (pick(nd.label, *e)) m += e->cf;
  });
  return m;
}

inline double support(const MinimizedRule& rule, const Lattice& kb) {
  double s = 0;
  for (Label l : rule.source_labels) {
    if (!kb.contains(l)) throw Error(ErrorCode::dangling_label, l.str());
    const DecisionEntry* e = kb.node(l).decision(rule.disease);
    if (!e) throw Error(ErrorCode::dangling_label, l.str() + " lacks " + rule.disease);
    s += e->cf;
  }
  return s;
}

inline double checked_ratio(double num, double den, const std::string& what) {
  if (!(den > 0)) throw Error(ErrorCode::zero_mass, what);
  return num / den;
}

inline double strength(const MinimizedRule& rule, const Lattice& kb) {
  return checked_ratio(support(rule, kb), disease_mass(kb, rule.disease), "no CF mass for " + rule.disease);
}

inline double half_if_inconclusive(const MinimizedRule& rule, double x) {
  return rule.vd == TruthValue::inconclusive ? 0.5 * x : x;
}

// Support over the CF of every node satisfying the condition whose vd belongs
// to the rule's region.
inline double certainty(const MinimizedRule& rule, const Lattice& kb) {
  const double y = class_mass(kb, rule.disease, [&](Label l, const DecisionEntry& e) {
    return rule.condition.eval(l.bits) && region_admits(rule.region, e.vd);
  });
  return half_if_inconclusive(rule, checked_ratio(support(rule, kb), y, "empty condition class"));
}

inline double coverage(const MinimizedRule& rule, const Lattice& kb) {
  const double p = class_mass(kb, rule.disease,
                              [&](Label, const DecisionEntry& e) { return region_admits(rule.region, e.vd); });
  return half_if_inconclusive(rule, checked_ratio(support(rule, kb), p, "empty decision class"));
}

inline RuleMetrics compute_metrics(const MinimizedRule& rule, const Lattice& kb) {
  return {support(rule, kb), strength(rule, kb), certainty(rule, kb), coverage(rule, kb)};
}

struct PropertyResult {
  int property = 0;
  std::size_t checked = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

struct PropertyReport {
  std::array<PropertyResult, 6> results{};
  bool ok() const {
    for (const auto& r : results)
      if (!r.ok()) return false;
    return true;
  }
};

namespace detail {

inline void expect_close(PropertyResult& r, double got, double want, const std::string& where) {
  ++r.checked;
  if (std::fabs(got - want) > kPropertyTolerance)
    r.failures.push_back(where + ": " + format_exact(got) + " vs " + format_exact(want));
}

}  // namespace detail

// Properties 1, 3, 5 over condition classes (each node, and each certain
// region's node set) and 2, 4, 6 over (disease, vd) classes, vd in {0, 1}.
// Member metrics are the per-node rule values S = CF, E = S / P_D.
inline PropertyReport check_properties(const Lattice& kb, const std::map<std::string, ApproximationSets>& approx) {
  PropertyReport rep;
  for (int i = 0; i < 6; ++i) rep.results[static_cast<std::size_t>(i)].property = i + 1;
  auto& p1 = rep.results[0];
  auto& p2 = rep.results[1];
  auto& p3 = rep.results[2];
  auto& p4 = rep.results[3];
  auto& p5 = rep.results[4];
  auto& p6 = rep.results[5];

  for (const auto& d : kb.diseases()) {
    const double pd = disease_mass(kb, d);
    if (!(pd > 0)) continue;

    auto condition_class = [&](const LabelSet& cls, TruthValue vd, const std::string& tag) {
      std::vector<double> cfs;
      for (Label l : cls)
        if (const DecisionEntry* e = kb.node(l).decision(d); e && e->vd == vd) cfs.push_back(e->cf);
      double y = 0;
      for (double c : cfs) y += c;
      if (!(y > 0)) return;
      const std::string where = d + " " + tag + " vd=" + std::to_string(to_int(vd));
      double sum_z = 0, sum_e = 0;
      for (double c : cfs) {
        sum_z += c / y;
        sum_e += c / pd;
      }
      detail::expect_close(p1, sum_z, 1.0, where);
      detail::expect_close(p3, sum_z * (y / pd), sum_e, where);
      for (double c : cfs) detail::expect_close(p5, c / y, (c / pd) / sum_e, where);
    };

    for (TruthValue vd : {TruthValue::absent, TruthValue::present}) {
      kb.for_each_node([&](const LatticeNode& nd) { condition_class({nd.label}, vd, nd.label.str()); });
      if (auto it = approx.find(d); it != approx.end())
        condition_class(vd == TruthValue::present ? it->second.lower1 : it->second.lower2, vd,
                        vd == TruthValue::present ? "lower1" : "lower2");

      std::vector<double> cfs;
      kb.for_each_node([&](const LatticeNode& nd) {
        if (const DecisionEntry* e = nd.decision(d); e && e->vd == vd) cfs.push_back(e->cf);
      });
      double w = 0;
      for (double c : cfs) w += c;
      if (!(w > 0)) continue;
      const std::string where = d + " vd=" + std::to_string(to_int(vd));
      double sum_cov = 0, sum_e = 0;
      for (double c : cfs) {
        sum_cov += c / w;
        sum_e += c / pd;
      }
      detail::expect_close(p2, sum_cov, 1.0, where);
      detail::expect_close(p4, sum_cov * (w / pd), sum_e, where);
      for (double c : cfs) detail::expect_close(p6, c / w, (c / pd) / sum_e, where);
    }
  }
  return rep;
}

}  // namespace rslat
