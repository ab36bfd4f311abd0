#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "evidence.hpp"
#include "label.hpp"
#include "lattice.hpp"

namespace rslat {

using LabelSet = std::set<Label>;

// Concept 1 holds the nodes where the disease may be present (vd 1 or 2),
// concept 2 the nodes where it may be absent (vd 0 or 2).
struct ConceptPair {
  std::string disease;
  LabelSet concept1;
  LabelSet concept2;
  bool operator==(const ConceptPair&) const = default;
};

struct ApproximationSets {
  LabelSet lower1, upper1, boundary1;
  LabelSet lower2, upper2, boundary2;
  bool operator==(const ApproximationSets&) const = default;
};

inline void require_disease(const Lattice& kb, const std::string& disease) {
  if (!kb.knows_disease(disease)) throw Error(ErrorCode::unknown_disease, disease);
}

inline ConceptPair concepts(const Lattice& kb, const std::string& disease) {
  require_disease(kb, disease);
  ConceptPair c{disease, {}, {}};
  kb.for_each_node([&](const LatticeNode& nd) {
    if (const DecisionEntry* e = nd.decision(disease)) {
      if (e->vd != TruthValue::absent) c.concept1.insert(nd.label);
      if (e->vd != TruthValue::present) c.concept2.insert(nd.label);
    }
  });
  return c;
}

namespace detail {

inline void route_in(ApproximationSets& a, Label l, TruthValue vd) {
  switch (vd) {
    case TruthValue::present:
      a.upper1.insert(l);
      a.lower1.insert(l);
      break;
    case TruthValue::absent:
      a.upper2.insert(l);
      a.lower2.insert(l);
      break;
    case TruthValue::inconclusive:
      a.upper1.insert(l);
      a.boundary1.insert(l);
      a.upper2.insert(l);
      a.boundary2.insert(l);
      break;
  }
}

inline void route_out(ApproximationSets& a, Label l, TruthValue vd) {
  switch (vd) {
    case TruthValue::present:
      a.upper1.erase(l);
      a.lower1.erase(l);
      break;
    case TruthValue::absent:
      a.upper2.erase(l);
      a.lower2.erase(l);
      break;
    case TruthValue::inconclusive:
      a.upper1.erase(l);
      a.boundary1.erase(l);
      a.upper2.erase(l);
      a.boundary2.erase(l);
      break;
  }
}

inline bool anywhere(const ApproximationSets& a, Label l) {
  return a.upper1.count(l) || a.upper2.count(l) || a.lower1.count(l) || a.lower2.count(l) ||
         a.boundary1.count(l) || a.boundary2.count(l);
}

// The vd a present label is filed under.
inline TruthValue filed_vd(const ApproximationSets& a, Label l) {
  if (a.lower1.count(l)) return TruthValue::present;
  if (a.lower2.count(l)) return TruthValue::absent;
  if (a.boundary1.count(l)) return TruthValue::inconclusive;
  throw Error(ErrorCode::not_present, l.str());
}

}  // namespace detail

// Singleton elementary sets: every node label is distinct, so each region is
// just the set of nodes carrying the matching vd.
inline ApproximationSets approximations(const Lattice& kb, const std::string& disease) {
  require_disease(kb, disease);
  ApproximationSets a;
  kb.for_each_node([&](const LatticeNode& nd) {
    if (const DecisionEntry* e = nd.decision(disease)) detail::route_in(a, nd.label, e->vd);
  });
  return a;
}

inline ApproximationSets on_decisions_added(ApproximationSets a,
                                            const std::vector<std::pair<Label, TruthValue>>& added) {
  for (const auto& [l, vd] : added) {
    if (detail::anywhere(a, l)) throw Error(ErrorCode::already_present, l.str());
    detail::route_in(a, l, vd);
  }
  return a;
}

inline ApproximationSets on_decisions_removed(ApproximationSets a, const std::vector<Label>& removed) {
  for (Label l : removed) detail::route_out(a, l, detail::filed_vd(a, l));
  return a;
}

// Moves one node between regions. Both concepts are kept in step, so the 1<->2
// transitions also touch upper2 and boundary2.
inline ApproximationSets on_truth_changed(ApproximationSets a, Label l, TruthValue old_vd, TruthValue new_vd) {
  if (old_vd == new_vd) throw Error(ErrorCode::invalid_transition, "vd unchanged on " + l.str());
  if (detail::filed_vd(a, l) != old_vd)
    throw Error(ErrorCode::not_present, l.str() + " is not filed under vd " + std::to_string(to_int(old_vd)));
  detail::route_out(a, l, old_vd);
  detail::route_in(a, l, new_vd);
  return a;
}

// Removals first, then vd moves, then additions.
inline ApproximationSets apply_changes(ApproximationSets a, const DecisionDiff& diff) {
  a = on_decisions_removed(std::move(a), diff.removed);
  for (const auto& c : diff.changed) a = on_truth_changed(std::move(a), c.label, c.from, c.to);
  return on_decisions_added(std::move(a), diff.added);
}

}  // namespace rslat
