#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "lattice.hpp"
#include "propagation.hpp"

namespace rslat {

// Derivation inputs that arrive together with a new fact. Priorities must
// reference the new fact; external evidence must sit on nodes containing it.
struct InsertExtras {
  std::map<std::string, int> global_priority;  // disease -> priority of the new fact
  std::map<std::pair<std::string, std::uint32_t>, std::map<FactId, int>> local_priority;
  std::map<NodeDiseaseKey, ExternalEvidence> externals;
};

namespace detail {

inline std::uint32_t drop_bit(std::uint32_t bits, int k) {
  const std::uint32_t low = bits & ((1u << (k - 1)) - 1u);
  return low | ((bits >> k) << (k - 1));
}

inline FactId shift_fact(FactId f, FactId removed) { return f > removed ? f - 1 : f; }

template <typename V>
std::map<FactId, V> remap_facts(const std::map<FactId, V>& m, FactId removed) {
  std::map<FactId, V> out;
  for (const auto& [f, v] : m)
    if (f != removed) out[shift_fact(f, removed)] = v;
  return out;
}

}  // namespace detail

// The new fact becomes f_{n+1}, the leftmost printed bit. Existing nodes keep
// their content; only nodes containing the new fact are derived.
inline Lattice insert_fact(const Lattice& kb, Fact fact, const std::vector<DecisionEntry>& atomic,
                           const InsertExtras& extras = {}) {
  const int n = kb.order() + 1;
  check_order(n, kb.config().order_cap);
  for (const auto& f : kb.facts())
    if (f.attribute == fact.attribute && f.value == fact.value)
      throw Error(ErrorCode::duplicate_fact, "(\"" + fact.attribute + "\", \"" + fact.value + "\")");
  fact.id = n;
  const std::uint32_t new_bit = 1u << (n - 1);

  Lattice out = kb;
  std::vector<Fact> facts = kb.facts();
  facts.push_back(fact);
  out.materialize(std::move(facts));
  for (const auto& lv : kb.levels())
    for (const auto& nd : lv) out.node({nd.label.bits, n}).decisions = nd.decisions;

  auto& top = out.node(single_fact_label(n, n));
  for (const auto& e : atomic) {
    if (top.decision(e.disease)) throw Error(ErrorCode::already_present, e.disease + " twice on new fact");
    out.register_disease(e.disease);
    DecisionEntry copy = e;
    copy.weights = {{n, 1.0}};
    top.decisions.push_back(std::move(copy));
  }
  sort_decisions(out, top.decisions);

  for (const auto& [d, p] : extras.global_priority) out.priorities().global[d][n] = p;
  for (const auto& [key, ps] : extras.local_priority) {
    if (!(key.second & new_bit))
      throw Error(ErrorCode::unknown_fact_ref, "priority scope must contain the new fact");
    out.priorities().local[key] = ps;
  }
  for (const auto& [key, ev] : extras.externals) {
    if (!(key.first & new_bit) || Label(key.first, n).level() < 2)
      throw Error(ErrorCode::unknown_fact_ref, "external evidence must sit on a composite with the new fact");
    out.register_disease(key.second);
    out.externals()[key] = ev;
  }
  propagate_in_place(out, [new_bit](Label l) { return (l.bits & new_bit) != 0; });
  return out;
}

// Drop f_k and every node containing it; surviving labels close the gap by
// shifting the bits left of position k one place right.
inline Lattice delete_fact(const Lattice& kb, FactId k) {
  if (k < 1 || k > kb.order()) throw Error(ErrorCode::unknown_fact, "f" + std::to_string(k));
  if (kb.order() == 1) throw Error(ErrorCode::out_of_range, "cannot delete the only fact");
  const int n = kb.order() - 1;
  const std::uint32_t gone = 1u << (k - 1);

  Lattice out;
  out.config() = kb.config();
  for (const auto& d : kb.diseases()) out.register_disease(d);
  std::vector<Fact> facts;
  for (const auto& f : kb.facts()) {
    if (f.id == k) continue;
    Fact g = f;
    g.id = detail::shift_fact(f.id, k);
    facts.push_back(std::move(g));
  }
  out.materialize(std::move(facts));

  auto remap_entry = [&](DecisionEntry e) {
    e.weights = detail::remap_facts(e.weights, k);
    return e;
  };
  for (const auto& lv : kb.levels())
    for (const auto& nd : lv) {
      if (nd.label.bits & gone) continue;
      auto& target = out.node({detail::drop_bit(nd.label.bits, k), n});
      for (const auto& e : nd.decisions) target.decisions.push_back(remap_entry(e));
    }

  for (const auto& [d, ps] : kb.priorities().global) {
    auto m = detail::remap_facts(ps, k);
    if (!m.empty()) out.priorities().global[d] = std::move(m);
  }
  for (const auto& [key, ps] : kb.priorities().local)
    if (!(key.second & gone))
      out.priorities().local[{key.first, detail::drop_bit(key.second, k)}] = detail::remap_facts(ps, k);
  for (const auto& [key, ev] : kb.externals())
    if (!(key.first & gone)) out.externals()[{detail::drop_bit(key.first, k), key.second}] = ev;
  for (const auto& [key, pin] : kb.pins())
    if (!(key.first & gone)) {
      std::optional<DecisionEntry> p;
      if (pin) p = remap_entry(*pin);
      out.pins()[{detail::drop_bit(key.first, k), key.second}] = std::move(p);
    }
  return out;
}

struct ConditionEdit {
  std::string attribute;
  std::string value;
};

struct DecisionSet {
  std::string disease;
  TruthValue vd = TruthValue::inconclusive;
  double cf = 0;
  std::optional<TruthTriple> tv;
};

struct DecisionRemove {
  std::string disease;
};

using NodeChange = std::variant<ConditionEdit, DecisionSet, DecisionRemove>;

struct ModifyResult {
  Lattice kb;
  std::vector<DecisionDiff> changes;  // per disease, for incremental approximation upkeep
};

// Condition edits rename a level-1 fact (every superset node shares the fact
// record). Decision edits on level 1 rewrite the atomic rule; on composite
// nodes they pin the value. Either way derived nodes are recomputed.
inline ModifyResult modify_node(const Lattice& kb, Label label, const NodeChange& change) {
  const LatticeNode& target = kb.node(label);
  Lattice out = kb;

  if (const auto* edit = std::get_if<ConditionEdit>(&change)) {
    if (label.level() != 1)
      throw Error(ErrorCode::illegal_condition_edit, "condition edits apply to level-1 nodes, not " + label.str());
    for (const auto& f : kb.facts())
      if (f.id != target.condition.front() && f.attribute == edit->attribute && f.value == edit->value)
        throw Error(ErrorCode::duplicate_fact, "(\"" + edit->attribute + "\", \"" + edit->value + "\")");
    Fact& f = out.fact(target.condition.front());
    f.attribute = edit->attribute;
    f.value = edit->value;
    return {std::move(out), {}};
  }
  if (label.level() == 0) throw Error(ErrorCode::out_of_range, "the root node carries no decisions");

  if (const auto* set = std::get_if<DecisionSet>(&change)) {
    if (!(set->cf >= 0.0 && set->cf <= 1.0)) throw Error(ErrorCode::out_of_range, "cf must lie in [0,1]");
    out.register_disease(set->disease);
    DecisionEntry e;
    e.disease = set->disease;
    e.vd = set->vd;
    e.cf = set->cf;
    const DecisionEntry* prev = target.decision(set->disease);
    e.tv = set->tv ? *set->tv : prev ? prev->tv : TruthTriple{};
    e.weights = label.level() == 1 ? std::map<FactId, double>{{target.condition.front(), 1.0}}
                                   : kb.priorities().weights(set->disease, label);
    if (label.level() == 1) {
      auto& ds = out.node(label).decisions;
      std::erase_if(ds, [&](const DecisionEntry& x) { return x.disease == set->disease; });
      ds.push_back(std::move(e));
      sort_decisions(out, ds);
    } else {
      out.pins()[{label.bits, set->disease}] = std::move(e);
    }
  } else {
    const auto& rm = std::get<DecisionRemove>(change);
    if (!kb.knows_disease(rm.disease)) throw Error(ErrorCode::unknown_disease, rm.disease);
    if (!target.decision(rm.disease))
      throw Error(ErrorCode::not_present, rm.disease + " on " + label.str());
    if (label.level() == 1)
      std::erase_if(out.node(label).decisions, [&](const DecisionEntry& x) { return x.disease == rm.disease; });
    else
      out.pins()[{label.bits, rm.disease}] = std::nullopt;
  }
  propagate_in_place(out);
  auto changes = diff_decisions(kb, out);
  return {std::move(out), std::move(changes)};
}

}  // namespace rslat
