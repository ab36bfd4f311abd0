#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "evidence.hpp"
#include "label.hpp"
#include "numeric.hpp"

namespace rslat {

struct Fact {
  FactId id = 0;
  std::string attribute;
  std::string value;
  bool operator==(const Fact&) const = default;
};

// One disease conclusion on a node: the condition is the node's label, the
// weights are the conditional weightages of the condition's facts.
struct DecisionEntry {
  std::string disease;
  TruthValue vd = TruthValue::inconclusive;
  double cf = 0;
  TruthTriple tv;
  std::map<FactId, double> weights;
  bool operator==(const DecisionEntry&) const = default;
};

struct LatticeNode {
  Label label;
  std::vector<FactId> condition;
  std::vector<DecisionEntry> decisions;
  std::vector<Label> predecessors;
  std::vector<Label> successors;

  const DecisionEntry* decision(const std::string& disease) const {
    for (const auto& d : decisions)
      if (d.disease == disease) return &d;
    return nullptr;
  }

  bool operator==(const LatticeNode&) const = default;
};

struct KbConfig {
  std::string module = "kb";
  int q = 5;
  double alpha = 0.0;
  Rounding rounding = Rounding::full;
  int order_cap = kDefaultOrderCap;
  bool operator==(const KbConfig&) const = default;
};

// Fact priorities per disease. A node-scoped table replaces the disease-wide
// one for that node; missing entries default to 1.
struct PriorityTable {
  std::map<std::string, std::map<FactId, int>> global;
  std::map<std::pair<std::string, std::uint32_t>, std::map<FactId, int>> local;
  bool operator==(const PriorityTable&) const = default;

  int priority(const std::string& disease, Label node, FactId f) const {
    if (auto it = local.find({disease, node.bits}); it != local.end())
      if (auto p = it->second.find(f); p != it->second.end()) return p->second;
    if (auto it = global.find(disease); it != global.end())
      if (auto p = it->second.find(f); p != it->second.end()) return p->second;
    return 1;
  }

  // Cw_k = p_k / n with n the summed priority of the node's facts.
  std::map<FactId, double> weights(const std::string& disease, Label node) const {
    std::map<FactId, int> ps;
    int n = 0;
    for (FactId f : node.facts()) {
      ps[f] = priority(disease, node, f);
      n += ps[f];
    }
    std::map<FactId, double> out;
    for (auto [f, p] : ps) out[f] = conditional_weight(p, n);
    return out;
  }
};

// Evidence gathered for a composite condition as a whole.
struct ExternalEvidence {
  TruthTriple tv;
  TruthValue vd = TruthValue::inconclusive;
  double cf = 0;
  bool operator==(const ExternalEvidence&) const = default;
};

using NodeDiseaseKey = std::pair<std::uint32_t, std::string>;

class Lattice {
 public:
  Lattice() = default;

  int order() const { return n_; }
  const KbConfig& config() const { return config_; }
  KbConfig& config() { return config_; }

  const std::vector<Fact>& facts() const { return facts_; }
  const Fact& fact(FactId id) const {
    if (id < 1 || id > n_) throw Error(ErrorCode::unknown_fact, "f" + std::to_string(id));
    return facts_[static_cast<std::size_t>(id - 1)];
  }
  Fact& fact(FactId id) {
    return const_cast<Fact&>(static_cast<const Lattice&>(*this).fact(id));
  }

  const std::vector<std::string>& diseases() const { return diseases_; }
  bool knows_disease(const std::string& d) const {
    return std::find(diseases_.begin(), diseases_.end(), d) != diseases_.end();
  }
  void register_disease(const std::string& d) {
    if (!knows_disease(d)) diseases_.push_back(d);
  }
  std::size_t disease_rank(const std::string& d) const {
    return static_cast<std::size_t>(std::find(diseases_.begin(), diseases_.end(), d) - diseases_.begin());
  }

  const PriorityTable& priorities() const { return priorities_; }
  PriorityTable& priorities() { return priorities_; }
  const std::map<NodeDiseaseKey, ExternalEvidence>& externals() const { return externals_; }
  std::map<NodeDiseaseKey, ExternalEvidence>& externals() { return externals_; }
  // Decisions fixed by hand on composite nodes; nullopt pins the disease absent.
  const std::map<NodeDiseaseKey, std::optional<DecisionEntry>>& pins() const { return pins_; }
  std::map<NodeDiseaseKey, std::optional<DecisionEntry>>& pins() { return pins_; }

  const std::vector<std::vector<LatticeNode>>& levels() const { return levels_; }
  const std::vector<LatticeNode>& level(int l) const {
    if (l < 0 || l > n_) throw Error(ErrorCode::out_of_range, "level " + std::to_string(l));
    return levels_[static_cast<std::size_t>(l)];
  }

  std::size_t node_count() const {
    std::size_t c = 0;
    for (const auto& lv : levels_) c += lv.size();
    return c;
  }

  bool contains(Label l) const { return l.width == n_ && (n_ == 32 || l.bits < (1u << n_)); }

  const LatticeNode& node(Label l) const {
    if (!contains(l)) throw Error(ErrorCode::dangling_label, l.str());
    return levels_[static_cast<std::size_t>(l.level())][static_cast<std::size_t>(ordinal_of(l) - 1)];
  }
  LatticeNode& node(Label l) {
    return const_cast<LatticeNode&>(static_cast<const Lattice&>(*this).node(l));
  }

  template <typename Fn>
  void for_each_node(Fn&& fn) const {
    for (const auto& lv : levels_)
      for (const auto& nd : lv) fn(nd);
  }

  // Replace the structure with an empty order-n lattice over `facts`.
  void materialize(std::vector<Fact> facts) {
    n_ = static_cast<int>(facts.size());
    facts_ = std::move(facts);
    levels_.assign(static_cast<std::size_t>(n_ + 1), {});
    for (int l = 0; l <= n_; ++l) {
      const std::uint64_t count = binomial(n_, l);
      auto& lv = levels_[static_cast<std::size_t>(l)];
      lv.reserve(count);
      for (std::uint64_t i = 1; i <= count; ++i) lv.push_back(make_node(label_at(l, i, n_)));
    }
  }

  LatticeNode make_node(Label l) const {
    LatticeNode nd;
    nd.label = l;
    nd.condition = l.facts();
    nd.predecessors = predecessor_labels(l);
    nd.successors = successor_labels(l, n_);
    return nd;
  }

  // Nodes, facts and every derivation input; the disease registry order is not part of it.
  bool same_content(const Lattice& o) const {
    return n_ == o.n_ && facts_ == o.facts_ && levels_ == o.levels_ && priorities_ == o.priorities_ &&
           externals_ == o.externals_ && pins_ == o.pins_;
  }

  bool operator==(const Lattice&) const = default;

 private:
  int n_ = 0;
  KbConfig config_;
  std::vector<Fact> facts_;
  std::vector<std::string> diseases_;
  PriorityTable priorities_;
  std::map<NodeDiseaseKey, ExternalEvidence> externals_;
  std::map<NodeDiseaseKey, std::optional<DecisionEntry>> pins_;
  std::vector<std::vector<LatticeNode>> levels_;
};

inline void sort_decisions(const Lattice& kb, std::vector<DecisionEntry>& ds) {
  std::stable_sort(ds.begin(), ds.end(), [&](const DecisionEntry& a, const DecisionEntry& b) {
    return kb.disease_rank(a.disease) < kb.disease_rank(b.disease);
  });
}

inline void check_order(int n, int cap) {
  const int limit = std::min(cap, kMaxOrder);
  if (n > limit)
    throw Error(ErrorCode::order_too_large,
                "order " + std::to_string(n) + " exceeds cap " + std::to_string(limit));
}

// Lay out the full lattice and place the atomic decisions on level 1. Facts
// are numbered 1..n in the given order when ids are unset (0). Diseases are
// registered in `disease_order` first, then by first appearance.
inline Lattice build_kb(std::vector<Fact> facts, const std::map<FactId, std::vector<DecisionEntry>>& atomic,
                        const KbConfig& config = {}, const std::vector<std::string>& disease_order = {}) {
  const int n = static_cast<int>(facts.size());
  if (n < 1) throw Error(ErrorCode::out_of_range, "a lattice needs at least one fact");
  check_order(n, config.order_cap);
  std::set<FactId> ids;
  std::set<std::pair<std::string, std::string>> texts;
  for (std::size_t i = 0; i < facts.size(); ++i) {
    if (facts[i].id == 0) facts[i].id = static_cast<FactId>(i + 1);
    if (!ids.insert(facts[i].id).second)
      throw Error(ErrorCode::duplicate_fact, "f" + std::to_string(facts[i].id));
    if (!texts.insert({facts[i].attribute, facts[i].value}).second)
      throw Error(ErrorCode::duplicate_fact, "(\"" + facts[i].attribute + "\", \"" + facts[i].value + "\")");
  }
  std::sort(facts.begin(), facts.end(), [](const Fact& a, const Fact& b) { return a.id < b.id; });
  if (facts.front().id != 1 || facts.back().id != n)
    throw Error(ErrorCode::out_of_range, "fact ids must run 1..n");

  Lattice kb;
  kb.config() = config;
  for (const auto& d : disease_order) kb.register_disease(d);
  kb.materialize(std::move(facts));
  for (const auto& [f, entries] : atomic) {
    if (f < 1 || f > n) throw Error(ErrorCode::unknown_fact, "f" + std::to_string(f));
    auto& nd = kb.node(single_fact_label(f, n));
    for (const auto& e : entries) {
      if (nd.decision(e.disease))
        throw Error(ErrorCode::already_present, e.disease + " twice on f" + std::to_string(f));
      kb.register_disease(e.disease);
      DecisionEntry copy = e;
      copy.weights = {{f, 1.0}};
      nd.decisions.push_back(std::move(copy));
    }
  }
  for (FactId f = 1; f <= n; ++f) sort_decisions(kb, kb.node(single_fact_label(f, n)).decisions);
  return kb;
}

// Shape invariants of a materialized lattice; returns one line per violation.
inline std::vector<std::string> check_structure(const Lattice& kb) {
  std::vector<std::string> bad;
  const int n = kb.order();
  if (kb.levels().size() != static_cast<std::size_t>(n + 1)) {
    bad.push_back("expected " + std::to_string(n + 1) + " levels");
    return bad;
  }
  if (kb.node_count() != (std::size_t{1} << n)) bad.push_back("node count " + std::to_string(kb.node_count()));
  std::set<std::uint32_t> seen;
  for (int l = 0; l <= n; ++l) {
    const auto& lv = kb.level(l);
    if (lv.size() != binomial(n, l)) bad.push_back("level " + std::to_string(l) + " holds " + std::to_string(lv.size()));
    for (const auto& nd : lv) {
      const std::string at = nd.label.str();
      if (nd.label.width != n) bad.push_back(at + ": width " + std::to_string(nd.label.width));
      if (!seen.insert(nd.label.bits).second) bad.push_back(at + ": duplicate label");
      if (nd.label.level() != l) bad.push_back(at + ": popcount differs from level");
      if (nd.condition != nd.label.facts()) bad.push_back(at + ": condition differs from label");
      if (nd.predecessors.size() != static_cast<std::size_t>(l)) bad.push_back(at + ": predecessor count");
      if (nd.successors.size() != static_cast<std::size_t>(n - l)) bad.push_back(at + ": successor count");
      for (Label p : nd.predecessors)
        if (p.width != n || (p.bits & ~nd.label.bits) != 0 || std::popcount(nd.label.bits ^ p.bits) != 1)
          bad.push_back(at + ": predecessor " + p.str() + " is not a one-bit cover");
      for (Label s : nd.successors)
        if (s.width != n || (nd.label.bits & ~s.bits) != 0 || std::popcount(nd.label.bits ^ s.bits) != 1)
          bad.push_back(at + ": successor " + s.str() + " is not a one-bit cover");
    }
  }
  return bad;
}

// Per-disease decision changes between two versions of the same label space.
struct VdChange {
  Label label;
  TruthValue from;
  TruthValue to;
  bool operator==(const VdChange&) const = default;
};

struct DecisionDiff {
  std::string disease;
  std::vector<std::pair<Label, TruthValue>> added;
  std::vector<Label> removed;
  std::vector<VdChange> changed;

  bool empty() const { return added.empty() && removed.empty() && changed.empty(); }
};

inline std::vector<DecisionDiff> diff_decisions(const Lattice& before, const Lattice& after) {
  if (before.order() != after.order())
    throw Error(ErrorCode::out_of_range, "diff needs lattices of equal order");
  std::vector<std::string> ds = before.diseases();
  for (const auto& d : after.diseases())
    if (!before.knows_disease(d)) ds.push_back(d);
  std::vector<DecisionDiff> out;
  for (const auto& d : ds) {
    DecisionDiff diff{d, {}, {}, {}};
    for (std::size_t l = 0; l < before.levels().size(); ++l) {
      const auto& a = before.levels()[l];
      const auto& b = after.levels()[l];
      for (std::size_t i = 0; i < a.size(); ++i) {
        const DecisionEntry* x = a[i].decision(d);
        const DecisionEntry* y = b[i].decision(d);
        if (x && !y) diff.removed.push_back(a[i].label);
        else if (!x && y) diff.added.emplace_back(a[i].label, y->vd);
        else if (x && y && x->vd != y->vd) diff.changed.push_back({a[i].label, x->vd, y->vd});
      }
    }
    if (!diff.empty()) out.push_back(std::move(diff));
  }
  return out;
}

}  // namespace rslat
