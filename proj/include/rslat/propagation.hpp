#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "evidence.hpp"
#include "lattice.hpp"
#include "numeric.hpp"

namespace rslat {

struct AlphaThreshold {
  double alpha = 0.0;

  explicit AlphaThreshold(double a = 0.0) : alpha(a) {
    if (!(a >= 0.0 && a <= 1.0)) throw Error(ErrorCode::out_of_range, "alpha must lie in [0,1]");
  }

  bool passes(double x) const { return x > alpha; }
};

inline double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// Same vd on both sides: sum of the weighted CFs that clear alpha.
inline double combine_same_vd(double cf_i, double w_i, double cf_j, double w_j, AlphaThreshold alpha) {
  const double a = cf_i * w_i, b = cf_j * w_j;
  double out = 0;
  if (alpha.passes(a)) out += a;
  if (alpha.passes(b)) out += b;
  return clamp01(out);
}

// Opposed vds: the higher raw CF sets vd (a tie gives 2); cf is the gap
// between the weighted CFs that clear alpha.
inline Resolution combine_diff_vd(const DecisionEntry& i, const DecisionEntry& j, double w_i, double w_j,
                                  AlphaThreshold alpha) {
  TruthValue vd = TruthValue::inconclusive;
  if (!nearly_equal(i.cf, j.cf)) vd = i.cf > j.cf ? i.vd : j.vd;
  const double a = alpha.passes(i.cf * w_i) ? i.cf * w_i : 0.0;
  const double b = alpha.passes(j.cf * w_j) ? j.cf * w_j : 0.0;
  return {vd, clamp01(std::fabs(a - b))};
}

inline Resolution merge_external(TruthValue vd_star, double cf_star, TruthValue vd_ext, double cf_ext,
                                 double tv3_merged) {
  if (vd_star == vd_ext) return {vd_star, std::min(1.0, cf_star + cf_ext)};
  if (nearly_equal(cf_star, cf_ext)) return {TruthValue::inconclusive, tv3_merged};
  if (cf_ext > cf_star) return {vd_ext, cf_ext - cf_star};
  return {vd_star, cf_star - cf_ext};
}

inline TruthTriple merged_truth_triple(std::span<const TruthTriple> triples,
                                       const std::optional<TruthTriple>& external) {
  if (triples.empty()) throw Error(ErrorCode::out_of_range, "merged_truth_triple needs a constituent");
  TruthTriple sum;
  for (const auto& t : triples) {
    sum.tv1 += t.tv1;
    sum.tv2 += t.tv2;
    sum.tv3 += t.tv3;
  }
  double k = static_cast<double>(triples.size());
  if (external) {
    sum.tv1 += external->tv1;
    sum.tv2 += external->tv2;
    sum.tv3 += external->tv3;
    k += 1;
  }
  return {sum.tv1 / k, sum.tv2 / k, sum.tv3 / k};
}

// Dummy-rule chain: fold left keeping the higher-CF side; a tie between
// different vds yields 2 and carries the tied CF.
inline TruthValue derive_vd_chain(std::span<const std::pair<TruthValue, double>> constituents) {
  if (constituents.empty()) throw Error(ErrorCode::out_of_range, "derive_vd_chain needs a constituent");
  auto acc = constituents.front();
  for (std::size_t k = 1; k < constituents.size(); ++k) {
    const auto& next = constituents[k];
    if (nearly_equal(next.second, acc.second)) {
      if (next.first != acc.first) acc.first = TruthValue::inconclusive;
    } else if (next.second > acc.second) {
      acc = next;
    }
  }
  return acc.first;
}

struct Constituent {
  Label label;
  TruthValue vd;
  double cf;
};

struct MultiResult {
  double cf = 0;
  bool any_term = false;  // some CF_k * w_k cleared alpha
};

namespace detail {

// CF_k's sign reference: the node vd when some member of S_k carries it,
// otherwise the vd whose members hold the largest summed CF.
inline TruthValue reference_vd(const std::vector<const Constituent*>& sk, TruthValue node_vd) {
  std::map<TruthValue, double> mass;
  for (const auto* c : sk) mass[c->vd] += c->cf;
  if (mass.count(node_vd)) return node_vd;
  auto best = mass.begin();
  for (auto it = mass.begin(); it != mass.end(); ++it)
    if (it->second > best->second + kTieEpsilon) best = it;
  return best->first;
}

inline MultiResult cf_multi_terms(Label node, std::span<const Constituent> constituents, TruthValue node_vd,
                                  const std::map<FactId, double>& weights, AlphaThreshold alpha,
                                  Rounding rounding) {
  MultiResult r;
  double total = 0;
  for (FactId f : node.facts()) {
    std::vector<const Constituent*> sk;
    for (const auto& c : constituents)
      if (c.label.has(f)) sk.push_back(&c);
    if (sk.empty()) continue;
    const TruthValue ref = reference_vd(sk, node_vd);
    double cfk = 0;
    for (const auto* c : sk) cfk += c->vd == ref ? c->cf : -c->cf;
    auto w = weights.find(f);
    const double term = apply(rounding, cfk * (w == weights.end() ? 0.0 : w->second));
    if (alpha.passes(term)) {
      total += term;
      r.any_term = true;
    }
  }
  r.cf = apply(rounding, clamp01(total / static_cast<double>(node.level() - 1)));
  return r;
}

}  // namespace detail

// CF of a level >= 3 node from its level-(i-1) predecessors carrying the disease.
inline double cf_multi(Label node, std::span<const Constituent> constituents, TruthValue node_vd,
                       const std::map<FactId, double>& weights, AlphaThreshold alpha,
                       Rounding rounding = Rounding::full) {
  if (node.level() < 3) throw Error(ErrorCode::out_of_range, "cf_multi applies from level 3");
  return detail::cf_multi_terms(node, constituents, node_vd, weights, alpha, rounding).cf;
}

inline std::optional<DecisionEntry> carryover_single(const DecisionEntry& constituent, double w,
                                                     AlphaThreshold alpha) {
  const double cf = constituent.cf * w;
  if (!alpha.passes(cf)) return std::nullopt;
  DecisionEntry out = constituent;
  out.cf = clamp01(cf);
  return out;
}

namespace detail {

struct Carrier {
  const LatticeNode* node;
  const DecisionEntry* entry;
};

inline std::optional<DecisionEntry> derive_entry(const Lattice& kb, const LatticeNode& nd,
                                                 const std::string& disease) {
  const KbConfig& cfg = kb.config();
  const AlphaThreshold alpha(cfg.alpha);
  const Rounding rd = cfg.rounding;
  const int level = nd.label.level();

  std::vector<Carrier> carriers;
  for (Label p : nd.predecessors) {
    const LatticeNode& pn = kb.node(p);
    if (const DecisionEntry* e = pn.decision(disease)) carriers.push_back({&pn, e});
  }
  std::sort(carriers.begin(), carriers.end(),
            [](const Carrier& a, const Carrier& b) { return a.node->label < b.node->label; });

  const auto ext_it = kb.externals().find({nd.label.bits, disease});
  const ExternalEvidence* ext = ext_it == kb.externals().end() ? nullptr : &ext_it->second;
  if (carriers.empty() && !ext) return std::nullopt;

  const auto weights = kb.priorities().weights(disease, nd.label);
  // Weight of a predecessor inside this node: its facts' shares over i-1.
  auto carried_weight = [&](const LatticeNode& pn) {
    double w = 0;
    for (FactId f : pn.condition) w += weights.at(f);
    return level == 2 ? w : w / static_cast<double>(level - 1);
  };

  std::optional<Resolution> star;
  if (carriers.size() == 1) {
    if (auto e = carryover_single(*carriers[0].entry, carried_weight(*carriers[0].node), alpha))
      star = Resolution{e->vd, apply(rd, e->cf)};
  } else if (level == 2 && carriers.size() == 2) {
    const DecisionEntry& a = *carriers[0].entry;
    const DecisionEntry& b = *carriers[1].entry;
    const double wa = carried_weight(*carriers[0].node), wb = carried_weight(*carriers[1].node);
    if (alpha.passes(a.cf * wa) || alpha.passes(b.cf * wb)) {
      if (a.vd == b.vd)
        star = Resolution{a.vd, apply(rd, combine_same_vd(a.cf, wa, b.cf, wb, alpha))};
      else {
        Resolution r = combine_diff_vd(a, b, wa, wb, alpha);
        star = Resolution{r.vd, apply(rd, r.cf)};
      }
    }
  } else if (carriers.size() >= 2) {
    std::vector<std::pair<TruthValue, double>> chain;
    std::vector<Constituent> cs;
    for (const auto& c : carriers) {
      chain.emplace_back(c.entry->vd, c.entry->cf);
      cs.push_back({c.node->label, c.entry->vd, c.entry->cf});
    }
    const TruthValue vd = derive_vd_chain(chain);
    const MultiResult m = cf_multi_terms(nd.label, cs, vd, weights, alpha, rd);
    if (m.any_term) star = Resolution{vd, m.cf};
  }

  std::vector<TruthTriple> triples;
  for (const auto& c : carriers) triples.push_back(c.entry->tv);

  DecisionEntry out;
  out.disease = disease;
  out.weights = weights;
  if (ext) {
    const TruthTriple merged = triples.empty() ? ext->tv : merged_truth_triple(triples, ext->tv);
    const Resolution r = star ? merge_external(star->vd, star->cf, ext->vd, ext->cf, merged.tv3)
                              : Resolution{ext->vd, ext->cf};
    out.vd = r.vd;
    out.cf = apply(rd, clamp01(r.cf));
    out.tv = apply(rd, merged);
    return out;
  }
  if (!star) return std::nullopt;
  out.vd = star->vd;
  out.cf = star->cf;
  out.tv = apply(rd, merged_truth_triple(triples, std::nullopt));
  return out;
}

}  // namespace detail

// Recompute the decisions of every composite node accepted by `affected`,
// bottom-up. Pinned (node, disease) pairs keep their pinned value.
inline void propagate_in_place(Lattice& kb, const std::function<bool(Label)>& affected = {}) {
  for (int l = 2; l <= kb.order(); ++l) {
    for (const LatticeNode& cur : kb.level(l)) {
      if (affected && !affected(cur.label)) continue;
      std::vector<DecisionEntry> ds;
      for (const auto& d : kb.diseases()) {
        if (auto pin = kb.pins().find({cur.label.bits, d}); pin != kb.pins().end()) {
          if (pin->second) ds.push_back(*pin->second);
          continue;
        }
        if (auto e = detail::derive_entry(kb, cur, d)) ds.push_back(std::move(*e));
      }
      kb.node(cur.label).decisions = std::move(ds);
    }
  }
}

// Fill levels 2..n from level 1 using the weights, external evidence and
// alpha recorded on the lattice.
inline Lattice propagate(Lattice kb) {
  propagate_in_place(kb);
  return kb;
}

inline Lattice propagate(Lattice kb, const PriorityTable& weights,
                         const std::map<NodeDiseaseKey, ExternalEvidence>& external, AlphaThreshold alpha) {
  kb.priorities() = weights;
  kb.externals() = external;
  kb.config().alpha = alpha.alpha;
  for (const auto& [key, ev] : external) kb.register_disease(key.second);
  propagate_in_place(kb);
  return kb;
}

}  // namespace rslat
