#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "errors.hpp"
#include "lattice.hpp"
#include "metrics.hpp"
#include "roughset.hpp"
#include "rule.hpp"

namespace rslat {

inline constexpr int kExactCoverMaxOrder = 12;
inline constexpr std::uint64_t kCoverNodeBudget = 2'000'000;

namespace detail {

inline std::uint64_t term_key(const Term& t) { return (std::uint64_t{t.care} << 32) | t.value; }

// Quine-McCluskey: merge terms differing in one cared bit until nothing merges.
inline std::vector<Term> prime_implicants(const std::vector<std::uint32_t>& minterms, int n) {
  const std::uint32_t full = n >= 32 ? ~0u : ((1u << n) - 1u);
  std::vector<Term> current;
  for (auto m : minterms) current.push_back({full, m});
  std::vector<Term> primes;
  while (!current.empty()) {
    std::unordered_set<std::uint64_t> present;
    for (const auto& t : current) present.insert(term_key(t));
    std::unordered_set<std::uint64_t> merged, next_keys;
    std::vector<Term> next;
    for (const auto& t : current) {
      for (std::uint32_t c = t.care; c != 0; c &= c - 1) {
        const std::uint32_t bit = c & (~c + 1u);
        if (t.value & bit) continue;  // visit each pair from its 0 side
        const Term partner{t.care, t.value | bit};
        if (!present.count(term_key(partner))) continue;
        merged.insert(term_key(t));
        merged.insert(term_key(partner));
        const Term joined{t.care & ~bit, t.value};
        if (next_keys.insert(term_key(joined)).second) next.push_back(joined);
      }
    }
    for (const auto& t : current)
      if (!merged.count(term_key(t))) primes.push_back(t);
    current = std::move(next);
  }
  std::sort(primes.begin(), primes.end());
  return primes;
}

using Bits = std::vector<std::uint64_t>;

inline bool test(const Bits& b, std::size_t i) { return (b[i / 64] >> (i % 64)) & 1u; }
inline void set(Bits& b, std::size_t i) { b[i / 64] |= std::uint64_t{1} << (i % 64); }

struct CoverCost {
  std::size_t terms = 0;
  int literals = 0;
  std::vector<Term> sorted;

  bool operator<(const CoverCost& o) const {
    if (terms != o.terms) return terms < o.terms;
    if (literals != o.literals) return literals < o.literals;
    return sorted < o.sorted;
  }
};

inline CoverCost cost_of(const std::vector<Term>& primes, const std::vector<std::size_t>& pick) {
  CoverCost c;
  for (auto i : pick) {
    c.sorted.push_back(primes[i]);
    c.literals += primes[i].literals();
  }
  std::sort(c.sorted.begin(), c.sorted.end());
  c.terms = pick.size();
  return c;
}

class CoverSearch {
 public:
  CoverSearch(const std::vector<Term>& primes, const std::vector<std::uint32_t>& minterms)
      : primes_(primes), minterms_(minterms), covering_(minterms.size()) {
    for (std::size_t p = 0; p < primes.size(); ++p)
      for (std::size_t m = 0; m < minterms.size(); ++m)
        if (primes[p].covers(minterms[m])) covering_[m].push_back(p);
    for (auto& c : covering_)
      std::sort(c.begin(), c.end(), [&](std::size_t a, std::size_t b) {
        if (primes_[a].literals() != primes_[b].literals()) return primes_[a].literals() < primes_[b].literals();
        return primes_[a] < primes_[b];
      });
  }

  std::vector<std::size_t> greedy() const {
    std::vector<bool> covered(minterms_.size(), false);
    std::size_t left = minterms_.size();
    std::vector<std::size_t> pick;
    while (left > 0) {
      std::size_t best = 0, best_gain = 0;
      for (std::size_t p = 0; p < primes_.size(); ++p) {
        std::size_t gain = 0;
        for (std::size_t m = 0; m < minterms_.size(); ++m)
          if (!covered[m] && primes_[p].covers(minterms_[m])) ++gain;
        const bool better = gain > best_gain ||
                            (gain == best_gain && gain > 0 &&
                             (primes_[p].literals() < primes_[best].literals() ||
                              (primes_[p].literals() == primes_[best].literals() && primes_[p] < primes_[best])));
        if (better) {
          best = p;
          best_gain = gain;
        }
      }
      pick.push_back(best);
      for (std::size_t m = 0; m < minterms_.size(); ++m)
        if (!covered[m] && primes_[best].covers(minterms_[m])) {
          covered[m] = true;
          --left;
        }
    }
    return drop_redundant(std::move(pick));
  }

  // Exact minimum cover by branch and bound; falls back to the best cover seen
  // once the node budget is spent.
  std::vector<std::size_t> exact(std::uint64_t budget) {
    budget_ = budget;
    best_ = greedy();
    best_cost_ = cost_of(primes_, best_);
    std::vector<std::size_t> pick;
    std::vector<int> cover_count(minterms_.size(), 0);
    search(pick, cover_count, 0);
    return best_;
  }

 private:
  std::vector<std::size_t> drop_redundant(std::vector<std::size_t> pick) const {
    std::sort(pick.begin(), pick.end(), [&](std::size_t a, std::size_t b) {
      if (primes_[a].literals() != primes_[b].literals()) return primes_[a].literals() > primes_[b].literals();
      return primes_[b] < primes_[a];
    });
    for (std::size_t i = 0; i < pick.size();) {
      bool needed = false;
      for (auto m : minterms_) {
        if (!primes_[pick[i]].covers(m)) continue;
        bool other = false;
        for (std::size_t j = 0; j < pick.size() && !other; ++j)
          other = j != i && primes_[pick[j]].covers(m);
        if (!other) {
          needed = true;
          break;
        }
      }
      if (needed) ++i;
      else pick.erase(pick.begin() + static_cast<std::ptrdiff_t>(i));
    }
    return pick;
  }

  void search(std::vector<std::size_t>& pick, std::vector<int>& cover_count, int literals) {
    if (budget_ == 0) return;
    --budget_;
    std::size_t target = minterms_.size();
    std::size_t fewest = SIZE_MAX;
    for (std::size_t m = 0; m < minterms_.size(); ++m)
      if (cover_count[m] == 0 && covering_[m].size() < fewest) {
        fewest = covering_[m].size();
        target = m;
      }
    if (target == minterms_.size()) {
      CoverCost c = cost_of(primes_, pick);
      if (c < best_cost_) {
        best_cost_ = std::move(c);
        best_ = pick;
      }
      return;
    }
    for (std::size_t p : covering_[target]) {
      const std::size_t terms = pick.size() + 1;
      const int lits = literals + primes_[p].literals();
      if (terms > best_cost_.terms || (terms == best_cost_.terms && lits > best_cost_.literals)) continue;
      pick.push_back(p);
      for (std::size_t m = 0; m < minterms_.size(); ++m)
        if (primes_[p].covers(minterms_[m])) ++cover_count[m];
      search(pick, cover_count, lits);
      for (std::size_t m = 0; m < minterms_.size(); ++m)
        if (primes_[p].covers(minterms_[m])) --cover_count[m];
      pick.pop_back();
    }
  }

  const std::vector<Term>& primes_;
  const std::vector<std::uint32_t>& minterms_;
  std::vector<std::vector<std::size_t>> covering_;
  std::vector<std::size_t> best_;
  CoverCost best_cost_;
  std::uint64_t budget_ = 0;
};

}  // namespace detail

// Minimal sum of products whose truth set is exactly `minterms`. Ties go to
// fewer literals, then the lexicographically smallest sorted term list.
inline SopExpression minimize(const std::set<Label>& minterms, int n) {
  if (minterms.empty()) throw Error(ErrorCode::empty_minterm_set, "nothing to minimize");
  if (n < 0 || n > kMaxOrder) throw Error(ErrorCode::out_of_range, "order " + std::to_string(n));
  std::vector<std::uint32_t> ms;
  for (Label l : minterms) {
    if (l.width != n) throw Error(ErrorCode::out_of_range, "label " + l.str() + " is not " + std::to_string(n) + " bits");
    ms.push_back(l.bits);
  }
  const auto primes = detail::prime_implicants(ms, n);
  detail::CoverSearch search(primes, ms);
  const auto pick = n <= kExactCoverMaxOrder ? search.exact(kCoverNodeBudget) : search.greedy();
  SopExpression e{n, {}};
  for (auto p : pick) e.terms.push_back(primes[p]);
  std::sort(e.terms.begin(), e.terms.end());
  return e;
}

struct RuleSelection {
  bool certain = true;
  bool possible = false;
  bool uncertain = false;
};

// One rule per nonempty selected region. Regions whose decisions all carry
// CF 0 have no support and undefined metrics, so they yield no rule. Ordered by disease registry, then
// descending strength, then region, then condition text.
inline std::vector<MinimizedRule> generate_rules(const Lattice& kb,
                                                 const std::map<std::string, ApproximationSets>& approx,
                                                 RuleSelection kinds = {}) {
  std::vector<MinimizedRule> out;
  for (const auto& d : kb.diseases()) {
    auto it = approx.find(d);
    if (it == approx.end()) continue;
    const ApproximationSets& a = it->second;
    std::vector<std::pair<Region, const LabelSet*>> regions;
    if (kinds.certain) {
      regions.push_back({Region::lower1, &a.lower1});
      regions.push_back({Region::lower2, &a.lower2});
    }
    if (kinds.uncertain) regions.push_back({Region::boundary, &a.boundary1});
    if (kinds.possible) {
      regions.push_back({Region::upper1, &a.upper1});
      regions.push_back({Region::upper2, &a.upper2});
    }
    for (const auto& [region, labels] : regions) {
      if (labels->empty()) continue;
      MinimizedRule r;
      r.disease = d;
      r.vd = region_vd(region);
      r.kind = region_kind(region);
      r.region = region;
      r.source_labels = *labels;
      if (!(support(r, kb) > 0)) continue;
      r.condition = minimize(*labels, kb.order());
      r.metrics = compute_metrics(r, kb);
      out.push_back(std::move(r));
    }
  }
  std::stable_sort(out.begin(), out.end(), [&](const MinimizedRule& a, const MinimizedRule& b) {
    const auto ra = kb.disease_rank(a.disease), rb = kb.disease_rank(b.disease);
    if (ra != rb) return ra < rb;
    if (a.metrics.strength != b.metrics.strength) return a.metrics.strength > b.metrics.strength;
    if (a.region != b.region) return a.region < b.region;
    return render_compact(a.condition) < render_compact(b.condition);
  });
  return out;
}

}  // namespace rslat
