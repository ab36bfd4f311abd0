#include <gtest/gtest.h>

#include <random>

#include "fixture.hpp"
#include "oracles.hpp"
#include "rslat/metrics.hpp"
#include "rslat/minimizer.hpp"

using namespace rslat;
using fixture::L;
using fixture::raises;

namespace {

const MinimizedRule& rule_for(const std::vector<MinimizedRule>& rules, const std::string& d, TruthValue vd) {
  for (const auto& r : rules)
    if (r.disease == d && r.vd == vd) return r;
  throw std::runtime_error("no rule for " + d);
}

}  // namespace

TEST(Metrics, MpsRuleHasFullStrength) {
  const Lattice kb = fixture::lbp_kb();
  const auto rules = generate_rules(kb, all_approximations(kb));
  const auto& mps = rule_for(rules, "MPS", TruthValue::present);
  EXPECT_NEAR(mps.metrics.support, 2.46, 1e-9);
  EXPECT_EQ(format_fixed(mps.metrics.strength, 2), "1.00");
  EXPECT_NEAR(mps.metrics.certainty, 1.0, 1e-12);
  EXPECT_NEAR(mps.metrics.coverage, 1.0, 1e-12);
}

TEST(Metrics, FixtureStrengthsMatchBruteForce) {
  const Lattice kb = fixture::lbp_kb();
  for (const auto& r : generate_rules(kb, all_approximations(kb), {true, true, true})) {
    EXPECT_NEAR(r.metrics.strength, oracle::strength(kb, r), 1e-9) << r.disease;
    EXPECT_LE(r.metrics.strength, 1.0 + 1e-12);
    EXPECT_LE(r.metrics.certainty, 1.0 + 1e-12);
    EXPECT_LE(r.metrics.coverage, 1.0 + 1e-12);
  }
}

TEST(Metrics, CfjRuleByHand) {
  // CFJ lower1 = {001 (.79), 101 (.16)}; every CFJ CF sums to 3.40.
  const Lattice kb = fixture::lbp_kb();
  const auto& r = rule_for(generate_rules(kb, all_approximations(kb)), "CFJ", TruthValue::present);
  EXPECT_NEAR(r.metrics.support, 0.95, 1e-9);
  EXPECT_NEAR(r.metrics.strength, 0.95 / 3.40, 1e-9);
  EXPECT_NEAR(r.metrics.certainty, 1.0, 1e-9);
  EXPECT_NEAR(r.metrics.coverage, 1.0, 1e-9);
}

TEST(Metrics, InconclusiveRulesAreHalved) {
  const Lattice kb = fixture::lbp_kb();
  const auto rules = generate_rules(kb, all_approximations(kb), {false, false, true});
  ASSERT_FALSE(rules.empty());
  for (const auto& r : rules) {
    EXPECT_EQ(r.vd, TruthValue::inconclusive);
    EXPECT_NEAR(r.metrics.certainty, 0.5, 1e-9) << r.disease;
    EXPECT_NEAR(r.metrics.coverage, 0.5, 1e-9) << r.disease;
  }
}

TEST(Metrics, DanglingAndZeroMass) {
  const Lattice kb = fixture::lbp_kb();
  MinimizedRule r;
  r.disease = "MPS";
  r.condition = minimize({L("010")}, 3);
  r.source_labels = {L("010")};
  EXPECT_TRUE(raises(ErrorCode::dangling_label, [&] { support(r, kb); }));
  r.source_labels = {L("0001")};
  EXPECT_TRUE(raises(ErrorCode::dangling_label, [&] { support(r, kb); }));
  EXPECT_TRUE(raises(ErrorCode::zero_mass, [] { checked_ratio(1, 0, "x"); }));
}

TEST(Properties, HoldOnFixtureInBothModes) {
  for (Rounding rd : {Rounding::round2, Rounding::full}) {
    const Lattice kb = fixture::lbp_kb(rd);
    const auto rep = check_properties(kb, all_approximations(kb));
    EXPECT_TRUE(rep.ok());
    for (const auto& r : rep.results) EXPECT_GT(r.checked, 0u) << r.property;
  }
}

TEST(Properties, HoldOnRandomKbs) {
  std::mt19937 rng(2024);
  for (int i = 0; i < 50; ++i) {
    const Lattice kb = oracle::random_kb(rng, 1 + static_cast<int>(rng() % 5));
    EXPECT_TRUE(check_properties(kb, all_approximations(kb)).ok());
  }
}

TEST(Properties, StrengthOrderIgnoresScale) {
  std::mt19937 rng(8);
  for (int i = 0; i < 20; ++i) {
    Lattice kb = oracle::random_kb(rng, 4);
    const auto before = generate_rules(kb, all_approximations(kb), {true, true, true});
    kb.for_each_node([&](const LatticeNode& nd) {
      for (auto& e : kb.node(nd.label).decisions) e.cf *= 0.5;
    });
    const auto after = generate_rules(kb, all_approximations(kb), {true, true, true});
    ASSERT_EQ(before.size(), after.size());
    for (std::size_t k = 0; k < before.size(); ++k) {
      EXPECT_EQ(before[k].disease, after[k].disease);
      EXPECT_NEAR(before[k].metrics.strength, after[k].metrics.strength, 1e-9);
    }
  }
}

TEST(Metrics, ZeroSupportRegionsYieldNoRule) {
  DecisionEntry zero;
  zero.disease = "X";
  zero.vd = TruthValue::present;
  zero.cf = 0;
  DecisionEntry some = zero;
  some.vd = TruthValue::absent;
  some.cf = 0.4;
  const Lattice kb = build_kb({{0, "a", "yes"}, {0, "b", "yes"}}, {{1, {zero}}, {2, {some}}});
  const auto rules = generate_rules(kb, all_approximations(kb), {true, true, true});
  for (const auto& r : rules) EXPECT_GT(r.metrics.support, 0.0);
  ASSERT_FALSE(rules.empty());
  MinimizedRule r;
  r.disease = "X";
  r.vd = TruthValue::present;
  r.region = Region::lower1;
  r.condition = minimize({L("01")}, 2);
  r.source_labels = {L("01")};
  EXPECT_TRUE(raises(ErrorCode::zero_mass, [&] { certainty(r, kb); }));
}
