#include <gtest/gtest.h>

#include <algorithm>
#include <iterator>
#include <random>

#include "fixture.hpp"
#include "lbp_reference.hpp"
#include "oracles.hpp"
#include "rslat/mutation.hpp"
#include "rslat/roughset.hpp"

using namespace rslat;
using fixture::L;
using fixture::raises;

namespace {

LabelSet labels(const std::vector<std::string>& xs) {
  LabelSet s;
  for (const auto& x : xs) s.insert(Label::parse(x));
  return s;
}

LabelSet minus(const LabelSet& a, const LabelSet& b) {
  LabelSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

LabelSet meet(const LabelSet& a, const LabelSet& b) {
  LabelSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

// Approximations read off the two concepts directly.
ApproximationSets from_concepts(const ConceptPair& c) {
  ApproximationSets a;
  a.upper1 = c.concept1;
  a.lower1 = minus(c.concept1, c.concept2);
  a.boundary1 = meet(c.concept1, c.concept2);
  a.upper2 = c.concept2;
  a.lower2 = minus(c.concept2, c.concept1);
  a.boundary2 = meet(c.concept1, c.concept2);
  return a;
}

}  // namespace

TEST(Concepts, FixtureSetsExceptInconsistentPivd) {
  const Lattice kb = fixture::lbp_kb();
  for (const auto& ref : lbp::kSets) {
    if (std::string(ref.disease) == "PIVD") continue;  // R13d, see propagation tests
    const ConceptPair c = concepts(kb, ref.disease);
    EXPECT_EQ(c.concept1, labels(ref.concept1)) << ref.disease;
    EXPECT_EQ(c.concept2, labels(ref.concept2)) << ref.disease;
    const ApproximationSets a = approximations(kb, ref.disease);
    EXPECT_EQ(a.lower1, labels(ref.lower1)) << ref.disease;
    EXPECT_EQ(a.upper1, labels(ref.upper1)) << ref.disease;
    EXPECT_EQ(a.boundary1, labels(ref.boundary1)) << ref.disease;
    EXPECT_EQ(a.lower2, labels(ref.lower2)) << ref.disease;
    EXPECT_EQ(a.upper2, labels(ref.upper2)) << ref.disease;
    EXPECT_EQ(a.boundary2, labels(ref.boundary2)) << ref.disease;
  }
}

TEST(Concepts, PivdUnderCalculatedR13d) {
  const Lattice kb = fixture::lbp_kb();
  const ApproximationSets a = approximations(kb, "PIVD");
  EXPECT_EQ(a.lower1, labels({"010", "110"}));
  EXPECT_EQ(a.lower2, labels({"001", "011", "101", "111"}));
  EXPECT_EQ(a.boundary1, labels({"100"}));
}

TEST(Concepts, UnknownDiseaseRaises) {
  const Lattice kb = fixture::lbp_kb();
  EXPECT_TRUE(raises(ErrorCode::unknown_disease, [&] { concepts(kb, "FLU"); }));
  EXPECT_TRUE(raises(ErrorCode::unknown_disease, [&] { approximations(kb, "FLU"); }));
}

TEST(Approximations, AgreeWithConceptAlgebra) {
  std::mt19937 rng(17);
  for (int i = 0; i < 100; ++i) {
    const Lattice kb = oracle::random_kb(rng, 1 + static_cast<int>(rng() % 5));
    for (const auto& d : kb.diseases()) {
      const ApproximationSets a = approximations(kb, d);
      EXPECT_EQ(a, from_concepts(concepts(kb, d)));
      EXPECT_TRUE(std::includes(a.upper1.begin(), a.upper1.end(), a.lower1.begin(), a.lower1.end()));
      EXPECT_TRUE(std::includes(a.upper2.begin(), a.upper2.end(), a.lower2.begin(), a.lower2.end()));
      EXPECT_TRUE(meet(a.lower1, a.lower2).empty());
    }
  }
}

TEST(Incremental, AllSixTransitions) {
  const TruthValue vs[] = {TruthValue::absent, TruthValue::present, TruthValue::inconclusive};
  for (TruthValue from : vs)
    for (TruthValue to : vs) {
      if (from == to) continue;
      ApproximationSets a = on_decisions_added({}, {{L("01"), from}, {L("10"), TruthValue::present}});
      const ApproximationSets moved = on_truth_changed(a, L("01"), from, to);
      const ApproximationSets fresh = on_decisions_added({}, {{L("01"), to}, {L("10"), TruthValue::present}});
      EXPECT_EQ(moved, fresh) << to_int(from) << "->" << to_int(to);
    }
}

TEST(Incremental, RejectsBadEdits) {
  ApproximationSets a = on_decisions_added({}, {{L("01"), TruthValue::present}});
  EXPECT_TRUE(raises(ErrorCode::already_present, [&] { on_decisions_added(a, {{L("01"), TruthValue::absent}}); }));
  EXPECT_TRUE(raises(ErrorCode::invalid_transition,
                     [&] { on_truth_changed(a, L("01"), TruthValue::present, TruthValue::present); }));
  EXPECT_TRUE(raises(ErrorCode::not_present,
                     [&] { on_truth_changed(a, L("01"), TruthValue::absent, TruthValue::present); }));
  EXPECT_TRUE(raises(ErrorCode::not_present, [&] { on_decisions_removed(a, {L("10")}); }));
  EXPECT_EQ(on_decisions_removed(a, {L("01")}), ApproximationSets{});
}

TEST(Incremental, EditsTrackRecompute) {
  std::mt19937 rng(99);
  for (int script = 0; script < 40; ++script) {
    Lattice kb = oracle::random_kb(rng, 3);
    auto sets = all_approximations(kb);
    for (int step = 0; step < 8; ++step) {
      const Label l{1u + static_cast<std::uint32_t>(rng() % 7), 3};
      const std::string d = kb.diseases()[rng() % kb.diseases().size()];
      NodeChange ch;
      if (kb.node(l).decision(d) && rng() % 3 == 0) ch = DecisionRemove{d};
      else ch = DecisionSet{d, truth_value_from_int(static_cast<int>(rng() % 3)), double(rng() % 100) / 100.0, std::nullopt};
      auto res = modify_node(kb, l, ch);
      for (const auto& diff : res.changes) sets[diff.disease] = apply_changes(sets[diff.disease], diff);
      kb = std::move(res.kb);
      for (const auto& dd : kb.diseases()) ASSERT_EQ(sets[dd], approximations(kb, dd)) << dd;
    }
  }
}
