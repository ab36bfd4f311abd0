#include <gtest/gtest.h>

#include <random>

#include "cli_runner.hpp"
#include "fixture.hpp"
#include "oracles.hpp"
#include "rslat/kbio.hpp"

using namespace rslat;
using fixture::L;
using fixture::raises;

namespace {

int error_line(std::string_view text) {
  try {
    parse_evidence(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

const std::string kHead = "module T\nfact f1 \"a\" \"yes\"\nfact f2 \"b\" \"yes\"\n";

}  // namespace

TEST(Evidence, ParsesFixture) {
  const EvidenceDocument doc = fixture::lbp_document();
  EXPECT_EQ(doc.module, "LBP");
  EXPECT_EQ(doc.q, 5);
  EXPECT_EQ(doc.facts.size(), 3u);
  EXPECT_EQ(doc.diseases, (std::vector<std::string>{"SIJ", "CFJ", "PIVD", "DP", "MPS"}));
  EXPECT_EQ(doc.priorities.size(), 9u);
  EXPECT_FALSE(doc.alpha);
}

TEST(Evidence, SyntaxErrors) {
  EXPECT_TRUE(raises(ErrorCode::syntax_error, [] { parse_evidence(""); }));
  EXPECT_TRUE(raises(ErrorCode::syntax_error, [] { parse_evidence("fact f1 \"a\" \"b\"\n"); }));
  EXPECT_TRUE(raises(ErrorCode::syntax_error, [] { parse_evidence("module T\nmodule U\n"); }));
  EXPECT_TRUE(raises(ErrorCode::syntax_error, [] { parse_evidence("module T\nfact f2 \"a\" \"b\"\n"); }));
  EXPECT_TRUE(raises(ErrorCode::syntax_error, [] { parse_evidence("module T\nfact f1 \"a\n"); }));
  EXPECT_TRUE(raises(ErrorCode::syntax_error, [] { parse_evidence("module T\nbogus\n"); }));
  EXPECT_TRUE(raises(ErrorCode::syntax_error, [&] { parse_evidence(kHead + "evidence f1 D m=4 level=1 count=1\n"); }));
  EXPECT_TRUE(raises(ErrorCode::syntax_error, [&] { parse_evidence(kHead + "evidence f1+f1 D m=1 level=1 count=1\n"); }));
  EXPECT_TRUE(raises(ErrorCode::syntax_error,
                     [&] { parse_evidence(kHead + "evidence f1 D m=1 level=1 count=1\ngrading q=3\n"); }));
  EXPECT_EQ(error_line(kHead + "\n\nevidence f1 D m=1 level=x count=1\n"), 6);
}

TEST(Evidence, DomainErrorsCarryLines) {
  EXPECT_TRUE(raises(ErrorCode::level_out_of_range, [&] { parse_evidence(kHead + "evidence f1 D m=1 level=6 count=1\n"); }));
  EXPECT_EQ(error_line(kHead + "evidence f1 D m=1 level=6 count=1\n"), 4);
  EXPECT_TRUE(raises(ErrorCode::unknown_fact_ref, [&] { parse_evidence(kHead + "evidence f3 D m=1 level=1 count=1\n"); }));
  EXPECT_TRUE(raises(ErrorCode::duplicate_fact, [&] { parse_evidence(kHead + "fact f3 \"a\" \"yes\"\n"); }));
}

TEST(Evidence, CommentsAndEscapes) {
  const auto doc = parse_evidence("module T # trailing\nfact f1 \"say \\\"hi\\\" # not a comment\" \"a\\\\b\"\n");
  ASSERT_EQ(doc.facts.size(), 1u);
  EXPECT_EQ(doc.facts[0].attribute, "say \"hi\" # not a comment");
  EXPECT_EQ(doc.facts[0].value, "a\\b");
  EXPECT_EQ(parse_evidence(render_evidence(doc)), doc);
}

TEST(Evidence, RenderRoundTrips) {
  const EvidenceDocument doc = fixture::lbp_document();
  EXPECT_EQ(parse_evidence(render_evidence(doc)), doc);
  std::mt19937 rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto d = oracle::random_document(rng, 1 + static_cast<int>(rng() % 5));
    const std::string text = render_evidence(d);
    EXPECT_EQ(parse_evidence(text), d);
    EXPECT_EQ(render_evidence(parse_evidence(text)), text);
  }
}

TEST(Evidence, ParserOnlyRaisesDomainErrors) {
  std::mt19937 rng(77);
  const std::string base = render_evidence(fixture::lbp_document());
  const char alphabet[] = "ef1+= \"\\#\nmqlvc0123456789";
  for (int i = 0; i < 2000; ++i) {
    std::string s = base;
    for (int k = 0; k < 4; ++k) s[rng() % s.size()] = alphabet[rng() % (sizeof(alphabet) - 1)];
    try {
      parse_evidence(s);
    } catch (const Error&) {
    }
  }
}

TEST(Store, SerializeIsCanonical) {
  for (Rounding rd : {Rounding::round2, Rounding::full}) {
    const Lattice kb = fixture::lbp_kb(rd);
    const std::string text = serialize_kb(kb);
    const Lattice back = load_kb(text);
    EXPECT_EQ(back, kb);
    EXPECT_EQ(serialize_kb(back), text);
  }
  std::mt19937 rng(6);
  for (int i = 0; i < 60; ++i) {
    Lattice kb = oracle::random_kb(rng, 1 + static_cast<int>(rng() % 5));
    if (kb.order() >= 2 && rng() % 2) {
      const Label l{(1u << kb.order()) - 1, kb.order()};
      kb = modify_node(kb, l, DecisionSet{kb.diseases().front(), TruthValue::present, 0.5, std::nullopt}).kb;
    }
    const std::string text = serialize_kb(kb);
    EXPECT_EQ(load_kb(text), kb);
    EXPECT_EQ(serialize_kb(load_kb(text)), text);
  }
}

TEST(Store, RejectsDamage) {
  const std::string text = serialize_kb(fixture::lbp_kb());
  EXPECT_TRUE(raises(ErrorCode::corrupt_record, [&] { load_kb(text.substr(0, text.size() / 2)); }));
  EXPECT_TRUE(raises(ErrorCode::corrupt_record, [&] { load_kb(text + "node 000\n"); }));
  EXPECT_TRUE(raises(ErrorCode::corrupt_record, [] { load_kb(""); }));
  std::string v2 = text;
  v2.replace(0, std::string("rslat-kb 1").size(), "rslat-kb 2");
  EXPECT_TRUE(raises(ErrorCode::version_mismatch, [&] { load_kb(v2); }));
  std::string bad_vd = text;
  const auto at = bad_vd.find("vd=", bad_vd.find("node 001"));
  bad_vd[at + 3] = '7';
  EXPECT_TRUE(raises(ErrorCode::corrupt_record, [&] { load_kb(bad_vd); }));
}

TEST(Store, HandEditedDecisionMovesApproximations) {
  const Lattice kb = fixture::lbp_kb();
  std::string text = serialize_kb(kb);
  // MPS at 001 is present; flip it to absent.
  const auto node = text.find("node 001\n");
  const auto at = text.find("decision MPS vd=1", node);
  ASSERT_NE(at, std::string::npos);
  text[at + std::string("decision MPS vd=").size()] = '0';
  const Lattice edited = load_kb(text);
  const ApproximationSets a = approximations(edited, "MPS");
  EXPECT_TRUE(a.lower2.count(L("001")));
  EXPECT_FALSE(a.upper1.count(L("001")));
}

TEST(Export, LiteralsFlipYesNo) {
  EXPECT_EQ(render_literal({1, "pain", "yes"}, true), "(\"pain\", \"yes\")");
  EXPECT_EQ(render_literal({1, "pain", "yes"}, false), "(\"pain\", \"no\")");
  EXPECT_EQ(render_literal({1, "pain", "No"}, false), "(\"pain\", \"Yes\")");
  EXPECT_EQ(render_literal({1, "side", "left"}, false), "NOT (\"side\", \"left\")");
}

TEST(Export, RuleTextAndRecords) {
  const Lattice kb = fixture::lbp_kb();
  const auto rules = generate_rules(kb, all_approximations(kb));
  const auto& mps = rules.back();
  EXPECT_EQ(render_rule_text(mps, kb),
            "(\"LBP without leg pain\", \"yes\") -> (MPS, 1) [certain] support=2.46 strength=1.00 certainty=1.00 "
            "coverage=1.00");
  EXPECT_EQ(render_rule_record(mps, kb), "MPS\t1\tcertain\tlower1\tf1\t2.46\t1.00\t1.00\t1.00\t001,011,101,111");
  const auto& sij = rules.front();
  EXPECT_EQ(render_condition(sij.condition, kb),
            "(\"LBP aggravated by prolonged sitting\", \"no\") AND (\"increased LBP at forward bending\", \"yes\")");
}

TEST(Cli, BuildApproxCheckRules) {
  const auto dir = cli::scratch("kbio");
  const auto kb = dir / "lbp.kb";
  auto r = cli::run("build " + cli::q(RSLAT_FIXTURE) + " -o " + cli::q(kb) + " --round2");
  ASSERT_EQ(r.exit, 0) << r.out;
  EXPECT_EQ(r.out, "built LBP: 3 facts, 8 nodes, 5 diseases\n");
  EXPECT_EQ(read_file(kb), serialize_kb(fixture::lbp_kb()));

  r = cli::run("approx " + cli::q(kb) + " --disease MPS");
  EXPECT_EQ(r.exit, 0);
  EXPECT_EQ(r.out,
            "disease MPS\nlower1 {001, 011, 101, 111}\nupper1 {001, 011, 101, 111}\nboundary1 {}\n"
            "lower2 {}\nupper2 {}\nboundary2 {}\n");

  r = cli::run("check " + cli::q(kb));
  EXPECT_EQ(r.exit, 0) << r.out;
  EXPECT_NE(r.out.find("check passed"), std::string::npos);

  const auto first = cli::run("rules " + cli::q(kb) + " --format records");
  const auto second = cli::run("rules " + cli::q(kb) + " --format records");
  EXPECT_EQ(first.exit, 0);
  EXPECT_EQ(first.out, second.out);
  EXPECT_NE(first.out.find("MPS\t1\tcertain"), std::string::npos);

  EXPECT_EQ(cli::run("approx " + cli::q(kb) + " --disease FLU").exit, 1);
  EXPECT_EQ(cli::run("approx " + cli::q(kb)).exit, 2);
  EXPECT_EQ(cli::run("frobnicate").exit, 2);
  EXPECT_EQ(cli::run("approx " + cli::q(dir / "missing.kb") + " --disease MPS").exit, 1);
  std::filesystem::remove_all(dir);
}

TEST(Cli, EditsKeepSetsInStep) {
  const auto dir = cli::scratch("edit");
  const auto kb = dir / "lbp.kb";
  ASSERT_EQ(cli::run("build " + cli::q(RSLAT_FIXTURE) + " -o " + cli::q(kb)).exit, 0);

  auto r = cli::run("set-decision " + cli::q(kb) + " --node 101 --disease PIVD --vd 2 --cf 0.53");
  ASSERT_EQ(r.exit, 0) << r.out;
  const Lattice pinned = load_kb(read_file(kb));
  EXPECT_EQ(pinned.node(L("101")).decision("PIVD")->vd, TruthValue::inconclusive);
  EXPECT_EQ(check_properties(pinned, all_approximations(pinned)).ok(), true);

  const auto frag = dir / "f4.evidence";
  write_file_atomic(frag, "evidence f4 MPS m=1 level=2 count=5\nevidence f4 MPS m=3 level=4 count=1\n");
  r = cli::run("insert-fact " + cli::q(kb) + " --attribute \"night pain\" --value yes --evidence " + cli::q(frag));
  ASSERT_EQ(r.exit, 0) << r.out;
  EXPECT_EQ(load_kb(read_file(kb)).order(), 4);

  r = cli::run("delete-fact " + cli::q(kb) + " --fact 4");
  ASSERT_EQ(r.exit, 0) << r.out;
  EXPECT_EQ(load_kb(read_file(kb)), pinned);

  EXPECT_EQ(cli::run("set-decision " + cli::q(kb) + " --node 1 --disease MPS --remove").exit, 1);
  EXPECT_EQ(cli::run("set-decision " + cli::q(kb) + " --node 011 --disease MPS").exit, 2);
  std::filesystem::remove_all(dir);
}

TEST(Cli, FmtIsCanonical) {
  const auto r = cli::run("fmt " + cli::q(RSLAT_FIXTURE));
  ASSERT_EQ(r.exit, 0);
  EXPECT_EQ(r.out, render_evidence(fixture::lbp_document()));
}
