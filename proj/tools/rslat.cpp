#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rslat/kbio.hpp"

namespace {

using namespace rslat;

constexpr int kOk = 0;
constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

std::string set_text(const LabelSet& s) {
  std::string out = "{";
  for (Label l : s) {
    if (out.size() > 1) out += ", ";
    out += l.str();
  }
  return out + "}";
}

void print_sets(std::ostream& os, const std::string& disease, const ApproximationSets& a) {
  os << "disease " << disease << "\n";
  os << "lower1 " << set_text(a.lower1) << "\n";
  os << "upper1 " << set_text(a.upper1) << "\n";
  os << "boundary1 " << set_text(a.boundary1) << "\n";
  os << "lower2 " << set_text(a.lower2) << "\n";
  os << "upper2 " << set_text(a.upper2) << "\n";
  os << "boundary2 " << set_text(a.boundary2) << "\n";
}

Lattice load(const std::string& path) { return load_kb(read_file(path)); }

void save(const std::string& path, const Lattice& kb) { write_file_atomic(path, serialize_kb(kb)); }

RuleSelection parse_kinds(const std::string& text) {
  RuleSelection sel{false, false, false};
  for (const auto& k : detail::split(text, ',')) {
    if (k == "certain") sel.certain = true;
    else if (k == "possible") sel.possible = true;
    else if (k == "uncertain") sel.uncertain = true;
    else throw CLI::ValidationError("--kinds", "unknown rule kind '" + k + "'");
  }
  return sel;
}

// Incremental upkeep of every disease's sets across one edit, cross-checked
// against a full recompute. Returns false on disagreement.
bool maintain(std::ostream& os, const Lattice& before, const Lattice& after, const std::vector<DecisionDiff>& diffs) {
  auto sets = all_approximations(before);
  for (const auto& diff : diffs) {
    sets[diff.disease] = apply_changes(sets[diff.disease], diff);
    os << "changed " << diff.disease << ": +" << diff.added.size() << " -" << diff.removed.size() << " ~"
       << diff.changed.size() << "\n";
  }
  bool ok = true;
  for (const auto& d : after.diseases()) {
    const ApproximationSets fresh = approximations(after, d);
    if (sets[d] != fresh) {
      os << "mismatch " << d << ": incremental sets differ from recompute\n";
      ok = false;
    }
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice knowledge base builder with rough-set rule extraction"};
  app.require_subcommand(1);

  std::string evidence_path, kb_path, out_path, disease, kinds = "certain", format = "text";
  std::optional<double> alpha;
  bool round2 = false;

  auto* build = app.add_subcommand("build", "Parse evidence, build and propagate, write the KB");
  build->add_option("evidence", evidence_path, "Evidence file")->required();
  build->add_option("-o,--output", out_path, "KB file to write")->required();
  build->add_option("--alpha", alpha, "Propagation threshold in [0,1]");
  build->add_flag("--round2", round2, "Round to two decimals at every step");

  auto* approx = app.add_subcommand("approx", "Print the six approximation sets of a disease");
  approx->add_option("kb", kb_path, "KB file")->required();
  approx->add_option("--disease", disease, "Disease id")->required();

  auto* rules = app.add_subcommand("rules", "Minimize and export ranked rules");
  rules->add_option("kb", kb_path, "KB file")->required();
  rules->add_option("--kinds", kinds, "Comma list of certain, possible, uncertain");
  rules->add_option("--format", format, "text or records")->check(CLI::IsMember({"text", "records"}));

  std::string attribute, value, fragment_path;
  auto* insert = app.add_subcommand("insert-fact", "Add a fact with its evidence");
  insert->add_option("kb", kb_path, "KB file")->required();
  insert->add_option("--attribute", attribute, "Fact attribute")->required();
  insert->add_option("--value", value, "Fact value")->required();
  insert->add_option("--evidence", fragment_path, "Evidence fragment for the new fact")->required();

  int fact_id = 0;
  auto* del = app.add_subcommand("delete-fact", "Remove a fact and every node containing it");
  del->add_option("kb", kb_path, "KB file")->required();
  del->add_option("--fact", fact_id, "Fact id")->required();

  std::string node_text;
  int vd = -1;
  std::optional<double> cf;
  bool remove = false;
  auto* setd = app.add_subcommand("set-decision", "Set or remove one node's decision");
  setd->add_option("kb", kb_path, "KB file")->required();
  setd->add_option("--node", node_text, "Node label, e.g. 101")->required();
  setd->add_option("--disease", disease, "Disease id")->required();
  auto* vd_opt = setd->add_option("--vd", vd, "Truth value 0, 1 or 2")->check(CLI::Range(0, 2));
  auto* cf_opt = setd->add_option("--cf", cf, "Credibility in [0,1]");
  auto* rm_opt = setd->add_flag("--remove", remove, "Drop the decision");
  vd_opt->needs(cf_opt);
  cf_opt->needs(vd_opt);
  rm_opt->excludes(vd_opt)->excludes(cf_opt);

  auto* check = app.add_subcommand("check", "Verify lattice shape and Properties 1-6");
  check->add_option("kb", kb_path, "KB file")->required();

  auto* fmt = app.add_subcommand("fmt", "Print an evidence file in canonical form");
  fmt->add_option("evidence", evidence_path, "Evidence file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsageError;
  }

  try {
    if (build->parsed()) {
      BuildOptions opts;
      opts.alpha = alpha;
      opts.rounding = round2 ? Rounding::round2 : Rounding::full;
      const Lattice kb = build_from_document(parse_evidence(read_file(evidence_path)), opts);
      save(out_path, kb);
      std::cout << "built " << kb.config().module << ": " << kb.order() << " facts, " << kb.node_count() << " nodes, "
                << kb.diseases().size() << " diseases\n";
    } else if (approx->parsed()) {
      const Lattice kb = load(kb_path);
      print_sets(std::cout, disease, approximations(kb, disease));
    } else if (rules->parsed()) {
      RuleSelection sel;
      try {
        sel = parse_kinds(kinds);
      } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kUsageError;
      }
      const Lattice kb = load(kb_path);
      for (const auto& r : generate_rules(kb, all_approximations(kb), sel))
        std::cout << (format == "records" ? render_rule_record(r, kb) : render_rule_text(r, kb)) << "\n";
    } else if (insert->parsed()) {
      const Lattice kb = load(kb_path);
      const auto frag = parse_evidence_fragment(read_file(fragment_path), kb.order(), kb.config().q);
      const Lattice out = insert_fact_from_fragment(kb, Fact{0, attribute, value}, frag);
      // New nodes enter the sets as additions over the widened label space.
      std::map<std::string, ApproximationSets> sets;
      for (const auto& [d, a] : all_approximations(kb)) {
        ApproximationSets w;
        auto widen = [&](const LabelSet& s) {
          LabelSet t;
          for (Label l : s) t.insert({l.bits, out.order()});
          return t;
        };
        w = {widen(a.lower1), widen(a.upper1), widen(a.boundary1), widen(a.lower2), widen(a.upper2), widen(a.boundary2)};
        sets[d] = w;
      }
      bool ok = true;
      for (const auto& d : out.diseases()) {
        std::vector<std::pair<Label, TruthValue>> added;
        out.for_each_node([&](const LatticeNode& nd) {
          if (!nd.label.has(out.order())) return;
          if (const DecisionEntry* e = nd.decision(d)) added.emplace_back(nd.label, e->vd);
        });
        sets[d] = on_decisions_added(sets[d], added);
        if (sets[d] != approximations(out, d)) {
          std::cout << "mismatch " << d << ": incremental sets differ from recompute\n";
          ok = false;
        }
      }
      if (!ok) return kDomainError;
      save(kb_path, out);
      std::cout << "inserted f" << out.order() << " (" << attribute << ", " << value << ")\n";
    } else if (del->parsed()) {
      const Lattice kb = load(kb_path);
      const Lattice out = delete_fact(kb, fact_id);
      save(kb_path, out);
      std::cout << "deleted f" << fact_id << ": " << out.order() << " facts, " << out.node_count() << " nodes\n";
    } else if (setd->parsed()) {
      if (!remove && !cf) {
        std::cerr << "set-decision needs --vd and --cf, or --remove\n";
        return kUsageError;
      }
      const Lattice kb = load(kb_path);
      const Label label = Label::parse(node_text);
      NodeChange change = remove ? NodeChange{DecisionRemove{disease}}
                                 : NodeChange{DecisionSet{disease, truth_value_from_int(vd), *cf, std::nullopt}};
      ModifyResult res = modify_node(kb, label, change);
      const bool ok = maintain(std::cout, kb, res.kb, res.changes);
      if (!ok) return kDomainError;
      save(kb_path, res.kb);
      if (res.kb.knows_disease(disease)) print_sets(std::cout, disease, approximations(res.kb, disease));
    } else if (check->parsed()) {
      const Lattice kb = load(kb_path);
      bool ok = true;
      for (const auto& line : check_structure(kb)) {
        std::cout << "structure: " << line << "\n";
        ok = false;
      }
      const PropertyReport rep = check_properties(kb, all_approximations(kb));
      for (const auto& r : rep.results) {
        std::cout << "property " << r.property << ": " << (r.ok() ? "ok" : "FAILED") << " (" << r.checked
                  << " checks)\n";
        for (const auto& f : r.failures) std::cout << "  " << f << "\n";
      }
      ok = ok && rep.ok();
      std::cout << (ok ? "check passed\n" : "check failed\n");
      return ok ? kOk : kDomainError;
    } else if (fmt->parsed()) {
      std::cout << render_evidence(parse_evidence(read_file(evidence_path)));
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kDomainError;
  }
  return kOk;
}
