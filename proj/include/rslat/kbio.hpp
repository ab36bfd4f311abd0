#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "evidence.hpp"
#include "lattice.hpp"
#include "minimizer.hpp"
#include "mutation.hpp"
#include "numeric.hpp"
#include "propagation.hpp"
#include "roughset.hpp"
#include "rule.hpp"

namespace rslat {

struct PriorityDecl {
  std::string disease;
  FactId fact = 0;
  int priority = 1;
  std::optional<std::vector<FactId>> scope;  // node the priority is limited to
  bool operator==(const PriorityDecl&) const = default;
};

struct EvidenceRecord {
  std::vector<FactId> facts;  // ascending; more than one supplies external evidence
  std::string disease;
  int m = 1;
  int level = 1;
  std::uint64_t count = 0;
  bool operator==(const EvidenceRecord&) const = default;
};

struct EvidenceDocument {
  std::string module;
  int q = 5;
  std::optional<double> alpha;
  std::vector<Fact> facts;
  std::vector<std::string> diseases;  // first-appearance order
  std::vector<PriorityDecl> priorities;
  std::vector<EvidenceRecord> records;
  bool operator==(const EvidenceDocument&) const = default;
};

namespace detail {

struct Token {
  std::string text;
  bool quoted = false;
};

// Splits on blanks; "..." groups with \" and \\ escapes; # starts a comment.
inline std::vector<Token> tokenize(std::string_view line, int lineno) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '#') break;
    Token t;
    if (c == '"') {
      t.quoted = true;
      ++i;
      bool closed = false;
      while (i < line.size()) {
        const char d = line[i++];
        if (d == '"') {
          closed = true;
          break;
        }
        if (d == '\\') {
          if (i >= line.size()) break;
          const char e = line[i++];
          if (e != '"' && e != '\\') throw ParseError(ErrorCode::syntax_error, lineno, "bad escape \\" + std::string(1, e));
          t.text.push_back(e);
        } else {
          t.text.push_back(d);
        }
      }
      if (!closed) throw ParseError(ErrorCode::syntax_error, lineno, "unterminated string");
    } else {
      while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#') {
        if (line[i] == '"') throw ParseError(ErrorCode::syntax_error, lineno, "stray quote");
        t.text.push_back(line[i++]);
      }
    }
    out.push_back(std::move(t));
  }
  return out;
}

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (unsigned char c : s)
    if (!(std::isalnum(c) || c == '_' || c == '-' || c == '.')) return false;
  return true;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::optional<std::string> keyed(const std::string& tok, std::string_view key) {
  if (tok.size() <= key.size() + 1 || tok.compare(0, key.size(), key) != 0 || tok[key.size()] != '=')
    return std::nullopt;
  return tok.substr(key.size() + 1);
}

struct ParseContext {
  bool require_module = true;
  int preset_facts = 0;  // fact ids already valid before any `fact` line
  int q = 5;
};

class DocumentParser {
 public:
  explicit DocumentParser(ParseContext ctx) : ctx_(ctx) { doc_.q = ctx.q; }

  EvidenceDocument run(std::string_view text) {
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto nl = text.find('\n', pos);
      const std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      ++lineno;
      handle(tokenize(line, lineno), lineno);
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
    }
    if (ctx_.require_module && !seen_module_) throw ParseError(ErrorCode::syntax_error, 0, "no module header");
    return std::move(doc_);
  }

 private:
  [[noreturn]] static void fail(int lineno, const std::string& msg) {
    throw ParseError(ErrorCode::syntax_error, lineno, msg);
  }

  int fact_limit() const { return ctx_.preset_facts + static_cast<int>(doc_.facts.size()); }

  FactId fact_ref(const std::string& tok, int lineno) const {
    if (tok.size() < 2 || tok[0] != 'f') fail(lineno, "expected a fact reference, got '" + tok + "'");
    auto id = parse_int<int>(std::string_view(tok).substr(1));
    if (!id) fail(lineno, "expected a fact reference, got '" + tok + "'");
    if (*id < 1 || *id > fact_limit()) throw ParseError(ErrorCode::unknown_fact_ref, lineno, tok);
    return *id;
  }

  std::vector<FactId> fact_set(const std::string& tok, int lineno) const {
    std::vector<FactId> ids;
    for (const auto& part : split(tok, '+')) ids.push_back(fact_ref(part, lineno));
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) fail(lineno, "repeated fact in '" + tok + "'");
    return ids;
  }

  void note_disease(const std::string& d, int lineno) {
    if (!valid_name(d)) fail(lineno, "bad disease id '" + d + "'");
    if (std::find(doc_.diseases.begin(), doc_.diseases.end(), d) == doc_.diseases.end())
      doc_.diseases.push_back(d);
  }

  template <typename Int>
  Int number(const std::optional<std::string>& s, const std::string& what, int lineno) const {
    if (!s) fail(lineno, "expected " + what + "=N");
    auto v = parse_int<Int>(*s);
    if (!v) fail(lineno, "bad " + what + " '" + *s + "'");
    return *v;
  }

  void handle(const std::vector<Token>& t, int lineno) {
    if (t.empty()) return;
    const std::string& kw = t[0].text;
    if (t[0].quoted) fail(lineno, "expected a keyword");
    if (kw == "module") {
      if (seen_module_) fail(lineno, "second module header");
      if (t.size() != 2 || !valid_name(t[1].text)) fail(lineno, "usage: module NAME");
      doc_.module = t[1].text;
      seen_module_ = true;
      return;
    }
    if (ctx_.require_module && !seen_module_) fail(lineno, "no module header");
    if (kw == "grading") {
      if (t.size() != 2) fail(lineno, "usage: grading q=N");
      if (seen_levels_) fail(lineno, "grading must precede evidence");
      const int q = number<int>(keyed(t[1].text, "q"), "q", lineno);
      if (q < 1) throw ParseError(ErrorCode::level_out_of_range, lineno, "q must be >= 1");
      doc_.q = q;
    } else if (kw == "alpha") {
      if (t.size() != 2) fail(lineno, "usage: alpha X");
      auto a = parse_double(t[1].text);
      if (!a || !(*a >= 0.0 && *a <= 1.0)) fail(lineno, "alpha must be a number in [0,1]");
      doc_.alpha = *a;
    } else if (kw == "fact") {
      if (t.size() != 4 || !t[2].quoted || !t[3].quoted) fail(lineno, "usage: fact fN \"attribute\" \"value\"");
      const std::string expect = "f" + std::to_string(fact_limit() + 1);
      if (t[1].text != expect) fail(lineno, "expected " + expect + ", got " + t[1].text);
      for (const auto& f : doc_.facts)
        if (f.attribute == t[2].text && f.value == t[3].text)
          throw ParseError(ErrorCode::duplicate_fact, lineno, "(\"" + f.attribute + "\", \"" + f.value + "\")");
      doc_.facts.push_back({fact_limit() + 1, t[2].text, t[3].text});
    } else if (kw == "disease") {
      if (t.size() != 2) fail(lineno, "usage: disease ID");
      note_disease(t[1].text, lineno);
    } else if (kw == "priority") {
      if (t.size() != 4 && !(t.size() == 6 && t[4].text == "at"))
        fail(lineno, "usage: priority DISEASE fN P [at fA+fB]");
      PriorityDecl p;
      note_disease(t[1].text, lineno);
      p.disease = t[1].text;
      p.fact = fact_ref(t[2].text, lineno);
      auto v = parse_int<int>(t[3].text);
      if (!v || *v < 1) fail(lineno, "priority must be a positive integer");
      p.priority = *v;
      if (t.size() == 6) {
        p.scope = fact_set(t[5].text, lineno);
        if (!std::binary_search(p.scope->begin(), p.scope->end(), p.fact))
          fail(lineno, "priority scope must contain " + t[2].text);
      }
      for (const auto& o : doc_.priorities)
        if (o.disease == p.disease && o.fact == p.fact && o.scope == p.scope) fail(lineno, "duplicate priority");
      doc_.priorities.push_back(std::move(p));
    } else if (kw == "evidence") {
      if (t.size() != 6) fail(lineno, "usage: evidence FACTS DISEASE m=M level=J count=C");
      EvidenceRecord r;
      r.facts = fact_set(t[1].text, lineno);
      note_disease(t[2].text, lineno);
      r.disease = t[2].text;
      r.m = number<int>(keyed(t[3].text, "m"), "m", lineno);
      if (r.m < 1 || r.m > 3) fail(lineno, "m must be 1, 2 or 3");
      r.level = number<int>(keyed(t[4].text, "level"), "level", lineno);
      if (r.level < 1 || r.level > doc_.q)
        throw ParseError(ErrorCode::level_out_of_range, lineno,
                         "level " + std::to_string(r.level) + " outside 1.." + std::to_string(doc_.q));
      r.count = number<std::uint64_t>(keyed(t[5].text, "count"), "count", lineno);
      for (const auto& o : doc_.records)
        if (o.facts == r.facts && o.disease == r.disease && o.m == r.m && o.level == r.level)
          fail(lineno, "duplicate evidence record");
      seen_levels_ = true;
      doc_.records.push_back(std::move(r));
    } else {
      fail(lineno, "unknown keyword '" + kw + "'");
    }
  }

  ParseContext ctx_;
  EvidenceDocument doc_;
  bool seen_module_ = false;
  bool seen_levels_ = false;
};

inline std::string fact_set_text(const std::vector<FactId>& ids) {
  std::string s;
  for (FactId f : ids) {
    if (!s.empty()) s.push_back('+');
    s += "f" + std::to_string(f);
  }
  return s;
}

inline std::uint32_t bits_of(const std::vector<FactId>& ids) {
  std::uint32_t b = 0;
  for (FactId f : ids) b |= 1u << (f - 1);
  return b;
}

}  // namespace detail

inline EvidenceDocument parse_evidence(std::string_view text) {
  return detail::DocumentParser({}).run(text);
}

// Evidence for a fact about to be inserted into an order-n lattice: no header,
// no fact lines, references run up to f(n+1).
inline EvidenceDocument parse_evidence_fragment(std::string_view text, int n, int q) {
  return detail::DocumentParser({false, n + 1, q}).run(text);
}

inline std::string render_evidence(const EvidenceDocument& doc) {
  std::ostringstream out;
  out << "module " << doc.module << "\n";
  out << "grading q=" << doc.q << "\n";
  if (doc.alpha) out << "alpha " << format_exact(*doc.alpha) << "\n";
  for (const auto& f : doc.facts)
    out << "fact f" << f.id << " " << detail::quote(f.attribute) << " " << detail::quote(f.value) << "\n";
  for (const auto& d : doc.diseases) out << "disease " << d << "\n";
  for (const auto& p : doc.priorities) {
    out << "priority " << p.disease << " f" << p.fact << " " << p.priority;
    if (p.scope) out << " at " << detail::fact_set_text(*p.scope);
    out << "\n";
  }
  for (const auto& r : doc.records)
    out << "evidence " << detail::fact_set_text(r.facts) << " " << r.disease << " m=" << r.m << " level=" << r.level
        << " count=" << r.count << "\n";
  return out.str();
}

struct BuildOptions {
  std::optional<double> alpha;  // overrides the document's
  Rounding rounding = Rounding::full;
  int order_cap = kDefaultOrderCap;
};

struct DerivedEvidence {
  TruthTriple tv;
  Resolution resolution;
};

// Truth triple and resolved (vd, cf) per (fact set, disease). Profiles with no
// weighted evidence are dropped: the assertion is absent, not zero.
inline std::map<std::pair<std::uint32_t, std::string>, DerivedEvidence> derive_evidence(
    const std::vector<EvidenceRecord>& records, int q, Rounding rounding) {
  const SourceGrading grading(q);
  std::map<std::pair<std::uint32_t, std::string>, EvidenceProfile> profiles;
  for (const auto& r : records) {
    auto key = std::make_pair(detail::bits_of(r.facts), r.disease);
    auto it = profiles.try_emplace(key, q).first;
    it->second.at(r.m, r.level) += r.count;
  }
  std::map<std::pair<std::uint32_t, std::string>, DerivedEvidence> out;
  for (const auto& [key, profile] : profiles) {
    TruthTriple tv;
    try {
      tv = apply(rounding, truth_triple(profile, grading));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::zero_evidence) continue;
      throw;
    }
    out[key] = {tv, resolve_decision(presence_matrix(profile), tv)};
  }
  return out;
}

inline Lattice build_from_document(const EvidenceDocument& doc, const BuildOptions& opts = {}) {
  KbConfig cfg;
  cfg.module = doc.module;
  cfg.q = doc.q;
  cfg.alpha = opts.alpha ? *opts.alpha : doc.alpha.value_or(0.0);
  cfg.rounding = opts.rounding;
  cfg.order_cap = opts.order_cap;
  (void)AlphaThreshold(cfg.alpha);

  const int n = static_cast<int>(doc.facts.size());
  check_order(n, cfg.order_cap);
  std::map<FactId, std::vector<DecisionEntry>> atomic;
  std::map<NodeDiseaseKey, ExternalEvidence> externals;
  for (const auto& [key, ev] : derive_evidence(doc.records, doc.q, cfg.rounding)) {
    const Label l(key.first, n);
    if (l.level() == 1) {
      DecisionEntry e;
      e.disease = key.second;
      e.vd = ev.resolution.vd;
      e.cf = ev.resolution.cf;
      e.tv = ev.tv;
      atomic[l.facts().front()].push_back(std::move(e));
    } else {
      externals[{key.first, key.second}] = {ev.tv, ev.resolution.vd, ev.resolution.cf};
    }
  }
  Lattice kb = build_kb(doc.facts, atomic, cfg, doc.diseases);
  for (const auto& p : doc.priorities) {
    if (p.scope) kb.priorities().local[{p.disease, detail::bits_of(*p.scope)}][p.fact] = p.priority;
    else kb.priorities().global[p.disease][p.fact] = p.priority;
  }
  kb.externals() = std::move(externals);
  propagate_in_place(kb);
  return kb;
}

// Builds the insert_fact inputs for a new fact from a parsed fragment.
inline Lattice insert_fact_from_fragment(const Lattice& kb, const Fact& fact, const EvidenceDocument& frag) {
  const int n = kb.order() + 1;
  std::vector<DecisionEntry> atomic;
  InsertExtras extras;
  for (const auto& [key, ev] : derive_evidence(frag.records, kb.config().q, kb.config().rounding)) {
    const Label l(key.first, n);
    if (!l.has(n)) throw Error(ErrorCode::unknown_fact_ref, "fragment evidence must involve f" + std::to_string(n));
    if (l.level() == 1) {
      DecisionEntry e;
      e.disease = key.second;
      e.vd = ev.resolution.vd;
      e.cf = ev.resolution.cf;
      e.tv = ev.tv;
      atomic.push_back(std::move(e));
    } else {
      extras.externals[{key.first, key.second}] = {ev.tv, ev.resolution.vd, ev.resolution.cf};
    }
  }
  for (const auto& p : frag.priorities) {
    if (p.scope) {
      extras.local_priority[{p.disease, detail::bits_of(*p.scope)}][p.fact] = p.priority;
    } else {
      if (p.fact != n) throw Error(ErrorCode::unknown_fact_ref, "fragment priorities must target f" + std::to_string(n));
      extras.global_priority[p.disease] = p.priority;
    }
  }
  Lattice probe = kb;
  for (const auto& d : frag.diseases) probe.register_disease(d);
  return insert_fact(probe, fact, atomic, extras);
}

// ---- canonical KB text -------------------------------------------------

inline constexpr int kFormatVersion = 1;
inline constexpr std::string_view kFormatTag = "rslat-kb";

namespace detail {

inline std::string triple_text(const TruthTriple& t) {
  return format_exact(t.tv1) + "," + format_exact(t.tv2) + "," + format_exact(t.tv3);
}

inline std::string weights_text(const std::map<FactId, double>& w) {
  std::string s;
  for (const auto& [f, v] : w) {
    if (!s.empty()) s.push_back(',');
    s += std::to_string(f) + ":" + format_exact(v);
  }
  return s.empty() ? "-" : s;
}

inline std::string entry_fields(const DecisionEntry& e) {
  return e.disease + " vd=" + std::to_string(to_int(e.vd)) + " cf=" + format_exact(e.cf) + " tv=" + triple_text(e.tv) +
         " w=" + weights_text(e.weights);
}

}  // namespace detail

inline std::string serialize_kb(const Lattice& kb) {
  std::ostringstream out;
  const KbConfig& c = kb.config();
  out << kFormatTag << " " << kFormatVersion << "\n";
  out << "module " << c.module << "\n";
  out << "config q=" << c.q << " alpha=" << format_exact(c.alpha)
      << " rounding=" << (c.rounding == Rounding::round2 ? "round2" : "full") << " cap=" << c.order_cap << "\n";
  for (const auto& f : kb.facts())
    out << "fact " << f.id << " " << detail::quote(f.attribute) << " " << detail::quote(f.value) << "\n";
  for (const auto& d : kb.diseases()) out << "disease " << d << "\n";
  const int n = kb.order();
  for (const auto& [d, ps] : kb.priorities().global)
    for (const auto& [f, p] : ps) out << "priority " << d << " " << f << " " << p << "\n";
  for (const auto& [key, ps] : kb.priorities().local)
    for (const auto& [f, p] : ps)
      out << "priority " << key.first << " " << f << " " << p << " at " << Label(key.second, n).str() << "\n";
  for (const auto& [key, ev] : kb.externals())
    out << "external " << Label(key.first, n).str() << " " << key.second << " vd=" << to_int(ev.vd)
        << " cf=" << format_exact(ev.cf) << " tv=" << detail::triple_text(ev.tv) << "\n";
  for (const auto& [key, pin] : kb.pins()) {
    out << "pin " << Label(key.first, n).str() << " ";
    if (pin) out << detail::entry_fields(*pin) << "\n";
    else out << key.second << " absent\n";
  }
  kb.for_each_node([&](const LatticeNode& nd) {
    out << "node " << nd.label.str() << "\n";
    for (const auto& e : nd.decisions) out << "decision " << detail::entry_fields(e) << "\n";
  });
  out << "end " << kb.node_count() << "\n";
  return out.str();
}

namespace detail {

class KbReader {
 public:
  explicit KbReader(std::string_view text) : text_(text) {}

  Lattice run() {
    std::vector<Token> t = next();
    if (t.size() != 2 || t[0].text != kFormatTag) corrupt("missing format header");
    if (t[1].text != std::to_string(kFormatVersion))
      throw ParseError(ErrorCode::version_mismatch, line_, "format version " + t[1].text);

    Lattice kb;
    t = next();
    if (t.size() != 2 || t[0].text != "module") corrupt("expected module");
    kb.config().module = t[1].text;
    t = next();
    if (t.size() != 5 || t[0].text != "config") corrupt("expected config");
    kb.config().q = int_field(t[1].text, "q");
    kb.config().alpha = real_field(t[2].text, "alpha");
    const auto rounding = keyed(t[3].text, "rounding");
    if (rounding == "round2") kb.config().rounding = Rounding::round2;
    else if (rounding == "full") kb.config().rounding = Rounding::full;
    else corrupt("bad rounding");
    kb.config().order_cap = int_field(t[4].text, "cap");
    if (kb.config().q < 1 || kb.config().alpha < 0 || kb.config().alpha > 1) corrupt("bad config");

    std::vector<Fact> facts;
    t = next();
    while (!t.empty() && t[0].text == "fact") {
      if (t.size() != 4 || !t[2].quoted || !t[3].quoted) corrupt("bad fact");
      const int id = plain_int(t[1].text);
      if (id != static_cast<int>(facts.size()) + 1) corrupt("fact ids out of sequence");
      facts.push_back({id, t[2].text, t[3].text});
      t = next();
    }
    if (facts.empty()) corrupt("no facts");
    const int n = static_cast<int>(facts.size());
    if (n > kMaxOrder) corrupt("order too large");
    kb.materialize(std::move(facts));

    while (!t.empty() && t[0].text == "disease") {
      if (t.size() != 2 || !valid_name(t[1].text)) corrupt("bad disease");
      kb.register_disease(t[1].text);
      t = next();
    }
    while (!t.empty() && t[0].text == "priority") {
      if (t.size() != 4 && !(t.size() == 6 && t[4].text == "at")) corrupt("bad priority");
      known(kb, t[1].text);
      const int f = plain_int(t[2].text);
      const int p = plain_int(t[3].text);
      if (f < 1 || f > n || p < 1) corrupt("bad priority");
      if (t.size() == 6) {
        const Label scope = label(t[5].text, n);
        if (!scope.has(f)) corrupt("priority scope misses its fact");
        kb.priorities().local[{t[1].text, scope.bits}][f] = p;
      } else {
        kb.priorities().global[t[1].text][f] = p;
      }
      t = next();
    }
    while (!t.empty() && t[0].text == "external") {
      if (t.size() != 6) corrupt("bad external");
      const Label l = label(t[1].text, n);
      known(kb, t[2].text);
      ExternalEvidence ev;
      ev.vd = vd_field(t[3].text);
      ev.cf = cf_field(t[4].text);
      ev.tv = triple_field(t[5].text);
      kb.externals()[{l.bits, t[2].text}] = ev;
      t = next();
    }
    while (!t.empty() && t[0].text == "pin") {
      if (t.size() < 3) corrupt("bad pin");
      const Label l = label(t[1].text, n);
      if (l.level() < 2) corrupt("pins sit on composite nodes");
      if (t.size() == 4 && t[3].text == "absent") {
        known(kb, t[2].text);
        kb.pins()[{l.bits, t[2].text}] = std::nullopt;
      } else {
        DecisionEntry e = entry(t, 2, kb, l);
        const std::string d = e.disease;
        kb.pins()[{l.bits, d}] = std::move(e);
      }
      t = next();
    }

    for (int lv = 0; lv <= n; ++lv) {
      for (const LatticeNode& nd : kb.level(lv)) {
        if (t.size() != 2 || t[0].text != "node" || t[1].text != nd.label.str())
          corrupt("expected node " + nd.label.str());
        std::vector<DecisionEntry> ds;
        t = next();
        while (!t.empty() && t[0].text == "decision") {
          if (lv == 0) corrupt("root node carries a decision");
          DecisionEntry e = entry(t, 1, kb, nd.label);
          for (const auto& o : ds)
            if (o.disease == e.disease) corrupt("duplicate decision");
          ds.push_back(std::move(e));
          t = next();
        }
        sort_decisions(kb, ds);
        kb.node(nd.label).decisions = std::move(ds);
      }
    }
    if (t.size() != 2 || t[0].text != "end" || t[1].text != std::to_string(kb.node_count()))
      corrupt("missing end marker");
    if (!next().empty() || pos_ < text_.size()) corrupt("trailing content");
    return kb;
  }

 private:
  // Next non-empty line as tokens; empty vector at end of input.
  std::vector<Token> next() {
    while (pos_ < text_.size()) {
      const auto nl = text_.find('\n', pos_);
      const auto line = text_.substr(pos_, nl == std::string_view::npos ? std::string_view::npos : nl - pos_);
      pos_ = nl == std::string_view::npos ? text_.size() : nl + 1;
      ++line_;
      std::vector<Token> t;
      try {
        t = tokenize(line, line_);
      } catch (const ParseError& e) {
        corrupt(e.what());
      }
      if (!t.empty()) return t;
    }
    return {};
  }

  [[noreturn]] void corrupt(const std::string& msg) const {
    throw ParseError(ErrorCode::corrupt_record, line_, msg);
  }

  int plain_int(const std::string& s) const {
    auto v = parse_int<int>(s);
    if (!v) corrupt("bad integer '" + s + "'");
    return *v;
  }
  int int_field(const std::string& tok, std::string_view key) const {
    auto v = keyed(tok, key);
    if (!v) corrupt("expected " + std::string(key) + "=");
    return plain_int(*v);
  }
  double real_field(const std::string& tok, std::string_view key) const {
    auto v = keyed(tok, key);
    if (!v) corrupt("expected " + std::string(key) + "=");
    auto d = parse_double(*v);
    if (!d || !std::isfinite(*d)) corrupt("bad number '" + *v + "'");
    return *d;
  }
  double cf_field(const std::string& tok) const {
    const double cf = real_field(tok, "cf");
    if (cf < 0 || cf > 1) corrupt("cf outside [0,1]");
    return cf;
  }
  TruthValue vd_field(const std::string& tok) const {
    const int v = int_field(tok, "vd");
    if (v < 0 || v > 2) corrupt("vd outside 0..2");
    return static_cast<TruthValue>(v);
  }
  TruthTriple triple_field(const std::string& tok) const {
    auto v = keyed(tok, "tv");
    if (!v) corrupt("expected tv=");
    auto parts = split(*v, ',');
    if (parts.size() != 3) corrupt("tv needs three values");
    TruthTriple t;
    double* dst[] = {&t.tv1, &t.tv2, &t.tv3};
    for (int i = 0; i < 3; ++i) {
      auto d = parse_double(parts[static_cast<std::size_t>(i)]);
      if (!d || !std::isfinite(*d)) corrupt("bad tv value");
      *dst[i] = *d;
    }
    return t;
  }
  Label label(const std::string& s, int n) const {
    if (s.size() != static_cast<std::size_t>(n) || s.find_first_not_of("01") != std::string::npos)
      corrupt("bad label '" + s + "'");
    return Label::parse(s);
  }
  void known(const Lattice& kb, const std::string& d) const {
    if (!kb.knows_disease(d)) corrupt("undeclared disease " + d);
  }
  DecisionEntry entry(const std::vector<Token>& t, std::size_t at, const Lattice& kb, Label owner) const {
    if (t.size() != at + 5) corrupt("bad decision");
    DecisionEntry e;
    e.disease = t[at].text;
    known(kb, e.disease);
    e.vd = vd_field(t[at + 1].text);
    e.cf = cf_field(t[at + 2].text);
    e.tv = triple_field(t[at + 3].text);
    auto w = keyed(t[at + 4].text, "w");
    if (!w) corrupt("expected w=");
    if (*w != "-") {
      for (const auto& part : split(*w, ',')) {
        const auto colon = part.find(':');
        if (colon == std::string::npos) corrupt("bad weight");
        const int f = plain_int(part.substr(0, colon));
        auto v = parse_double(part.substr(colon + 1));
        if (!owner.has(f) || !v || !(*v > 0 && *v <= 1)) corrupt("bad weight");
        e.weights[f] = *v;
      }
    }
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 0;
};

}  // namespace detail

inline Lattice load_kb(std::string_view text) { return detail::KbReader(text).run(); }

// ---- rule export -------------------------------------------------------

inline std::string render_literal(const Fact& f, bool positive) {
  if (positive) return "(" + detail::quote(f.attribute) + ", " + detail::quote(f.value) + ")";
  std::string lower = f.value;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "yes" || lower == "no") {
    std::string flipped = lower == "yes" ? "no" : "yes";
    if (!f.value.empty() && std::isupper(static_cast<unsigned char>(f.value[0]))) flipped[0] = static_cast<char>(std::toupper(flipped[0]));
    return "(" + detail::quote(f.attribute) + ", " + detail::quote(flipped) + ")";
  }
  return "NOT (" + detail::quote(f.attribute) + ", " + detail::quote(f.value) + ")";
}

inline std::string render_condition(const SopExpression& e, const Lattice& kb) {
  return render_sop(
      e, [&](FactId f, bool pos) { return render_literal(kb.fact(f), pos); }, " AND ", " OR ");
}

inline std::string render_rule_text(const MinimizedRule& r, const Lattice& kb) {
  const Rounding rd = kb.config().rounding;
  return render_condition(r.condition, kb) + " -> (" + r.disease + ", " + std::to_string(to_int(r.vd)) + ")" +
         " [" + kind_name(r.kind) + "] support=" + format_value(r.metrics.support, rd) +
         " strength=" + format_value(r.metrics.strength, rd) + " certainty=" + format_value(r.metrics.certainty, rd) +
         " coverage=" + format_value(r.metrics.coverage, rd);
}

// disease, vd, kind, region, condition, support, strength, certainty, coverage, source labels
inline std::string render_rule_record(const MinimizedRule& r, const Lattice& kb) {
  const Rounding rd = kb.config().rounding;
  std::string sources;
  for (Label l : r.source_labels) {
    if (!sources.empty()) sources.push_back(',');
    sources += l.str();
  }
  return r.disease + "\t" + std::to_string(to_int(r.vd)) + "\t" + kind_name(r.kind) + "\t" + region_name(r.region) +
         "\t" + render_compact(r.condition) + "\t" + format_value(r.metrics.support, rd) + "\t" +
         format_value(r.metrics.strength, rd) + "\t" + format_value(r.metrics.certainty, rd) + "\t" +
         format_value(r.metrics.coverage, rd) + "\t" + sources;
}

inline std::map<std::string, ApproximationSets> all_approximations(const Lattice& kb) {
  std::map<std::string, ApproximationSets> out;
  for (const auto& d : kb.diseases()) out[d] = approximations(kb, d);
  return out;
}

// ---- files -------------------------------------------------------------

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Write to a sibling temp file, then rename over the target.
inline void write_file_atomic(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, p);
}

}  // namespace rslat
