#pragma once

// Proof-script checking for the critical-point calculus.
//
// Script format (line oriented, '#' starts a comment):
//   script <name>
//   hyp <id>: <relation>
//   step <id>: <relation> by <rule> [from <id>,<id>,...] [with k=<expr>,...]
//   goal <id>
//   end
// Relations: A = B, A < B, A <= B, E ~[O] F.  Hypotheses whose relation
// mentions an embedding variable are schema parameters; ground hypotheses
// taint everything derived from them, which is reported as "claimed".

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lda/expr.hpp"
#include "lda/facts.hpp"
#include "lda/rules.hpp"

namespace lda::crit {

struct ScriptStep {
  enum Kind { Hyp, Step, Goal } kind;
  std::string id;
  Relation rel;
  std::string rule;
  std::vector<std::string> premises;
  WithArgs with;
  int line = 0;
};

struct ScriptFile {
  std::string name;
  std::vector<ScriptStep> steps;
  std::string path;
};

struct StepReport {
  std::string id;
  std::string rule;
  bool ok = false;
  std::string error;
  int line = 0;
};

struct ScriptReport {
  std::string script;
  bool ok = false;
  std::vector<StepReport> steps;
  std::vector<std::string> goals;
  std::string error;  // script-level failure (parse, cycle, ...)
};

struct ScriptError : std::runtime_error {
  ScriptError(const std::string& msg, int line)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ")") {}
};
struct CycleDetected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- relation / script parsing ----

inline Relation parse_relation(const std::string& text,
                               const NameTable& names) {
  ExprParser p(text, names);
  ExprValue lhs = p.parse_expr();
  p.skip();
  std::size_t pos = p.cursor();
  auto rest = [&](std::size_t from) { return text.substr(from); };
  if (pos >= text.size())
    throw ParseError("expected a relation operator", pos);
  char c = text[pos];
  if (c == '~') {
    if (pos + 1 >= text.size() || text[pos + 1] != '[')
      throw ParseError("expected ~[level]", pos);
    std::string tail = rest(pos + 2);
    std::size_t close = tail.find(']');
    if (close == std::string::npos) throw ParseError("expected ']'", pos);
    ExprValue level = ExprParser(tail.substr(0, close), names).parse_full();
    if (!level.is_ord()) throw ParseError("level must be an ordinal", pos);
    ExprValue rhsv =
        ExprParser(tail.substr(close + 1), names).parse_full();
    if (lhs.is_ord() || rhsv.is_ord())
      throw ParseError("~ relates embeddings", pos);
    return Relation::equiv_at(lhs.emb, rhsv.emb, level.ord);
  }
  RelKind kind;
  std::size_t after;
  if (c == '=' ) {
    kind = RelKind::EqO;
    after = pos + 1;
  } else if (c == '<' && pos + 1 < text.size() && text[pos + 1] == '=') {
    kind = RelKind::LeO;
    after = pos + 2;
  } else if (c == '<') {
    kind = RelKind::LtO;
    after = pos + 1;
  } else {
    throw ParseError("unknown relation operator", pos);
  }
  ExprValue rhsv = ExprParser(rest(after), names).parse_full();
  if (kind == RelKind::EqO) {
    if (lhs.is_ord() != rhsv.is_ord())
      throw ParseError("equality sides have different kinds", pos);
    if (lhs.is_ord()) return Relation::eq_o(lhs.ord, rhsv.ord);
    return Relation::eq_e(lhs.emb, rhsv.emb);
  }
  if (!lhs.is_ord() || !rhsv.is_ord())
    throw ParseError("order relations need ordinals", pos);
  return kind == RelKind::LtO ? Relation::lt_o(lhs.ord, rhsv.ord)
                              : Relation::le_o(lhs.ord, rhsv.ord);
}

inline ScriptFile parse_script(std::istream& in, const NameTable& names,
                               const std::string& path = "") {
  ScriptFile out;
  out.path = path;
  std::string line;
  int lineno = 0;
  bool in_script = false, ended = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    std::size_t e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    if (ended) throw ScriptError("content after end", lineno);
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "script") {
      if (in_script) throw ScriptError("nested script", lineno);
      ls >> out.name;
      if (out.name.empty()) throw ScriptError("script needs a name", lineno);
      in_script = true;
      continue;
    }
    if (!in_script) throw ScriptError("expected 'script <name>'", lineno);
    if (word == "end") {
      ended = true;
      continue;
    }
    if (word == "goal") {
      ScriptStep s;
      s.kind = ScriptStep::Goal;
      ls >> s.id;
      if (s.id.empty()) throw ScriptError("goal needs an id", lineno);
      s.line = lineno;
      out.steps.push_back(std::move(s));
      continue;
    }
    if (word != "hyp" && word != "step")
      throw ScriptError("unknown directive '" + word + "'", lineno);
    ScriptStep s;
    s.kind = word == "hyp" ? ScriptStep::Hyp : ScriptStep::Step;
    s.line = lineno;
    std::string rest;
    std::getline(ls, rest);
    auto colon = rest.find(':');
    if (colon == std::string::npos) throw ScriptError("expected ':'", lineno);
    {
      std::istringstream idin(rest.substr(0, colon));
      idin >> s.id;
      std::string junk;
      if (s.id.empty() || (idin >> junk))
        throw ScriptError("bad id", lineno);
    }
    std::string body = rest.substr(colon + 1);
    std::string relpart = body;
    if (s.kind == ScriptStep::Step) {
      auto by = body.find(" by ");
      if (by == std::string::npos)
        throw ScriptError("step needs 'by <rule>'", lineno);
      relpart = body.substr(0, by);
      std::string tail = body.substr(by + 4);
      std::istringstream ts(tail);
      ts >> s.rule;
      std::string kw;
      while (ts >> kw) {
        if (kw == "from") {
          std::string ids;
          ts >> ids;
          std::istringstream is(ids);
          std::string one;
          while (std::getline(is, one, ','))
            if (!one.empty()) s.premises.push_back(one);
        } else if (kw == "with") {
          std::string bindings;
          std::getline(ts, bindings);
          std::istringstream bs(bindings);
          std::string one;
          while (std::getline(bs, one, ',')) {
            auto eqp = one.find('=');
            if (eqp == std::string::npos)
              throw ScriptError("with needs k=v", lineno);
            std::string key = one.substr(0, eqp);
            std::string val = one.substr(eqp + 1);
            auto kb = key.find_first_not_of(" \t");
            auto ke = key.find_last_not_of(" \t");
            key = key.substr(kb, ke - kb + 1);
            try {
              ExprValue v = ExprParser(val, names).parse_full();
              if (v.is_ord())
                s.with.ords[key] = v.ord;
              else
                s.with.embs.push_back({key, v.emb});
            } catch (const ParseError&) {
              s.with.ints[key] = std::stoi(val);
            }
          }
        } else {
          throw ScriptError("unknown step clause '" + kw + "'", lineno);
        }
      }
      if (s.rule.empty()) throw ScriptError("step needs a rule", lineno);
    }
    try {
      s.rel = parse_relation(relpart, names);
    } catch (const ParseError& pe) {
      throw ScriptError(std::string("relation: ") + pe.what(), lineno);
    }
    out.steps.push_back(std::move(s));
  }
  if (!in_script) throw ScriptError("empty script", 0);
  if (!ended) throw ScriptError("missing 'end'", lineno);
  return out;
}

inline ScriptFile parse_script_file(const std::string& path,
                                    const NameTable& names) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open script: " + path);
  return parse_script(in, names, path);
}

// ---- the prelude ----

inline std::vector<std::pair<std::string, Relation>> prelude_relations() {
  auto j = Emb::of_term(Term::generator());
  auto jn = [](int n) { return Emb::of_term(j_sub(n)); };
  auto K = [](const char* n) { return Ord::constant(n); };
  std::vector<std::pair<std::string, Relation>> out;
  out.push_back({"kappa0_def",
                 Relation::eq_o(K("kappa0"), Ord::crit(j))});
  out.push_back({"kappa1_def",
                 Relation::eq_o(K("kappa1"), Ord::app(j, K("kappa0")))});
  out.push_back({"kappa2_def",
                 Relation::eq_o(K("kappa2"), Ord::app(j, K("kappa1")))});
  out.push_back({"kappa3_def",
                 Relation::eq_o(K("kappa3"), Ord::app(j, K("kappa2")))});
  out.push_back({"kappa4_def",
                 Relation::eq_o(K("kappa4"), Ord::app(j, K("kappa3")))});
  out.push_back({"kappa2_5_def",
                 Relation::eq_o(K("kappa2_5"), Ord::app(jn(3), K("kappa1")))});
  out.push_back({"sigma1_def",
                 Relation::eq_o(K("sigma1"), Ord::sup_below(j, K("kappa1")))});
  out.push_back({"sigma2_def",
                 Relation::eq_o(K("sigma2"), Ord::sup_below(j, K("kappa2")))});
  out.push_back({"mu_def",
                 Relation::eq_o(K("mu"), Ord::app(jn(7), K("kappa2")))});
  out.push_back({"nu_def",
                 Relation::eq_o(K("nu"), Ord::app(jn(9), K("kappa3")))});
  out.push_back(
      {"xi_def", Relation::eq_o(K("xi"), Ord::app(jn(10),
                                                  Ord::app(jn(10),
                                                           K("kappa3"))))});
  return out;
}

// ---- the session ----

class Session {
 public:
  Session() : names_(NameTable::prelude()) {
    for (auto& [id, rel] : prelude_relations()) {
      Fact f;
      f.id = id;
      f.rel = rel;
      f.origin = Fact::Prelude;
      f.rule = "prelude";
      f.script = "<builtin>";
      store_.add(std::move(f));
    }
  }

  const NameTable& names() const { return names_; }
  const FactStore& store() const { return store_; }

  ScriptReport check_script(const ScriptFile& script) {
    ScriptReport report;
    report.script = script.name;
    std::vector<Fact> staged;
    std::set<std::string> local_ids;
    std::set<std::string> hyp_vars;
    std::set<std::string> goals_needed;

    auto resolve = [&](const std::string& id) -> const Fact* {
      for (const Fact& f : staged)
        if (f.id == id) return &f;
      return store_.find(id);
    };

    bool all_ok = true;
    for (const ScriptStep& s : script.steps) {
      if (s.kind == ScriptStep::Goal) {
        goals_needed.insert(s.id);
        report.goals.push_back(s.id);
        continue;
      }
      StepReport sr;
      sr.id = s.id;
      sr.rule = s.kind == ScriptStep::Hyp ? "hyp" : s.rule;
      sr.line = s.line;
      if (store_.contains(s.id) || local_ids.count(s.id)) {
        sr.error = "duplicate id";
        all_ok = false;
        report.steps.push_back(std::move(sr));
        continue;
      }
      Fact f;
      f.id = s.id;
      f.rel = s.rel;
      f.script = script.name;
      f.generic = s.rel.has_var();
      if (s.kind == ScriptStep::Hyp) {
        f.origin = Fact::Hypothesis;
        f.rule = "hyp";
        f.tainted = !f.generic;  // ground assumption: everything downstream
                                 // of it is only claimed
        for (const auto& v : s.rel.vars()) hyp_vars.insert(v);
        sr.ok = true;
      } else {
        f.origin = Fact::Derived;
        f.rule = s.rule;
        f.premises = s.premises;
        // premises must exist
        std::vector<const Fact*> prem;
        bool missing = false;
        for (const auto& pid : s.premises) {
          const Fact* pf = resolve(pid);
          if (!pf) {
            sr.error = "unknown premise '" + pid + "'";
            missing = true;
            break;
          }
          prem.push_back(pf);
        }
        if (missing) {
          all_ok = false;
          report.steps.push_back(std::move(sr));
          continue;
        }
        // free variables must come from this script's hypotheses or from
        // cited facts
        std::set<std::string> allowed = hyp_vars;
        for (const Fact* pf : prem)
          for (const auto& v : pf->rel.vars()) allowed.insert(v);
        bool var_ok = true;
        for (const auto& v : s.rel.vars())
          if (!allowed.count(v)) {
            sr.error = "variable '" + v + "' not introduced by a hypothesis";
            var_ok = false;
          }
        if (!var_ok) {
          all_ok = false;
          report.steps.push_back(std::move(sr));
          continue;
        }
        std::optional<std::string> err;
        if (s.rule == "prelude") {
          err = check_prelude_step(s.rel);
        } else if (s.rule == "instantiate") {
          err = check_instantiate(s, prem);
        } else {
          auto it = rule_catalog().find(s.rule);
          if (it == rule_catalog().end()) {
            err = "unknown rule '" + s.rule + "'";
          } else {
            StepEnv env(s.rel, prem, s.with, &store_);
            err = it->second(env);
          }
        }
        if (err) {
          sr.error = *err;
          all_ok = false;
          report.steps.push_back(std::move(sr));
          continue;
        }
        for (const Fact* pf : prem) f.tainted = f.tainted || pf->tainted;
        sr.ok = true;
      }
      local_ids.insert(f.id);
      staged.push_back(std::move(f));
      report.steps.push_back(std::move(sr));
    }

    for (const auto& g : goals_needed) {
      if (!local_ids.count(g)) {
        report.error = "goal '" + g + "' is not derived by the script";
        all_ok = false;
      }
    }
    if (!all_ok) {
      if (report.error.empty()) report.error = "step validation failed";
      return report;
    }
    // merge, then assert the store is still a strict partial order
    for (Fact& f : staged) store_.add(std::move(f));
    if (order_oracle().has_strict_cycle())
      throw CycleDetected("strict cycle in the proven order after script '" +
                          script.name + "'");
    report.ok = true;
    return report;
  }

  // proven, variable-free facts (prelude included)
  std::vector<const Fact*> proven_facts() const {
    std::vector<const Fact*> out;
    for (const Fact& f : store_.all()) {
      if (f.generic || f.tainted) continue;
      if (f.origin == Fact::Hypothesis) continue;
      out.push_back(&f);
    }
    return out;
  }

  OrderOracle order_oracle() const { return OrderOracle(proven_facts()); }

  struct OrderCell {
    std::string a, b;
    OrderOracle::Verdict verdict;
  };

  std::vector<OrderCell> derive_order(const std::vector<OrdPtr>& ordinals) {
    OrderOracle oracle = order_oracle();
    std::vector<OrderCell> out;
    for (std::size_t i = 0; i < ordinals.size(); ++i)
      for (std::size_t j = i + 1; j < ordinals.size(); ++j)
        out.push_back({render_ord(ordinals[i]), render_ord(ordinals[j]),
                       oracle.verdict(ordinals[i], ordinals[j])});
    return out;
  }

 private:
  std::optional<std::string> check_prelude_step(const Relation& rel) {
    for (auto& [id, prel] : prelude_relations()) {
      if (prel.kind != rel.kind) continue;
      if (rel.kind == RelKind::EqO && prel.o1 == rel.o1 && prel.o2 == rel.o2)
        return std::nullopt;
    }
    return std::string("not a prelude definition");
  }

  std::optional<std::string> check_instantiate(
      const ScriptStep& s, const std::vector<const Fact*>& prem) {
    if (prem.empty()) return std::string("instantiate needs a generic fact");
    const Fact* generic = prem[0];
    if (!generic->generic)
      return std::string("first premise is not a generic fact");
    const Subst& subst = s.with.embs;
    auto vars = generic->rel.vars();
    for (const auto& v : vars) {
      bool bound = false;
      for (const auto& [n, e] : subst) bound = bound || n == v;
      if (!bound) return std::string("unbound variable '" + v + "'");
    }
    // every hypothesis behind the generic fact must be discharged by a
    // cited instance
    std::vector<const Fact*> hyps = store_.hypothesis_closure(generic->id);
    for (const Fact* h : hyps) {
      if (!h->rel.has_var())
        return std::string("generic fact depends on a ground hypothesis '" +
                           h->id + "'");
      for (const auto& v : h->rel.vars()) {
        bool bound = false;
        for (const auto& [n, e] : subst) bound = bound || n == v;
        if (!bound)
          return std::string("hypothesis variable '" + v + "' unbound");
      }
      Relation inst = h->rel.substituted(subst);
      bool discharged = false;
      for (std::size_t i = 1; i < prem.size() && !discharged; ++i) {
        if (prem[i]->rel.kind != inst.kind) continue;
        StepEnv env(inst, {prem[i]}, {}, &store_);
        switch (inst.kind) {
          case RelKind::EqO:
          case RelKind::LtO:
          case RelKind::LeO:
            discharged = env.eq(prem[i]->rel.o1, inst.o1) &&
                         env.eq(prem[i]->rel.o2, inst.o2);
            break;
          case RelKind::EqE:
            discharged = env.eq(prem[i]->rel.e1, inst.e1) &&
                         env.eq(prem[i]->rel.e2, inst.e2);
            break;
          case RelKind::EquivAt:
            discharged = env.eq(prem[i]->rel.e1, inst.e1) &&
                         env.eq(prem[i]->rel.e2, inst.e2) &&
                         env.eq(prem[i]->rel.at, inst.at);
            break;
        }
      }
      if (!discharged)
        return std::string("hypothesis instance not discharged: ") +
               inst.render();
    }
    Relation want = generic->rel.substituted(subst);
    if (want.kind != s.rel.kind)
      return std::string("goal kind differs from the instantiated fact");
    StepEnv env(s.rel, prem, s.with, &store_);
    bool match = false;
    switch (want.kind) {
      case RelKind::EqO:
      case RelKind::LtO:
      case RelKind::LeO:
        match = env.eq(want.o1, s.rel.o1) && env.eq(want.o2, s.rel.o2);
        break;
      case RelKind::EqE:
        match = env.eq(want.e1, s.rel.e1) && env.eq(want.e2, s.rel.e2);
        break;
      case RelKind::EquivAt:
        match = env.eq(want.e1, s.rel.e1) && env.eq(want.e2, s.rel.e2) &&
                env.eq(want.at, s.rel.at);
        break;
    }
    if (!match) return std::string("goal is not the instantiated fact");
    return std::nullopt;
  }

  NameTable names_;
  FactStore store_;
};

}  // namespace lda::crit
