#pragma once

// The rule catalog of the critical-point calculus.  Each step of a proof
// script cites a rule, premises, and an optional instantiation; a validator
// checks the step against its rule using a congruence closure over the
// cited equalities only.  The catalog is closed: a step either instantiates
// one of these schemas or is rejected.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lda/cc.hpp"
#include "lda/expr.hpp"
#include "lda/facts.hpp"

namespace lda::crit {

struct WithArgs {
  Subst embs;                           // name -> embedding
  std::map<std::string, OrdPtr> ords;   // name -> ordinal
  std::map<std::string, int> ints;

  EmbPtr emb(const std::string& k) const {
    for (const auto& [n, e] : embs)
      if (n == k) return e;
    return nullptr;
  }
};

class StepEnv {
 public:
  StepEnv(const Relation& goal, std::vector<const Fact*> premises,
          WithArgs with, const FactStore* store)
      : goal(goal), premises(std::move(premises)), with(std::move(with)),
        store(store) {
    add_relation(goal);
    for (const Fact* p : this->premises) {
      add_relation(p->rel);
      if (p->rel.kind == RelKind::EqO) cc.merge(p->rel.o1, p->rel.o2);
      if (p->rel.kind == RelKind::EqE) cc.merge(p->rel.e1, p->rel.e2);
    }
  }

  const Relation& goal;
  std::vector<const Fact*> premises;
  WithArgs with;
  const FactStore* store;
  CongruenceClosure cc;

  void add_relation(const Relation& r) {
    if (r.o1) cc.add(r.o1);
    if (r.o2) cc.add(r.o2);
    if (r.e1) cc.add(r.e1);
    if (r.e2) cc.add(r.e2);
    if (r.at) cc.add(r.at);
  }

  bool eq(const OrdPtr& a, const OrdPtr& b) { return cc.eq(a, b); }
  bool eq(const EmbPtr& a, const EmbPtr& b) { return cc.eq(a, b); }

  // A cited strict/nonstrict bound a (rel) b modulo the closure.
  bool cited_lt(const OrdPtr& a, const OrdPtr& b) {
    for (const Fact* p : premises)
      if (p->rel.kind == RelKind::LtO && eq(p->rel.o1, a) && eq(p->rel.o2, b))
        return true;
    return false;
  }
  bool cited_le(const OrdPtr& a, const OrdPtr& b) {
    if (eq(a, b) || cited_lt(a, b)) return true;
    for (const Fact* p : premises)
      if (p->rel.kind == RelKind::LeO && eq(p->rel.o1, a) && eq(p->rel.o2, b))
        return true;
    return false;
  }
  // EquivAt premise joining a and b (either orientation); returns its level.
  std::optional<OrdPtr> cited_equiv(const EmbPtr& a, const EmbPtr& b) {
    for (const Fact* p : premises) {
      if (p->rel.kind != RelKind::EquivAt) continue;
      if ((eq(p->rel.e1, a) && eq(p->rel.e2, b)) ||
          (eq(p->rel.e1, b) && eq(p->rel.e2, a)))
        return p->rel.at;
    }
    return std::nullopt;
  }

  std::vector<OrdPtr> mates(const OrdPtr& o) { return cc.ord_classmates(o); }
  std::vector<EmbPtr> mates(const EmbPtr& e) { return cc.emb_classmates(e); }
};

using RuleCheck = std::function<std::optional<std::string>(StepEnv&)>;

inline std::optional<std::string> rule_ok() { return std::nullopt; }
inline std::optional<std::string> rule_fail(const std::string& why) {
  return why;
}

// ---- individual validators ----

namespace rules {

inline std::optional<std::string> need(bool cond, const char* why) {
  if (cond) return std::nullopt;
  return std::string(why);
}

// goal EqO/EqE provable from cited equalities by congruence alone
inline std::optional<std::string> rewrite(StepEnv& env) {
  const Relation& g = env.goal;
  if (g.kind == RelKind::EqO)
    return need(env.eq(g.o1, g.o2), "sides not congruent");
  if (g.kind == RelKind::EqE)
    return need(env.eq(g.e1, g.e2), "sides not congruent");
  return rule_fail("rewrite proves equalities");
}

// transitivity through the cited order facts
inline std::optional<std::string> chain(StepEnv& env) {
  const Relation& g = env.goal;
  if (g.kind != RelKind::LtO && g.kind != RelKind::LeO)
    return rule_fail("chain proves < or <=");
  struct Edge {
    OrdPtr a, b;
    bool strict;
  };
  std::vector<Edge> edges;
  for (const Fact* p : env.premises) {
    if (p->rel.kind == RelKind::LtO)
      edges.push_back({p->rel.o1, p->rel.o2, true});
    if (p->rel.kind == RelKind::LeO)
      edges.push_back({p->rel.o1, p->rel.o2, false});
  }
  // BFS from o1 to o2 through the closure
  std::vector<std::pair<OrdPtr, bool>> frontier = {{g.o1, false}};
  std::vector<std::pair<OrdPtr, bool>> seen = frontier;
  while (!frontier.empty()) {
    auto [cur, strict] = frontier.back();
    frontier.pop_back();
    if (env.eq(cur, g.o2)) {
      if (g.kind == RelKind::LeO || strict) return rule_ok();
      continue;
    }
    for (const Edge& e : edges) {
      if (!env.eq(e.a, cur)) continue;
      bool s = strict || e.strict;
      bool dup = false;
      for (auto& [o, os] : seen)
        if (os == s && env.eq(o, e.b)) dup = true;
      if (dup) continue;
      seen.push_back({e.b, s});
      frontier.push_back({e.b, s});
    }
  }
  return rule_fail("no chain of cited bounds connects the sides");
}

// R1: crit(e1(e2)) = e1(crit(e2))
inline std::optional<std::string> crit_app(StepEnv& env) {
  const Relation& g = env.goal;
  if (g.kind != RelKind::EqO) return rule_fail("crit_app proves an equality");
  for (bool swap : {false, true}) {
    OrdPtr x = swap ? g.o2 : g.o1;
    OrdPtr y = swap ? g.o1 : g.o2;
    for (const OrdPtr& cand : env.mates(x)) {
      if (cand->kind != OrdKind::Crit) continue;
      if (auto d = decompose_app(cand->emb)) {
        OrdPtr rhs = Ord::app(d->first, Ord::crit(d->second));
        if (env.eq(y, rhs)) return rule_ok();
      }
    }
  }
  return rule_fail("no crit(e1(e2)) = e1(crit(e2)) instance matches");
}

// R2: e1e2(e1(b)) = e1(e2(b)), for ordinals and for embeddings
inline std::optional<std::string> app_eval(StepEnv& env) {
  const Relation& g = env.goal;
  if (g.kind == RelKind::EqO) {
    for (bool swap : {false, true}) {
      OrdPtr x = swap ? g.o2 : g.o1;  // e1e2(e1(b)) side
      OrdPtr y = swap ? g.o1 : g.o2;  // e1(e2(b)) side
      for (const OrdPtr& yc : env.mates(y)) {
        if (yc->kind != OrdKind::AppO) continue;
        const EmbPtr& e1 = yc->emb;
        for (const OrdPtr& inner : env.mates(yc->arg)) {
          if (inner->kind != OrdKind::AppO) continue;
          const EmbPtr& e2 = inner->emb;
          const OrdPtr& beta = inner->arg;
          OrdPtr lhs = Ord::app(Emb::app(e1, e2), Ord::app(e1, beta));
          if (env.eq(x, lhs)) return rule_ok();
        }
      }
    }
    return rule_fail("no R2 instance matches");
  }
  if (g.kind == RelKind::EqE) {
    for (bool swap : {false, true}) {
      EmbPtr x = swap ? g.e2 : g.e1;
      EmbPtr y = swap ? g.e1 : g.e2;
      for (const EmbPtr& yc : env.mates(y)) {
        auto outer = decompose_app(yc);
        if (!outer) continue;
        const EmbPtr& e1 = outer->first;
        for (const EmbPtr& inner : env.mates(outer->second)) {
          auto in = decompose_app(inner);
          if (!in) continue;
          EmbPtr lhs =
              Emb::app(Emb::app(e1, in->first), Emb::app(e1, in->second));
          if (env.eq(x, lhs)) return rule_ok();
        }
      }
    }
    return rule_fail("no embedding R2 instance matches");
  }
  return rule_fail("app_eval proves an equality");
}

inline std::optional<std::string> want_equiv(const Relation& g) {
  if (g.kind != RelKind::EquivAt) return std::string("rule proves ~[.]");
  return std::nullopt;
}

inline std::optional<std::string> equiv_refl(StepEnv& env) {
  if (auto e = want_equiv(env.goal)) return e;
  return need(env.eq(env.goal.e1, env.goal.e2), "sides not congruent");
}

inline std::optional<std::string> equiv_sym(StepEnv& env) {
  if (auto e = want_equiv(env.goal)) return e;
  auto lvl = env.cited_equiv(env.goal.e1, env.goal.e2);
  if (!lvl) return rule_fail("no matching cited equivalence");
  return need(env.eq(*lvl, env.goal.at), "level differs");
}

inline std::optional<std::string> equiv_trans(StepEnv& env) {
  if (auto e = want_equiv(env.goal)) return e;
  const Relation& g = env.goal;
  for (const Fact* p : env.premises) {
    if (p->rel.kind != RelKind::EquivAt) continue;
    if (!env.eq(p->rel.at, g.at)) continue;
    for (bool s1 : {false, true}) {
      EmbPtr a = s1 ? p->rel.e2 : p->rel.e1;
      EmbPtr m = s1 ? p->rel.e1 : p->rel.e2;
      if (!env.eq(a, g.e1)) continue;
      for (const Fact* q : env.premises) {
        if (q == p || q->rel.kind != RelKind::EquivAt) continue;
        if (!env.eq(q->rel.at, g.at)) continue;
        for (bool s2 : {false, true}) {
          EmbPtr m2 = s2 ? q->rel.e2 : q->rel.e1;
          EmbPtr b = s2 ? q->rel.e1 : q->rel.e2;
          if (env.eq(m2, m) && env.eq(b, g.e2)) return rule_ok();
        }
      }
    }
  }
  return rule_fail("no transitive pair at this level");
}

// fact (2): congruence under application and composition at one level
inline std::optional<std::string> equiv_cong(StepEnv& env) {
  if (auto e = want_equiv(env.goal)) return e;
  const Relation& g = env.goal;
  auto component = [&](const EmbPtr& part, EmbPtr& out) -> bool {
    // out := cited partner of `part` at the goal level, or `part` itself
    for (const Fact* p : env.premises) {
      if (p->rel.kind != RelKind::EquivAt) continue;
      if (!env.eq(p->rel.at, g.at)) continue;
      if (env.eq(p->rel.e1, part)) {
        out = p->rel.e2;
        return true;
      }
      if (env.eq(p->rel.e2, part)) {
        out = p->rel.e1;
        return true;
      }
    }
    out = part;
    return false;
  };
  for (bool swap : {false, true}) {
    EmbPtr from = swap ? g.e2 : g.e1;
    EmbPtr to = swap ? g.e1 : g.e2;
    for (const EmbPtr& cand : env.mates(from)) {
      for (bool comp : {false, true}) {
        auto d = comp ? decompose_comp(cand) : decompose_app(cand);
        if (!d) continue;
        EmbPtr l2, r2;
        bool lc = component(d->first, l2);
        bool rc = component(d->second, r2);
        if (!lc && !rc) continue;  // a pure restatement is `rewrite`
        EmbPtr built = comp ? Emb::compose(l2, r2) : Emb::app(l2, r2);
        if (env.eq(built, to)) return rule_ok();
      }
    }
  }
  return rule_fail("no congruence instance matches");
}

// fact (3): e2 ~[b] e2' gives e1(e2) ~[e1(b)] e1(e2')
inline std::optional<std::string> equiv_app_level(StepEnv& env) {
  if (auto e = want_equiv(env.goal)) return e;
  const Relation& g = env.goal;
  for (bool swap : {false, true}) {
    EmbPtr from = swap ? g.e2 : g.e1;
    EmbPtr to = swap ? g.e1 : g.e2;
    for (const EmbPtr& cand : env.mates(from)) {
      auto d = decompose_app(cand);
      if (!d) continue;
      for (const Fact* p : env.premises) {
        if (p->rel.kind != RelKind::EquivAt) continue;
        for (bool s : {false, true}) {
          EmbPtr a = s ? p->rel.e2 : p->rel.e1;
          EmbPtr b = s ? p->rel.e1 : p->rel.e2;
          if (!env.eq(a, d->second)) continue;
          if (!env.eq(to, Emb::app(d->first, b))) continue;
          if (env.eq(g.at, Ord::app(d->first, p->rel.at))) return rule_ok();
        }
      }
    }
  }
  return rule_fail("no application-level instance matches");
}

// fact (4): e ~[crit e] id
inline std::optional<std::string> equiv_id(StepEnv& env) {
  if (auto e = want_equiv(env.goal)) return e;
  const Relation& g = env.goal;
  for (bool swap : {false, true}) {
    EmbPtr e = swap ? g.e2 : g.e1;
    EmbPtr idside = swap ? g.e1 : g.e2;
    if (!env.eq(idside, Emb::id())) continue;
    if (env.eq(g.at, Ord::crit(e))) return rule_ok();
  }
  return rule_fail("level is not crit of the non-identity side");
}

// fact (5): e ~[b] e' and e(a) < b give e(a) = e'(a)
inline std::optional<std::string> equiv_eval(StepEnv& env) {
  const Relation& g = env.goal;
  if (g.kind != RelKind::EqO) return rule_fail("equiv_eval proves an equality");
  for (const OrdPtr& xc : env.mates(g.o1)) {
    if (xc->kind != OrdKind::AppO) continue;
    for (const OrdPtr& yc : env.mates(g.o2)) {
      if (yc->kind != OrdKind::AppO) continue;
      if (!env.eq(xc->arg, yc->arg)) continue;
      auto lvl = env.cited_equiv(xc->emb, yc->emb);
      if (!lvl) continue;
      if (env.cited_lt(xc, *lvl) || env.cited_lt(yc, *lvl)) return rule_ok();
    }
  }
  return rule_fail("no cited equivalence with the value below its level");
}

// weakening to a smaller level
inline std::optional<std::string> equiv_weaken(StepEnv& env) {
  if (auto e = want_equiv(env.goal)) return e;
  const Relation& g = env.goal;
  for (const Fact* p : env.premises) {
    if (p->rel.kind != RelKind::EquivAt) continue;
    bool sides = (env.eq(p->rel.e1, g.e1) && env.eq(p->rel.e2, g.e2)) ||
                 (env.eq(p->rel.e1, g.e2) && env.eq(p->rel.e2, g.e1));
    if (!sides) continue;
    if (env.cited_le(g.at, p->rel.at)) return rule_ok();
  }
  return rule_fail("no equivalence at a level above the goal's");
}

// e ~[e(a)] e' gives e(<a) = e'(<a)
inline std::optional<std::string> equiv_supbelow(StepEnv& env) {
  const Relation& g = env.goal;
  if (g.kind != RelKind::EqO)
    return rule_fail("equiv_supbelow proves an equality");
  for (const OrdPtr& xc : env.mates(g.o1)) {
    if (xc->kind != OrdKind::SupBelow) continue;
    for (const OrdPtr& yc : env.mates(g.o2)) {
      if (yc->kind != OrdKind::SupBelow) continue;
      if (!env.eq(xc->arg, yc->arg)) continue;
      auto lvl = env.cited_equiv(xc->emb, yc->emb);
      if (!lvl) continue;
      if (env.eq(*lvl, Ord::app(xc->emb, xc->arg)) ||
          env.eq(*lvl, Ord::app(yc->emb, yc->arg)))
        return rule_ok();
    }
  }
  return rule_fail("no equivalence at level e(a)");
}

// Laver approximation: e e1..el ~[t] e(e1..el) when t <= e e1..ei(crit e)
// for every 1 <= i < l
inline std::optional<std::string> approx(StepEnv& env) {
  if (auto e = want_equiv(env.goal)) return e;
  const Relation& g = env.goal;
  for (bool swap : {false, true}) {
    EmbPtr spread = swap ? g.e2 : g.e1;   // e e1 e2 .. el
    EmbPtr grouped = swap ? g.e1 : g.e2;  // e(e1 e2 .. el)
    for (const EmbPtr& gc : env.mates(grouped)) {
      auto d = decompose_app(gc);
      if (!d) continue;
      const EmbPtr& e = d->first;
      std::vector<EmbPtr> chain = app_spine(d->second);
      std::size_t l = chain.size();
      if (l < 2) continue;
      EmbPtr rebuilt = e;
      for (const EmbPtr& c : chain) rebuilt = Emb::app(rebuilt, c);
      if (!env.eq(spread, rebuilt)) continue;
      OrdPtr crit_e = Ord::crit(e);
      bool all = true;
      EmbPtr prefix = e;
      for (std::size_t i = 0; i + 1 < l && all; ++i) {
        prefix = Emb::app(prefix, chain[i]);
        OrdPtr oi = Ord::app(prefix, crit_e);
        if (!env.cited_le(g.at, oi)) all = false;
      }
      if (all) return rule_ok();
    }
  }
  return rule_fail("no approximation instance with all level bounds cited");
}

// e ~[e(crit e')] e o e'
inline std::optional<std::string> absorb(StepEnv& env) {
  if (auto err = want_equiv(env.goal)) return err;
  const Relation& g = env.goal;
  for (bool swap : {false, true}) {
    EmbPtr plain = swap ? g.e2 : g.e1;
    EmbPtr comp = swap ? g.e1 : g.e2;
    for (const EmbPtr& cc : env.mates(comp)) {
      auto d = decompose_comp(cc);
      if (!d) continue;
      if (!env.eq(d->first, plain)) continue;
      if (env.eq(g.at, Ord::app(d->first, Ord::crit(d->second))))
        return rule_ok();
    }
  }
  return rule_fail("level is not e(crit e')");
}

// ee' ~[ee'(crit e)] e o e'
inline std::optional<std::string> absorb_special(StepEnv& env) {
  if (auto err = want_equiv(env.goal)) return err;
  const Relation& g = env.goal;
  for (bool swap : {false, true}) {
    EmbPtr appside = swap ? g.e2 : g.e1;
    EmbPtr compside = swap ? g.e1 : g.e2;
    for (const EmbPtr& ac : env.mates(appside)) {
      auto d = decompose_app(ac);
      if (!d) continue;
      if (!env.eq(compside, Emb::compose(d->first, d->second))) continue;
      if (env.eq(g.at, Ord::app(ac, Ord::crit(d->first)))) return rule_ok();
    }
  }
  return rule_fail("level is not ee'(crit e)");
}

// (e e') o e = e o e'
inline std::optional<std::string> comp_absorb(StepEnv& env) {
  const Relation& g = env.goal;
  if (g.kind != RelKind::EqE)
    return rule_fail("comp_absorb proves an embedding equality");
  for (bool swap : {false, true}) {
    EmbPtr x = swap ? g.e2 : g.e1;
    EmbPtr y = swap ? g.e1 : g.e2;
    for (const EmbPtr& xc : env.mates(x)) {
      auto d = decompose_comp(xc);
      if (!d) continue;
      auto da = decompose_app(d->first);
      if (!da) continue;
      if (!env.eq(da->first, d->second)) continue;
      if (env.eq(y, Emb::compose(da->first, da->second))) return rule_ok();
    }
  }
  return rule_fail("no (ee') o e = e o e' instance matches");
}

// (a o b) o c = a o (b o c)
inline std::optional<std::string> comp_assoc(StepEnv& env) {
  const Relation& g = env.goal;
  if (g.kind != RelKind::EqE)
    return rule_fail("comp_assoc proves an embedding equality");
  for (bool swap : {false, true}) {
    EmbPtr x = swap ? g.e2 : g.e1;
    EmbPtr y = swap ? g.e1 : g.e2;
    for (const EmbPtr& xc : env.mates(x)) {
      auto d = decompose_comp(xc);
      if (!d) continue;
      if (auto dl = decompose_comp(d->first)) {
        EmbPtr built =
            Emb::compose(dl->first, Emb::compose(dl->second, d->second));
        if (env.eq(y, built)) return rule_ok();
      }
    }
  }
  return rule_fail("no associativity instance matches");
}

// (a o b)(x) = a(b(x)), for ordinal and embedding arguments
inline std::optional<std::string> comp_apply(StepEnv& env) {
  const Relation& g = env.goal;
  if (g.kind == RelKind::EqO) {
    for (bool swap : {false, true}) {
      OrdPtr x = swap ? g.o2 : g.o1;
      OrdPtr y = swap ? g.o1 : g.o2;
      for (const OrdPtr& xc : env.mates(x)) {
        if (xc->kind != OrdKind::AppO) continue;
        for (const EmbPtr& f : env.mates(xc->emb)) {
          auto d = decompose_comp(f);
          if (!d) continue;
          OrdPtr built = Ord::app(d->first, Ord::app(d->second, xc->arg));
          if (env.eq(y, built)) return rule_ok();
        }
      }
    }
    return rule_fail("no composition application instance matches");
  }
  if (g.kind == RelKind::EqE) {
    for (bool swap : {false, true}) {
      EmbPtr x = swap ? g.e2 : g.e1;
      EmbPtr y = swap ? g.e1 : g.e2;
      for (const EmbPtr& xc : env.mates(x)) {
        auto da = decompose_app(xc);
        if (!da) continue;
        for (const EmbPtr& f : env.mates(da->first)) {
          auto d = decompose_comp(f);
          if (!d) continue;
          EmbPtr built = Emb::app(d->first, Emb::app(d->second, da->second));
          if (env.eq(y, built)) return rule_ok();
        }
      }
    }
    return rule_fail("no composition application instance matches");
  }
  return rule_fail("comp_apply proves an equality");
}

// e(a o b) = e(a) o e(b)
inline std::optional<std::string> app_dist_comp(StepEnv& env) {
  const Relation& g = env.goal;
  if (g.kind != RelKind::EqE)
    return rule_fail("app_dist_comp proves an embedding equality");
  for (bool swap : {false, true}) {
    EmbPtr x = swap ? g.e2 : g.e1;
    EmbPtr y = swap ? g.e1 : g.e2;
    for (const EmbPtr& xc : env.mates(x)) {
      auto da = decompose_app(xc);
      if (!da) continue;
      for (const EmbPtr& inner : env.mates(da->second)) {
        auto d = decompose_comp(inner);
        if (!d) continue;
        EmbPtr built = Emb::compose(Emb::app(da->first, d->first),
                                    Emb::app(da->first, d->second));
        if (env.eq(y, built)) return rule_ok();
      }
    }
  }
  return rule_fail("no distribution instance matches");
}

// e'(e(<a)) = (e'e)(<e'(a))
inline std::optional<std::string> sup_dist(StepEnv& env) {
  const Relation& g = env.goal;
  if (g.kind != RelKind::EqO) return rule_fail("sup_dist proves an equality");
  for (bool swap : {false, true}) {
    OrdPtr x = swap ? g.o2 : g.o1;
    OrdPtr y = swap ? g.o1 : g.o2;
    for (const OrdPtr& xc : env.mates(x)) {
      if (xc->kind != OrdKind::AppO) continue;
      for (const OrdPtr& inner : env.mates(xc->arg)) {
        if (inner->kind != OrdKind::SupBelow) continue;
        OrdPtr built = Ord::sup_below(Emb::app(xc->emb, inner->emb),
                                      Ord::app(xc->emb, inner->arg));
        if (env.eq(y, built)) return rule_ok();
      }
    }
  }
  return rule_fail("no sup distribution instance matches");
}

// e'(<e(<a)) = (e' o e)(<a)
inline std::optional<std::string> sup_comp(StepEnv& env) {
  const Relation& g = env.goal;
  if (g.kind != RelKind::EqO) return rule_fail("sup_comp proves an equality");
  for (bool swap : {false, true}) {
    OrdPtr x = swap ? g.o2 : g.o1;
    OrdPtr y = swap ? g.o1 : g.o2;
    for (const OrdPtr& xc : env.mates(x)) {
      if (xc->kind != OrdKind::SupBelow) continue;
      for (const OrdPtr& inner : env.mates(xc->arg)) {
        if (inner->kind != OrdKind::SupBelow) continue;
        OrdPtr built = Ord::sup_below(Emb::compose(xc->emb, inner->emb),
                                      inner->arg);
        if (env.eq(y, built)) return rule_ok();
      }
    }
  }
  return rule_fail("no sup composition instance matches");
}

// e(<a) <= e(a)
inline std::optional<std::string> sup_le(StepEnv& env) {
  const Relation& g = env.goal;
  if (g.kind != RelKind::LeO) return rule_fail("sup_le proves <=");
  for (const OrdPtr& xc : env.mates(g.o1)) {
    if (xc->kind != OrdKind::SupBelow) continue;
    if (env.eq(g.o2, Ord::app(xc->emb, xc->arg))) return rule_ok();
  }
  return rule_fail("sides are not e(<a) and e(a)");
}

// b < a gives e(b) < e(<a)
inline std::optional<std::string> sup_strict(StepEnv& env) {
  const Relation& g = env.goal;
  if (g.kind != RelKind::LtO) return rule_fail("sup_strict proves <");
  for (const OrdPtr& yc : env.mates(g.o2)) {
    if (yc->kind != OrdKind::SupBelow) continue;
    for (const OrdPtr& xc : env.mates(g.o1)) {
      if (xc->kind != OrdKind::AppO) continue;
      if (!env.eq(xc->emb, yc->emb)) continue;
      if (env.cited_lt(xc->arg, yc->arg)) return rule_ok();
    }
  }
  return rule_fail("no cited b < a for e(b) < e(<a)");
}

// regular a moved by e: e(<a) < e(a)
inline std::optional<std::string> cof_strict(StepEnv& env) {
  const Relation& g = env.goal;
  if (g.kind != RelKind::LtO) return rule_fail("cof_strict proves <");
  for (const OrdPtr& xc : env.mates(g.o1)) {
    if (xc->kind != OrdKind::SupBelow) continue;
    OrdPtr applied = Ord::app(xc->emb, xc->arg);
    if (!env.eq(g.o2, applied)) continue;
    bool regular = false;
    for (const OrdPtr& ac : env.mates(xc->arg))
      if (is_regular_const(ac)) regular = true;
    if (!regular) return rule_fail("argument is not a regular constant");
    if (env.cited_lt(xc->arg, applied)) return rule_ok();
    return rule_fail("no cited a < e(a)");
  }
  return rule_fail("sides are not e(<a) and e(a)");
}

// a < crit(e) gives e(a) = a
inline std::optional<std::string> below_fix(StepEnv& env) {
  const Relation& g = env.goal;
  if (g.kind != RelKind::EqO) return rule_fail("below_fix proves an equality");
  for (bool swap : {false, true}) {
    OrdPtr x = swap ? g.o2 : g.o1;  // e(a)
    OrdPtr y = swap ? g.o1 : g.o2;  // a
    for (const OrdPtr& xc : env.mates(x)) {
      if (xc->kind != OrdKind::AppO) continue;
      if (!env.eq(xc->arg, y)) continue;
      if (env.cited_lt(y, Ord::crit(xc->emb))) return rule_ok();
    }
  }
  return rule_fail("no cited a < crit(e)");
}

// crit(e) < e(crit(e))
inline std::optional<std::string> crit_moves(StepEnv& env) {
  const Relation& g = env.goal;
  if (g.kind != RelKind::LtO) return rule_fail("crit_moves proves <");
  for (const OrdPtr& yc : env.mates(g.o2)) {
    if (yc->kind != OrdKind::AppO) continue;
    OrdPtr c = Ord::crit(yc->emb);
    if (env.eq(g.o1, c) && env.eq(yc->arg, c)) return rule_ok();
  }
  return rule_fail("sides are not crit(e) and e(crit(e))");
}

// a <= e(a)
inline std::optional<std::string> incr(StepEnv& env) {
  const Relation& g = env.goal;
  if (g.kind != RelKind::LeO) return rule_fail("incr proves <=");
  for (const OrdPtr& yc : env.mates(g.o2)) {
    if (yc->kind != OrdKind::AppO) continue;
    if (env.eq(yc->arg, g.o1)) return rule_ok();
  }
  return rule_fail("right side is not e(left side)");
}

// a < b gives e(a) < e(b); likewise <= from <=
inline std::optional<std::string> mono(StepEnv& env) {
  const Relation& g = env.goal;
  if (g.kind != RelKind::LtO && g.kind != RelKind::LeO)
    return rule_fail("mono proves < or <=");
  for (const OrdPtr& xc : env.mates(g.o1)) {
    if (xc->kind != OrdKind::AppO) continue;
    for (const OrdPtr& yc : env.mates(g.o2)) {
      if (yc->kind != OrdKind::AppO) continue;
      if (!env.eq(xc->emb, yc->emb)) continue;
      if (g.kind == RelKind::LtO && env.cited_lt(xc->arg, yc->arg))
        return rule_ok();
      if (g.kind == RelKind::LeO && env.cited_le(xc->arg, yc->arg))
        return rule_ok();
    }
  }
  return rule_fail("no monotonicity instance matches");
}

// e(a) < e(b) gives a < b
inline std::optional<std::string> mono_rev(StepEnv& env) {
  const Relation& g = env.goal;
  if (g.kind != RelKind::LtO) return rule_fail("mono_rev proves <");
  for (const Fact* p : env.premises) {
    if (p->rel.kind != RelKind::LtO) continue;
    for (const OrdPtr& pc : env.mates(p->rel.o1)) {
      if (pc->kind != OrdKind::AppO) continue;
      for (const OrdPtr& qc : env.mates(p->rel.o2)) {
        if (qc->kind != OrdKind::AppO) continue;
        if (!env.eq(pc->emb, qc->emb)) continue;
        if (env.eq(pc->arg, g.o1) && env.eq(qc->arg, g.o2)) return rule_ok();
      }
    }
  }
  return rule_fail("no cited e(a) < e(b) matches");
}

// elementarity transport: R(x, y) gives R(push(e,x), push(e,y))
inline std::optional<std::string> transport(StepEnv& env) {
  const Relation& g = env.goal;
  EmbPtr e = env.with.emb("e");
  if (!e) return rule_fail("transport needs with e=<embedding>");
  if (g.kind != RelKind::LtO && g.kind != RelKind::LeO &&
      g.kind != RelKind::EqO)
    return rule_fail("transport proves an ordinal relation");
  for (const Fact* p : env.premises) {
    if (p->rel.kind != g.kind) continue;
    OrdPtr px = push_ord(e, p->rel.o1);
    OrdPtr py = push_ord(e, p->rel.o2);
    if (env.eq(g.o1, px) && env.eq(g.o2, py)) return rule_ok();
  }
  return rule_fail("goal is not the cited fact pushed through e");
}

// the transported square inequality: b < e(kappa1) gives
// ej(ej(b)) < e(kappa2_5); requires the base fact (j o j)(<kappa1) < kappa2_5
inline std::optional<std::string> dagger(StepEnv& env) {
  const Relation& g = env.goal;
  if (g.kind != RelKind::LtO) return rule_fail("dagger proves <");
  TermPtr jj = Term::generator();
  OrdPtr base_lhs = Ord::sup_below(Emb::of_term(Term::compose(jj, jj)),
                                   Ord::constant("kappa1"));
  OrdPtr base_rhs = Ord::constant("kappa2_5");
  if (!env.cited_lt(base_lhs, base_rhs))
    return rule_fail("base fact (j o j)(<kappa1) < kappa2_5 not cited");
  for (const OrdPtr& yc : env.mates(g.o2)) {
    if (yc->kind != OrdKind::AppO) continue;
    if (!env.eq(yc->arg, Ord::constant("kappa2_5"))) continue;
    const EmbPtr& e = yc->emb;
    EmbPtr ej = Emb::app(e, Emb::of_term(Term::generator()));
    for (const OrdPtr& xc : env.mates(g.o1)) {
      if (xc->kind != OrdKind::AppO) continue;
      if (!env.eq(xc->emb, ej)) continue;
      for (const OrdPtr& inner : env.mates(xc->arg)) {
        if (inner->kind != OrdKind::AppO) continue;
        if (!env.eq(inner->emb, ej)) continue;
        const OrdPtr& beta = inner->arg;
        if (env.cited_lt(beta, Ord::app(e, Ord::constant("kappa1"))))
          return rule_ok();
      }
    }
  }
  return rule_fail("no dagger instance with cited b < e(kappa1)");
}

// crit(e) < t and t <= some member of e's critical sequence give t < e(t)
inline std::optional<std::string> abovecrit(StepEnv& env) {
  const Relation& g = env.goal;
  if (g.kind != RelKind::LtO) return rule_fail("abovecrit proves <");
  for (const OrdPtr& yc : env.mates(g.o2)) {
    if (yc->kind != OrdKind::AppO) continue;
    if (!env.eq(yc->arg, g.o1)) continue;
    const EmbPtr& e = yc->emb;
    OrdPtr c = Ord::crit(e);
    if (!env.cited_lt(c, g.o1)) continue;
    OrdPtr member = c;
    for (int m = 0; m <= 8; ++m) {
      if (m > 0 && env.cited_le(g.o1, member)) return rule_ok();
      member = Ord::app(e, member);
    }
  }
  return rule_fail("no cited bound against the critical sequence");
}

}  // namespace rules

inline const std::map<std::string, RuleCheck>& rule_catalog() {
  static const std::map<std::string, RuleCheck> catalog = {
      {"rewrite", rules::rewrite},
      {"chain", rules::chain},
      {"crit_app", rules::crit_app},
      {"app_eval", rules::app_eval},
      {"equiv_refl", rules::equiv_refl},
      {"equiv_sym", rules::equiv_sym},
      {"equiv_trans", rules::equiv_trans},
      {"equiv_cong", rules::equiv_cong},
      {"equiv_app_level", rules::equiv_app_level},
      {"equiv_id", rules::equiv_id},
      {"equiv_eval", rules::equiv_eval},
      {"equiv_weaken", rules::equiv_weaken},
      {"equiv_supbelow", rules::equiv_supbelow},
      {"approx", rules::approx},
      {"absorb", rules::absorb},
      {"absorb_special", rules::absorb_special},
      {"comp_absorb", rules::comp_absorb},
      {"comp_assoc", rules::comp_assoc},
      {"comp_apply", rules::comp_apply},
      {"app_dist_comp", rules::app_dist_comp},
      {"sup_dist", rules::sup_dist},
      {"sup_comp", rules::sup_comp},
      {"sup_le", rules::sup_le},
      {"sup_strict", rules::sup_strict},
      {"cof_strict", rules::cof_strict},
      {"below_fix", rules::below_fix},
      {"crit_moves", rules::crit_moves},
      {"incr", rules::incr},
      {"mono", rules::mono},
      {"mono_rev", rules::mono_rev},
      {"transport", rules::transport},
      {"dagger", rules::dagger},
      {"abovecrit", rules::abovecrit},
      // prelude and instantiate are handled by the session
  };
  return catalog;
}

}  // namespace lda::crit
