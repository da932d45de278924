#pragma once

// Typed assertions of the critical-point calculus with justification
// tracking, and the order oracle over a set of proven facts.

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "lda/cc.hpp"
#include "lda/expr.hpp"

namespace lda::crit {

enum class RelKind : std::uint8_t { EqO, LtO, LeO, EquivAt, EqE };

struct Relation {
  RelKind kind;
  OrdPtr o1, o2;  // EqO / LtO / LeO
  EmbPtr e1, e2;  // EquivAt / EqE
  OrdPtr at;      // EquivAt level

  bool has_var() const {
    switch (kind) {
      case RelKind::EqO:
      case RelKind::LtO:
      case RelKind::LeO:
        return o1->has_var() || o2->has_var();
      case RelKind::EqE:
        return e1->has_var() || e2->has_var();
      case RelKind::EquivAt:
        return e1->has_var() || e2->has_var() || at->has_var();
    }
    return false;
  }

  std::set<std::string> vars() const {
    std::set<std::string> out;
    switch (kind) {
      case RelKind::EqO:
      case RelKind::LtO:
      case RelKind::LeO:
        collect_vars(o1, out);
        collect_vars(o2, out);
        break;
      case RelKind::EqE:
        collect_vars(e1, out);
        collect_vars(e2, out);
        break;
      case RelKind::EquivAt:
        collect_vars(e1, out);
        collect_vars(e2, out);
        collect_vars(at, out);
        break;
    }
    return out;
  }

  Relation substituted(const Subst& s) const {
    Relation r = *this;
    if (o1) r.o1 = subst_ord(o1, s);
    if (o2) r.o2 = subst_ord(o2, s);
    if (e1) r.e1 = subst_emb(e1, s);
    if (e2) r.e2 = subst_emb(e2, s);
    if (at) r.at = subst_ord(at, s);
    return r;
  }

  std::string render() const {
    switch (kind) {
      case RelKind::EqO:
        return render_ord(o1) + " = " + render_ord(o2);
      case RelKind::LtO:
        return render_ord(o1) + " < " + render_ord(o2);
      case RelKind::LeO:
        return render_ord(o1) + " <= " + render_ord(o2);
      case RelKind::EqE:
        return render_emb(e1) + " = " + render_emb(e2);
      case RelKind::EquivAt:
        return render_emb(e1) + " ~[" + render_ord(at) + "] " +
               render_emb(e2);
    }
    return "?";
  }

  static Relation eq_o(OrdPtr a, OrdPtr b) {
    return {RelKind::EqO, std::move(a), std::move(b), nullptr, nullptr,
            nullptr};
  }
  static Relation lt_o(OrdPtr a, OrdPtr b) {
    return {RelKind::LtO, std::move(a), std::move(b), nullptr, nullptr,
            nullptr};
  }
  static Relation le_o(OrdPtr a, OrdPtr b) {
    return {RelKind::LeO, std::move(a), std::move(b), nullptr, nullptr,
            nullptr};
  }
  static Relation eq_e(EmbPtr a, EmbPtr b) {
    return {RelKind::EqE, nullptr, nullptr, std::move(a), std::move(b),
            nullptr};
  }
  static Relation equiv_at(EmbPtr a, EmbPtr b, OrdPtr level) {
    return {RelKind::EquivAt, nullptr, nullptr, std::move(a), std::move(b),
            std::move(level)};
  }
};

struct Fact {
  std::string id;
  Relation rel;
  enum Origin { Prelude, Hypothesis, Derived } origin = Derived;
  std::string rule;
  std::vector<std::string> premises;
  std::string script;
  // Depends (transitively) on a ground hypothesis: true for paper-claimed
  // facts and anything built on them; such facts are reported as "claimed"
  // and excluded from the proven order.
  bool tainted = false;
  bool generic = false;  // mentions an embedding variable

  std::string status() const {
    if (origin == Prelude) return "prelude";
    if (tainted) return "claimed";
    if (generic) return "generic";
    if (origin == Hypothesis) return "hypothesis";
    return "proven";
  }
};

class FactStore {
 public:
  bool contains(const std::string& id) const { return index_.count(id) > 0; }
  const Fact* find(const std::string& id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &facts_[it->second];
  }
  const Fact& add(Fact f) {
    if (contains(f.id))
      throw std::invalid_argument("duplicate fact id '" + f.id + "'");
    index_.emplace(f.id, facts_.size());
    facts_.push_back(std::move(f));
    return facts_.back();
  }
  const std::deque<Fact>& all() const { return facts_; }

  // Hypothesis facts in the justification closure of `id`.
  std::vector<const Fact*> hypothesis_closure(const std::string& id) const {
    std::vector<const Fact*> out;
    std::set<std::string> seen;
    std::vector<std::string> stack = {id};
    while (!stack.empty()) {
      std::string cur = stack.back();
      stack.pop_back();
      if (!seen.insert(cur).second) continue;
      const Fact* f = find(cur);
      if (!f) continue;
      if (f->origin == Fact::Hypothesis) out.push_back(f);
      for (const auto& p : f->premises) stack.push_back(p);
    }
    return out;
  }

 private:
  std::deque<Fact> facts_;  // stable addresses
  std::unordered_map<std::string, std::size_t> index_;
};

// Transitive order over a chosen set of facts: congruence-closes the
// equalities, then searches the strict/nonstrict edge graph.  Never invents
// comparisons.
class OrderOracle {
 public:
  enum Verdict { LT, LE, EQ, GE, GT, UNKNOWN };

  explicit OrderOracle(const std::vector<const Fact*>& facts) {
    for (const Fact* f : facts) {
      switch (f->rel.kind) {
        case RelKind::EqO:
          cc_.merge(f->rel.o1, f->rel.o2);
          break;
        case RelKind::LtO:
          edges_.push_back({f->rel.o1, f->rel.o2, true});
          break;
        case RelKind::LeO:
          edges_.push_back({f->rel.o1, f->rel.o2, false});
          break;
        default:
          break;
      }
    }
  }

  Verdict verdict(const OrdPtr& a, const OrdPtr& b) {
    if (cc_.eq(a, b)) return EQ;
    auto ab = reach(a, b);
    auto ba = reach(b, a);
    if (ab.first && ba.first) return EQ;  // mutual <=: antisymmetry
    if (ab.first) return ab.second ? LT : LE;
    if (ba.first) return ba.second ? GT : GE;
    return UNKNOWN;
  }

  // A strict cycle falsifies irreflexivity of the proven order.
  bool has_strict_cycle() {
    for (const Edge& e : edges_) {
      if (!e.strict) continue;
      if (reach(e.to, e.from).first) return true;
    }
    return false;
  }

  static std::string verdict_str(Verdict v) {
    switch (v) {
      case LT: return "<";
      case LE: return "<=";
      case EQ: return "=";
      case GE: return ">=";
      case GT: return ">";
      default: return "?";
    }
  }

 private:
  struct Edge {
    OrdPtr from, to;
    bool strict;
  };

  // reachable, and reachable-with-a-strict-edge
  std::pair<bool, bool> reach(const OrdPtr& from, const OrdPtr& to) {
    // small graphs: plain BFS over cc classes with strictness flag
    std::map<std::pair<bool, const void*>, bool> seen;
    std::vector<std::pair<OrdPtr, bool>> queue = {{from, false}};
    bool found = false, found_strict = false;
    std::vector<std::pair<OrdPtr, bool>> visited;
    auto mark = [&](const OrdPtr& o, bool strict) {
      for (auto& [vo, vs] : visited)
        if (cc_.eq(vo, o) && vs == strict) return false;
      visited.push_back({o, strict});
      return true;
    };
    mark(from, false);
    while (!queue.empty()) {
      auto [cur, strict] = queue.back();
      queue.pop_back();
      if (cc_.eq(cur, to)) {
        found = true;
        if (strict) {
          found_strict = true;
          break;
        }
        continue;
      }
      for (const Edge& e : edges_) {
        if (!cc_.eq(e.from, cur)) continue;
        bool s = strict || e.strict;
        if (mark(e.to, s)) queue.push_back({e.to, s});
      }
    }
    return {found, found_strict};
  }

  CongruenceClosure cc_;
  std::vector<Edge> edges_;
};

}  // namespace lda::crit
