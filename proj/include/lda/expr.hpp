#pragma once

// Ordinal and embedding expressions of the critical-point calculus.
//
// Embeddings: the identity, terms of the one-generator algebra, free
// variables (hypothetical embeddings introduced by script hypotheses), and
// application/composition nodes.  Application of a term to a term collapses
// into the term algebra, id(x) collapses to x, and id is a two-sided unit
// for composition, so a surviving AppE/ComposeE node always involves a
// variable.  Everything is interned: structural equality is pointer
// equality.

#include <cstdint>
#include <cstring>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lda/term.hpp"

namespace lda::crit {

class Emb;
class Ord;
using EmbPtr = std::shared_ptr<const Emb>;
using OrdPtr = std::shared_ptr<const Ord>;

enum class EmbKind : std::uint8_t { Id, T, Var, AppE, ComposeE };
enum class OrdKind : std::uint8_t { Const, Crit, AppO, SupBelow };

class Emb {
 public:
  EmbKind kind;
  TermPtr term;        // T
  std::string var;     // Var
  EmbPtr left, right;  // AppE / ComposeE

  explicit Emb(EmbKind k) : kind(k) {}

  static EmbPtr id();
  static EmbPtr of_term(TermPtr t);
  static EmbPtr var_named(const std::string& name);
  static EmbPtr app(EmbPtr f, EmbPtr g);
  static EmbPtr compose(EmbPtr f, EmbPtr g);

  bool has_var() const {
    switch (kind) {
      case EmbKind::Var:
        return true;
      case EmbKind::AppE:
      case EmbKind::ComposeE:
        return left->has_var() || right->has_var();
      default:
        return false;
    }
  }

  // The pure-term form, when no Id or variable is involved.
  std::optional<TermPtr> as_term() const {
    if (kind == EmbKind::T) return term;
    return std::nullopt;  // AppE/ComposeE of terms collapse at construction
  }

 private:
  static EmbPtr intern(EmbKind k, TermPtr t, const std::string& v, EmbPtr l,
                       EmbPtr r);
};

class Ord {
 public:
  OrdKind kind;
  std::string name;  // Const
  EmbPtr emb;        // Crit / AppO / SupBelow
  OrdPtr arg;        // AppO / SupBelow

  explicit Ord(OrdKind k) : kind(k) {}

  static OrdPtr constant(const std::string& name);
  static OrdPtr crit(EmbPtr e);
  static OrdPtr app(EmbPtr e, OrdPtr o);
  static OrdPtr sup_below(EmbPtr e, OrdPtr o);

  bool has_var() const {
    switch (kind) {
      case OrdKind::Const:
        return false;
      case OrdKind::Crit:
        return emb->has_var();
      default:
        return emb->has_var() || arg->has_var();
    }
  }

 private:
  static OrdPtr intern(OrdKind k, const std::string& n, EmbPtr e, OrdPtr a);
};

// ---- interning ----

namespace detail {

struct ExprPools {
  std::mutex mu;
  std::unordered_map<std::string, EmbPtr> emb_atoms;  // "id", "v:<name>", term keyed by pointer elsewhere
  std::unordered_map<const Term*, EmbPtr> emb_terms;
  struct EKey {
    EmbKind k;
    const Emb* l;
    const Emb* r;
    bool operator==(const EKey& o) const {
      return k == o.k && l == o.l && r == o.r;
    }
  };
  struct EKeyHash {
    std::size_t operator()(const EKey& k) const {
      std::size_t h = std::size_t(k.k);
      h = h * 0x9e3779b97f4a7c15ULL + reinterpret_cast<std::uintptr_t>(k.l);
      h = h * 0x9e3779b97f4a7c15ULL + reinterpret_cast<std::uintptr_t>(k.r);
      return h;
    }
  };
  std::unordered_map<EKey, EmbPtr, EKeyHash> emb_nodes;

  std::unordered_map<std::string, OrdPtr> ord_consts;
  struct OKey {
    OrdKind k;
    const Emb* e;
    const Ord* a;
    bool operator==(const OKey& o) const {
      return k == o.k && e == o.e && a == o.a;
    }
  };
  struct OKeyHash {
    std::size_t operator()(const OKey& k) const {
      std::size_t h = std::size_t(k.k);
      h = h * 0x9e3779b97f4a7c15ULL + reinterpret_cast<std::uintptr_t>(k.e);
      h = h * 0x9e3779b97f4a7c15ULL + reinterpret_cast<std::uintptr_t>(k.a);
      return h;
    }
  };
  std::unordered_map<OKey, OrdPtr, OKeyHash> ord_nodes;

  static ExprPools& instance() {
    static ExprPools p;
    return p;
  }
};

}  // namespace detail

inline EmbPtr Emb::intern(EmbKind k, TermPtr t, const std::string& v, EmbPtr l,
                          EmbPtr r) {
  auto& pools = detail::ExprPools::instance();
  std::lock_guard<std::mutex> lock(pools.mu);
  switch (k) {
    case EmbKind::Id: {
      auto it = pools.emb_atoms.find("id");
      if (it != pools.emb_atoms.end()) return it->second;
      auto e = std::make_shared<Emb>(EmbKind::Id);
      pools.emb_atoms.emplace("id", e);
      return e;
    }
    case EmbKind::Var: {
      std::string key = "v:" + v;
      auto it = pools.emb_atoms.find(key);
      if (it != pools.emb_atoms.end()) return it->second;
      auto e = std::make_shared<Emb>(EmbKind::Var);
      e->var = v;
      pools.emb_atoms.emplace(key, e);
      return e;
    }
    case EmbKind::T: {
      auto it = pools.emb_terms.find(t.get());
      if (it != pools.emb_terms.end()) return it->second;
      auto e = std::make_shared<Emb>(EmbKind::T);
      e->term = t;
      pools.emb_terms.emplace(t.get(), e);
      return e;
    }
    default: {
      detail::ExprPools::EKey key{k, l.get(), r.get()};
      auto it = pools.emb_nodes.find(key);
      if (it != pools.emb_nodes.end()) return it->second;
      auto e = std::make_shared<Emb>(k);
      e->left = std::move(l);
      e->right = std::move(r);
      pools.emb_nodes.emplace(key, e);
      return e;
    }
  }
}

inline EmbPtr Emb::id() { return intern(EmbKind::Id, nullptr, "", nullptr, nullptr); }
inline EmbPtr Emb::of_term(TermPtr t) {
  return intern(EmbKind::T, std::move(t), "", nullptr, nullptr);
}
inline EmbPtr Emb::var_named(const std::string& name) {
  return intern(EmbKind::Var, nullptr, name, nullptr, nullptr);
}
inline EmbPtr Emb::app(EmbPtr f, EmbPtr g) {
  if (f->kind == EmbKind::Id) return g;  // id(x) = x
  if (f->kind == EmbKind::T && g->kind == EmbKind::T)
    return of_term(Term::apply(f->term, g->term));
  return intern(EmbKind::AppE, nullptr, "", std::move(f), std::move(g));
}
inline EmbPtr Emb::compose(EmbPtr f, EmbPtr g) {
  if (f->kind == EmbKind::Id) return g;
  if (g->kind == EmbKind::Id) return f;
  if (f->kind == EmbKind::T && g->kind == EmbKind::T)
    return of_term(Term::compose(f->term, g->term));
  return intern(EmbKind::ComposeE, nullptr, "", std::move(f), std::move(g));
}

inline OrdPtr Ord::intern(OrdKind k, const std::string& n, EmbPtr e, OrdPtr a) {
  auto& pools = detail::ExprPools::instance();
  std::lock_guard<std::mutex> lock(pools.mu);
  if (k == OrdKind::Const) {
    auto it = pools.ord_consts.find(n);
    if (it != pools.ord_consts.end()) return it->second;
    auto o = std::make_shared<Ord>(OrdKind::Const);
    o->name = n;
    pools.ord_consts.emplace(n, o);
    return o;
  }
  detail::ExprPools::OKey key{k, e.get(), a.get()};
  auto it = pools.ord_nodes.find(key);
  if (it != pools.ord_nodes.end()) return it->second;
  auto o = std::make_shared<Ord>(k);
  o->emb = std::move(e);
  o->arg = std::move(a);
  pools.ord_nodes.emplace(key, o);
  return o;
}

inline OrdPtr Ord::constant(const std::string& name) {
  return intern(OrdKind::Const, name, nullptr, nullptr);
}
inline OrdPtr Ord::crit(EmbPtr e) {
  return intern(OrdKind::Crit, "", std::move(e), nullptr);
}
inline OrdPtr Ord::app(EmbPtr e, OrdPtr o) {
  return intern(OrdKind::AppO, "", std::move(e), std::move(o));
}
inline OrdPtr Ord::sup_below(EmbPtr e, OrdPtr o) {
  return intern(OrdKind::SupBelow, "", std::move(e), std::move(o));
}

// The fixed constant vocabulary; kappa0..kappa4 are flagged regular.
inline const std::vector<std::string>& const_names() {
  static const std::vector<std::string> names = {
      "kappa0", "kappa1", "kappa2",   "kappa2_5", "kappa3", "kappa4",
      "sigma1", "sigma2", "mu",       "nu",       "xi"};
  return names;
}
inline bool is_const_name(const std::string& s) {
  for (const auto& n : const_names())
    if (n == s) return true;
  return false;
}
inline bool is_regular_const(const OrdPtr& o) {
  if (o->kind != OrdKind::Const) return false;
  return o->name == "kappa0" || o->name == "kappa1" || o->name == "kappa2" ||
         o->name == "kappa3" || o->name == "kappa4";
}

// ---- virtual decomposition (terms participate as app/compose trees) ----

inline std::optional<std::pair<EmbPtr, EmbPtr>> decompose_app(const EmbPtr& e) {
  if (e->kind == EmbKind::AppE) return std::make_pair(e->left, e->right);
  if (e->kind == EmbKind::T && e->term->is_apply())
    return std::make_pair(Emb::of_term(e->term->left()),
                          Emb::of_term(e->term->right()));
  return std::nullopt;
}

inline std::optional<std::pair<EmbPtr, EmbPtr>> decompose_comp(
    const EmbPtr& e) {
  if (e->kind == EmbKind::ComposeE) return std::make_pair(e->left, e->right);
  if (e->kind == EmbKind::T && e->term->is_compose())
    return std::make_pair(Emb::of_term(e->term->left()),
                          Emb::of_term(e->term->right()));
  return std::nullopt;
}

// Left application spine: e = (((f c1) c2) ... cl) gives {f, c1..cl}.
inline std::vector<EmbPtr> app_spine(const EmbPtr& e) {
  std::vector<EmbPtr> parts;
  EmbPtr cur = e;
  while (auto d = decompose_app(cur)) {
    parts.push_back(d->second);
    cur = d->first;
  }
  parts.push_back(cur);
  std::vector<EmbPtr> out(parts.rbegin(), parts.rend());
  return out;
}

// ---- elementarity transport ----
//
// push(e, x) is the image of x under e with the structure distributed:
// e(f(g)) = e(f)(e(g)), e(f o g) = e(f) o e(g), e(crit f) = crit(e(f)),
// e(f(<a)) = e(f)(<e(a)), e(id) = id; constants and generator leaves become
// direct applications.

inline EmbPtr push_emb(const EmbPtr& e, const EmbPtr& x) {
  if (x->kind == EmbKind::Id) return x;
  if (auto d = decompose_app(x))
    return Emb::app(push_emb(e, d->first), push_emb(e, d->second));
  if (auto d = decompose_comp(x))
    return Emb::compose(push_emb(e, d->first), push_emb(e, d->second));
  return Emb::app(e, x);  // generator leaf or variable
}

inline OrdPtr push_ord(const EmbPtr& e, const OrdPtr& x) {
  switch (x->kind) {
    case OrdKind::Const:
      return Ord::app(e, x);
    case OrdKind::Crit:
      return Ord::crit(push_emb(e, x->emb));
    case OrdKind::AppO:
      return Ord::app(push_emb(e, x->emb), push_ord(e, x->arg));
    case OrdKind::SupBelow:
      return Ord::sup_below(push_emb(e, x->emb), push_ord(e, x->arg));
  }
  throw std::logic_error("unreachable");
}

// ---- substitution of embedding variables ----

using Subst = std::vector<std::pair<std::string, EmbPtr>>;

inline EmbPtr subst_emb(const EmbPtr& x, const Subst& s) {
  switch (x->kind) {
    case EmbKind::Var:
      for (const auto& [name, repl] : s)
        if (name == x->var) return repl;
      return x;
    case EmbKind::AppE:
      return Emb::app(subst_emb(x->left, s), subst_emb(x->right, s));
    case EmbKind::ComposeE:
      return Emb::compose(subst_emb(x->left, s), subst_emb(x->right, s));
    default:
      return x;
  }
}

inline OrdPtr subst_ord(const OrdPtr& x, const Subst& s) {
  switch (x->kind) {
    case OrdKind::Const:
      return x;
    case OrdKind::Crit:
      return Ord::crit(subst_emb(x->emb, s));
    case OrdKind::AppO:
      return Ord::app(subst_emb(x->emb, s), subst_ord(x->arg, s));
    case OrdKind::SupBelow:
      return Ord::sup_below(subst_emb(x->emb, s), subst_ord(x->arg, s));
  }
  throw std::logic_error("unreachable");
}

inline void collect_vars(const EmbPtr& e, std::set<std::string>& out) {
  switch (e->kind) {
    case EmbKind::Var:
      out.insert(e->var);
      break;
    case EmbKind::AppE:
    case EmbKind::ComposeE:
      collect_vars(e->left, out);
      collect_vars(e->right, out);
      break;
    default:
      break;
  }
}
inline void collect_vars(const OrdPtr& o, std::set<std::string>& out) {
  switch (o->kind) {
    case OrdKind::Const:
      break;
    case OrdKind::Crit:
      collect_vars(o->emb, out);
      break;
    default:
      collect_vars(o->emb, out);
      collect_vars(o->arg, out);
      break;
  }
}

// ---- printing ----

inline std::string render_emb(const EmbPtr& e);

inline std::string render_emb_atom(const EmbPtr& e) {
  // parenthesize applications/compositions when used as an argument
  std::string s = render_emb(e);
  if (e->kind == EmbKind::Id || e->kind == EmbKind::Var) return s;
  if (e->kind == EmbKind::T && e->term->is_generator()) return s;
  return "(" + s + ")";
}

inline std::string render_emb(const EmbPtr& e) {
  switch (e->kind) {
    case EmbKind::Id:
      return "id";
    case EmbKind::Var:
      return e->var;
    case EmbKind::T:
      return render_term(e->term);
    case EmbKind::AppE:
      return render_emb_atom(e->left) + "(" + render_emb(e->right) + ")";
    case EmbKind::ComposeE:
      return render_emb(e->left) + " o " +
             (e->right->kind == EmbKind::ComposeE
                  ? "(" + render_emb(e->right) + ")"
                  : render_emb(e->right));
  }
  throw std::logic_error("unreachable");
}

inline std::string render_ord(const OrdPtr& o) {
  switch (o->kind) {
    case OrdKind::Const:
      return o->name;
    case OrdKind::Crit:
      return "crit(" + render_emb(o->emb) + ")";
    case OrdKind::AppO:
      return render_emb_atom(o->emb) + "(" + render_ord(o->arg) + ")";
    case OrdKind::SupBelow:
      return render_emb_atom(o->emb) + "(<" + render_ord(o->arg) + ")";
  }
  throw std::logic_error("unreachable");
}

// ---- conversion to table-evaluable terms ----

// Extract a pure term, treating the embedding as an element of the algebra.
inline std::optional<TermPtr> emb_term(const EmbPtr& e) {
  if (e->kind == EmbKind::T) return e->term;
  return std::nullopt;
}

// A term whose critical point is the given ordinal, when one is forced by
// crit(e1(e2)) = e1(crit(e2)):  named critical points get their defining
// representatives, applications recurse.
inline std::optional<TermPtr> rep_term(const OrdPtr& o) {
  switch (o->kind) {
    case OrdKind::Const: {
      const std::string& n = o->name;
      if (n == "kappa0") return j_sub(1);
      if (n == "kappa1") return j_sub(2);
      if (n == "kappa2") return j_sub(4);
      if (n == "kappa2_5") return j_sub(8);
      if (n == "kappa3") return j_sub(16);
      if (n == "kappa4") return Term::apply(j_sub(1), j_sub(16));
      if (n == "mu") return Term::apply(j_sub(7), j_sub(4));
      if (n == "nu") return Term::apply(j_sub(9), j_sub(16));
      if (n == "xi")
        return Term::apply(j_sub(10), Term::apply(j_sub(10), j_sub(16)));
      return std::nullopt;  // sigma1 / sigma2 are not critical points
    }
    case OrdKind::Crit:
      return emb_term(o->emb);
    case OrdKind::AppO: {
      auto f = emb_term(o->emb);
      auto r = rep_term(o->arg);
      if (f && r) return Term::apply(*f, *r);
      return std::nullopt;
    }
    case OrdKind::SupBelow:
      return std::nullopt;
  }
  return std::nullopt;
}

// ---- the unified script expression parser ----
//
// Grammar (whitespace-insensitive):
//   expr := comp ; comp := app { "o" app } ; app := primary { arg }
//   arg  := primary | "(<" expr ")"      (the latter builds e(<ord))
//   primary := "id" | "crit" "(" expr ")" | j | jN | const-name
//            | bound-name | identifier (a free embedding variable)
//            | "(" expr ")"
// An application whose argument is an ordinal is ordinal application; its
// result cannot be applied further.

struct ExprValue {
  EmbPtr emb;  // exactly one of emb/ord is set
  OrdPtr ord;
  bool is_ord() const { return ord != nullptr; }
};

class ExprParser {
 public:
  ExprParser(const std::string& text, const NameTable& names)
      : text_(text), names_(names) {}

  ExprValue parse_full() {
    ExprValue v = parse_expr();
    skip();
    if (pos_ != text_.size())
      throw ParseError("unexpected trailing input", pos_);
    return v;
  }

  // Parses one expression and stops; exposes the cursor for relation
  // parsing around it.
  ExprValue parse_expr() {
    ExprValue v = parse_app();
    while (true) {
      skip();
      if (!at_keyword("o")) break;
      pos_ += 1;
      ExprValue rhs = parse_app();
      if (v.is_ord() || rhs.is_ord())
        throw ParseError("composition needs embeddings", pos_);
      v.emb = Emb::compose(v.emb, rhs.emb);
    }
    return v;
  }

  std::size_t cursor() const { return pos_; }
  void set_cursor(std::size_t p) { pos_ = p; }
  void skip() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t'))
      ++pos_;
  }

 private:
  ExprValue parse_app() {
    ExprValue v = parse_primary();
    while (true) {
      skip();
      if (pos_ >= text_.size()) break;
      char c = text_[pos_];
      if (c == '(' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '<') {
        // e(<ord)
        if (v.is_ord()) throw ParseError("cannot apply an ordinal", pos_);
        pos_ += 2;
        ExprValue inner = parse_expr();
        expect(')');
        if (!inner.is_ord())
          throw ParseError("sup-below needs an ordinal argument", pos_);
        v.ord = Ord::sup_below(v.emb, inner.ord);
        v.emb = nullptr;
        continue;
      }
      bool arg_follows = c == '(' || c == 'j' || detail::ident_start(c);
      if (!arg_follows || at_keyword("o")) break;
      if (v.is_ord()) break;  // ordinal results take no further arguments
      ExprValue arg = parse_primary();
      if (arg.is_ord()) {
        v.ord = Ord::app(v.emb, arg.ord);
        v.emb = nullptr;
      } else {
        v.emb = Emb::app(v.emb, arg.emb);
      }
    }
    return v;
  }

  ExprValue parse_primary() {
    skip();
    if (pos_ >= text_.size()) throw ParseError("expected expression", pos_);
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      ExprValue v = parse_expr();
      expect(')');
      return v;
    }
    if (c == 'j') {
      std::size_t start = pos_;
      ++pos_;
      std::uint64_t n = 0;
      bool digits = false;
      while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') {
        n = n * 10 + (text_[pos_] - '0');
        ++pos_;
        digits = true;
        if (n > 100000) throw ParseError("j index too large", start);
      }
      if (digits && n == 0) throw ParseError("j0 is undefined", start);
      return {Emb::of_term(digits ? j_sub(n) : Term::generator()), nullptr};
    }
    if (detail::ident_start(c)) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && detail::ident_char(text_[pos_])) ++pos_;
      std::string name = text_.substr(start, pos_ - start);
      if (name == "id") return {Emb::id(), nullptr};
      if (name == "crit") {
        skip();
        expect('(');
        ExprValue inner = parse_expr();
        expect(')');
        if (inner.is_ord())
          throw ParseError("crit needs an embedding", start);
        return {nullptr, Ord::crit(inner.emb)};
      }
      if (is_const_name(name)) return {nullptr, Ord::constant(name)};
      if (const TermPtr* bound = names_.lookup(name))
        return {Emb::of_term(*bound), nullptr};
      return {Emb::var_named(name), nullptr};  // free embedding variable
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  bool at_keyword(const char* kw) {
    skip();
    std::size_t len = std::strlen(kw);
    if (text_.compare(pos_, len, kw) != 0) return false;
    std::size_t end = pos_ + len;
    if (end < text_.size() && detail::ident_char(text_[end])) return false;
    return true;
  }
  void expect(char c) {
    skip();
    if (pos_ >= text_.size() || text_[pos_] != c)
      throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  const NameTable& names_;
};

}  // namespace lda::crit
