#pragma once

// Terms of the free left-distributive algebra on one generator j, with a
// composition operation.  Terms are immutable and hash-consed, so structural
// equality is pointer equality and terms are safe to share across threads.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lda {

class Term;
using TermPtr = std::shared_ptr<const Term>;

enum class TermKind : std::uint8_t { Generator, Apply, Compose };

class Term {
 public:
  TermKind kind() const { return kind_; }
  const TermPtr& left() const { return left_; }
  const TermPtr& right() const { return right_; }

  bool is_generator() const { return kind_ == TermKind::Generator; }
  bool is_apply() const { return kind_ == TermKind::Apply; }
  bool is_compose() const { return kind_ == TermKind::Compose; }

  // Number of generator leaves.
  std::size_t leaves() const { return leaves_; }

  static TermPtr generator();
  static TermPtr apply(TermPtr l, TermPtr r);
  static TermPtr compose(TermPtr l, TermPtr r);

 private:
  Term(TermKind k, TermPtr l, TermPtr r)
      : kind_(k), left_(std::move(l)), right_(std::move(r)) {
    leaves_ = kind_ == TermKind::Generator
                  ? 1
                  : left_->leaves() + right_->leaves();
  }
  static TermPtr intern(TermKind k, TermPtr l, TermPtr r);

  TermKind kind_;
  TermPtr left_, right_;
  std::size_t leaves_;
};

inline TermPtr Term::intern(TermKind k, TermPtr l, TermPtr r) {
  struct Key {
    TermKind k;
    const Term* l;
    const Term* r;
    bool operator==(const Key& o) const {
      return k == o.k && l == o.l && r == o.r;
    }
  };
  struct KeyHash {
    std::size_t operator()(const Key& key) const {
      std::size_t h = static_cast<std::size_t>(key.k);
      h = h * 0x9e3779b97f4a7c15ULL + reinterpret_cast<std::uintptr_t>(key.l);
      h = h * 0x9e3779b97f4a7c15ULL + reinterpret_cast<std::uintptr_t>(key.r);
      return h;
    }
  };
  static std::mutex mu;
  static std::unordered_map<Key, TermPtr, KeyHash> pool;
  std::lock_guard<std::mutex> lock(mu);
  Key key{k, l.get(), r.get()};
  auto it = pool.find(key);
  if (it != pool.end()) return it->second;
  TermPtr t(new Term(k, std::move(l), std::move(r)));
  pool.emplace(key, t);
  return t;
}

inline TermPtr Term::generator() {
  static TermPtr g = intern(TermKind::Generator, nullptr, nullptr);
  return g;
}

inline TermPtr Term::apply(TermPtr l, TermPtr r) {
  return intern(TermKind::Apply, std::move(l), std::move(r));
}

inline TermPtr Term::compose(TermPtr l, TermPtr r) {
  return intern(TermKind::Compose, std::move(l), std::move(r));
}

// j_1 = j, j_{n+1} = j_n(j).
inline TermPtr j_sub(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("j_sub: index must be >= 1");
  TermPtr t = Term::generator();
  for (std::uint64_t i = 1; i < n; ++i) t = Term::apply(t, Term::generator());
  return t;
}

// Named abbreviations.  Identifiers must not start with 'j' (which always
// lexes as the generator) and must not be the composition keyword "o".
class NameTable {
 public:
  void bind(const std::string& name, TermPtr t) {
    if (name.empty() || name == "o" || name[0] == 'j')
      throw std::invalid_argument("NameTable: unbindable name '" + name + "'");
    bindings_[name] = std::move(t);
  }
  const TermPtr* lookup(const std::string& name) const {
    auto it = bindings_.find(name);
    return it == bindings_.end() ? nullptr : &it->second;
  }

  // k = j_10, k' = j_10(j_11), k'' = j_9(j_14); kp/kpp are shell-safe
  // spellings of the primed names.
  static NameTable prelude() {
    NameTable t;
    TermPtr k = j_sub(10);
    TermPtr kp = Term::apply(j_sub(10), j_sub(11));
    TermPtr kpp = Term::apply(j_sub(9), j_sub(14));
    t.bind("k", k);
    t.bind("k'", kp);
    t.bind("kp", kp);
    t.bind("k''", kpp);
    t.bind("kpp", kpp);
    return t;
  }

 private:
  std::map<std::string, TermPtr> bindings_;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)),
        position(pos) {}
  std::size_t position;
};

namespace detail {

struct TermLexer {
  const std::string& text;
  std::size_t pos = 0;

  explicit TermLexer(const std::string& s) : text(s) {}

  void skip_ws() {
    while (pos < text.size() &&
           (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' ||
            text[pos] == '\r'))
      ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
};

inline bool ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
inline bool ident_char(char c) {
  return ident_start(c) || (c >= '0' && c <= '9') || c == '\'';
}

}  // namespace detail

// Grammar:
//   expr := comp ; comp := app { "o" app } ; app := atom { atom }
//   atom := "j" | "j" digits | name | "(" expr ")"
// Juxtaposition is application and associates to the left; "o" binds looser.
class TermParser {
 public:
  TermParser(const std::string& text, const NameTable& names)
      : lex_(text), names_(names) {}

  TermPtr parse() {
    TermPtr t = parse_comp();
    if (!lex_.eof())
      throw ParseError("unexpected trailing input", lex_.pos);
    return t;
  }

 private:
  TermPtr parse_comp() {
    TermPtr t = parse_app();
    while (!lex_.eof() && at_compose()) {
      consume_compose();
      t = Term::compose(t, parse_app());
    }
    return t;
  }

  TermPtr parse_app() {
    TermPtr t = parse_atom(true);
    while (!lex_.eof() && !at_compose()) {
      char c = lex_.peek();
      if (c == ')') break;
      t = Term::apply(t, parse_atom(true));
    }
    return t;
  }

  bool at_compose() {
    lex_.skip_ws();
    std::size_t p = lex_.pos;
    if (p < lex_.text.size() && lex_.text[p] == 'o') {
      // "o" must stand alone; "o" followed by an identifier char is a name.
      if (p + 1 >= lex_.text.size() || !detail::ident_char(lex_.text[p + 1]))
        return true;
    }
    return false;
  }
  void consume_compose() {
    lex_.skip_ws();
    ++lex_.pos;
  }

  TermPtr parse_atom(bool required) {
    lex_.skip_ws();
    std::size_t p = lex_.pos;
    if (p >= lex_.text.size()) {
      if (required) throw ParseError("expected a term", p);
      return nullptr;
    }
    char c = lex_.text[p];
    if (c == '(') {
      ++lex_.pos;
      TermPtr t = parse_comp();
      if (lex_.peek() != ')') throw ParseError("expected ')'", lex_.pos);
      ++lex_.pos;
      return t;
    }
    if (c == 'j') {
      ++lex_.pos;
      std::uint64_t n = 0;
      bool digits = false;
      while (lex_.pos < lex_.text.size() && lex_.text[lex_.pos] >= '0' &&
             lex_.text[lex_.pos] <= '9') {
        n = n * 10 + (lex_.text[lex_.pos] - '0');
        ++lex_.pos;
        digits = true;
        if (n > 100000) throw ParseError("j index too large", p);
      }
      if (!digits) return Term::generator();
      if (n == 0) throw ParseError("j0 is undefined", p);
      return j_sub(n);
    }
    if (detail::ident_start(c)) {
      std::size_t start = p;
      while (lex_.pos < lex_.text.size() &&
             detail::ident_char(lex_.text[lex_.pos]))
        ++lex_.pos;
      std::string name = lex_.text.substr(start, lex_.pos - start);
      const TermPtr* bound = names_.lookup(name);
      if (!bound) throw ParseError("unknown name '" + name + "'", start);
      return *bound;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", p);
  }

  detail::TermLexer lex_;
  const NameTable& names_;
};

inline TermPtr parse_term(const std::string& text, const NameTable& names) {
  return TermParser(text, names).parse();
}

inline TermPtr parse_term(const std::string& text) {
  return parse_term(text, NameTable::prelude());
}

// Minimal-parenthesis rendering; parse_term(render_term(t)) == t.
inline void render_term_into(const TermPtr& t, std::string& out) {
  switch (t->kind()) {
    case TermKind::Generator:
      out += 'j';
      return;
    case TermKind::Apply: {
      if (t->left()->is_compose()) {
        out += '(';
        render_term_into(t->left(), out);
        out += ')';
      } else {
        render_term_into(t->left(), out);
      }
      if (t->right()->is_generator()) {
        render_term_into(t->right(), out);
      } else {
        out += '(';
        render_term_into(t->right(), out);
        out += ')';
      }
      return;
    }
    case TermKind::Compose: {
      render_term_into(t->left(), out);
      out += " o ";
      if (t->right()->is_compose()) {
        out += '(';
        render_term_into(t->right(), out);
        out += ')';
      } else {
        render_term_into(t->right(), out);
      }
      return;
    }
  }
}

inline std::string render_term(const TermPtr& t) {
  std::string out;
  render_term_into(t, out);
  return out;
}

}  // namespace lda
