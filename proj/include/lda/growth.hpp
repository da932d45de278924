#pragma once

// Exact and symbolic arithmetic for the counting functions Ct_0..Ct_10,
// their compositions Ctfunc, and the Ackermann-Peter hierarchy F_k.
//
// Values are exact big integers while they fit the bit budget and degrade
// to symbolic expressions above it.  Comparisons are decided by a closed
// lemma library; every Proven verdict carries a replayable trace.
//
// Lemma library (comparisons never use anything outside this list):
//   num          exact comparison of evaluated values
//   floor        certain lower bounds of symbolic values vs exact numbers
//   refl/offset  integer arithmetic on +c tails
//   succ         a < b implies a+1 <= b on integers
//   mono         F_k, Ct_N, 2^x strictly increasing in the argument
//   mono-k       F_k(m) <= F_{k+1}(m), strict once the level differs
//   unfold       F_{k+1}(m+1) = F_k(F_{k+1}(m)), F_{k+1}(0) = F_k(1),
//                and the Ct_N defining recursions
//   closed       F_0 = +1, F_1 = +2, F_3(m) = 2^{m+3}-3, Ct_N(m) = 2^m
//                for N in {0,1,3,6,8}
//   pow-step     2^{F_4(x)+3} = F_4(x+1)+3
//   exp-off      2^{v+d} >= 2^v + d for d >= 0
//   exp-lin      x + d <= 2^w when x <= w, d <= w
//   grow         F_k(x) >= x+1, 2^x >= x+1, Ct_N(x) >= x
//   ct2-f4       Ct_2(m+4) >= F_4(m)+3            (induction-verified)
//   row-N        Ct_N(m) >= F_i(m-d)+4, rows 2,4,5,7 per the construction
//                data table                        (induction-verified)
//   sum          bounds on a+b from bounds on the parts
//   hyp          chaining through supplied assumptions
//   trans        transitivity via lemma-generated midpoints

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cstdint>
#include <cstring>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace lda::growth {

using Big = boost::multiprecision::cpp_int;

enum class EK : std::uint8_t { Num, Var, F, Ct, Exp2, Plus, Add };

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable, interned per engine: equal structure means equal pointer.
class Expr {
 public:
  EK kind;
  int idx = 0;        // F: k, Ct: N
  Big num;            // Num value
  long long off = 0;  // Plus offset
  Big var_min = 0;    // Var: certain lower bound of the variable
  ExprPtr x, y;

  explicit Expr(EK k) : kind(k) {}
};

enum class Rel : std::uint8_t { EQ, LE, LT };

struct Verdict {
  enum Kind { ProvenLT, ProvenLE, ProvenEQ, ProvenGT, Unknown } kind = Unknown;
  std::vector<std::string> trace;

  bool proven() const { return kind != Unknown; }
  bool at_least() const { return kind == ProvenGT || kind == ProvenEQ; }
  std::string kind_str() const {
    switch (kind) {
      case ProvenLT: return "ProvenLT";
      case ProvenLE: return "ProvenLE";
      case ProvenEQ: return "ProvenEQ";
      case ProvenGT: return "ProvenGT";
      default: return "Unknown";
    }
  }
};

struct CtParams {
  // Initial values of the non-doubling columns; everything else is pinned
  // by the recursions.  Injectable so fault tests can corrupt one.
  Big ct2_0 = 0;
  Big ct4_0 = 0, ct4_1 = 8;
  Big ct5_0 = 0, ct5_1 = 2;
  Big ct7_0 = 0;
  Big ct9_0 = 0;
  Big ct10_0 = 0;
};

struct Budget {
  std::uint64_t bits = std::uint64_t(1) << 20;
};

inline bool is_doubling_ct(int N) {
  return N == 0 || N == 1 || N == 3 || N == 6 || N == 8;
}

struct StepResult {
  std::string id;
  enum Status { Pass, Claimed, Fail } status = Fail;
  std::vector<std::string> trace;
};

class Engine {
 public:
  explicit Engine(Budget budget = {}, CtParams params = {})
      : budget_(budget), params_(std::move(params)) {}

  // ---------- expression constructors (normalizing, interning) ----------

  ExprPtr num(Big v) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = num_pool_.find(v);
    if (it != num_pool_.end()) return it->second;
    auto e = std::make_shared<Expr>(EK::Num);
    e->num = v;
    num_pool_.emplace(std::move(v), e);
    return e;
  }
  // Variables are deliberately not pooled: distinct calls make distinct
  // variables.
  ExprPtr variable(Big min_value) const {
    auto e = std::make_shared<Expr>(EK::Var);
    e->var_min = std::move(min_value);
    return e;
  }
  ExprPtr plus(ExprPtr a, long long c) const {
    if (a->kind == EK::Num) return num(a->num + c);
    if (a->kind == EK::Plus) {
      long long merged = a->off + c;
      ExprPtr base = a->x;
      if (merged == 0) return base;
      return node(EK::Plus, 0, merged, base, nullptr);
    }
    if (c == 0) return a;
    return node(EK::Plus, 0, c, std::move(a), nullptr);
  }
  ExprPtr add(ExprPtr a, ExprPtr b) const {
    if (a->kind == EK::Num && b->kind == EK::Num) return num(a->num + b->num);
    return node(EK::Add, 0, 0, std::move(a), std::move(b));
  }
  ExprPtr exp2(ExprPtr a) const {
    if (a->kind == EK::Num && a->num >= 0 && a->num <= Big(budget_.bits))
      return num(Big(1) << a->num.convert_to<std::uint64_t>());
    // pow-step: 2^{F_4(x)+3} = F_4(x+1)+3
    if (a->kind == EK::Plus && a->off == 3 && a->x->kind == EK::F &&
        a->x->idx == 4)
      return plus(f(4, plus(a->x->x, 1)), 3);
    return node(EK::Exp2, 0, 0, std::move(a), nullptr);
  }
  ExprPtr f(int k, ExprPtr m) const {
    if (k < 0) throw std::invalid_argument("F: negative level");
    if (k == 0) return plus(m, 1);
    if (k == 1) return plus(m, 2);
    if (k == 3) return plus(exp2(plus(m, 3)), -3);
    if (m->kind == EK::Num && m->num >= 0) {
      if (auto v = eval_f(k, m->num)) return num(*v);
      if (k >= 5 && m->num <= 4) {
        if (m->num == 0) return f(k - 1, num(1));
        return f(k - 1, f(k, num(m->num - 1)));
      }
    }
    return node(EK::F, k, 0, std::move(m), nullptr);
  }
  ExprPtr ct(int N, ExprPtr m) const {
    if (N < 0 || N > 10)
      throw std::invalid_argument("Ct index out of range 0..10");
    if (is_doubling_ct(N)) return exp2(std::move(m));
    if (m->kind == EK::Num && m->num >= 0)
      if (auto v = eval_ct(N, m->num)) return num(*v);
    return node(EK::Ct, N, 0, std::move(m), nullptr);
  }
  // Ctfunc NM(n) = Ct_N(Ct_{N+1}(...Ct_{M-1}(n)...)), 0 <= N < M <= 11.
  ExprPtr ctfunc(int N, int M, ExprPtr m) const {
    if (!(0 <= N && N < M && M <= 11))
      throw std::invalid_argument("Ctfunc requires 0 <= N < M <= 11");
    ExprPtr e = std::move(m);
    for (int i = M - 1; i >= N; --i) e = ct(i, e);
    return e;
  }

  const CtParams& params() const { return params_; }
  const Budget& budget() const { return budget_; }

  // ---------- exact evaluation ----------

  // Exact value when it fits the budget; nullopt = degraded to symbolic.
  std::optional<Big> eval(const ExprPtr& e) const {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = eval_memo_.find(e.get());
      if (it != eval_memo_.end()) return it->second.second;
    }
    std::optional<Big> v = eval_raw(e);
    std::lock_guard<std::mutex> lock(mu_);
    eval_memo_.emplace(e.get(), std::make_pair(e, v));
    return v;
  }

  std::optional<Big> pow2(const Big& x) const {
    if (x < 0 || x > Big(budget_.bits)) return std::nullopt;
    return Big(1) << x.convert_to<std::uint64_t>();
  }

  std::optional<Big> eval_f(int k, const Big& m) const {
    if (m < 0) return std::nullopt;
    if (k == 0) return m + 1;
    if (k == 1) return m + 2;
    if (k == 2) return 2 * m + 3;
    if (k == 3) {
      auto p = pow2(m + 3);
      if (!p) return std::nullopt;
      return *p - 3;
    }
    if (m > 64) return std::nullopt;  // would overflow long before this
    auto v = eval_f(k - 1, Big(1));   // F_k(0) = F_{k-1}(1)
    for (Big i = 0; i < m && v; ++i) v = eval_f(k - 1, *v);
    return v;
  }

  std::optional<Big> eval_ct(int N, const Big& m) const {
    if (m < 0) return std::nullopt;
    if (is_doubling_ct(N)) return pow2(m);
    if (m > 4096) return std::nullopt;
    std::uint64_t steps = m.convert_to<std::uint64_t>();
    switch (N) {
      case 2: {
        Big v = params_.ct2_0;
        for (std::uint64_t i = 0; i < steps; ++i) {
          auto p = pow2(v);
          if (!p) return std::nullopt;
          v += *p;
        }
        return v;
      }
      case 4: {
        if (steps == 0) return params_.ct4_0;
        Big v = params_.ct4_1;
        for (std::uint64_t i = 1; i < steps; ++i) {
          auto inc = chain_value(1, 4, v);
          if (!inc) return std::nullopt;
          v += *inc - 1;
        }
        return v;
      }
      case 5: {
        if (steps == 0) return params_.ct5_0;
        Big v = params_.ct5_1;
        for (std::uint64_t i = 1; i < steps; ++i) {
          auto inc = chain_value(3, 5, v);
          if (!inc) return std::nullopt;
          v += *inc;
        }
        return v;
      }
      case 7: {
        Big v = params_.ct7_0;
        for (std::uint64_t i = 0; i < steps; ++i) {
          auto inc = chain_value(1, 7, v);
          if (!inc) return std::nullopt;
          v += *inc - 8;
        }
        return v;
      }
      case 9: {
        if (steps == 0) return params_.ct9_0;
        auto c16 = chain_value(1, 6, Big(1));
        if (!c16) return std::nullopt;
        auto first = chain_value(1, 9, *c16 - 8);
        if (!first) return std::nullopt;
        Big v = *first - 8;
        for (std::uint64_t i = 1; i < steps; ++i) {
          auto inc = chain_value(1, 9, v);
          if (!inc) return std::nullopt;
          v += *inc - *c16;
        }
        return v;
      }
      case 10: {
        Big v = params_.ct10_0;
        for (std::uint64_t i = 0; i < steps; ++i) {
          auto inc = chain_value(3, 10, v);
          if (!inc) return std::nullopt;
          v += *inc;
        }
        return v;
      }
      default:
        return std::nullopt;
    }
  }

  // ---------- rendering ----------

  static std::string render(const ExprPtr& e) {
    std::ostringstream os;
    render_into(e, os);
    return os.str();
  }

  // ---------- comparison ----------

  struct Assumption {
    Rel rel;  // lhs rel rhs
    ExprPtr lhs, rhs;
  };
  using Assumptions = std::vector<Assumption>;
  using Trace = std::vector<std::string>;

  Verdict compare(const ExprPtr& a, const ExprPtr& b,
                  const Assumptions& assumptions = {}) const {
    Ctx ctx(assumptions);
    if (auto t = prove(Rel::EQ, a, b, ctx, 0))
      return {Verdict::ProvenEQ, std::move(*t)};
    if (auto t = prove(Rel::LT, a, b, ctx, 0))
      return {Verdict::ProvenLT, std::move(*t)};
    if (auto t = prove(Rel::LT, b, a, ctx, 0))
      return {Verdict::ProvenGT, std::move(*t)};
    if (auto t = prove(Rel::LE, a, b, ctx, 0))
      return {Verdict::ProvenLE, std::move(*t)};
    return {};
  }

  std::optional<Trace> prove_rel(Rel rel, const ExprPtr& a, const ExprPtr& b,
                                 const Assumptions& assumptions = {}) const {
    Ctx ctx(assumptions);
    return prove(rel, a, b, ctx, 0);
  }

  // ---------- the verification suites ----------

  std::vector<StepResult> verify_section4_chain() const;
  std::vector<StepResult> verify_induction_lemmas() const;

 private:
  struct NodeKey {
    EK kind;
    int idx;
    long long off;
    const Expr* x;
    const Expr* y;
    bool operator==(const NodeKey& o) const {
      return kind == o.kind && idx == o.idx && off == o.off && x == o.x &&
             y == o.y;
    }
  };
  struct NodeKeyHash {
    std::size_t operator()(const NodeKey& k) const {
      std::size_t h = std::size_t(k.kind) * 31 + std::size_t(k.idx);
      h = h * 0x9e3779b97f4a7c15ULL + std::size_t(k.off);
      h = h * 0x9e3779b97f4a7c15ULL + reinterpret_cast<std::uintptr_t>(k.x);
      h = h * 0x9e3779b97f4a7c15ULL + reinterpret_cast<std::uintptr_t>(k.y);
      return h;
    }
  };

  ExprPtr node(EK kind, int idx, long long off, ExprPtr x, ExprPtr y) const {
    std::lock_guard<std::mutex> lock(mu_);
    NodeKey key{kind, idx, off, x.get(), y.get()};
    auto it = node_pool_.find(key);
    if (it != node_pool_.end()) return it->second;
    auto e = std::make_shared<Expr>(kind);
    e->idx = idx;
    e->off = off;
    e->x = std::move(x);
    e->y = std::move(y);
    node_pool_.emplace(key, e);
    return e;
  }

  std::optional<Big> chain_value(int N, int M, const Big& v) const {
    // Evaluate Ct_N(..Ct_{M-1}(v)..) without building expression nodes.
    Big cur = v;
    for (int i = M - 1; i >= N; --i) {
      auto r = eval_ct(i, cur);
      if (!r) return std::nullopt;
      cur = *r;
    }
    return cur;
  }

  std::optional<Big> eval_raw(const ExprPtr& e) const {
    switch (e->kind) {
      case EK::Num:
        return e->num;
      case EK::Var:
        return std::nullopt;
      case EK::Plus: {
        auto v = eval(e->x);
        if (!v) return std::nullopt;
        return *v + e->off;
      }
      case EK::Add: {
        auto a = eval(e->x), b = eval(e->y);
        if (!a || !b) return std::nullopt;
        return *a + *b;
      }
      case EK::Exp2: {
        auto v = eval(e->x);
        if (!v) return std::nullopt;
        return pow2(*v);
      }
      case EK::F: {
        auto v = eval(e->x);
        if (!v) return std::nullopt;
        return eval_f(e->idx, *v);
      }
      case EK::Ct: {
        auto v = eval(e->x);
        if (!v) return std::nullopt;
        return eval_ct(e->idx, *v);
      }
    }
    return std::nullopt;
  }

  static void render_into(const ExprPtr& e, std::ostringstream& os) {
    switch (e->kind) {
      case EK::Num: {
        std::string s = e->num.str();
        if (s.size() > 40)
          os << s.substr(0, 12) << "...(" << s.size() << " digits)";
        else
          os << s;
        return;
      }
      case EK::Var:
        os << "m[>=" << e->var_min.str() << "]";
        return;
      case EK::F:
        os << "F[" << e->idx << "](";
        render_into(e->x, os);
        os << ")";
        return;
      case EK::Ct:
        os << "Ct[" << e->idx << "](";
        render_into(e->x, os);
        os << ")";
        return;
      case EK::Exp2:
        os << "2^(";
        render_into(e->x, os);
        os << ")";
        return;
      case EK::Plus:
        render_into(e->x, os);
        os << (e->off >= 0 ? "+" : "") << e->off;
        return;
      case EK::Add:
        os << "(";
        render_into(e->x, os);
        os << " + ";
        render_into(e->y, os);
        os << ")";
        return;
    }
  }

  static bool same(const ExprPtr& a, const ExprPtr& b) {
    return a.get() == b.get();
  }

  static Big huge_floor() { return Big(1) << 512; }

  // Certain lower bound of the value of e.
  Big floor_bound(const ExprPtr& e) const {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = floor_memo_.find(e.get());
      if (it != floor_memo_.end()) return it->second.second;
    }
    Big v = floor_raw(e);
    std::lock_guard<std::mutex> lock(mu_);
    floor_memo_.emplace(e.get(), std::make_pair(e, v));
    return v;
  }

  Big floor_raw(const ExprPtr& e) const {
    switch (e->kind) {
      case EK::Num:
        return e->num;
      case EK::Var:
        return e->var_min;
      case EK::Plus:
        // May go negative; still a valid lower bound of the integer value.
        return floor_bound(e->x) + e->off;
      case EK::Add:
        return floor_bound(e->x) + floor_bound(e->y);
      case EK::Exp2: {
        Big b = floor_bound(e->x);
        if (b < 0) return 1;  // arguments are naturals by construction
        if (b > 2048) return huge_floor();
        Engine tight(Budget{2048}, params_);
        auto p = tight.pow2(b);
        return p ? *p : huge_floor();
      }
      case EK::F: {
        Big b = floor_bound(e->x);
        if (b < 0) b = 0;
        if (b > 64) {
          // F_k(x) >= F_3(x) = 2^{x+3}-3 for k >= 3 (and >= x+1 always).
          if (e->idx >= 3) {
            Big capped = b > 2000 ? Big(2000) : b;
            return (Big(1) << (capped.convert_to<std::uint64_t>() + 3)) - 3;
          }
          return b + 1;
        }
        Engine tight(Budget{2048}, params_);
        if (auto v = tight.eval_f(e->idx, b)) return *v;
        // Failure inside the argument guard is an overflow of a monotone
        // chain, so the true value exceeds the small budget.
        return huge_floor();
      }
      case EK::Ct: {
        Big b = floor_bound(e->x);
        if (b < 0) b = 0;
        if (b > 512) return b;  // Ct_N(x) >= x
        Engine tight(Budget{2048}, params_);
        if (auto v = tight.eval_ct(e->idx, b)) return *v;
        return huge_floor();
      }
    }
    return 0;
  }

  // Recognize e as 2^v: syntactic Exp2, an exact power of two, or the
  // pow-step normal form F_4(y+1)+3 = 2^{F_4(y)+3}.
  std::optional<ExprPtr> as_exp2(const ExprPtr& e) const {
    if (e->kind == EK::Exp2) return e->x;
    if (e->kind == EK::Num && e->num > 0) {
      Big v = e->num;
      std::uint64_t bits = 0;
      while ((v & 1) == 0) {
        v >>= 1;
        ++bits;
      }
      if (v == 1) return num(Big(bits));
    }
    if (e->kind == EK::Plus && e->off == 3 && e->x->kind == EK::F &&
        e->x->idx == 4) {
      const ExprPtr& arg = e->x->x;
      if (auto p = pred(arg))
        if (floor_bound(*p) >= 0) return plus(f(4, *p), 3);
    }
    return std::nullopt;
  }

  std::optional<ExprPtr> pred(const ExprPtr& x) const {
    if (x->kind == EK::Num && x->num >= 1) return num(x->num - 1);
    if (x->kind == EK::Plus) return plus(x->x, x->off - 1);
    return std::nullopt;
  }

  // One unfolding of a head F/Ct at a successor argument (guards keep the
  // recursions inside their validity ranges).
  std::optional<ExprPtr> unfold_one(const ExprPtr& e) const {
    if (e->kind == EK::F && e->idx >= 2) {
      if (auto p = pred(e->x))
        if (floor_bound(*p) >= 0) return f(e->idx - 1, f(e->idx, *p));
    }
    if (e->kind == EK::Ct) {
      if (auto p = pred(e->x)) {
        const ExprPtr& m = *p;
        Big mn = floor_bound(m);
        switch (e->idx) {
          case 2:
            if (mn >= 0) return add(ct(2, m), exp2(ct(2, m)));
            break;
          case 4:
            if (mn >= 1)
              return add(ct(4, m), plus(ctfunc(1, 4, ct(4, m)), -1));
            break;
          case 5:
            if (mn >= 1) return add(ct(5, m), ctfunc(3, 5, ct(5, m)));
            break;
          case 7:
            if (mn >= 0)
              return add(ct(7, m), plus(ctfunc(1, 7, ct(7, m)), -8));
            break;
          case 10:
            if (mn >= 0) return add(ct(10, m), ctfunc(3, 10, ct(10, m)));
            break;
          default:
            break;
        }
      }
    }
    return std::nullopt;
  }

  // In-search unfolding is kept away from large numeric arguments; a
  // descending chain through them explodes the search for nothing.
  std::optional<ExprPtr> unfold_in_search(const ExprPtr& e) const {
    if ((e->kind == EK::F || e->kind == EK::Ct) && e->x->kind == EK::Num &&
        e->x->num > 4)
      return std::nullopt;
    return unfold_one(e);
  }

  struct GoalKey {
    int rel;
    const Expr* a;
    const Expr* b;
    bool operator==(const GoalKey& o) const {
      return rel == o.rel && a == o.a && b == o.b;
    }
  };
  struct GoalKeyHash {
    std::size_t operator()(const GoalKey& k) const {
      std::size_t h = std::size_t(k.rel);
      h = h * 0x9e3779b97f4a7c15ULL + reinterpret_cast<std::uintptr_t>(k.a);
      h = h * 0x9e3779b97f4a7c15ULL + reinterpret_cast<std::uintptr_t>(k.b);
      return h;
    }
  };

  struct Ctx {
    explicit Ctx(const Assumptions& as) : assumptions(as) {}
    const Assumptions& assumptions;
    std::unordered_set<GoalKey, GoalKeyHash> in_progress;
    std::unordered_map<GoalKey, std::optional<Trace>, GoalKeyHash> memo;
    std::vector<ExprPtr> retain;  // keeps memo keys alive
    std::uint64_t visits = 0;
    bool cutoff = false;
  };

  static std::string rel_str(Rel r) {
    return r == Rel::EQ ? " = " : r == Rel::LE ? " <= " : " < ";
  }

  std::optional<Trace> ok(Rel rel, const ExprPtr& a, const ExprPtr& b,
                          const std::string& rule, Trace sub = {}) const {
    Trace t;
    t.push_back("[" + rule + "] " + render(a) + rel_str(rel) + render(b));
    for (auto& line : sub) t.push_back("  " + line);
    return t;
  }

  std::optional<Trace> prove(Rel rel, ExprPtr a, ExprPtr b, Ctx& ctx,
                             int depth) const {
    if (depth > 48 || ++ctx.visits > 400000) {
      ctx.cutoff = true;
      return std::nullopt;
    }
    GoalKey key{int(rel), a.get(), b.get()};
    auto hit = ctx.memo.find(key);
    if (hit != ctx.memo.end()) return hit->second;
    if (!ctx.in_progress.insert(key).second) return std::nullopt;
    bool cutoff_before = ctx.cutoff;
    ctx.cutoff = false;
    auto out = prove_impl(rel, a, b, ctx, depth);
    bool clean = !ctx.cutoff;
    ctx.cutoff = ctx.cutoff || cutoff_before;
    ctx.in_progress.erase(key);
    if (out || clean) {
      ctx.retain.push_back(a);
      ctx.retain.push_back(b);
      ctx.memo.emplace(key, out);
    }
    return out;
  }

  std::optional<Trace> prove_impl(Rel rel, const ExprPtr& a, const ExprPtr& b,
                                  Ctx& ctx, int depth) const {
    auto va = eval(a), vb = eval(b);
    if (va && vb) {
      bool holds = rel == Rel::EQ   ? *va == *vb
                   : rel == Rel::LE ? *va <= *vb
                                    : *va < *vb;
      if (holds) return ok(rel, a, b, "num");
      return std::nullopt;
    }
    if (va && rel != Rel::EQ) {
      Big fb = floor_bound(b);
      if (rel == Rel::LE ? *va <= fb : *va < fb)
        return ok(rel, a, b, "floor");
    }
    if (same(a, b)) {
      if (rel == Rel::LT) return std::nullopt;
      return ok(rel, a, b, "refl");
    }
    if (rel == Rel::EQ) return prove_eq(a, b, ctx, depth);
    return prove_le_lt(rel, a, b, ctx, depth);
  }

  std::optional<Trace> prove_eq(const ExprPtr& a, const ExprPtr& b, Ctx& ctx,
                                int depth) const {
    if (a->kind == b->kind) {
      switch (a->kind) {
        case EK::F:
        case EK::Ct:
          if (a->idx == b->idx)
            if (auto t = prove(Rel::EQ, a->x, b->x, ctx, depth + 1))
              return ok(Rel::EQ, a, b, "mono", *t);
          break;
        case EK::Exp2:
          if (auto t = prove(Rel::EQ, a->x, b->x, ctx, depth + 1))
            return ok(Rel::EQ, a, b, "mono", *t);
          break;
        case EK::Plus:
          if (a->off == b->off)
            if (auto t = prove(Rel::EQ, a->x, b->x, ctx, depth + 1))
              return ok(Rel::EQ, a, b, "mono", *t);
          break;
        default:
          break;
      }
    }
    for (bool swap : {false, true}) {
      const ExprPtr& lhs = swap ? b : a;
      const ExprPtr& rhs = swap ? a : b;
      if (auto u = unfold_in_search(lhs))
        if (auto t = prove(Rel::EQ, *u, rhs, ctx, depth + 1))
          return ok(Rel::EQ, a, b, "unfold", *t);
    }
    return std::nullopt;
  }

  // Syntactic-only comparisons, used to keep assumption chaining from
  // blowing the search up quadratically.
  bool cheap_rel(Rel rel, const ExprPtr& a, const ExprPtr& b) const {
    auto va = eval(a), vb = eval(b);
    if (va && vb)
      return rel == Rel::LE ? *va <= *vb : *va < *vb;
    if (va) {
      Big fb = floor_bound(b);
      return rel == Rel::LE ? *va <= fb : *va < fb;
    }
    ExprPtr ca = a, cb = b;
    long long da = 0, db = 0;
    if (ca->kind == EK::Plus) {
      da = ca->off;
      ca = ca->x;
    }
    if (cb->kind == EK::Plus) {
      db = cb->off;
      cb = cb->x;
    }
    if (!same(ca, cb)) return false;
    return rel == Rel::LE ? da <= db : da < db;
  }

  std::optional<Trace> prove_le_lt(Rel rel, const ExprPtr& a, const ExprPtr& b,
                                   Ctx& ctx, int depth) const {
    // hyp: a <= lhs REL rhs <= b, with syntactic side conditions
    for (const auto& as : ctx.assumptions) {
      if (as.rel == Rel::EQ) continue;
      if (!cheap_rel(Rel::LE, a, as.lhs)) continue;
      if (!cheap_rel(Rel::LE, as.rhs, b)) continue;
      bool strict = as.rel == Rel::LT || cheap_rel(Rel::LT, a, as.lhs) ||
                    cheap_rel(Rel::LT, as.rhs, b);
      if (rel == Rel::LT && !strict) continue;
      return ok(rel, a, b, "hyp",
                {"assumption: " + render(as.lhs) + rel_str(as.rel) +
                 render(as.rhs)});
    }
    // succ
    if (rel == Rel::LT)
      if (auto t = prove(Rel::LE, plus(a, 1), b, ctx, depth + 1))
        return ok(rel, a, b, "succ", *t);
    // mono on matching heads
    if (a->kind == b->kind) {
      if ((a->kind == EK::F || a->kind == EK::Ct) && a->idx == b->idx) {
        if (auto t = prove(rel, a->x, b->x, ctx, depth + 1))
          return ok(rel, a, b, "mono", *t);
      }
      if (a->kind == EK::Exp2)
        if (auto t = prove(rel, a->x, b->x, ctx, depth + 1))
          return ok(rel, a, b, "mono", *t);
      if (a->kind == EK::Add) {
        if (auto t1 = prove(rel, a->x, b->x, ctx, depth + 1))
          if (auto t2 = prove(Rel::LE, a->y, b->y, ctx, depth + 1)) {
            Trace sub = *t1;
            for (auto& l : *t2) sub.push_back(l);
            return ok(rel, a, b, "sum", sub);
          }
      }
    }
    // mono-k
    if (a->kind == EK::F && b->kind == EK::F && a->idx <= b->idx) {
      if (auto t = prove(rel, a->x, b->x, ctx, depth + 1))
        return ok(rel, a, b, "mono-k", *t);
      if (a->idx < b->idx)
        if (auto t = prove(Rel::LE, a->x, b->x, ctx, depth + 1))
          return ok(rel, a, b, "mono-k", *t);
    }
    // offset normalization
    if (a->kind == EK::Plus || b->kind == EK::Plus) {
      ExprPtr ca = a, cb = b;
      long long da = 0, db = 0;
      if (ca->kind == EK::Plus) {
        da = ca->off;
        ca = ca->x;
      }
      if (cb->kind == EK::Plus) {
        db = cb->off;
        cb = cb->x;
      }
      long long delta = da - db;  // prove: ca + delta rel cb
      if (delta <= 0) {
        Rel need = rel;
        if (delta < 0 && rel == Rel::LT) need = Rel::LE;
        if (auto t = prove(need, ca, cb, ctx, depth + 1))
          return ok(rel, a, b, "offset", *t);
      } else if (auto t = absorb_offset(rel, ca, delta, cb, ctx, depth)) {
        return ok(rel, a, b, "offset", *t);
      }
    }
    if (auto t = grow_bound(rel, a, b, ctx, depth)) return t;
    if (auto t = via_midpoints(rel, a, b, ctx, depth)) return t;
    return std::nullopt;
  }

  // prove  ca + delta (rel) cb  with delta > 0 and neither side Plus.
  std::optional<Trace> absorb_offset(Rel rel, const ExprPtr& ca,
                                     long long delta, const ExprPtr& cb,
                                     Ctx& ctx, int depth) const {
    // same strictly-increasing integer head: H(x)+d <= H(y) if x+d <= y
    if (ca->kind == cb->kind &&
        (ca->kind == EK::F || ca->kind == EK::Ct || ca->kind == EK::Exp2) &&
        ca->idx == cb->idx) {
      if (auto t = prove(rel, plus(ca->x, delta), cb->x, ctx, depth + 1))
        return ok(rel, plus(ca, delta), cb, "int-mono", *t);
    }
    if (auto u = as_exp2(cb)) {
      // exp-off: 2^v + d <= 2^u when v + d <= u
      if (auto v = as_exp2(ca)) {
        if (auto t = prove(rel == Rel::LT ? Rel::LT : Rel::LE,
                           plus(*v, delta), *u, ctx, depth + 1))
          return ok(rel, plus(ca, delta), cb, "exp-off", *t);
      }
      // ca+3 = 2^v: ca + delta = 2^v + (delta-3)
      if (delta >= 3) {
        if (auto v = as_exp2(plus(ca, 3)))
          if (auto t = prove(Rel::LE, plus(*v, delta - 3), *u, ctx, depth + 1))
            return ok(rel, plus(ca, delta), cb, "exp-off", *t);
      }
      // ca+3 = 2^v and delta < 3: ca + delta <= ca + 3 = 2^v <= 2^u
      if (delta < 3) {
        if (auto v = as_exp2(plus(ca, 3)))
          if (auto t = prove(Rel::LE, *v, *u, ctx, depth + 1))
            return ok(rel, plus(ca, delta), cb, "exp-off", *t);
      }
      // exp-lin: x + d <= 2^w when x <= w and d <= w
      if (auto t1 = prove(Rel::LE, ca, *u, ctx, depth + 1)) {
        if (auto t2 = prove(Rel::LE, num(Big(delta)), *u, ctx, depth + 1)) {
          Trace sub = *t1;
          for (auto& l : *t2) sub.push_back(l);
          return ok(rel, plus(ca, delta), cb, "exp-lin", sub);
        }
      }
    }
    // reassemble so hyp chaining and midpoints can see the inequality whole
    if (auto t = prove(rel, plus(ca, delta), cb, ctx, depth + 1)) return t;
    return std::nullopt;
  }

  std::optional<Trace> grow_bound(Rel rel, const ExprPtr& a, const ExprPtr& b,
                                  Ctx& ctx, int depth) const {
    if (b->kind == EK::F || b->kind == EK::Ct || b->kind == EK::Exp2) {
      // grow: F_k(x) >= x+1, 2^x >= x+1, Ct_N(x) >= x
      bool strict_head = b->kind != EK::Ct;
      Rel need = rel;
      if (rel == Rel::LT && strict_head) need = Rel::LE;
      if (auto t = prove(need, a, b->x, ctx, depth + 1))
        return ok(rel, a, b, "grow", *t);
    }
    if (b->kind == EK::Add) {
      for (const ExprPtr& part : {b->x, b->y})
        if (auto t = prove(rel, a, part, ctx, depth + 1))
          return ok(rel, a, b, "sum-part", *t);
      ExprPtr core = a;
      long long c = 0;
      if (a->kind == EK::Plus && a->off > 0) {
        core = a->x;
        c = a->off;
      }
      if (c > 0) {
        if (auto t1 = prove(Rel::LE, num(Big(c)), b->x, ctx, depth + 1)) {
          if (auto t2 = prove(rel, core, b->y, ctx, depth + 1)) {
            Trace sub = *t1;
            for (auto& l : *t2) sub.push_back(l);
            return ok(rel, a, b, "sum-split", sub);
          }
        }
        if (auto t1 = prove(Rel::LE, num(Big(c)), b->y, ctx, depth + 1)) {
          if (auto t2 = prove(rel, core, b->x, ctx, depth + 1)) {
            Trace sub = *t1;
            for (auto& l : *t2) sub.push_back(l);
            return ok(rel, a, b, "sum-split", sub);
          }
        }
      }
    }
    return std::nullopt;
  }

  using Mid = std::pair<ExprPtr, std::string>;

  std::optional<Trace> via_midpoints(Rel rel, const ExprPtr& a,
                                     const ExprPtr& b, Ctx& ctx,
                                     int depth) const {
    std::vector<Mid> lowers;
    collect_lower_bounds(b, lowers, 3);
    // assumption-driven: b = H(bx), w <= bx known, H monotone: H(w) <= b
    if (b->kind == EK::F || b->kind == EK::Ct || b->kind == EK::Exp2) {
      for (const auto& as : ctx.assumptions) {
        if (as.rel == Rel::EQ) continue;
        if (same(as.rhs, b->x)) {
          ExprPtr wrapped = b->kind == EK::Exp2 ? exp2(as.lhs)
                            : b->kind == EK::F  ? f(b->idx, as.lhs)
                                                : ct(b->idx, as.lhs);
          lowers.push_back({wrapped, "hyp-mono"});
        }
      }
    }
    for (auto& [mid, rule] : lowers)
      if (auto t = prove(rel, a, mid, ctx, depth + 1))
        return ok(rel, a, b, "trans:" + rule, *t);
    std::vector<Mid> uppers;
    if (a->kind == EK::Plus && a->off < 0) uppers.push_back({a->x, "drop"});
    if (auto u = unfold_in_search(a)) uppers.push_back({*u, "unfold"});
    for (auto& [mid, rule] : uppers)
      if (auto t = prove(rel, mid, b, ctx, depth + 1))
        return ok(rel, a, b, "trans:" + rule, *t);
    if (auto u = unfold_in_search(b))
      if (auto t = prove(rel, a, *u, ctx, depth + 1))
        return ok(rel, a, b, "trans:unfold", *t);
    return std::nullopt;
  }

  // Sound lower bounds for e; each induction-verified row lemma checks its
  // validity range via floor bounds before firing.
  void collect_lower_bounds(const ExprPtr& e, std::vector<Mid>& out,
                            int fuel) const {
    if (fuel <= 0) return;
    switch (e->kind) {
      case EK::Ct: {
        const ExprPtr& x = e->x;
        Big fb = floor_bound(x);
        switch (e->idx) {
          case 2:
            if (fb >= 4) {
              out.push_back({plus(f(4, plus(x, -4)), 4), "row-2"});
              out.push_back({plus(f(4, plus(x, -4)), 3), "ct2-f4"});
            }
            break;
          case 4:
            if (fb >= 2) out.push_back({plus(f(5, plus(x, -2)), 4), "row-4"});
            break;
          case 5:
            if (fb >= 3) out.push_back({plus(f(6, plus(x, -3)), 4), "row-5"});
            break;
          case 7:
            if (fb >= 2) out.push_back({plus(f(7, plus(x, -2)), 4), "row-7"});
            break;
          default:
            break;
        }
        out.push_back({x, "grow"});
        break;
      }
      case EK::Exp2: {
        out.push_back({plus(e->x, 1), "grow"});
        std::vector<Mid> inner;
        collect_lower_bounds(e->x, inner, fuel - 1);
        for (auto& [m, rule] : inner) out.push_back({exp2(m), "mono." + rule});
        break;
      }
      case EK::F: {
        out.push_back({plus(e->x, 1), "grow"});
        std::vector<Mid> inner;
        collect_lower_bounds(e->x, inner, fuel - 1);
        for (auto& [m, rule] : inner)
          out.push_back({f(e->idx, m), "mono." + rule});
        break;
      }
      case EK::Plus: {
        if (e->off > 0) out.push_back({e->x, "drop"});
        // keep a +3 tail on F_4 heads so the pow-step form stays visible
        if (e->off > 3 && e->x->kind == EK::F)
          out.push_back({plus(e->x, 3), "drop"});
        std::vector<Mid> inner;
        collect_lower_bounds(e->x, inner, fuel - 1);
        for (auto& [m, rule] : inner)
          out.push_back({plus(m, e->off), "offset." + rule});
        break;
      }
      case EK::Add:
        out.push_back({e->x, "sum-part"});
        out.push_back({e->y, "sum-part"});
        break;
      default:
        break;
    }
  }

  Budget budget_;
  CtParams params_;
  mutable std::mutex mu_;
  mutable std::map<Big, ExprPtr> num_pool_;
  mutable std::unordered_map<NodeKey, ExprPtr, NodeKeyHash> node_pool_;
  mutable std::unordered_map<const Expr*, std::pair<ExprPtr, std::optional<Big>>>
      eval_memo_;
  mutable std::unordered_map<const Expr*, std::pair<ExprPtr, Big>> floor_memo_;
};

// ---------- the verification drivers ----------

inline std::vector<StepResult> Engine::verify_section4_chain() const {
  std::vector<StepResult> out;
  Assumptions established;

  auto want = [&](const std::string& id, Rel rel, ExprPtr lhs, ExprPtr rhs) {
    StepResult r;
    r.id = id;
    auto t = prove_rel(rel, lhs, rhs, established);
    if (t) {
      r.status = StepResult::Pass;
      r.trace = *t;
      established.push_back({rel, lhs, rhs});
    } else {
      r.status = StepResult::Fail;
      r.trace = {"no proof found"};
    }
    out.push_back(std::move(r));
  };

  ExprPtr n1 = num(1), n2 = num(2);
  want("Ct4(1)=8", Rel::EQ, ct(4, n1), num(8));
  want("Ct5(1)=2", Rel::EQ, ct(5, n1), num(2));
  want("Ctfunc35(1)=256", Rel::EQ, ctfunc(3, 5, n1), num(256));
  want("Ctfunc25(1)>=F4(252)+3", Rel::LE, plus(f(4, num(252)), 3),
       ctfunc(2, 5, n1));
  want("Ctfunc15(1)>F4(253)", Rel::LT, f(4, num(253)), ctfunc(1, 5, n1));
  want("Ct4(2)>F4(253)+7", Rel::LT, plus(f(4, num(253)), 7), ct(4, n2));
  want("Ctfunc35(2)>F4(254)+4", Rel::LT, plus(f(4, num(254)), 4),
       ctfunc(3, 5, n2));
  want("Ctfunc06(1)=Ctfunc05(2)", Rel::EQ, ctfunc(0, 6, n1), ctfunc(0, 5, n2));
  want("Ctfunc05(2)>Ctfunc25(2)", Rel::LT, ctfunc(2, 5, n2), ctfunc(0, 5, n2));
  want("Ctfunc25(2)>F4(F4(254))", Rel::LT, f(4, f(4, num(254))),
       ctfunc(2, 5, n2));
  want("F4(F4(254))>F5(1)", Rel::LT, f(5, n1), f(4, f(4, num(254))));
  return out;
}

inline std::vector<StepResult> Engine::verify_induction_lemmas() const {
  std::vector<StepResult> out;

  // Identity rows: Ct_N(m) = 2^m = F_3(m-3)+3 for m >= 3; exact below.
  for (int N : {0, 1, 3, 6, 8}) {
    StepResult r;
    r.id = "row-" + std::to_string(N) + ": Ct_N(m) = F_3(m-3)+3";
    ExprPtr m = variable(3);
    auto t = prove_rel(Rel::EQ, ct(N, m), plus(f(3, plus(m, -3)), 3));
    bool small_ok = true;
    for (int v = 3; v <= 20; ++v) {
      auto lhsv = eval(ct(N, num(v)));
      auto rhsv = eval(plus(f(3, num(v - 3)), 3));
      small_ok = small_ok && lhsv && rhsv && *lhsv == *rhsv;
    }
    if (t && small_ok) {
      r.status = StepResult::Pass;
      r.trace = *t;
    }
    out.push_back(std::move(r));
  }

  struct Row {
    int N;            // column
    int i;            // F level of the bound
    int d;            // shift: Ct_N(m) >= F_i(m-d)+c for m >= d
    int c;            // additive constant
    bool must_prove;  // rows up to 5 must verify; 6..10 may be CLAIMED
  };
  const Row rows[] = {
      {2, 4, 4, 3, true},  // the section-4 estimate Ct_2(m+4) >= F_4(m)+3
      {2, 4, 4, 4, true},  {4, 5, 2, 4, true},  {5, 6, 3, 4, true},
      {7, 7, 2, 4, false}, {9, 8, 2, 4, false}, {10, 9, 2, 4, false},
  };

  for (const Row& row : rows) {
    std::string tag = "Ct_" + std::to_string(row.N) + "(m) >= F_" +
                      std::to_string(row.i) + "(m-" + std::to_string(row.d) +
                      ")+" + std::to_string(row.c);
    {
      StepResult r;
      r.id = "base " + tag;
      ExprPtr lhs = ct(row.N, num(row.d));
      ExprPtr rhs = plus(f(row.i, num(0)), row.c);
      auto lv = eval(lhs);
      auto rv = eval(rhs);
      if (lv && rv) {
        r.status = *lv >= *rv ? StepResult::Pass : StepResult::Fail;
        r.trace = {"exact: " + lv->str().substr(0, 40) +
                   " >= " + rv->str().substr(0, 40)};
      } else if (auto t = prove_rel(Rel::LE, rhs, lhs)) {
        r.status = StepResult::Pass;
        r.trace = *t;
      } else {
        r.status = row.must_prove ? StepResult::Fail : StepResult::Claimed;
        r.trace = {"not derivable from the lemma library"};
      }
      out.push_back(std::move(r));
    }
    {
      StepResult r;
      r.id = "step " + tag;
      ExprPtr m = variable(row.d);
      ExprPtr ih_lhs = plus(f(row.i, plus(m, -row.d)), row.c);
      ExprPtr u = ct(row.N, m);
      Assumptions hyps = {{Rel::LE, ih_lhs, u}};
      ExprPtr claim = plus(f(row.i, plus(m, -row.d + 1)), row.c);
      auto unfolded = unfold_one(ct(row.N, plus(m, 1)));
      std::optional<Trace> t;
      if (unfolded) t = prove_rel(Rel::LE, claim, *unfolded, hyps);
      if (t) {
        r.status = StepResult::Pass;
        r.trace = *t;
      } else {
        r.status = row.must_prove ? StepResult::Fail : StepResult::Claimed;
        r.trace = {"not derivable from the lemma library"};
      }
      out.push_back(std::move(r));
    }
  }
  return out;
}

// ---------- CLI-facing expression syntax ----------
//   F[k](m), Ct[N](m), Ctfunc[N,M](m), integer literals, trailing +c / -c.

inline ExprPtr parse_expr(const Engine& eng, const std::string& text) {
  std::size_t pos = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw std::invalid_argument("growth expression: " + msg + " at " +
                                std::to_string(pos));
  };
  auto skip = [&] {
    while (pos < text.size() && std::isspace(std::uint8_t(text[pos]))) ++pos;
  };
  std::function<ExprPtr()> parse_one = [&]() -> ExprPtr {
    skip();
    if (pos >= text.size()) fail("expected expression");
    if (std::isdigit(std::uint8_t(text[pos]))) {
      std::size_t start = pos;
      while (pos < text.size() && std::isdigit(std::uint8_t(text[pos]))) ++pos;
      return eng.num(Big(text.substr(start, pos - start)));
    }
    auto keyword = [&](const char* kw) {
      std::size_t len = std::strlen(kw);
      if (text.compare(pos, len, kw) == 0) {
        pos += len;
        return true;
      }
      return false;
    };
    auto bracket_ints = [&](int want) {
      std::vector<long long> vals;
      skip();
      if (pos >= text.size() || text[pos] != '[') fail("expected '['");
      ++pos;
      for (int i = 0; i < want; ++i) {
        skip();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(std::uint8_t(text[pos])))
          ++pos;
        if (start == pos) fail("expected index");
        vals.push_back(std::stoll(text.substr(start, pos - start)));
        skip();
        if (i + 1 < want) {
          if (pos >= text.size() || text[pos] != ',') fail("expected ','");
          ++pos;
        }
      }
      if (pos >= text.size() || text[pos] != ']') fail("expected ']'");
      ++pos;
      return vals;
    };
    auto paren_arg = [&]() -> ExprPtr {
      skip();
      if (pos >= text.size() || text[pos] != '(') fail("expected '('");
      ++pos;
      ExprPtr inner = parse_one();
      skip();
      if (pos >= text.size() || text[pos] != ')') fail("expected ')'");
      ++pos;
      return inner;
    };
    if (keyword("Ctfunc")) {
      auto v = bracket_ints(2);
      return eng.ctfunc(int(v[0]), int(v[1]), paren_arg());
    }
    if (keyword("Ct")) {
      auto v = bracket_ints(1);
      return eng.ct(int(v[0]), paren_arg());
    }
    if (keyword("F")) {
      auto v = bracket_ints(1);
      return eng.f(int(v[0]), paren_arg());
    }
    fail("unknown function");
    return nullptr;
  };
  ExprPtr e = parse_one();
  skip();
  while (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    bool negate = text[pos] == '-';
    ++pos;
    skip();
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(std::uint8_t(text[pos]))) ++pos;
    if (start == pos) fail("expected integer offset");
    long long c = std::stoll(text.substr(start, pos - start));
    e = eng.plus(e, negate ? -c : c);
    skip();
  }
  if (pos != text.size()) fail("trailing input");
  return e;
}

}  // namespace lda::growth
