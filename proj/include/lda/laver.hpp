#pragma once

// Finite left-distributive tables A_n on {1..2^n} with the defining
// recursion a*1 = a+1 (cyclically) and a*(b+1) = (a*b)*(a+1), the top
// element acting as a left identity.  Terms evaluate homomorphically into
// the tables; the least table in which a term's image is not the identity
// element gives its critical-point index.

#include <cstdint>
#include <cstdio>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "lda/term.hpp"

namespace lda::laver {

using Elem = std::uint32_t;  // 1-based table elements

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CapExceeded : Error {
  using Error::Error;
};
struct BudgetExceeded : Error {
  using Error::Error;
};
struct OutOfRange : Error {
  using Error::Error;
};
// A falsified structural assumption.  Never recoverable: the table engine
// or a transcription is wrong.
struct RowMismatch : Error {
  using Error::Error;
};
struct MonotonicityViolation : Error {
  using Error::Error;
};
struct CacheError : Error {
  using Error::Error;
};

struct BuildOptions {
  int eager_cap = 10;    // full rows materialized up to here
  int hard_cap = 16;     // largest admissible table index
  std::size_t budget_entries = std::size_t(1) << 25;  // lazy row budget
};

class LaverTable {
 public:
  LaverTable(int n, BuildOptions opts = {}) : n_(n), opts_(opts) {
    if (n < 0 || n > opts.hard_cap)
      throw CapExceeded("table index " + std::to_string(n) +
                        " exceeds cap " + std::to_string(opts.hard_cap));
    size_ = Elem(1) << n;
    if (n <= opts.eager_cap) build_eager();
  }

  int index() const { return n_; }
  Elem size() const { return size_; }

  Elem mult(Elem a, Elem b) const {
    check_range(a);
    check_range(b);
    if (a == size_) return b;  // identity row
    if (!full_.empty()) return full_[std::size_t(a - 1) * size_ + (b - 1)];
    const std::vector<Elem>& row = lazy_row(a);
    return row[(b - 1) % row.size()];
  }

  // Least p >= 1 with row a periodic of period p; p divides 2^n.
  Elem row_period(Elem a) const {
    check_range(a);
    if (a == size_) return size_;
    if (!full_.empty()) {
      const Elem* row = &full_[std::size_t(a - 1) * size_];
      for (Elem b = 1; b <= size_; ++b)
        if (row[b - 1] == size_) return b;
      throw RowMismatch("row without top element");
    }
    return Elem(lazy_row(a).size());
  }

  // The unique x with x *_n c = a *_n (b *_n c) for all c, computed as
  // x = (a * (b (+) 1)) (-) 1 with cyclic +-1, then verified against the
  // full row.  A verification failure is fatal.
  Elem compose_elem(Elem a, Elem b) const {
    check_range(a);
    check_range(b);
    Elem x = cyc_dec(mult(a, cyc_inc(b)));
    for (Elem c = 1; c <= size_; ++c) {
      if (mult(x, c) != mult(a, mult(b, c)))
        throw RowMismatch("compose_elem row verification failed in A_" +
                          std::to_string(n_) + " at a=" + std::to_string(a) +
                          " b=" + std::to_string(b) + " c=" + std::to_string(c));
    }
    return x;
  }

  Elem cyc_inc(Elem a) const { return a == size_ ? 1 : a + 1; }
  Elem cyc_dec(Elem a) const { return a == 1 ? size_ : a - 1; }

  // Row-major full rows (1-based values); materializes lazy rows.
  std::vector<Elem> full_rows() const {
    if (!full_.empty()) return full_;
    std::vector<Elem> out(std::size_t(size_) * size_);
    for (Elem a = 1; a <= size_; ++a)
      for (Elem b = 1; b <= size_; ++b)
        out[std::size_t(a - 1) * size_ + (b - 1)] = mult(a, b);
    return out;
  }

  bool eager() const { return !full_.empty(); }

 private:
  void check_range(Elem a) const {
    if (a < 1 || a > size_)
      throw OutOfRange("element " + std::to_string(a) + " out of range 1.." +
                       std::to_string(size_));
  }

  void build_eager() {
    full_.assign(std::size_t(size_) * size_, 0);
    auto at = [&](Elem a, Elem b) -> Elem& {
      return full_[std::size_t(a - 1) * size_ + (b - 1)];
    };
    for (Elem b = 1; b <= size_; ++b) at(size_, b) = b;
    for (Elem a = size_ - 1; a >= 1; --a) {
      at(a, 1) = a + 1;
      for (Elem b = 1; b < size_; ++b) {
        Elem ab = at(a, b);
        // a*b > a, so that row is already complete.
        at(a, b + 1) = at(ab, a + 1);
      }
      if (a == 1) break;
    }
  }

  // Rows above the eager cap are stored as one period and computed on
  // demand with an explicit stack (row a only needs rows > a).  Pure
  // memoization keeps results independent of query order.
  const std::vector<Elem>& lazy_row(Elem a) const {
    std::lock_guard<std::mutex> lock(mu_);
    return lazy_row_locked(a);
  }

  const std::vector<Elem>& lazy_row_locked(Elem a) const {
    auto done = rows_.find(a);
    if (done != rows_.end()) return done->second;

    struct Frame {
      Elem a;
      std::vector<Elem> entries;
    };
    std::vector<Frame> stack;
    stack.push_back({a, {}});
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.entries.empty()) f.entries.push_back(f.a + 1);  // a < 2^n here
      bool blocked = false;
      while (f.entries.back() != size_) {
        Elem r = f.entries.back();
        if (r <= f.a)
          throw RowMismatch("row value not above the row index in A_" +
                            std::to_string(n_));
        auto it = rows_.find(r);
        if (it == rows_.end()) {
          stack.push_back({r, {}});
          blocked = true;
          break;
        }
        const std::vector<Elem>& row = it->second;
        f.entries.push_back(row[f.a % row.size()]);  // column f.a + 1
        if (stored_ + f.entries.size() > opts_.budget_entries)
          throw BudgetExceeded("lazy row budget exceeded in A_" +
                               std::to_string(n_));
      }
      if (blocked) continue;
      stored_ += f.entries.size();
      rows_.emplace(f.a, std::move(f.entries));
      stack.pop_back();
    }
    return rows_.at(a);
  }

  int n_;
  Elem size_;
  BuildOptions opts_;
  std::vector<Elem> full_;
  mutable std::mutex mu_;
  mutable std::unordered_map<Elem, std::vector<Elem>> rows_;
  mutable std::size_t stored_ = 0;
};

using TablePtr = std::shared_ptr<const LaverTable>;

inline TablePtr build_table(int n, BuildOptions opts = {}) {
  return std::make_shared<LaverTable>(n, opts);
}

// Thread-safe cache of built tables; completed tables are immutable.
class TableCache {
 public:
  explicit TableCache(BuildOptions opts = {}) : opts_(opts) {}

  TablePtr get(int n) const {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = tables_.find(n);
      if (it != tables_.end()) return it->second;
    }
    TablePtr t = build_table(n, opts_);
    std::lock_guard<std::mutex> lock(mu_);
    return tables_.emplace(n, std::move(t)).first->second;
  }

  const BuildOptions& options() const { return opts_; }

 private:
  BuildOptions opts_;
  mutable std::mutex mu_;
  mutable std::unordered_map<int, TablePtr> tables_;
};

// Homomorphic image: Generator -> 1, Apply -> mult, Compose -> compose_elem.
inline Elem eval_term(const TermPtr& term, const LaverTable& t) {
  std::unordered_map<const Term*, Elem> memo;
  std::function<Elem(const TermPtr&)> go = [&](const TermPtr& u) -> Elem {
    auto it = memo.find(u.get());
    if (it != memo.end()) return it->second;
    Elem v;
    switch (u->kind()) {
      case TermKind::Generator:
        v = 1;
        break;
      case TermKind::Apply:
        v = t.mult(go(u->left()), go(u->right()));
        break;
      case TermKind::Compose:
        v = t.compose_elem(go(u->left()), go(u->right()));
        break;
      default:
        throw Error("unreachable");
    }
    memo.emplace(u.get(), v);
    return v;
  };
  return go(term);
}

inline Elem eval_term(const TermPtr& term, int n, const TableCache& cache) {
  return eval_term(term, *cache.get(n));
}

// Either a determined index (crit = gamma_k) or a lower bound: AtLeast(b)
// records that the image was the table identity in every A_n for n < b.
struct CritIndex {
  enum Kind { Exactly, AtLeast } kind;
  int value;

  bool operator==(const CritIndex&) const = default;
  static CritIndex exactly(int k) { return {Exactly, k}; }
  static CritIndex at_least(int b) { return {AtLeast, b}; }
  std::string str() const {
    return kind == Exactly ? "gamma_" + std::to_string(value)
                           : ">=gamma_" + std::to_string(value - 1) +
                                 " (identity through A_" +
                                 std::to_string(value - 1) + ")";
  }
};

// The set { n : image in A_n = 2^n } must be an initial segment; if it is
// not, the table bridge itself is falsified and we abort.
inline CritIndex crit_index(const TermPtr& term, int max_n,
                            const TableCache& cache) {
  int first_moved = -1;
  for (int n = 0; n <= max_n; ++n) {
    TablePtr t = cache.get(n);
    bool ident = eval_term(term, *t) == t->size();
    if (ident && first_moved >= 0)
      throw MonotonicityViolation(
          "identity image in A_" + std::to_string(n) +
          " after non-identity in A_" + std::to_string(first_moved));
    if (!ident && first_moved < 0) first_moved = n;
  }
  if (first_moved < 0) return CritIndex::at_least(max_n + 1);
  return CritIndex::exactly(first_moved - 1);
}

// Least n with differing images, as a CritIndex-like bound: the two terms
// agree below gamma_m exactly for m < result.
inline CritIndex equiv_index(const TermPtr& t1, const TermPtr& t2, int max_n,
                             const TableCache& cache) {
  int first_diff = -1;
  for (int n = 0; n <= max_n; ++n) {
    TablePtr t = cache.get(n);
    bool same = eval_term(t1, *t) == eval_term(t2, *t);
    if (same && first_diff >= 0)
      throw MonotonicityViolation(
          "images agree in A_" + std::to_string(n) +
          " after differing in A_" + std::to_string(first_diff));
    if (!same && first_diff < 0) first_diff = n;
  }
  if (first_diff < 0) return CritIndex::at_least(max_n + 1);
  return CritIndex::exactly(first_diff);
}

struct LdTriple {
  Elem a, b, c;
};

struct LdReport {
  bool ok = true;
  std::uint64_t triples_checked = 0;
  std::optional<LdTriple> counterexample;
};

struct LdCheckOptions {
  int exhaustive_max_n = 8;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
};

// Left self-distributivity a*(b*c) = (a*b)*(a*c): exhaustive for small n,
// seeded random triples above.  Templated so tests can run it against a
// deliberately corrupted table view.
template <class Table>
LdReport check_left_distributivity(const Table& t, LdCheckOptions opts = {}) {
  LdReport rep;
  auto check = [&](Elem a, Elem b, Elem c) {
    ++rep.triples_checked;
    if (t.mult(a, t.mult(b, c)) != t.mult(t.mult(a, b), t.mult(a, c))) {
      rep.ok = false;
      rep.counterexample = LdTriple{a, b, c};
      return false;
    }
    return true;
  };
  if (t.index() <= opts.exhaustive_max_n) {
    for (Elem a = 1; a <= t.size(); ++a)
      for (Elem b = 1; b <= t.size(); ++b)
        for (Elem c = 1; c <= t.size(); ++c)
          if (!check(a, b, c)) return rep;
  } else {
    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<Elem> dist(1, t.size());
    for (std::uint64_t i = 0; i < opts.samples; ++i)
      if (!check(dist(rng), dist(rng), dist(rng))) return rep;
  }
  return rep;
}

// Binary cache: magic "LDA1", little-endian u64 n, rows concatenated as
// u32 (1-based values).  A cache is a pure accelerator, never a source of
// truth; rebuilt tables must match bit-exactly.
inline void save_table(const LaverTable& t, const std::string& path) {
  std::vector<Elem> rows = t.full_rows();
  FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw CacheError("cannot open cache file for writing: " + path);
  std::uint64_t n = std::uint64_t(t.index());
  std::uint8_t header[12] = {'L', 'D', 'A', '1'};
  for (int i = 0; i < 8; ++i) header[4 + i] = std::uint8_t(n >> (8 * i));
  bool ok = std::fwrite(header, 1, 12, f) == 12;
  for (Elem v : rows) {
    std::uint8_t le[4] = {std::uint8_t(v), std::uint8_t(v >> 8),
                          std::uint8_t(v >> 16), std::uint8_t(v >> 24)};
    ok = ok && std::fwrite(le, 1, 4, f) == 4;
  }
  if (std::fclose(f) != 0 || !ok)
    throw CacheError("failed writing cache file: " + path);
}

// Loaded rows; the caller is expected to cross-check against a rebuild.
struct LoadedTable {
  int n = 0;
  std::vector<Elem> rows;  // row-major, 2^n x 2^n
};

inline LoadedTable load_table(const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw CacheError("cannot open cache file: " + path);
  std::uint8_t header[12];
  if (std::fread(header, 1, 12, f) != 12 || header[0] != 'L' ||
      header[1] != 'D' || header[2] != 'A' || header[3] != '1') {
    std::fclose(f);
    throw CacheError("bad cache header: " + path);
  }
  std::uint64_t n = 0;
  for (int i = 0; i < 8; ++i) n |= std::uint64_t(header[4 + i]) << (8 * i);
  if (n > 16) {
    std::fclose(f);
    throw CacheError("cache table index out of range");
  }
  LoadedTable out;
  out.n = int(n);
  std::size_t size = std::size_t(1) << n;
  out.rows.resize(size * size);
  for (auto& v : out.rows) {
    std::uint8_t le[4];
    if (std::fread(le, 1, 4, f) != 4) {
      std::fclose(f);
      throw CacheError("truncated cache file: " + path);
    }
    v = Elem(le[0]) | Elem(le[1]) << 8 | Elem(le[2]) << 16 | Elem(le[3]) << 24;
  }
  std::fclose(f);
  return out;
}

}  // namespace lda::laver
