#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <functional>
#include <vector>

#include "lda/laver.hpp"
#include "lda/term.hpp"

using namespace lda;
using namespace lda::laver;

namespace {

// Independent oracle: the defining recursion evaluated naively over full
// rows, written without reference to the LaverTable build order.
//   a*1 = a+1 cyclically, a*(b+1) = (a*b)*(a+1), 2^n acts as left identity.
struct OracleTable {
  Elem size;
  std::vector<std::vector<Elem>> rows;  // rows[a-1][b-1]

  explicit OracleTable(int n) : size(Elem(1) << n) {
    std::vector<std::vector<Elem>> memo(size);
    std::function<Elem(Elem, Elem)> mul = [&](Elem a, Elem b) -> Elem {
      if (a == size) return b;
      auto& row = memo[a - 1];
      if (row.empty()) row.assign(size, 0);
      if (row[b - 1]) return row[b - 1];
      Elem v = b == 1 ? a + 1 : mul(mul(a, b - 1), a + 1);
      row[b - 1] = v;
      return v;
    };
    rows.resize(size);
    for (Elem a = 1; a <= size; ++a) {
      rows[a - 1].resize(size);
      for (Elem b = 1; b <= size; ++b) rows[a - 1][b - 1] = mul(a, b);
    }
  }
};

// A table view with one entry flipped, for fault injection.
struct CorruptedView {
  const LaverTable& base;
  Elem ca, cb, cv;
  int index() const { return base.index(); }
  Elem size() const { return base.size(); }
  Elem mult(Elem a, Elem b) const {
    if (a == ca && b == cb) return cv;
    return base.mult(a, b);
  }
};

}  // namespace

TEST_CASE("small tables match the brute-force oracle") {
  TableCache cache;
  for (int n = 0; n <= 6; ++n) {
    OracleTable oracle(n);
    TablePtr t = cache.get(n);
    for (Elem a = 1; a <= t->size(); ++a)
      for (Elem b = 1; b <= t->size(); ++b)
        REQUIRE(t->mult(a, b) == oracle.rows[a - 1][b - 1]);
  }
}

TEST_CASE("frozen small tables") {
  TableCache cache;
  SECTION("A_0") {
    TablePtr t = cache.get(0);
    REQUIRE(t->size() == 1);
    REQUIRE(t->mult(1, 1) == 1);
  }
  SECTION("A_1") {
    TablePtr t = cache.get(1);
    REQUIRE(t->full_rows() == std::vector<Elem>{2, 2, 1, 2});
  }
  SECTION("A_2") {
    TablePtr t = cache.get(2);
    REQUIRE(t->full_rows() ==
            std::vector<Elem>{2, 4, 2, 4, 3, 4, 3, 4, 4, 4, 4, 4, 1, 2, 3, 4});
    REQUIRE(t->mult(1, 2) == 4);
    REQUIRE(t->mult(4, 3) == 3);
    REQUIRE(t->mult(2, 3) == 3);
  }
  SECTION("element range is enforced") {
    TablePtr t = cache.get(2);
    REQUIRE_THROWS_AS(t->mult(0, 1), OutOfRange);
    REQUIRE_THROWS_AS(t->mult(1, 5), OutOfRange);
  }
  SECTION("cap") {
    REQUIRE_THROWS_AS(build_table(17), CapExceeded);
  }
}

TEST_CASE("lazy tables agree with eager tables") {
  // Build A_11 both ways: lazily (eager_cap below 11) and eagerly.
  BuildOptions lazy_opts;
  lazy_opts.eager_cap = 8;
  LaverTable lazy(11, lazy_opts);
  REQUIRE_FALSE(lazy.eager());
  BuildOptions eager_opts;
  eager_opts.eager_cap = 11;
  LaverTable eager(11, eager_opts);
  REQUIRE(eager.eager());
  // Spot rows plus a full sweep of a few rows, in scrambled query order.
  for (Elem a : {Elem(1), Elem(2), Elem(3), Elem(700), Elem(2047), Elem(2048)}) {
    for (Elem b = 1; b <= lazy.size(); b += 7)
      REQUIRE(lazy.mult(a, b) == eager.mult(a, b));
    REQUIRE(lazy.row_period(a) == eager.row_period(a));
  }
  // Determinism: a fresh lazy table queried in a different order.
  LaverTable lazy2(11, lazy_opts);
  REQUIRE(lazy2.mult(2047, 5) == lazy.mult(2047, 5));
  REQUIRE(lazy2.mult(1, 1) == lazy.mult(1, 1));
}

TEST_CASE("lazy budget degrades to an explicit error") {
  BuildOptions opts;
  opts.eager_cap = 4;
  opts.budget_entries = 8;
  LaverTable t(9, opts);
  REQUIRE_THROWS_AS(t.mult(1, 2), BudgetExceeded);
}

TEST_CASE("compose_elem") {
  TableCache cache;
  SECTION("pinned examples") {
    REQUIRE(cache.get(2)->compose_elem(1, 1) == 3);
    REQUIRE(cache.get(1)->compose_elem(1, 1) == 1);
    for (int n = 0; n <= 5; ++n) {
      TablePtr t = cache.get(n);
      for (Elem b = 1; b <= t->size(); ++b)
        REQUIRE(t->compose_elem(t->size(), b) == b);
    }
  }
  SECTION("row verification against the oracle") {
    // x = compose_elem(a,b) must satisfy x*c = a*(b*c) for every c.
    for (int n = 0; n <= 5; ++n) {
      TablePtr t = cache.get(n);
      for (Elem a = 1; a <= t->size(); ++a)
        for (Elem b = 1; b <= t->size(); ++b) {
          Elem x = t->compose_elem(a, b);
          for (Elem c = 1; c <= t->size(); ++c)
            REQUIRE(t->mult(x, c) == t->mult(a, t->mult(b, c)));
        }
    }
  }
}

TEST_CASE("eval_term") {
  TableCache cache;
  TermPtr j = Term::generator();
  REQUIRE(eval_term(j, 3, cache) == 1);
  REQUIRE(eval_term(j_sub(11), 2, cache) == 3);
  REQUIRE(eval_term(Term::compose(j, j), 2, cache) == 3);
  REQUIRE(eval_term(j_sub(16), 4, cache) == 16);
}

TEST_CASE("j-progression: eval(j_m, n) is the cyclic representative") {
  TableCache cache;
  for (int n = 0; n <= 8; ++n) {
    TablePtr t = cache.get(n);
    Elem size = t->size();
    for (std::uint64_t m = 1; m <= std::uint64_t(size) * 4; ++m) {
      Elem expect = Elem((m - 1) % size) + 1;
      REQUIRE(eval_term(j_sub(m), *t) == expect);
    }
  }
}

TEST_CASE("homomorphism over all terms with <= 5 leaves") {
  TableCache cache;
  std::vector<std::vector<TermPtr>> by_size(6);
  by_size[1].push_back(Term::generator());
  for (std::size_t s = 2; s <= 5; ++s)
    for (std::size_t l = 1; l < s; ++l)
      for (const auto& a : by_size[l])
        for (const auto& b : by_size[s - l]) {
          by_size[s].push_back(Term::apply(a, b));
          by_size[s].push_back(Term::compose(a, b));
        }
  for (int n = 0; n <= 4; ++n) {
    TablePtr t = cache.get(n);
    for (std::size_t s = 2; s <= 5; ++s)
      for (std::size_t l = 1; l < s; ++l)
        for (const auto& a : by_size[l])
          for (const auto& b : by_size[s - l]) {
            Elem ea = eval_term(a, *t), eb = eval_term(b, *t);
            REQUIRE(eval_term(Term::apply(a, b), *t) == t->mult(ea, eb));
            REQUIRE(eval_term(Term::compose(a, b), *t) ==
                    t->compose_elem(ea, eb));
          }
  }
}

TEST_CASE("projection compatibility A_{n+1} -> A_n") {
  TableCache cache;
  for (int n = 0; n <= 6; ++n) {
    TablePtr big = cache.get(n + 1);
    TablePtr small = cache.get(n);
    Elem half = small->size();
    auto reduce = [&](Elem a) { return Elem((a - 1) % half) + 1; };
    for (Elem a = 1; a <= big->size(); ++a)
      for (Elem b = 1; b <= big->size(); ++b)
        REQUIRE(reduce(big->mult(a, b)) ==
                small->mult(reduce(a), reduce(b)));
  }
}

TEST_CASE("row periods") {
  TableCache cache;
  SECTION("pinned") {
    REQUIRE(cache.get(2)->row_period(1) == 2);
    REQUIRE(cache.get(2)->row_period(3) == 1);
    for (int n = 0; n <= 6; ++n)
      REQUIRE(cache.get(n)->row_period(cache.get(n)->size()) ==
              cache.get(n)->size());
  }
  SECTION("periods divide 2^n and the row is genuinely periodic") {
    for (int n = 0; n <= 6; ++n) {
      TablePtr t = cache.get(n);
      for (Elem a = 1; a <= t->size(); ++a) {
        Elem p = t->row_period(a);
        REQUIRE(t->size() % p == 0);
        for (Elem b = 1; b + p <= t->size(); ++b)
          REQUIRE(t->mult(a, b) == t->mult(a, b + p));
        // Minimality: the top element appears first at column p.
        for (Elem b = 1; b < p; ++b) REQUIRE(t->mult(a, b) != t->size());
        REQUIRE(t->mult(a, p) == t->size());
      }
    }
  }
  SECTION("periods are nondecreasing under projection") {
    for (int n = 0; n <= 6; ++n) {
      TablePtr big = cache.get(n + 1);
      TablePtr small = cache.get(n);
      for (Elem a = 1; a <= big->size(); ++a) {
        Elem reduced = Elem((a - 1) % small->size()) + 1;
        REQUIRE(big->row_period(a) >= small->row_period(reduced));
      }
    }
  }
}

TEST_CASE("left self-distributivity") {
  TableCache cache;
  SECTION("exhaustive small n") {
    LdReport r4 = check_left_distributivity(*cache.get(4));
    REQUIRE(r4.ok);
    REQUIRE(r4.triples_checked == 4096);
    REQUIRE(check_left_distributivity(*cache.get(6)).ok);
  }
  SECTION("fault injection is detected") {
    TablePtr t = cache.get(3);
    CorruptedView bad{*t, 2, 3, t->mult(2, 3) == 1 ? Elem(2) : Elem(1)};
    LdCheckOptions opts;
    LdReport r = check_left_distributivity(bad, opts);
    REQUIRE_FALSE(r.ok);
    REQUIRE(r.counterexample.has_value());
  }
}

TEST_CASE("crit_index") {
  TableCache cache;
  SECTION("pinned examples") {
    REQUIRE(crit_index(Term::generator(), 5, cache) == CritIndex::exactly(0));
    REQUIRE(crit_index(j_sub(8), 5, cache) == CritIndex::exactly(3));
  }
  SECTION("Table 2 pattern: crit(j_n) has the 2-adic index") {
    int expect[17] = {-1, 0, 1, 0, 2, 0, 1, 0, 3, 0, 1, 0, 2, 0, 1, 0, 4};
    for (int n = 1; n <= 16; ++n)
      REQUIRE(crit_index(j_sub(n), 5, cache) == CritIndex::exactly(expect[n]));
  }
  SECTION("gamma_m = crit(j_{2^m})") {
    for (int m = 0; m <= 4; ++m)
      REQUIRE(crit_index(j_sub(std::uint64_t(1) << m), 5, cache) ==
              CritIndex::exactly(m));
  }
  SECTION("mu sentinel: j_7(j_4) is identity through A_10") {
    TermPtr mu_rep = Term::apply(j_sub(7), j_sub(4));
    REQUIRE(crit_index(mu_rep, 10, cache) == CritIndex::at_least(11));
  }
}

TEST_CASE("equiv_index") {
  TableCache cache;
  TermPtr j = Term::generator();
  REQUIRE(equiv_index(j, j_sub(2), 5, cache) == CritIndex::exactly(1));
  REQUIRE(equiv_index(j_sub(11), Term::compose(j, j), 8, cache) ==
          CritIndex::at_least(9));
  REQUIRE(equiv_index(j_sub(5), j_sub(5), 6, cache) ==
          CritIndex::at_least(7));
}

TEST_CASE("binary cache round trip") {
  TableCache cache;
  TablePtr t = cache.get(5);
  std::string path = "test_cache_a5.lda";
  save_table(*t, path);
  LoadedTable loaded = load_table(path);
  REQUIRE(loaded.n == 5);
  REQUIRE(loaded.rows == t->full_rows());
  std::remove(path.c_str());
  REQUIRE_THROWS_AS(load_table("does_not_exist.lda"), CacheError);
}
