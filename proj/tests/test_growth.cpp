#include <catch2/catch_amalgamated.hpp>

#include "lda/growth.hpp"

using namespace lda::growth;

namespace {

// Independent oracle: textbook two-argument Ackermann-Peter recursion.
Big naive_ackermann(int k, Big m) {
  if (k == 0) return m + 1;
  if (m == 0) return naive_ackermann(k - 1, Big(1));
  return naive_ackermann(k - 1, naive_ackermann(k, m - 1));
}

}  // namespace

TEST_CASE("F matches the Ackermann-Peter oracle") {
  Engine eng;
  for (int k = 0; k <= 3; ++k)
    for (int m = 0; m <= (k == 3 ? 8 : 12); ++m)
      REQUIRE(*eng.eval_f(k, Big(m)) == naive_ackermann(k, Big(m)));
  REQUIRE(*eng.eval_f(0, Big(7)) == 8);
  REQUIRE(*eng.eval_f(3, Big(2)) == 29);
  REQUIRE(*eng.eval_f(4, Big(0)) == 13);
  REQUIRE(*eng.eval_f(4, Big(0)) == naive_ackermann(4, Big(0)));
  REQUIRE(*eng.eval_f(4, Big(1)) == 65533);
}

TEST_CASE("F_3 closed form") {
  Engine eng;
  for (int m = 0; m <= 20; ++m)
    REQUIRE(*eng.eval_f(3, Big(m)) == (Big(1) << (m + 3)) - 3);
}

TEST_CASE("F degrades to symbolic beyond the budget") {
  Engine eng;
  REQUIRE(eng.eval_f(4, Big(2)).has_value());  // 2^65536 - 3 fits 2^20 bits
  REQUIRE_FALSE(eng.eval_f(4, Big(3)).has_value());
  REQUIRE_FALSE(eng.eval_f(5, Big(1)).has_value());
  ExprPtr e = eng.f(5, eng.num(1));
  REQUIRE_FALSE(eng.eval(e).has_value());  // stays symbolic, no error
}

TEST_CASE("Ct values") {
  Engine eng;
  SECTION("Ct_2 prefix") {
    Big expect[5] = {Big(0), Big(1), Big(3), Big(11), Big(2059)};
    for (int m = 0; m <= 4; ++m) REQUIRE(*eng.eval_ct(2, Big(m)) == expect[m]);
    REQUIRE(*eng.eval_ct(2, Big(5)) == Big(2059) + (Big(1) << 2059));
    REQUIRE_FALSE(eng.eval_ct(2, Big(6)).has_value());
  }
  SECTION("pinned worked values") {
    REQUIRE(*eng.eval_ct(4, Big(1)) == 8);
    REQUIRE(*eng.eval_ct(5, Big(1)) == 2);
    REQUIRE(*eng.eval(eng.ctfunc(3, 5, eng.num(1))) == 256);
  }
  SECTION("doubling rows are powers of two") {
    for (int N : {0, 1, 3, 6, 8})
      for (int m = 0; m <= 16; ++m)
        REQUIRE(*eng.eval_ct(N, Big(m)) == Big(1) << m);
  }
  SECTION("g(4): 2^{2^{Ct_2(2)}} = 256") {
    ExprPtr g4 = eng.exp2(eng.exp2(eng.ct(2, eng.num(2))));
    REQUIRE(*eng.eval(g4) == 256);
  }
  SECTION("monotone on computable points") {
    for (int N = 0; N <= 10; ++N) {
      Big prev = *eng.eval_ct(N, Big(0));
      for (int m = 1; m <= 4; ++m) {
        auto v = eng.eval_ct(N, Big(m));
        if (!v) break;
        REQUIRE(*v > prev);
        prev = *v;
      }
    }
  }
  SECTION("index range") {
    REQUIRE_THROWS_AS(eng.ct(11, eng.num(0)), std::invalid_argument);
  }
}

TEST_CASE("F monotonicity, exhaustive small range") {
  Engine eng;
  for (int k = 0; k <= 3; ++k)
    for (int m = 0; m <= 11; ++m)
      REQUIRE(*eng.eval_f(k, Big(m + 1)) > *eng.eval_f(k, Big(m)));
  for (int k = 0; k <= 2; ++k)
    for (int m = 1; m <= 12; ++m)
      REQUIRE(*eng.eval_f(k + 1, Big(m)) > *eng.eval_f(k, Big(m)));
}

TEST_CASE("bound_compare basics") {
  Engine eng;
  SECTION("syntactic identity") {
    ExprPtr a = eng.f(3, eng.num(10));
    REQUIRE(eng.compare(a, eng.f(3, eng.num(10))).kind == Verdict::ProvenEQ);
  }
  SECTION("numeric") {
    REQUIRE(eng.compare(eng.num(3), eng.num(5)).kind == Verdict::ProvenLT);
  }
  SECTION("inner monotonicity across symbolic towers") {
    ExprPtr a = eng.f(9, eng.f(8, eng.f(8, eng.num(254))));
    ExprPtr b = eng.f(9, eng.f(8, eng.f(4, eng.num(254))));
    Verdict v = eng.compare(a, b);
    REQUIRE(v.kind == Verdict::ProvenGT);
    REQUIRE_FALSE(v.trace.empty());
  }
  SECTION("Ct_4(2) > F_4(253)+7") {
    Verdict v = eng.compare(eng.ct(4, eng.num(2)),
                            eng.plus(eng.f(4, eng.num(253)), 7));
    REQUIRE(v.kind == Verdict::ProvenGT);
  }
  SECTION("unknown stays unknown") {
    // No lemma gives upper bounds on Ct_9, so this must not be decided.
    ExprPtr a = eng.ct(9, eng.num(3));
    ExprPtr b = eng.f(9, eng.f(9, eng.num(500)));
    REQUIRE(eng.compare(a, b).kind == Verdict::Unknown);
  }
  SECTION("Ctfunc06(1) > F_4(F_4(254))") {
    Verdict v = eng.compare(eng.ctfunc(0, 6, eng.num(1)),
                            eng.f(4, eng.f(4, eng.num(254))));
    REQUIRE(v.kind == Verdict::ProvenGT);
  }
}

TEST_CASE("section 4 chain verifies with traces") {
  Engine eng;
  auto steps = eng.verify_section4_chain();
  REQUIRE(steps.size() == 11);
  for (const auto& s : steps) {
    INFO(s.id);
    REQUIRE(s.status == StepResult::Pass);
    REQUIRE_FALSE(s.trace.empty());
  }
}

TEST_CASE("induction lemmas") {
  Engine eng;
  auto rows = eng.verify_induction_lemmas();
  int pass = 0, claimed = 0, fail = 0;
  for (const auto& r : rows) {
    INFO(r.id);
    if (r.status == StepResult::Pass) ++pass;
    if (r.status == StepResult::Claimed) ++claimed;
    if (r.status == StepResult::Fail) ++fail;
  }
  REQUIRE(fail == 0);
  for (const auto& r : rows) {
    INFO(r.id);
    bool optional_row = r.id.find("Ct_9") != std::string::npos ||
                        r.id.find("Ct_10") != std::string::npos ||
                        r.id.find("Ct_7") != std::string::npos;
    if (!optional_row) REQUIRE(r.status == StepResult::Pass);
  }
}

TEST_CASE("exact/symbolic agreement") {
  // Wherever a row bound's instance is exactly computable, the numbers obey
  // the symbolic lemma.
  Engine eng;
  for (int m = 4; m <= 5; ++m) {
    auto lhs = eng.eval_ct(2, Big(m));
    auto rhs = eng.eval_f(4, Big(m - 4));
    REQUIRE(lhs.has_value());
    REQUIRE(rhs.has_value());
    REQUIRE(*lhs >= *rhs + 3);
  }
}

TEST_CASE("fault injection: corrupted Ct initial value fails the chain") {
  CtParams bad;
  bad.ct4_1 = 9;
  Engine eng(Budget{}, bad);
  auto steps = eng.verify_section4_chain();
  bool any_fail = false;
  for (const auto& s : steps)
    any_fail = any_fail || s.status != StepResult::Pass;
  REQUIRE(any_fail);
}

TEST_CASE("expression parsing") {
  Engine eng;
  REQUIRE(*eng.eval(parse_expr(eng, "Ctfunc[3,5](1)")) == 256);
  REQUIRE(*eng.eval(parse_expr(eng, "F[3](2)")) == 29);
  REQUIRE(*eng.eval(parse_expr(eng, "Ct[2](4)")) == 2059);
  REQUIRE(*eng.eval(parse_expr(eng, "F[0](7) + 3")) == 11);
  REQUIRE(*eng.eval(parse_expr(eng, "Ct[2](4) - 9")) == 2050);
  REQUIRE(*eng.eval(parse_expr(eng, "42")) == 42);
  REQUIRE_THROWS_AS(parse_expr(eng, "G[3](2)"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_expr(eng, "Ct[11](2)"), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_expr(eng, "F[3](2) junk"), std::invalid_argument);
}
