#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <random>
#include <vector>

#include "lda/term.hpp"

using namespace lda;

TEST_CASE("j_sub builds left-nested application towers") {
  REQUIRE(j_sub(1) == Term::generator());
  REQUIRE(j_sub(2) == Term::apply(Term::generator(), Term::generator()));
  REQUIRE(j_sub(4)->leaves() == 4);
  REQUIRE(render_term(j_sub(4)) == "jjjj");
  REQUIRE_THROWS_AS(j_sub(0), std::invalid_argument);
  for (int n = 1; n <= 64; ++n)
    REQUIRE(j_sub(n + 1) == Term::apply(j_sub(n), Term::generator()));
}

TEST_CASE("parsing") {
  NameTable names = NameTable::prelude();
  TermPtr j = Term::generator();

  SECTION("juxtaposition associates left") {
    REQUIRE(parse_term("jj", names) == Term::apply(j, j));
    REQUIRE(parse_term("jjj", names) == Term::apply(Term::apply(j, j), j));
    REQUIRE(parse_term("jjjj", names) == j_sub(4));
  }
  SECTION("jN shorthand") {
    REQUIRE(parse_term("j1", names) == j);
    REQUIRE(parse_term("j11", names) == j_sub(11));
    REQUIRE(parse_term("j2 j3", names) ==
            Term::apply(j_sub(2), j_sub(3)));
  }
  SECTION("composition binds looser than application") {
    REQUIRE(parse_term("j o j", names) == Term::compose(j, j));
    REQUIRE(parse_term("jj o j", names) ==
            Term::compose(Term::apply(j, j), j));
    REQUIRE(parse_term("j o jj", names) ==
            Term::compose(j, Term::apply(j, j)));
    REQUIRE(parse_term("j o j o j", names) ==
            Term::compose(Term::compose(j, j), j));
  }
  SECTION("parentheses") {
    REQUIRE(parse_term("j(jj)", names) ==
            Term::apply(j, Term::apply(j, j)));
    REQUIRE(parse_term("(j o j)j", names) ==
            Term::apply(Term::compose(j, j), j));
  }
  SECTION("names") {
    REQUIRE(parse_term("k", names) == j_sub(10));
    REQUIRE(parse_term("k'", names) == Term::apply(j_sub(10), j_sub(11)));
    REQUIRE(parse_term("kp", names) == parse_term("k'", names));
    REQUIRE(parse_term("k''", names) == Term::apply(j_sub(9), j_sub(14)));
    REQUIRE(parse_term("kpp", names) == parse_term("k''", names));
    REQUIRE(parse_term("k(j)(k')", names) ==
            Term::apply(Term::apply(j_sub(10), j), parse_term("k'", names)));
  }
  SECTION("errors carry positions") {
    REQUIRE_THROWS_AS(parse_term("jj)", names), ParseError);
    REQUIRE_THROWS_AS(parse_term("(jj", names), ParseError);
    REQUIRE_THROWS_AS(parse_term("zz", names), ParseError);
    REQUIRE_THROWS_AS(parse_term("j0", names), ParseError);
    REQUIRE_THROWS_AS(parse_term("", names), ParseError);
    try {
      parse_term("jj zz", names);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      REQUIRE(e.position == 3);
    }
  }
}

TEST_CASE("rendering matches the pinned forms") {
  TermPtr j = Term::generator();
  REQUIRE(render_term(Term::apply(j, j)) == "jj");
  REQUIRE(render_term(Term::apply(j, Term::apply(j, j))) == "j(jj)");
  REQUIRE(render_term(Term::compose(j, j)) == "j o j");
}

namespace {

// Exhaustive terms with at most `max_leaves` generator leaves.
std::vector<TermPtr> all_terms(std::size_t max_leaves) {
  std::vector<std::vector<TermPtr>> by_size(max_leaves + 1);
  by_size[1].push_back(Term::generator());
  for (std::size_t n = 2; n <= max_leaves; ++n) {
    for (std::size_t l = 1; l < n; ++l) {
      for (const auto& a : by_size[l])
        for (const auto& b : by_size[n - l]) {
          by_size[n].push_back(Term::apply(a, b));
          by_size[n].push_back(Term::compose(a, b));
        }
    }
  }
  std::vector<TermPtr> out;
  for (const auto& bucket : by_size)
    out.insert(out.end(), bucket.begin(), bucket.end());
  return out;
}

TermPtr random_term(std::mt19937& rng, int depth) {
  if (depth == 0 || rng() % 3 == 0) return Term::generator();
  TermPtr l = random_term(rng, depth - 1);
  TermPtr r = random_term(rng, depth - 1);
  return rng() % 2 ? Term::apply(l, r) : Term::compose(l, r);
}

}  // namespace

TEST_CASE("render/parse round trip") {
  NameTable names = NameTable::prelude();
  SECTION("exhaustive up to 6 leaves") {
    auto terms = all_terms(6);
    REQUIRE(terms.size() > 1000);
    for (const auto& t : terms)
      REQUIRE(parse_term(render_term(t), names) == t);
  }
  SECTION("random terms up to depth 6") {
    std::mt19937 rng(0);
    for (int i = 0; i < 2000; ++i) {
      TermPtr t = random_term(rng, 6);
      REQUIRE(parse_term(render_term(t), names) == t);
    }
  }
}

TEST_CASE("name expansion is idempotent") {
  // Parsing expands names fully, so re-parsing the rendering is a fixpoint.
  NameTable names = NameTable::prelude();
  for (const char* s : {"k", "k'", "k''", "k(j)(k'')", "k o k'"}) {
    TermPtr once = parse_term(s, names);
    TermPtr twice = parse_term(render_term(once), names);
    REQUIRE(once == twice);
  }
}
