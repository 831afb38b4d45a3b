#include <random>

#include "doctest.h"
#include "klcells/error.hpp"
#include "klcells/laurent.hpp"
#include "oracles.hpp"

using namespace klcells;

TEST_SUITE("laurent") {
  TEST_CASE("ring laws on random polynomials") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
      const int rank = 1 + trial % 3;
      const auto a = oracle::random_poly(rng, rank, 4, 3);
      const auto b = oracle::random_poly(rng, rank, 3, 3);
      const auto c = oracle::random_poly(rng, rank, 3, 2);
      CHECK(a + b == b + a);
      CHECK(a * b == b * a);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a - a == LaurentPoly(rank));
      CHECK(a * LaurentPoly::one(rank) == a);
      CHECK(a.bar().bar() == a);
      CHECK((a * b).bar() == a.bar() * b.bar());
      CHECK((a * b).augmentation() == a.augmentation() * b.augmentation());
      const auto split = a.sign_split();
      CHECK(split.negative + split.constant + split.positive == a);
      CHECK(LaurentPoly::parse(a.to_string(), rank) == a);
    }
  }

  TEST_CASE("lexicographic exponent order") {
    CHECK(Exponent::from({0, 1}).sign() == 1);
    CHECK(Exponent::from({-1, 5}).sign() == -1);
    CHECK(Exponent::from({0, 0}).sign() == 0);
    CHECK(Exponent::from({1, -9}) > Exponent::from({0, 9}));
  }

  TEST_CASE("skew solve") {
    const auto alpha = LaurentPoly::parse("e[2] - e[-2] + 3 e[1] - 3 e[-1]", 1);
    const auto p = LaurentPoly::skew_solve(alpha);
    CHECK(p == LaurentPoly::parse("-e[-2] - 3 e[-1]", 1));
    CHECK(p - p.bar() == alpha);
    CHECK_THROWS_AS(LaurentPoly::skew_solve(LaurentPoly::parse("e[1]", 1)), UsageError);
  }

  TEST_CASE("formatting") {
    CHECK(LaurentPoly(2).to_string() == "0");
    CHECK(LaurentPoly::parse("2 e[1,0] - e[0,-1]", 2).to_string() == "2 e[1,0] - e[0,-1]");
    CHECK(LaurentPoly::parse("5", 1) == LaurentPoly::constant(1, 5));
    CHECK_THROWS_AS(LaurentPoly::parse("e[1,2]", 1), UsageError);
    CHECK_THROWS_AS(LaurentPoly::parse("x", 1), UsageError);
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(LaurentPoly::one(1) + LaurentPoly::one(2), UsageError);
    CHECK_THROWS_AS(LaurentPoly(kMaxRank + 1), ResourceError);
#ifndef KLCELLS_BIGINT
    const auto big = LaurentPoly::constant(1, INT64_MAX);
    CHECK_THROWS_AS(big + big, ResourceError);
    CHECK_THROWS_AS(big * LaurentPoly::constant(1, 2), ResourceError);
#endif
    const auto e = LaurentPoly::monomial(1, Exponent::from({INT32_MAX}));
    CHECK_THROWS_AS(e * e, ResourceError);
  }
}
