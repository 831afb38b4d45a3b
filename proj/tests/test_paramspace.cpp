#include <random>

#include "doctest.h"
#include "klcells/error.hpp"
#include "klcells/paramspace.hpp"
#include "oracles.hpp"

using namespace klcells;

namespace {

std::vector<LatticeElement> elems(const std::vector<std::string>& names, const std::vector<std::string>& texts) {
  std::vector<LatticeElement> out;
  for (const auto& t : texts) out.push_back(parse_element(t, names));
  return Arrangement::symmetrize(out);
}

const std::vector<std::string> kST = {"s", "t"};

std::vector<LatticeElement> b2_set() { return elems(kST, {"s", "t", "t-s", "t+s"}); }
std::vector<LatticeElement> f4_set() { return elems(kST, {"s", "t", "s-2t", "s-t", "2s-t", "s+2t", "s+t", "2s+t"}); }

// Lex sign of (f_1(l), ..., f_k(l)) computed straight from the flag.
Sign lex_sign(const std::vector<Form>& flag, const LatticeElement& l) {
  for (const auto& f : flag) {
    std::int64_t v = 0;
    for (std::size_t i = 0; i < f.size(); ++i) v += f[i] * l.coeffs[i];
    if (v != 0) return to_sign(v);
  }
  return Sign::Zero;
}

}  // namespace

TEST_SUITE("paramspace") {
  TEST_CASE("lattice element syntax") {
    CHECK(parse_element("t-2s", kST).coeffs == std::vector<std::int64_t>{-2, 1});
    CHECK(parse_element("-s", kST).coeffs == std::vector<std::int64_t>{-1, 0});
    CHECK(parse_element("2*s+t", kST).coeffs == std::vector<std::int64_t>{2, 1});
    CHECK(format_element(LatticeElement{{-2, 1}}, kST) == "-2s+t");
    CHECK(parse_element(format_element(LatticeElement{{3, -7}}, kST), kST) == LatticeElement{{3, -7}});
    CHECK_THROWS_AS(parse_element("t-x", kST), UsageError);
    CHECK_THROWS_AS(parse_element("", kST), UsageError);
    CHECK(LatticeElement{{2, 4}}.is_reduced() == false);
    CHECK(LatticeElement{{2, 3}}.is_reduced());
  }

  TEST_CASE("canonical flags") {
    CHECK(PositiveSubset::from_form({2, 4}) == PositiveSubset::from_form({1, 2}));
    CHECK(PositiveSubset::canonicalize(2, {{1, 0}, {3, 5}}) == PositiveSubset::canonicalize(2, {{1, 0}, {0, 1}}));
    CHECK(PositiveSubset::canonicalize(2, {{1, 1}, {2, 2}}).depth() == 1);
    CHECK(PositiveSubset::from_form({0, 0}) == PositiveSubset(2));
    CHECK(PositiveSubset::from_form({1, 2}).to_string() == "Pos((1,2))");
    CHECK(PositiveSubset(2).to_string() == "Pos()");
    CHECK(PositiveSubset::from_form({1, 2}).tau_flip(0) == PositiveSubset::from_form({-1, 2}));
    CHECK(PositiveSubset::from_form({1, 2}).negated() == PositiveSubset::from_form({-1, -2}));
  }

  TEST_CASE("positive subset axioms and trichotomy on random pairs") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> coef(-4, 4), dimd(1, 3), depthd(1, 3);
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t dim = dimd(rng);
      std::vector<Form> flag(depthd(rng), Form(dim));
      for (auto& f : flag)
        for (auto& x : f) x = coef(rng);
      const auto x = PositiveSubset::canonicalize(dim, flag);
      LatticeElement l{std::vector<std::int64_t>(dim)}, m{std::vector<std::int64_t>(dim)};
      do {
        for (auto& c : l.coeffs) c = coef(rng);
      } while (l.is_zero());
      for (auto& c : m.coeffs) c = coef(rng);

      const Sign sl = x.contains(l);
      CHECK(sl == lex_sign(flag, l));
      CHECK(x.contains(-l) == -sl);
      // X + X in X, and X cap -X closed under addition.
      LatticeElement sum{std::vector<std::int64_t>(dim)};
      for (std::size_t i = 0; i < dim; ++i) sum.coeffs[i] = l.coeffs[i] + m.coeffs[i];
      const Sign sm = x.contains(m);
      if (sl != Sign::Minus && sm != Sign::Minus) CHECK(x.contains(sum) != Sign::Minus);
      if (sl == Sign::Zero && sm == Sign::Zero) CHECK(x.contains(sum) == Sign::Zero);
      if (sl == Sign::Plus && sm != Sign::Minus) CHECK(x.contains(sum) == Sign::Plus);
      // The embedding is an order embedding.
      const auto el = x.embed(l);
      const auto nz = std::find_if(el.begin(), el.end(), [](auto v) { return v != 0; });
      CHECK((nz == el.end() ? Sign::Zero : to_sign(*nz)) == sl);
    }
  }

  TEST_CASE("facet counts agree with sampling") {
    struct Case {
      std::size_t dim;
      std::vector<LatticeElement> es;
      std::size_t expected;
      int box;
    };
    const std::vector<Case> cases = {
        {2, b2_set(), 17, 3},
        {2, f4_set(), 33, 3},
        {1, Arrangement::symmetrize({LatticeElement{{1}}}), 3, 3},
    };
    for (const auto& c : cases) {
      const Arrangement arr(c.dim, c.es);
      CHECK(arr.facets().size() == c.expected);
      std::set<std::string> got;
      for (const auto& f : arr.facets()) got.insert(f.signs.to_string());
      CHECK(got == oracle::sampled_sign_vectors(c.dim, c.es, c.box));
    }
    // A rank-3 arrangement, with no expected count other than the sampling.
    const std::vector<std::string> abc = {"a", "b", "c"};
    const auto es3 = elems(abc, {"a", "b", "c", "a-b", "b-c", "a-c"});
    const Arrangement arr3(3, es3);
    std::set<std::string> got3;
    for (const auto& f : arr3.facets()) got3.insert(f.signs.to_string());
    CHECK(got3 == oracle::sampled_sign_vectors(3, es3, 2));
  }

  TEST_CASE("facet data is consistent") {
    const Arrangement arr(2, f4_set());
    CHECK(arr.chambers().size() == 16);
    for (std::size_t i = 0; i < arr.facets().size(); ++i) {
      const auto& f = arr.facets()[i];
      CHECK(sgn(f.representative, arr.elements()) == f.signs);
      CHECK(arr.facet_of(f.representative) == i);
      CHECK(arr.index_of(f.signs) == i);
      const bool origin = std::all_of(f.signs.signs.begin(), f.signs.signs.end(), [](Sign x) { return x == Sign::Zero; });
      CHECK(f.dimension == (f.is_chamber() ? 2u : origin ? 0u : 1u));
      for (auto c : arr.adjacent_chambers(f)) CHECK(closure_leq(f, arr.facets()[c]));
      for (std::size_t cls = 0; cls < 2; ++cls) {
        const auto& g = arr.tau_flip(f, cls);
        CHECK(g.signs == sgn(f.representative.tau_flip(cls), arr.elements()));
      }
    }
  }

  TEST_CASE("closure order is a partial order equal to the sign order") {
    for (const auto& es : {b2_set(), f4_set()}) {
      const Arrangement arr(2, es);
      const auto& fs = arr.facets();
      for (const auto& a : fs)
        for (const auto& b : fs) {
          CHECK(closure_leq(a, b) == a.signs.leq(b.signs));
          if (closure_leq(a, b) && closure_leq(b, a)) CHECK(a.signs == b.signs);
          for (const auto& c : fs)
            if (closure_leq(a, b) && closure_leq(b, c)) CHECK(closure_leq(a, c));
        }
      for (const auto& a : fs) CHECK(closure_leq(a, a));
    }
  }

  TEST_CASE("arrangement validation") {
    CHECK_THROWS_AS(Arrangement(2, {LatticeElement{{1, 0}}, LatticeElement{{0, 1}}}), UsageError);
    CHECK_THROWS_AS(Arrangement(2, Arrangement::symmetrize({LatticeElement{{2, 0}}, LatticeElement{{0, 1}}})),
                    UsageError);
    CHECK_THROWS_AS(Arrangement(2, Arrangement::symmetrize({LatticeElement{{1, 1}}})), UsageError);
    CHECK(SignVector::parse("+0-").to_string() == "+0-");
    CHECK_THROWS_AS(SignVector::parse("+x"), UsageError);
  }
}
