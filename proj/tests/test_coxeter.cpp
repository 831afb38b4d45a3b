#include <map>

#include "doctest.h"
#include "klcells/coxeter.hpp"
#include "klcells/error.hpp"
#include "oracles.hpp"

using namespace klcells;

TEST_SUITE("coxeter") {
  TEST_CASE("length distribution matches the Poincare polynomial") {
    const std::map<std::string, std::vector<int>> degrees = {
        {"A1", {2}},          {"A2", {2, 3}},       {"A3", {2, 3, 4}},       {"A4", {2, 3, 4, 5}},
        {"B2", {2, 4}},       {"B3", {2, 4, 6}},    {"B4", {2, 4, 6, 8}},    {"D4", {2, 4, 4, 6}},
        {"F4", {2, 6, 8, 12}}, {"I2:4", {2, 4}},    {"I2:5", {2, 5}},        {"I2:6", {2, 6}}};
    for (const auto& [type, deg] : degrees) {
      CAPTURE(type);
      const auto sys = CoxeterSystem::from_type(type);
      const auto expected = oracle::poincare(deg);
      std::vector<std::size_t> got(sys.max_length() + 1, 0);
      for (std::size_t i = 0; i < sys.size(); ++i) ++got[sys.length(sys.element(i))];
      CHECK(got == expected);
    }
  }

  TEST_CASE("dihedral multiplication agrees with the rotation-reflection model") {
    for (int m : {3, 4, 5, 6}) {
      const auto sys = CoxeterSystem::from_type("I2:" + std::to_string(m));
      const oracle::Dihedral model{m};
      REQUIRE(sys.size() == static_cast<std::size_t>(2 * m));
      for (std::size_t i = 0; i < sys.size(); ++i)
        for (std::size_t j = 0; j < sys.size(); ++j) {
          const auto x = sys.element(i), y = sys.element(j);
          const auto expected = model.multiply(sys.word(x), sys.word(y));
          CHECK(sys.parse(expected) == sys.multiply(x, y));
        }
    }
  }

  TEST_CASE("B_n words evaluate injectively in the signed permutation model") {
    for (int n : {2, 3, 4}) {
      const auto sys = CoxeterSystem::from_type("B" + std::to_string(n));
      CHECK(sys.size() == oracle::count_signed_perms(n));
      std::set<oracle::SignedPerm> images;
      for (std::size_t i = 0; i < sys.size(); ++i) {
        auto p = oracle::SignedPerm::identity(n);
        for (int g : sys.word(sys.element(i))) p = p.then(g);
        images.insert(p);
      }
      CHECK(images.size() == sys.size());
    }
  }

  TEST_CASE("conjugacy class counts") {
    const std::map<std::string, std::size_t> counts = {{"A1", 2}, {"A2", 3},   {"A3", 5},   {"A4", 7},
                                                       {"B2", 5}, {"B3", 10},  {"B4", 20},  {"D4", 13},
                                                       {"F4", 25}, {"I2:4", 5}, {"I2:5", 4}, {"I2:6", 6}};
    for (const auto& [type, n] : counts) {
      CAPTURE(type);
      const auto sys = CoxeterSystem::from_type(type);
      CHECK(sys.conjugacy_classes().size() == n);
      std::size_t total = 0;
      for (const auto& c : sys.conjugacy_classes()) total += c.size();
      CHECK(total == sys.size());
    }
  }

  TEST_CASE("generator classes") {
    CHECK(CoxeterSystem::from_type("A3").class_names() == std::vector<std::string>{"s"});
    CHECK(CoxeterSystem::from_type("B3").class_names() == std::vector<std::string>{"s", "t"});
    CHECK(CoxeterSystem::from_type("F4").class_names() == std::vector<std::string>{"s", "t"});
    CHECK(CoxeterSystem::from_type("I2:6").num_classes() == 2);
    CHECK(CoxeterSystem::from_type("I2:5").num_classes() == 1);
    CHECK(CoxeterSystem::from_type("D4").num_classes() == 1);
  }

  TEST_CASE("group axioms on every element") {
    for (const auto* type : {"B3", "A3", "D4", "I2:6"}) {
      CAPTURE(type);
      const auto sys = CoxeterSystem::from_type(type);
      const auto w0 = sys.longest();
      for (std::size_t i = 0; i < sys.size(); ++i) {
        const auto w = sys.element(i);
        CHECK(sys.multiply(w, sys.invert(w)) == sys.identity());
        CHECK(sys.length(sys.invert(w)) == sys.length(w));
        CHECK(sys.length(sys.multiply(w, w0)) == sys.max_length() - sys.length(w));
        CHECK(sys.from_word(sys.word(w)) == w);
        CHECK(sys.parse(sys.format(w)) == w);
        int total = 0;
        for (int x : sys.length_vector(w)) total += x;
        CHECK(total == sys.length(w));
        for (int s = 0; s < static_cast<int>(sys.rank()); ++s) {
          CHECK(sys.apply(sys.apply(w, s, Side::Left), s, Side::Left) == w);
          CHECK(sys.apply(w, s, Side::Right) == sys.multiply(w, sys.from_word({s})));
        }
      }
      CHECK(sys.right_descent_set(w0).size() == sys.rank());
      CHECK(sys.left_descent_set(sys.identity()).empty());
    }
  }

  TEST_CASE("parabolic subgroups") {
    const auto sys = CoxeterSystem::from_type("B3");
    CHECK(sys.parabolic_elements({0, 1}).size() == 8);
    CHECK(sys.parabolic_elements({1, 2}).size() == 6);
    CHECK(sys.parabolic_elements({0, 2}).size() == 4);
    CHECK(sys.parabolic_elements({}).size() == 1);
  }

  TEST_CASE("custom matrices and errors") {
    const auto a2 = CoxeterSystem::from_matrix({"a", "b"}, {{1, 3}, {3, 1}});
    CHECK(a2.size() == 6);
    CHECK_THROWS_AS(CoxeterSystem::from_matrix({"a", "b"}, {{1, 3}, {2, 1}}), UsageError);
    CHECK_THROWS_AS(CoxeterSystem::from_matrix({"a", "a"}, {{1, 3}, {3, 1}}), UsageError);
    CHECK_THROWS_AS(CoxeterSystem::from_type("Q7"), UsageError);
    CHECK_THROWS_AS(CoxeterSystem::from_type("F4", 100), ResourceError);
    CHECK_THROWS_AS(CoxeterSystem::from_type("B3").parse("s*x"), UsageError);
    CHECK(canonical_type_name("I2(6)") == "I2:6");
  }
}
