#include <filesystem>
#include <unistd.h>

#include "doctest.h"
#include "klcells/error.hpp"
#include "klcells/verify.hpp"

using namespace klcells;

namespace {

std::shared_ptr<const CoxeterSystem> group(const std::string& type) {
  return std::make_shared<const CoxeterSystem>(CoxeterSystem::from_type(type));
}

Arrangement dihedral_arrangement(const CoxeterSystem& sys) {
  std::vector<LatticeElement> es;
  for (const auto* t : {"s", "t", "t-s", "t+s"}) es.push_back(parse_element(t, sys));
  return Arrangement(2, Arrangement::symmetrize(es));
}

std::vector<std::string> names(const std::vector<Slope>& slopes) {
  std::vector<std::string> out;
  for (const auto& s : slopes) out.push_back(s.to_string());
  return out;
}

}  // namespace

TEST_SUITE("verify") {
  TEST_CASE("slope grid") {
    CHECK(names(slope_grid(3)) == std::vector<std::string>{"0", "1/3", "1/2", "2/3", "1", "3/2", "2", "3", "inf"});
    CHECK(names(slope_grid(1)) == std::vector<std::string>{"0", "1", "inf"});
  }

  TEST_CASE("facet witnesses lie in their facet and are distinct") {
    const auto sys = group("B2");
    const auto arr = dihedral_arrangement(*sys);
    for (const auto& f : arr.facets()) {
      const auto ws = facet_witnesses(arr, f, 3);
      REQUIRE_FALSE(ws.empty());
      CHECK(ws.front() == f.representative);
      CHECK(ws.size() <= 3);
      if (f.dimension == 2) CHECK(ws.size() == 3);
      if (f.dimension == 0) CHECK(ws.size() == 1);
      for (std::size_t i = 0; i < ws.size(); ++i) {
        CHECK(sgn(ws[i], arr.elements()) == f.signs);
        for (std::size_t j = 0; j < i; ++j) CHECK(ws[i] != ws[j]);
      }
    }
  }

  TEST_CASE("facet reports on B2 for left cells") {
    CellEngine engine(group("B2"));
    const auto arr = dihedral_arrangement(engine.system());
    for (std::size_t i = 0; i < arr.facets().size(); ++i) {
      const auto rep = verify_facet(engine, arr, i, 3, {CellSide::Left});
      CHECK(rep.ok());
      REQUIRE(rep.sides.size() == 1);
      CHECK(rep.sides[0].cells == engine.cells(arr.facets()[i].representative, CellSide::Left).blocks.size());
    }
  }

  TEST_CASE("B- on I2(4)") {
    CellEngine engine(group("I2:4"));
    const auto arr = dihedral_arrangement(engine.system());
    for (const auto& f : arr.facets())
      for (auto c : arr.adjacent_chambers(f)) {
        CHECK(check_bminus(engine, arr, f, arr.facets()[c], CellSide::Left) == BMinusOutcome::Pass);
        CHECK_THROWS_AS(check_bminus(engine, arr, f, arr.facets()[c], CellSide::TwoSided), UsageError);
      }
    const auto& origin = arr.facets()[arr.facet_of(PositiveSubset(2))];
    CHECK_THROWS_AS(check_bminus(engine, arr, arr.facets()[arr.chambers()[0]], origin, CellSide::Left), UsageError);
    CHECK(outcome_name(BMinusOutcome::AB1Violation) != outcome_name(BMinusOutcome::CharacterMismatch));
  }

  TEST_CASE("dihedral wall scans") {
    for (const auto* type : {"I2:4", "I2:6"}) {
      CellEngine engine(group(type));
      const auto rep = scan_walls_rank2(engine, 3);
      CHECK(names(rep.walls) == std::vector<std::string>{"1"});
      CHECK(rep.constant_between_walls);
      CHECK(rep.slopes.size() == rep.fingerprints.size());
    }
    CellEngine a3(group("A3"));
    CHECK_THROWS_AS(scan_walls_rank2(a3, 3), UsageError);
  }

  TEST_CASE("invariances on I2(6)") {
    CellEngine engine(group("I2:6"));
    const auto rep = check_invariances(engine, 5, 11);
    CHECK(rep.ok());
    for (const auto& item : rep.items) {
      CAPTURE(item.name);
      CHECK(item.checked > 0);
    }
  }

  TEST_CASE("engine memoization and disk cache") {
    const auto dir = std::filesystem::temp_directory_path() / ("klcells-verify-" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    EngineOptions opts;
    opts.cache_dir = dir;
    const auto sys = group("B3");
    const auto x = PositiveSubset::from_form({1, 2});
    {
      CellEngine engine(sys, opts);
      const auto& p = engine.cells(x, CellSide::Left);
      CHECK(&engine.cells(x, CellSide::Left) == &p);
      engine.cells(x, CellSide::Right);
      CHECK(engine.tables_built() == 1);
      CHECK(engine.cache_hits() == 0);
    }
    CellEngine again(sys, opts);
    again.cells(x, CellSide::Left);
    CHECK(again.cache_hits() == 1);
    CHECK(again.tables_built() == 0);
    std::filesystem::remove_all(dir);
  }
}
