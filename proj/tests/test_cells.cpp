#include "doctest.h"
#include "golden.hpp"
#include "klcells/cells.hpp"
#include "klcells/error.hpp"

using namespace klcells;

namespace {

std::shared_ptr<const CoxeterSystem> group(const std::string& type) {
  return std::make_shared<const CoxeterSystem>(CoxeterSystem::from_type(type));
}

golden::Partition as_words(const CoxeterSystem& sys, const CellPartition& p) {
  golden::Partition out;
  for (const auto& b : p.blocks) {
    golden::Block words;
    for (auto w : b) words.insert(sys.format(w));
    out.insert(words);
  }
  return out;
}

KLTable table_for(const std::shared_ptr<const CoxeterSystem>& sys, std::vector<std::vector<std::int64_t>> w) {
  return kl_table(HeckeContext::from_weights(sys, std::move(w)));
}

RelationHandle rel(std::size_t n, const std::vector<std::vector<std::uint32_t>>& ids) {
  std::vector<std::vector<Element>> blocks;
  for (const auto& b : ids) {
    blocks.emplace_back();
    for (auto i : b) blocks.back().push_back(Element{i});
  }
  return RelationHandle(n, blocks);
}

}  // namespace

TEST_SUITE("cells") {
  TEST_CASE("dihedral left cells in all six regimes") {
    for (int m : {4, 6, 8}) {
      const auto sys = group("I2:" + std::to_string(m));
      for (const auto& regime : golden::dihedral_left_cells(m)) {
        CAPTURE(m);
        CAPTURE(regime.label);
        const auto table = table_for(sys, {{regime.phi_s}, {regime.phi_t}});
        CHECK(as_words(*sys, left_cells(table)) == regime.cells);
      }
    }
  }

  TEST_CASE("equal-parameter A2 and two-sided cells of I2(4)") {
    const auto a2 = group("A2");
    const auto t = table_for(a2, {{1}});
    CHECK(as_words(*a2, left_cells(t)) == golden::Partition{{"1"}, {"s1", "s2*s1"}, {"s2", "s1*s2"}, {"s1*s2*s1"}});

    const auto i4 = group("I2:4");
    const auto lr = two_sided_cells(table_for(i4, {{1}, {1}}));
    CHECK(as_words(*i4, lr) ==
          golden::Partition{{"1"}, {"s", "t", "s*t", "t*s", "s*t*s", "t*s*t"}, {"s*t*s*t"}});
  }

  TEST_CASE("structure of partitions and orders") {
    const auto sys = group("B3");
    const auto table = table_for(sys, {{2}, {1}});
    const auto left = left_cells(table);
    const auto right = right_cells(table);
    const auto two = two_sided_cells(table);
    CHECK(right == invert_partition(*sys, left, CellSide::Right));
    CHECK(left_cells(table) == cells_from_left_edges(*sys, left_edges(table, 3), CellSide::Left));
    CHECK(two == cells_from_left_edges(*sys, left_edges(table), CellSide::TwoSided));

    for (const auto* p : {&left, &right, &two}) {
      std::vector<char> seen(sys->size(), 0);
      for (std::size_t i = 0; i < p->blocks.size(); ++i) {
        CHECK(std::is_sorted(p->blocks[i].begin(), p->blocks[i].end()));
        if (i) CHECK(p->blocks[i - 1].front() < p->blocks[i].front());
        for (auto w : p->blocks[i]) seen[w.id]++;
        CHECK(p->leq(i, i));
      }
      CHECK(std::all_of(seen.begin(), seen.end(), [](char c) { return c == 1; }));
      // The identity block is maximal and the w0 block minimal.
      const auto idx = p->block_index(sys->size());
      const auto top = idx[sys->identity().id], bottom = idx[sys->longest().id];
      for (std::size_t i = 0; i < p->blocks.size(); ++i) {
        CHECK(p->leq(i, top));
        CHECK(p->leq(bottom, i));
      }
      for (const auto& [i, j] : p->order)
        if (p->leq(j, i)) CHECK(i == j);
    }
    // Each two-sided cell is a union of left cells and of right cells.
    CHECK(is_coarsening(RelationHandle::of(left), RelationHandle::of(two)));
    CHECK(is_coarsening(RelationHandle::of(right), RelationHandle::of(two)));
  }

  TEST_CASE("serialization of partitions") {
    const auto sys = group("I2:4");
    const auto p = left_cells(table_for(sys, {{1}, {1}}));
    const auto j = partition_json(*sys, p);
    CHECK(j.dump() ==
          R"({"side":"L","blocks":[[[]],[["s"],["t","s"],["s","t","s"]],[["t"],["s","t"],["t","s","t"]],)"
          R"([["s","t","s","t"]]],"order":[[0,0],[1,0],[1,1],[2,0],[2,2],[3,0],[3,1],[3,2],[3,3]]})");
    CHECK(partition_fingerprint(*sys, p) == partition_fingerprint(*sys, p));
    CHECK(partition_fingerprint(*sys, p).size() == 64);
    const auto q = left_cells(table_for(sys, {{1}, {2}}));
    CHECK(partition_fingerprint(*sys, p) != partition_fingerprint(*sys, q));
    CHECK(parse_side("two-sided") == CellSide::TwoSided);
    CHECK(side_name(CellSide::Right) == "R");
    CHECK_THROWS_AS(parse_side("up"), UsageError);
  }

  TEST_CASE("relations") {
    const auto a = rel(4, {{0, 1}, {2}, {3}});
    const auto b = rel(4, {{1, 2}, {0}, {3}});
    CHECK(sup_relations({a, b}) == rel(4, {{0, 1, 2}, {3}}));
    CHECK(is_coarsening(a, sup_relations({a, b})));
    CHECK_FALSE(is_coarsening(sup_relations({a, b}), a));
    CHECK(is_coarsening(RelationHandle::discrete(4), a));
    CHECK(RelationHandle::from_labels({7, 7, 1, 2}) == a);
    CHECK(a.labels()[0] == a.labels()[1]);
    CHECK_THROWS_AS(rel(3, {{0, 1}}), UsageError);
    CHECK_THROWS_AS(rel(3, {{0, 1}, {1, 2}}), UsageError);

    const auto sys = group("I2:4");
    const auto h = sys->parabolic_elements({0});
    const auto left = translation_relation(*sys, h, CellSide::Left);
    CHECK(left.blocks().size() == 4);
    for (const auto& b : left.blocks()) {
      REQUIRE(b.size() == 2);
      CHECK(sys->apply(b[0], 0, Side::Left) == b[1]);
    }
    const auto right = translation_relation(*sys, h, CellSide::Right);
    for (const auto& b : right.blocks()) CHECK(sys->apply(b[0], 0, Side::Right) == b[1]);
    CHECK(translation_relation(*sys, sys->parabolic_elements({0, 1}), CellSide::TwoSided).blocks().size() == 1);
    CHECK_THROWS_AS(translation_relation(*sys, {sys->identity(), sys->parse("s*t")}, CellSide::Left), UsageError);
  }
}
