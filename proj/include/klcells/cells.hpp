#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "klcells/coxeter.hpp"
#include "klcells/hecke.hpp"

namespace klcells {

enum class CellSide { Left, Right, TwoSided };

/// "L", "R", "LR".
std::string side_name(CellSide side);
/// Accepts "L"/"left", "R"/"right", "LR"/"two-sided".
CellSide parse_side(std::string_view text);

/// Cells of one side with the induced order. Blocks are sorted by their least
/// element id; each block is sorted by id.
struct CellPartition {
  CellSide side = CellSide::Left;
  std::vector<std::vector<Element>> blocks;
  /// Pairs (i, j) with block i <= block j, reflexive pairs included, sorted.
  std::vector<std::pair<std::size_t, std::size_t>> order;

  std::vector<std::size_t> block_index(std::size_t group_size) const;
  bool leq(std::size_t i, std::size_t j) const;
  friend bool operator==(const CellPartition&, const CellPartition&) = default;
};

/// Left preorder edges: out[y] lists every x (sorted, y included) such that
/// C_x occurs in T_s C_y for some generator s.
using CellGraph = std::vector<std::vector<std::uint32_t>>;
CellGraph left_edges(const KLTable& table, unsigned jobs = 1);

/// Strongly connected components of the graph with condensation order.
CellPartition cells_from_graph(const CellGraph& graph, CellSide side);

CellPartition left_cells(const KLTable& table, unsigned jobs = 1);
CellPartition right_cells(const KLTable& table, unsigned jobs = 1);
CellPartition two_sided_cells(const KLTable& table, unsigned jobs = 1);

/// Cells of `side` from precomputed left edges.
CellPartition cells_from_left_edges(const CoxeterSystem& sys, const CellGraph& left, CellSide side);

/// Elementwise inverse of every block, order transported.
CellPartition invert_partition(const CoxeterSystem& sys, const CellPartition& p, CellSide new_side);

/// {"side": ..., "blocks": [[word, ...], ...], "order": [[i, j], ...]} with
/// words as arrays of generator names.
nlohmann::ordered_json partition_json(const CoxeterSystem& sys, const CellPartition& p);
/// SHA-256 of the compact canonical JSON.
std::string partition_fingerprint(const CoxeterSystem& sys, const CellPartition& p);

/// An equivalence relation on W given by its blocks, held canonically (blocks
/// sorted internally and by least member).
class RelationHandle {
 public:
  RelationHandle() = default;
  /// Validates that the blocks partition {0, ..., n-1}.
  RelationHandle(std::size_t n, std::vector<std::vector<Element>> blocks);
  static RelationHandle discrete(std::size_t n);
  static RelationHandle of(const CellPartition& p);
  /// Blocks are the classes of labels[i].
  static RelationHandle from_labels(const std::vector<std::size_t>& labels);

  std::size_t size() const { return n_; }
  const std::vector<std::vector<Element>>& blocks() const { return blocks_; }
  std::vector<std::size_t> labels() const;
  friend bool operator==(const RelationHandle&, const RelationHandle&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::vector<Element>> blocks_;
};

/// Orbits of left, right or two-sided multiplication by the subgroup H.
/// Throws UsageError when H is not a subgroup.
RelationHandle translation_relation(const CoxeterSystem& sys, const std::vector<Element>& h, CellSide side);
/// Finest common coarsening.
RelationHandle sup_relations(const std::vector<RelationHandle>& rels);
/// Every block of `fine` lies inside a block of `coarse`.
bool is_coarsening(const RelationHandle& fine, const RelationHandle& coarse);

}  // namespace klcells
