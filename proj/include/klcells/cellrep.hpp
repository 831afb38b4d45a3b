#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "klcells/cells.hpp"
#include "klcells/hecke.hpp"

namespace klcells {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// The cell module of a left or right cell at the specialization e^g -> 1.
///
/// Column w of generator(s) holds the augmented C-coefficients of T_s C_w
/// (left) or C_w T_s (right) at the cell members; coefficients outside the
/// cell are dropped, which is the quotient by the lower cells.
struct CellModule {
  CellSide side = CellSide::Left;
  std::vector<Element> cell;
  std::vector<IntMatrix> generators;

  std::size_t dimension() const { return cell.size(); }
  /// Matrix of the group element w: a product of generator matrices, in
  /// reverse order on a right module.
  IntMatrix action(const CoxeterSystem& sys, Element w) const;
};

CellModule cell_module(const KLTable& table, const CellPartition& partition, std::size_t block);

/// Checks s^2 = 1 and the braid relations (st)^m = 1 exactly.
bool satisfies_coxeter_relations(const CellModule& m, const CoxeterSystem& sys);

/// Character values, one per conjugacy class of W in the system's class order.
using Character = std::vector<std::int64_t>;
Character character(const CellModule& m, const CoxeterSystem& sys);

/// Compares the characters of a common cell under weights related by the sign
/// change of one class: chi'(g) = (-1)^{l_cls(g)} chi(g) for all classes.
/// Throws UsageError if the two tables have different cells of this side.
bool sign_twist_check(const KLTable& table, const KLTable& flipped, CellSide side, std::size_t block,
                      std::size_t flipped_class);

}  // namespace klcells
