#include "klcells/cellrep.hpp"

#include <algorithm>

#include "klcells/error.hpp"

namespace klcells {
namespace {

std::int64_t augment(const LaurentPoly& p) {
  if constexpr (std::is_integral_v<Coeff>) {
    return p.augmentation();
  } else {
    const Coeff a = p.augmentation();
    if (a > INT64_MAX || a < INT64_MIN) throw ResourceError("augmented coefficient exceeds 64 bits");
    return static_cast<std::int64_t>(a);
  }
}

}  // namespace

IntMatrix CellModule::action(const CoxeterSystem& sys, Element w) const {
  const auto n = static_cast<Eigen::Index>(cell.size());
  IntMatrix m = IntMatrix::Identity(n, n);
  for (int s : sys.word(w)) m = side == CellSide::Left ? IntMatrix(m * generators[s]) : IntMatrix(generators[s] * m);
  return m;
}

CellModule cell_module(const KLTable& table, const CellPartition& partition, std::size_t block) {
  if (block >= partition.blocks.size()) throw UsageError("cell index out of range");
  if (partition.side == CellSide::TwoSided) throw UsageError("cell modules are built for left or right cells only");
  const auto& sys = table.system();
  CellModule m;
  m.side = partition.side;
  m.cell = partition.blocks[block];
  const auto n = static_cast<Eigen::Index>(m.cell.size());
  std::vector<std::int64_t> pos(sys.size(), -1);
  for (Eigen::Index i = 0; i < n; ++i) pos[m.cell[i].id] = i;

  for (std::size_t s = 0; s < sys.rank(); ++s) {
    IntMatrix g = IntMatrix::Zero(n, n);
    for (Eigen::Index col = 0; col < n; ++col) {
      // Right action of T_s on C_w mirrors the left action on C_{w^-1}.
      const bool right = m.side == CellSide::Right;
      const Element w = right ? sys.invert(m.cell[col]) : m.cell[col];
      for (const auto& [z, c] : table.t_times_c(static_cast<int>(s), w)) {
        const Element target = right ? sys.invert(Element{z}) : Element{z};
        const auto row = pos[target.id];
        if (row >= 0) g(row, col) = augment(c);
      }
    }
    m.generators.push_back(std::move(g));
  }
  return m;
}

bool satisfies_coxeter_relations(const CellModule& m, const CoxeterSystem& sys) {
  const auto n = static_cast<Eigen::Index>(m.dimension());
  const IntMatrix id = IntMatrix::Identity(n, n);
  for (std::size_t s = 0; s < sys.rank(); ++s) {
    if (m.generators[s] * m.generators[s] != id) return false;
    for (std::size_t t = s + 1; t < sys.rank(); ++t) {
      const IntMatrix st = m.generators[s] * m.generators[t];
      IntMatrix p = id;
      for (int k = 0; k < sys.matrix()[s][t]; ++k) p = p * st;
      if (p != id) return false;
    }
  }
  return true;
}

Character character(const CellModule& m, const CoxeterSystem& sys) {
  Character chi;
  for (const auto& cls : sys.conjugacy_classes()) chi.push_back(m.action(sys, cls.front()).trace());
  return chi;
}

bool sign_twist_check(const KLTable& table, const KLTable& flipped, CellSide side, std::size_t block,
                      std::size_t flipped_class) {
  const auto& sys = table.system();
  if (flipped_class >= sys.num_classes()) throw UsageError("class index out of range");
  if (side == CellSide::TwoSided) throw UsageError("sign twist is checked on left or right cells only");
  const auto cells = side == CellSide::Left ? left_cells(table) : right_cells(table);
  const auto cells_flipped = side == CellSide::Left ? left_cells(flipped) : right_cells(flipped);
  if (RelationHandle::of(cells) != RelationHandle::of(cells_flipped))
    throw UsageError("sign twist: the two parameters have different cells");
  const auto chi = character(cell_module(table, cells, block), sys);
  const auto b = std::find(cells_flipped.blocks.begin(), cells_flipped.blocks.end(), cells.blocks.at(block)) -
                 cells_flipped.blocks.begin();
  const auto chi_flipped = character(cell_module(flipped, cells_flipped, static_cast<std::size_t>(b)), sys);
  const auto& classes = sys.conjugacy_classes();
  for (std::size_t k = 0; k < classes.size(); ++k) {
    const int sign = sys.length_vector(classes[k].front())[flipped_class] % 2 ? -1 : 1;
    if (chi_flipped[k] != sign * chi[k]) return false;
  }
  return true;
}

}  // namespace klcells
