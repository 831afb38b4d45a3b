#pragma once

// Left cells of I2(M), M even, in the six regimes of non-negative weights,
// as sets of reduced words.

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"

namespace golden {

using Block = std::set<std::string>;
using Partition = std::set<Block>;

struct Regime {
  std::string label;
  long phi_s;
  long phi_t;
  Partition cells;
};

inline std::vector<Regime> dihedral_left_cells(int M) {
  using oracle::Dihedral;
  const std::string one = "1", s = "s", t = "t";
  const std::string w0 = Dihedral::word(0, M);
  const std::string sw0 = Dihedral::word(1, M - 1);
  const std::string tw0 = Dihedral::word(0, M - 1);
  Block all, lam_s, lam_t;
  for (const auto& w : Dihedral{M}.words()) all.insert(w);
  for (int len = 1; len < M; ++len)
    for (int first = 0; first < 2; ++first) {
      const bool ends_in_s = (first + len - 1) % 2 == 0;
      (ends_in_s ? lam_s : lam_t).insert(Dihedral::word(first, len));
    }
  auto minus = [](Block b, const std::string& x) {
    b.erase(x);
    return b;
  };
  return {
      {"0 = phi(s) = phi(t)", 0, 0, {all}},
      {"0 = phi(s) < phi(t)", 0, 1, {{one, s}, minus(lam_s, s), minus(lam_t, sw0), {sw0, w0}}},
      {"0 < phi(s) < phi(t)", 1, 2, {{one}, {s}, minus(lam_s, s), minus(lam_t, sw0), {sw0}, {w0}}},
      {"0 < phi(s) = phi(t)", 1, 1, {{one}, lam_s, lam_t, {w0}}},
      {"0 < phi(t) < phi(s)", 2, 1, {{one}, {t}, minus(lam_s, tw0), minus(lam_t, t), {tw0}, {w0}}},
      {"0 = phi(t) < phi(s)", 1, 0, {{one, t}, minus(lam_s, tw0), minus(lam_t, t), {tw0, w0}}},
  };
}

}  // namespace golden
