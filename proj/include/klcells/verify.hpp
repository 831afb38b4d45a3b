#pragma once

#include <cstdint>
#include <filesystem>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "klcells/cellrep.hpp"
#include "klcells/cells.hpp"
#include "klcells/hecke.hpp"
#include "klcells/paramspace.hpp"

namespace klcells {

struct EngineOptions {
  unsigned jobs = 1;
  std::optional<std::filesystem::path> cache_dir;
  /// KL tables kept in memory at once; partitions are always kept.
  std::size_t table_slots = 4;
};

/// Memoizes KL tables and cell partitions per parameter for one group.
class CellEngine {
 public:
  CellEngine(std::shared_ptr<const CoxeterSystem> sys, EngineOptions opts = {});

  const CoxeterSystem& system() const { return *sys_; }
  const std::shared_ptr<const CoxeterSystem>& system_ptr() const { return sys_; }
  const EngineOptions& options() const { return opts_; }

  HeckeContext context(const PositiveSubset& x) const { return HeckeContext::specialize(sys_, x); }
  std::shared_ptr<const KLTable> table(const HeckeContext& ctx);
  const CellPartition& cells(const HeckeContext& ctx, CellSide side);
  const CellPartition& cells(const PositiveSubset& x, CellSide side) { return cells(context(x), side); }

  std::size_t tables_built() const { return built_; }
  std::size_t cache_hits() const { return hits_; }

 private:
  struct Partitions {
    std::optional<CellPartition> by_side[3];
    std::optional<CellGraph> left;
  };

  std::shared_ptr<const CoxeterSystem> sys_;
  EngineOptions opts_;
  std::mutex mu_;
  std::list<std::pair<std::string, std::shared_ptr<const KLTable>>> tables_;
  std::map<std::string, Partitions> partitions_;
  std::size_t built_ = 0;
  std::size_t hits_ = 0;
};

/// Distinct positive subsets inside the facet, at most k: the stored
/// representative, perturbed single forms with the same signs, and a
/// depth-2 refinement when the facet has dimension >= 2.
std::vector<PositiveSubset> facet_witnesses(const Arrangement& arr, const Facet& facet, std::size_t k);

/// True when every witness yields the same partition of `side`.
bool check_facet_constancy(CellEngine& engine, const Arrangement& arr, const Facet& facet, std::size_t k,
                           CellSide side, std::vector<PositiveSubset>* witnesses = nullptr);

/// Cells of the facet equal sup(translation by W_F, cells of each adjacent chamber).
bool check_sup_formula(CellEngine& engine, const Arrangement& arr, const Facet& facet, CellSide side);

enum class BMinusOutcome { Pass, AB1Violation, CharacterMismatch };
std::string outcome_name(BMinusOutcome o);

/// For each cell C of the facet: C must be a union of chamber cells C_i, and
/// the character of C must equal the sum of the characters of the C_i.
BMinusOutcome check_bminus(CellEngine& engine, const Arrangement& arr, const Facet& facet, const Facet& chamber,
                           CellSide side);

struct FacetReport {
  std::size_t index = 0;
  SignVector signs;
  std::size_t dimension = 0;
  std::vector<PositiveSubset> witnesses;
  struct SideResult {
    CellSide side;
    bool constancy_ok;
    bool sup_ok;
    std::size_t cells;
  };
  std::vector<SideResult> sides;
  double seconds = 0;

  bool ok() const;
};

FacetReport verify_facet(CellEngine& engine, const Arrangement& arr, std::size_t facet_index, std::size_t k,
                         const std::vector<CellSide>& sides);

/// Slope p/q of the weight ratio phi(t)/phi(s); q == 0 is infinity.
struct Slope {
  std::int64_t p = 0;
  std::int64_t q = 1;
  std::string to_string() const;
  friend bool operator==(const Slope&, const Slope&) = default;
};

struct WallReport {
  std::vector<std::string> class_names;
  std::vector<Slope> slopes;
  std::vector<std::string> fingerprints;
  std::vector<std::size_t> cell_counts;
  std::vector<Slope> walls;
  /// Left cells agree on the slopes strictly between consecutive walls.
  bool constant_between_walls = true;
  /// Same for the full fingerprints, which also cover the order on cells.
  bool fingerprints_constant_between_walls = true;
};

/// The grid: 0, every p/q in lowest terms with 1 <= p, q <= max_denominator,
/// and infinity, in increasing order.
std::vector<Slope> slope_grid(std::int64_t max_denominator);

/// Left-cell fingerprints at weights (q, p) on the two generator classes.
/// Walls are interior grid slopes whose fingerprint differs from both
/// neighbours and whose partition is not refined by either neighbour's.
/// Requires exactly two classes.
WallReport scan_walls_rank2(CellEngine& engine, std::int64_t max_denominator);

struct InvarianceReport {
  struct Item {
    std::string name;
    std::size_t checked = 0;
    std::vector<std::string> failures;
  };
  std::vector<Item> items;
  bool ok() const;
};

/// Randomized checks of scaling, flag equivalence, sign change of one class,
/// the class symmetries tau, the sign-change identity on KL polynomials and
/// stability of left cells under a zero-weight parabolic.
InvarianceReport check_invariances(CellEngine& engine, std::size_t samples, std::uint64_t seed);

}  // namespace klcells
