#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "klcells/coxeter.hpp"
#include "klcells/laurent.hpp"
#include "klcells/paramspace.hpp"

namespace klcells {

/// Parameters of a Hecke algebra: the group and a weight in Z^r (lex order)
/// for each generator class.
class HeckeContext {
 public:
  /// Weights phi_X(class) from the quotient embedding of a positive subset.
  static HeckeContext specialize(std::shared_ptr<const CoxeterSystem> sys, const PositiveSubset& x);
  /// Arbitrary class weights, all of the same length r <= kMaxRank.
  static HeckeContext from_weights(std::shared_ptr<const CoxeterSystem> sys,
                                   std::vector<std::vector<std::int64_t>> class_weights);

  const CoxeterSystem& system() const { return *sys_; }
  const std::shared_ptr<const CoxeterSystem>& system_ptr() const { return sys_; }
  int rank() const { return rank_; }
  const std::optional<PositiveSubset>& positive_subset() const { return x_; }
  const std::vector<std::vector<std::int64_t>>& class_weights() const { return class_weights_; }
  const Exponent& weight(int generator) const { return gen_weights_[generator]; }
  /// e^{phi(s)} - e^{-phi(s)}.
  const LaurentPoly& q(int generator) const { return q_[generator]; }

  LaurentPoly zero() const { return LaurentPoly(rank_); }
  LaurentPoly one() const { return LaurentPoly::one(rank_); }

  /// Group fingerprint plus the weight tuple; equal fingerprints give equal
  /// KL tables.
  std::string fingerprint() const;

 private:
  HeckeContext() = default;
  void finish();

  std::shared_ptr<const CoxeterSystem> sys_;
  std::optional<PositiveSubset> x_;
  int rank_ = 0;
  std::vector<std::vector<std::int64_t>> class_weights_;
  std::vector<Exponent> gen_weights_;
  std::vector<LaurentPoly> q_;
};

/// Element of the Hecke algebra in the T-basis, keyed by element id.
class HeckeElement {
 public:
  explicit HeckeElement(int rank = 0) : rank_(rank) {}
  static HeckeElement basis(int rank, Element w) {
    HeckeElement h(rank);
    h.terms_.emplace(w.id, LaurentPoly::one(rank));
    return h;
  }

  int rank() const { return rank_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<std::uint32_t, LaurentPoly>& terms() const { return terms_; }
  LaurentPoly coefficient(Element w) const;

  /// Adds c * T_w.
  void add(Element w, const LaurentPoly& c);
  HeckeElement& operator+=(const HeckeElement& o);
  HeckeElement& operator-=(const HeckeElement& o);
  friend HeckeElement operator+(HeckeElement a, const HeckeElement& b) { return a += b; }
  friend HeckeElement operator-(HeckeElement a, const HeckeElement& b) { return a -= b; }
  /// Scalar multiplication.
  friend HeckeElement operator*(const LaurentPoly& c, const HeckeElement& h);
  friend bool operator==(const HeckeElement&, const HeckeElement&) = default;

  std::string to_string(const CoxeterSystem& sys) const;

 private:
  int rank_;
  std::map<std::uint32_t, LaurentPoly> terms_;
};

/// T_s * h (side Left) or h * T_s (side Right).
HeckeElement t_multiply(const HeckeContext& ctx, int s, const HeckeElement& h, Side side);
/// T_w * h, applying the generators of the normal form of w.
HeckeElement t_multiply(const HeckeContext& ctx, Element w, const HeckeElement& h, Side side);

/// bar(T_w) in the T-basis for every w, indexed by id.
std::vector<HeckeElement> bar_expand(const HeckeContext& ctx);
/// bar(h) given the table from bar_expand.
HeckeElement bar(const HeckeContext& ctx, const std::vector<HeckeElement>& r_table, const HeckeElement& h);

/// Sparse column of a unitriangular table: (row id, polynomial) sorted by id.
using Column = std::vector<std::pair<std::uint32_t, LaurentPoly>>;

struct KLOptions {
  unsigned jobs = 1;
};

/// The polynomials p_{y,w} with C_w = sum_y p_{y,w} T_y.
class KLTable {
 public:
  KLTable(HeckeContext ctx, std::vector<Column> columns);

  const HeckeContext& context() const { return ctx_; }
  const CoxeterSystem& system() const { return ctx_.system(); }
  int rank() const { return ctx_.rank(); }

  /// Nonzero p_{y,w} sorted by y, ending with (w, 1).
  const Column& column(Element w) const { return columns_[w.id]; }
  LaurentPoly p(Element y, Element w) const;
  HeckeElement c_element(Element w) const;

  /// Coefficients of h on the C-basis, sorted by id.
  Column expand_in_c_basis(const HeckeElement& h) const;
  /// C-basis coefficients of T_s * C_y.
  Column t_times_c(int s, Element y) const;

  /// Versioned binary encoding: magic, version, context fingerprint, columns.
  std::vector<std::uint8_t> serialize() const;
  /// Throws UsageError if the bytes are malformed or belong to another context.
  static KLTable deserialize(const HeckeContext& ctx, const std::vector<std::uint8_t>& bytes);

  friend bool operator==(const KLTable& a, const KLTable& b) { return a.columns_ == b.columns_; }

 private:
  // Back-substitution on a dense workspace; consumes `work`.
  Column reduce_to_c_basis(std::vector<LaurentPoly>& work) const;

  HeckeContext ctx_;
  std::vector<Column> columns_;
};

/// Kazhdan-Lusztig basis by the triangular solve against the bar table.
KLTable kl_table(const HeckeContext& ctx, const KLOptions& opts = {});

/// Disk cache of KL tables keyed by a digest of the context fingerprint.
class TableCache {
 public:
  explicit TableCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const std::filesystem::path& directory() const { return dir_; }
  std::filesystem::path path_for(const HeckeContext& ctx) const;
  std::optional<KLTable> load(const HeckeContext& ctx) const;
  void store(const KLTable& table) const;
  /// Loads or computes and stores. Sets *hit when given.
  KLTable get(const HeckeContext& ctx, const KLOptions& opts = {}, bool* hit = nullptr) const;

  struct Entry {
    std::string file;
    std::string fingerprint;
    std::uintmax_t bytes;
  };
  std::vector<Entry> list() const;
  std::size_t clear() const;

 private:
  std::filesystem::path dir_;
};

/// Hex SHA-256 digest.
std::string sha256_hex(const std::string& data);

}  // namespace klcells
