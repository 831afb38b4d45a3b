#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "klcells/coxeter.hpp"

namespace klcells {

/// Integer linear form on Z[S-bar], one coefficient per generator class.
using Form = std::vector<std::int64_t>;

/// lambda = sum over classes of coeffs[w] * w.
struct LatticeElement {
  std::vector<std::int64_t> coeffs;

  std::size_t dim() const { return coeffs.size(); }
  bool is_zero() const;
  /// Nonzero with coprime entries, i.e. Z[S-bar] / Z lambda is torsion-free.
  bool is_reduced() const;
  LatticeElement operator-() const;
  friend auto operator<=>(const LatticeElement&, const LatticeElement&) = default;

  static LatticeElement basis(std::size_t dim, std::size_t i);
};

/// Parses "t-2s", "2s+t", "-s" over the class names of `sys`.
LatticeElement parse_element(std::string_view text, const CoxeterSystem& sys);
LatticeElement parse_element(std::string_view text, const std::vector<std::string>& class_names);
std::string format_element(const LatticeElement& lambda, const std::vector<std::string>& class_names);

std::int64_t evaluate(const Form& form, const LatticeElement& lambda);

enum class Sign : std::int8_t { Minus = -1, Zero = 0, Plus = 1 };

inline Sign to_sign(std::int64_t v) { return v > 0 ? Sign::Plus : v < 0 ? Sign::Minus : Sign::Zero; }
inline Sign operator-(Sign s) { return static_cast<Sign>(-static_cast<int>(s)); }
char sign_char(Sign s);

/// The positive subset Pos(phi_1, ..., phi_r): lambda belongs to it iff the
/// vector (phi_1(lambda), ..., phi_r(lambda)) is lexicographically >= 0.
///
/// Always held in canonical form: each form is reduced modulo the span of the
/// earlier ones (zero in their reduced-echelon pivot columns) and scaled to a
/// primitive integer vector; forms vanishing on the running kernel are
/// dropped. Two flags defining the same subset have the same canonical form.
class PositiveSubset {
 public:
  /// X = Lambda (empty flag).
  explicit PositiveSubset(std::size_t dim = 0) : dim_(dim) {}

  static PositiveSubset canonicalize(std::size_t dim, const std::vector<Form>& flag);
  static PositiveSubset from_form(const Form& form) { return canonicalize(form.size(), {form}); }

  std::size_t dim() const { return dim_; }
  /// Rank r of the ordered group Lambda / (X cap -X).
  std::size_t depth() const { return flag_.size(); }
  const std::vector<Form>& flag() const { return flag_; }

  /// Trichotomy: Plus iff lambda in X \ -X, Zero iff lambda in X cap -X,
  /// Minus iff lambda in -X \ X.
  Sign contains(const LatticeElement& lambda) const;

  /// The order-embedding Lambda / (X cap -X) -> Z^r (lex).
  std::vector<std::int64_t> embed(const LatticeElement& lambda) const;

  /// Pull back along the symmetry negating the class coordinate `cls`.
  PositiveSubset tau_flip(std::size_t cls) const;
  /// -X.
  PositiveSubset negated() const;

  /// "Pos((1,2),(0,1))"; the whole lattice prints as "Pos()".
  std::string to_string() const;

  friend auto operator<=>(const PositiveSubset&, const PositiveSubset&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Form> flag_;
};

struct SignVector {
  std::vector<Sign> signs;

  /// Over "+0-" in element order.
  std::string to_string() const;
  static SignVector parse(std::string_view text);
  /// Componentwise 0 <= +, 0 <= -, + and - incomparable.
  bool leq(const SignVector& other) const;
  bool has_zero() const;
  friend auto operator<=>(const SignVector&, const SignVector&) = default;
};

SignVector sgn(const PositiveSubset& x, const std::vector<LatticeElement>& elements);

struct Facet {
  std::shared_ptr<const std::vector<LatticeElement>> arrangement;
  SignVector signs;
  Form representative_form;     // zero form for the origin facet
  PositiveSubset representative;
  std::size_t dimension = 0;

  bool is_chamber() const { return !signs.has_zero(); }
};

/// Facet order: F <= F' iff F lies in the closure of F'.
bool closure_leq(const Facet& f, const Facet& g);

/// The hyperplane arrangement {H_lambda : lambda in E} for a reduced,
/// symmetric, complete finite set E, with all of its facets.
class Arrangement {
 public:
  /// Validates E and enumerates facets by exhaustive sign patterns with exact
  /// feasibility tests. Facets are sorted by sign-vector string.
  Arrangement(std::size_t dim, std::vector<LatticeElement> elements);

  /// E together with -E, without duplicates, in first-appearance order
  /// (each lambda followed by -lambda).
  static std::vector<LatticeElement> symmetrize(const std::vector<LatticeElement>& elements);

  std::size_t dim() const { return dim_; }
  const std::vector<LatticeElement>& elements() const { return *elements_; }
  const std::vector<Facet>& facets() const { return facets_; }
  std::vector<std::size_t> chambers() const;

  /// Indices of the chambers whose closure contains `f`.
  std::vector<std::size_t> adjacent_chambers(const Facet& f) const;
  /// Index of the facet containing X.
  std::size_t facet_of(const PositiveSubset& x) const;
  std::size_t index_of(const SignVector& signs) const;
  /// Generators of the parabolic subgroup W_F: classes whose sign is 0.
  std::vector<int> parabolic_of_facet(const Facet& f, const CoxeterSystem& sys) const;
  /// The facet tau_w(F); E must be stable under tau_w.
  const Facet& tau_flip(const Facet& f, std::size_t cls) const;

  std::size_t position_of(const LatticeElement& lambda) const;

 private:
  std::size_t dim_;
  std::shared_ptr<const std::vector<LatticeElement>> elements_;
  std::vector<Facet> facets_;
};

}  // namespace klcells
