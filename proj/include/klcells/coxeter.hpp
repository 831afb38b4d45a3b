#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace klcells {

inline constexpr std::size_t kDefaultElementCap = 10000;

/// Dense index of a group element. Ids are ordered by (length, ShortLex word),
/// so id 0 is the identity.
struct Element {
  std::uint32_t id = 0;
  friend auto operator<=>(const Element&, const Element&) = default;
};

enum class Side { Left, Right };

using Word = std::vector<int>;
using CoxeterMatrix = std::vector<std::vector<int>>;

/// A finite Coxeter system with its full element enumeration.
///
/// Construction enumerates W by breadth-first search over the Cayley graph and
/// stores left and right multiplication tables, so every query afterwards is a
/// table lookup. Instances are immutable once built.
class CoxeterSystem {
 public:
  /// Builds the system from a Coxeter matrix. Rank-2 systems use the
  /// alternating-word model; larger ranks need a forest graph with bonds in
  /// {2,3,4,6} (integer reflection representation).
  static CoxeterSystem from_matrix(std::vector<std::string> generator_names, CoxeterMatrix matrix,
                                   std::size_t element_cap = kDefaultElementCap,
                                   std::optional<std::string> catalog_type = std::nullopt);

  /// Catalog: A1..A4, B2..B4, D4, F4, I2(m) (also spelled "I2:m").
  static CoxeterSystem from_type(std::string_view name,
                                 std::size_t element_cap = kDefaultElementCap);

  std::size_t rank() const { return names_.size(); }
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& generator_names() const { return names_; }
  const CoxeterMatrix& matrix() const { return matrix_; }
  const std::optional<std::string>& catalog_type() const { return catalog_; }

  // Conjugacy classes of generators (the set S-bar). Classes are ordered by
  // name; each lists its generators in declaration order.
  std::size_t num_classes() const { return classes_.size(); }
  const std::vector<std::vector<int>>& classes() const { return classes_; }
  const std::vector<std::string>& class_names() const { return class_names_; }
  int class_of(int generator) const { return class_of_[generator]; }
  std::optional<int> find_class(std::string_view name) const;
  std::optional<int> find_generator(std::string_view name) const;

  Element identity() const { return Element{0}; }
  Element element(std::size_t id) const { return Element{static_cast<std::uint32_t>(id)}; }
  Element longest() const { return Element{static_cast<std::uint32_t>(size() - 1)}; }

  const Word& word(Element w) const { return words_[w.id]; }
  int length(Element w) const { return static_cast<int>(words_[w.id].size()); }
  const std::vector<int>& length_vector(Element w) const { return length_vectors_[w.id]; }
  int max_length() const { return length(longest()); }

  Element apply(Element w, int s, Side side) const {
    return Element{(side == Side::Left ? left_ : right_)[s * size() + w.id]};
  }
  Element multiply(Element x, Element y) const;
  Element invert(Element w) const { return Element{inverse_[w.id]}; }
  Element from_word(const Word& word) const;

  std::vector<int> right_descent_set(Element w) const;
  std::vector<int> left_descent_set(Element w) const;
  bool has_right_descent(Element w, int s) const { return length(apply(w, s, Side::Right)) < length(w); }
  bool has_left_descent(Element w, int s) const { return length(apply(w, s, Side::Left)) < length(w); }

  /// Elements of the standard parabolic subgroup generated by `generators`,
  /// sorted by id.
  std::vector<Element> parabolic_elements(const std::vector<int>& generators) const;

  /// Conjugacy classes of W, each sorted by id; the representative (first
  /// member) is the ShortLex-least element. Classes are ordered by
  /// representative.
  const std::vector<std::vector<Element>>& conjugacy_classes() const { return conjugacy_classes_; }

  /// "t*s1*t" style; the identity prints as "1".
  std::string format(Element w) const;
  /// Accepts generator names concatenated with optional '*' separators.
  Element parse(std::string_view text) const;

  /// Stable string identifying the system (catalog name or matrix digest
  /// material); used for cache keys.
  std::string fingerprint() const;

 private:
  CoxeterSystem() = default;
  void build_conjugacy_classes();

  std::vector<std::string> names_;
  CoxeterMatrix matrix_;
  std::optional<std::string> catalog_;
  std::vector<std::vector<int>> classes_;
  std::vector<std::string> class_names_;
  std::vector<int> class_of_;

  std::vector<Word> words_;
  std::vector<std::vector<int>> length_vectors_;
  std::vector<std::uint32_t> left_;
  std::vector<std::uint32_t> right_;
  std::vector<std::uint32_t> inverse_;
  std::vector<std::vector<Element>> conjugacy_classes_;
};

/// Parses "B3", "F4", "I2:6", "I2(6)", "A2", "D4" into a canonical catalog
/// name ("I2:6" style for dihedral groups).
std::string canonical_type_name(std::string_view name);

}  // namespace klcells
