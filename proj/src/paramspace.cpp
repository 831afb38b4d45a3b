#include "klcells/paramspace.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "klcells/error.hpp"
#include "klcells/exact_lp.hpp"

namespace klcells {
namespace {

std::int64_t checked_dot(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  if (a.size() != b.size()) throw UsageError("dimension mismatch between form and lattice element");
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::int64_t p;
    if (__builtin_mul_overflow(a[i], b[i], &p) || __builtin_add_overflow(s, p, &s))
      throw ResourceError("integer overflow evaluating a linear form");
  }
  return s;
}

std::string format_tuple(const std::vector<std::int64_t>& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

}  // namespace

bool LatticeElement::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](auto c) { return c == 0; });
}

bool LatticeElement::is_reduced() const {
  std::int64_t g = 0;
  for (auto c : coeffs) g = std::gcd(g, c);
  return g == 1;
}

LatticeElement LatticeElement::operator-() const {
  LatticeElement r = *this;
  for (auto& c : r.coeffs) c = -c;
  return r;
}

LatticeElement LatticeElement::basis(std::size_t dim, std::size_t i) {
  LatticeElement e{std::vector<std::int64_t>(dim, 0)};
  e.coeffs.at(i) = 1;
  return e;
}

LatticeElement parse_element(std::string_view text, const CoxeterSystem& sys) {
  return parse_element(text, sys.class_names());
}

LatticeElement parse_element(std::string_view text, const std::vector<std::string>& class_names) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  auto fail = [&](std::size_t pos, const std::string& what) {
    return UsageError("cannot parse lattice element '" + s + "' at position " + std::to_string(pos) + ": " + what);
  };
  LatticeElement out{std::vector<std::int64_t>(class_names.size(), 0)};
  if (s == "0") return out;
  if (s.empty()) throw fail(0, "empty expression");
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::int64_t sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (pos != 0) {
      throw fail(pos, "expected '+' or '-'");
    }
    std::int64_t coef = 1;
    std::size_t digits_start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos > digits_start) {
      if (pos - digits_start > 12) throw fail(digits_start, "coefficient too large");
      coef = std::stoll(s.substr(digits_start, pos - digits_start));
    }
    if (pos < s.size() && s[pos] == '*') ++pos;
    int best = -1;
    std::size_t best_len = 0;
    for (std::size_t c = 0; c < class_names.size(); ++c) {
      const auto& nm = class_names[c];
      if (nm.size() > best_len && s.compare(pos, nm.size(), nm) == 0) {
        best = static_cast<int>(c);
        best_len = nm.size();
      }
    }
    if (best < 0) throw fail(pos, "unknown class name");
    out.coeffs[best] += sign * coef;
    pos += best_len;
  }
  return out;
}

std::string format_element(const LatticeElement& lambda, const std::vector<std::string>& class_names) {
  std::string out;
  for (std::size_t i = 0; i < lambda.coeffs.size(); ++i) {
    const auto c = lambda.coeffs[i];
    if (c == 0) continue;
    if (c < 0) out += '-';
    else if (!out.empty()) out += '+';
    const auto a = c < 0 ? -c : c;
    if (a != 1) out += std::to_string(a);
    out += class_names.at(i);
  }
  return out.empty() ? "0" : out;
}

std::int64_t evaluate(const Form& form, const LatticeElement& lambda) { return checked_dot(form, lambda.coeffs); }

char sign_char(Sign s) { return s == Sign::Plus ? '+' : s == Sign::Minus ? '-' : '0'; }

PositiveSubset PositiveSubset::canonicalize(std::size_t dim, const std::vector<Form>& flag) {
  PositiveSubset x(dim);
  for (const auto& form : flag) {
    if (form.size() != dim) throw UsageError("flag form has wrong dimension");
    RationalVector v(form.begin(), form.end());
    if (!x.flag_.empty()) {
      RationalMatrix prev;
      for (const auto& f : x.flag_) prev.emplace_back(f.begin(), f.end());
      std::vector<std::size_t> pivots;
      const auto basis = rref(std::move(prev), dim, &pivots);
      for (std::size_t i = 0; i < basis.size(); ++i) {
        const Rational c = v[pivots[i]];
        if (c == 0) continue;
        for (std::size_t j = 0; j < dim; ++j) v[j] -= c * basis[i][j];
      }
    }
    if (std::all_of(v.begin(), v.end(), [](const Rational& q) { return q == 0; })) continue;
    x.flag_.push_back(primitive_integer(v));
  }
  return x;
}

Sign PositiveSubset::contains(const LatticeElement& lambda) const {
  if (lambda.dim() != dim_) throw UsageError("lattice element has wrong dimension");
  for (const auto& f : flag_) {
    const auto v = checked_dot(f, lambda.coeffs);
    if (v != 0) return to_sign(v);
  }
  return Sign::Zero;
}

std::vector<std::int64_t> PositiveSubset::embed(const LatticeElement& lambda) const {
  if (lambda.dim() != dim_) throw UsageError("lattice element has wrong dimension");
  std::vector<std::int64_t> out;
  out.reserve(flag_.size());
  for (const auto& f : flag_) out.push_back(checked_dot(f, lambda.coeffs));
  return out;
}

PositiveSubset PositiveSubset::tau_flip(std::size_t cls) const {
  if (cls >= dim_) throw UsageError("tau_flip: class index out of range");
  std::vector<Form> flipped = flag_;
  for (auto& f : flipped) f[cls] = -f[cls];
  return canonicalize(dim_, flipped);
}

PositiveSubset PositiveSubset::negated() const {
  std::vector<Form> flipped = flag_;
  for (auto& f : flipped)
    for (auto& c : f) c = -c;
  return canonicalize(dim_, flipped);
}

std::string PositiveSubset::to_string() const {
  std::string out = "Pos(";
  for (std::size_t i = 0; i < flag_.size(); ++i) out += (i ? "," : "") + format_tuple(flag_[i]);
  return out + ")";
}

std::string SignVector::to_string() const {
  std::string s;
  for (auto x : signs) s += sign_char(x);
  return s;
}

SignVector SignVector::parse(std::string_view text) {
  SignVector v;
  for (char c : text) {
    if (c == '+') v.signs.push_back(Sign::Plus);
    else if (c == '-') v.signs.push_back(Sign::Minus);
    else if (c == '0') v.signs.push_back(Sign::Zero);
    else throw UsageError("sign vectors use only '+', '0' and '-'");
  }
  return v;
}

bool SignVector::leq(const SignVector& other) const {
  if (signs.size() != other.signs.size()) throw UsageError("sign vectors over different element sets");
  for (std::size_t i = 0; i < signs.size(); ++i)
    if (signs[i] != Sign::Zero && signs[i] != other.signs[i]) return false;
  return true;
}

bool SignVector::has_zero() const { return std::find(signs.begin(), signs.end(), Sign::Zero) != signs.end(); }

SignVector sgn(const PositiveSubset& x, const std::vector<LatticeElement>& elements) {
  SignVector v;
  v.signs.reserve(elements.size());
  for (const auto& e : elements) v.signs.push_back(x.contains(e));
  return v;
}

bool closure_leq(const Facet& f, const Facet& g) {
  if (f.arrangement != g.arrangement) throw UsageError("closure_leq: facets belong to different arrangements");
  return f.signs.leq(g.signs);
}

std::vector<LatticeElement> Arrangement::symmetrize(const std::vector<LatticeElement>& elements) {
  std::vector<LatticeElement> out;
  auto add = [&](const LatticeElement& e) {
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
  };
  for (const auto& e : elements) {
    add(e);
    add(-e);
  }
  return out;
}

Arrangement::Arrangement(std::size_t dim, std::vector<LatticeElement> elements) : dim_(dim) {
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const auto& e = elements[i];
    if (e.dim() != dim) throw UsageError("arrangement element has wrong dimension");
    if (!e.is_reduced()) throw UsageError("arrangement element is not reduced (nonzero with coprime entries)");
    if (std::count(elements.begin(), elements.end(), e) > 1) throw UsageError("arrangement contains duplicates");
    if (std::find(elements.begin(), elements.end(), -e) == elements.end())
      throw UsageError("arrangement is not symmetric (missing the negative of an element)");
  }
  for (std::size_t c = 0; c < dim; ++c)
    if (std::find(elements.begin(), elements.end(), LatticeElement::basis(dim, c)) == elements.end())
      throw UsageError("arrangement is not complete (missing a generator class)");
  elements_ = std::make_shared<const std::vector<LatticeElement>>(std::move(elements));
  const auto& es = *elements_;

  // One representative per +- pair; partner[i] is the index of -es[i].
  std::vector<std::size_t> reps, partner(es.size());
  std::vector<int> rep_of(es.size(), -1);
  std::vector<int> orient(es.size(), 1);
  for (std::size_t i = 0; i < es.size(); ++i) {
    partner[i] = static_cast<std::size_t>(std::find(es.begin(), es.end(), -es[i]) - es.begin());
    if (rep_of[partner[i]] >= 0) {
      rep_of[i] = rep_of[partner[i]];
      orient[i] = -1;
    } else {
      rep_of[i] = static_cast<int>(reps.size());
      reps.push_back(i);
    }
  }

  std::vector<int> pattern(reps.size(), -1);
  while (true) {
    std::vector<IntVector> zero_rows;
    for (std::size_t k = 0; k < reps.size(); ++k)
      if (pattern[k] == 0) zero_rows.push_back(es[reps[k]].coeffs);
    const auto null_basis = integer_nullspace(zero_rows, dim);
    std::vector<IntVector> strict;
    bool trivially_infeasible = false;
    for (std::size_t k = 0; k < reps.size() && !trivially_infeasible; ++k) {
      if (pattern[k] == 0) continue;
      IntVector row;
      for (const auto& n : null_basis) row.push_back(pattern[k] * checked_dot(es[reps[k]].coeffs, n));
      if (std::all_of(row.begin(), row.end(), [](auto c) { return c == 0; })) trivially_infeasible = true;
      strict.push_back(std::move(row));
    }
    if (!trivially_infeasible) {
      if (auto y = strictly_positive_solution(strict, null_basis.size())) {
        RationalVector phi(dim, Rational(0));
        for (std::size_t j = 0; j < null_basis.size(); ++j)
          for (std::size_t c = 0; c < dim; ++c) phi[c] += (*y)[j] * null_basis[j][c];
        Facet f;
        f.arrangement = elements_;
        f.dimension = null_basis.size();
        const bool origin = std::all_of(phi.begin(), phi.end(), [](const Rational& q) { return q == 0; });
        f.representative_form = origin ? Form(dim, 0) : primitive_integer(phi);
        f.representative = origin ? PositiveSubset(dim) : PositiveSubset::from_form(f.representative_form);
        for (std::size_t i = 0; i < es.size(); ++i)
          f.signs.signs.push_back(static_cast<Sign>(orient[i] * pattern[rep_of[i]]));
        if (sgn(f.representative, es) != f.signs)
          throw InternalError("facet representative does not realize its sign vector");
        facets_.push_back(std::move(f));
      }
    }
    std::size_t k = 0;
    while (k < pattern.size() && pattern[k] == 1) pattern[k++] = -1;
    if (k == pattern.size()) break;
    ++pattern[k];
  }
  std::sort(facets_.begin(), facets_.end(),
            [](const Facet& a, const Facet& b) { return a.signs.to_string() < b.signs.to_string(); });
}

std::vector<std::size_t> Arrangement::chambers() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < facets_.size(); ++i)
    if (facets_[i].is_chamber()) out.push_back(i);
  return out;
}

std::vector<std::size_t> Arrangement::adjacent_chambers(const Facet& f) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < facets_.size(); ++i)
    if (facets_[i].is_chamber() && closure_leq(f, facets_[i])) out.push_back(i);
  return out;
}

std::size_t Arrangement::index_of(const SignVector& signs) const {
  for (std::size_t i = 0; i < facets_.size(); ++i)
    if (facets_[i].signs == signs) return i;
  throw UsageError("no facet with sign vector " + signs.to_string());
}

std::size_t Arrangement::facet_of(const PositiveSubset& x) const {
  if (x.dim() != dim_) throw UsageError("positive subset has wrong dimension");
  return index_of(sgn(x, *elements_));
}

std::size_t Arrangement::position_of(const LatticeElement& lambda) const {
  const auto& es = *elements_;
  auto it = std::find(es.begin(), es.end(), lambda);
  if (it == es.end()) throw UsageError("element not in arrangement");
  return static_cast<std::size_t>(it - es.begin());
}

std::vector<int> Arrangement::parabolic_of_facet(const Facet& f, const CoxeterSystem& sys) const {
  if (sys.num_classes() != dim_) throw UsageError("Coxeter system does not match arrangement dimension");
  std::vector<int> gens;
  for (std::size_t c = 0; c < dim_; ++c)
    if (f.signs.signs[position_of(LatticeElement::basis(dim_, c))] == Sign::Zero)
      gens.insert(gens.end(), sys.classes()[c].begin(), sys.classes()[c].end());
  std::sort(gens.begin(), gens.end());
  return gens;
}

const Facet& Arrangement::tau_flip(const Facet& f, std::size_t cls) const {
  if (cls >= dim_) throw UsageError("tau_flip: class index out of range");
  const auto& es = *elements_;
  // sgn(tau X)(lambda) = sgn(X)(tau lambda).
  SignVector flipped;
  for (const auto& e : es) {
    LatticeElement t = e;
    t.coeffs[cls] = -t.coeffs[cls];
    auto it = std::find(es.begin(), es.end(), t);
    if (it == es.end()) throw UsageError("arrangement is not stable under the class symmetry");
    flipped.signs.push_back(f.signs.signs[static_cast<std::size_t>(it - es.begin())]);
  }
  return facets_[index_of(flipped)];
}

}  // namespace klcells
