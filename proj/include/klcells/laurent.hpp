#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <compare>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#ifdef KLCELLS_BIGINT
#include <boost/multiprecision/cpp_int.hpp>
#endif

#include "klcells/error.hpp"

namespace klcells {

inline constexpr int kMaxRank = 6;

/// Exponent vector in Z^r, compared lexicographically. Coordinates past the
/// rank are kept at zero so comparisons never need the rank.
struct Exponent {
  std::array<std::int32_t, kMaxRank> v{};

  static Exponent zero() { return {}; }
  static Exponent from(const std::vector<std::int64_t>& coords);

  friend auto operator<=>(const Exponent&, const Exponent&) = default;

  Exponent operator-() const {
    Exponent r;
    for (int i = 0; i < kMaxRank; ++i) r.v[i] = -v[i];
    return r;
  }
  friend Exponent operator+(const Exponent& a, const Exponent& b) {
    Exponent r;
    for (int i = 0; i < kMaxRank; ++i) {
      if (__builtin_add_overflow(a.v[i], b.v[i], &r.v[i]))
        throw ResourceError("exponent overflow in Laurent arithmetic");
    }
    return r;
  }
  /// -1, 0, +1 according to the lexicographic sign.
  int sign() const {
    for (auto x : v)
      if (x != 0) return x > 0 ? 1 : -1;
    return 0;
  }
};

inline Exponent Exponent::from(const std::vector<std::int64_t>& coords) {
  if (coords.size() > static_cast<std::size_t>(kMaxRank))
    throw ResourceError("exponent rank exceeds " + std::to_string(kMaxRank));
  Exponent e;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] > INT32_MAX || coords[i] < -INT32_MAX) throw ResourceError("exponent out of range");
    e.v[i] = static_cast<std::int32_t>(coords[i]);
  }
  return e;
}

namespace detail {

template <class T>
T checked_add(const T& a, const T& b) {
  if constexpr (std::is_integral_v<T>) {
    T r;
    if (__builtin_add_overflow(a, b, &r)) throw ResourceError("integer overflow in Laurent coefficient");
    return r;
  } else {
    return a + b;
  }
}

template <class T>
T checked_mul(const T& a, const T& b) {
  if constexpr (std::is_integral_v<T>) {
    T r;
    if (__builtin_mul_overflow(a, b, &r)) throw ResourceError("integer overflow in Laurent coefficient");
    return r;
  } else {
    return a * b;
  }
}

template <class T>
T checked_neg(const T& a) {
  if constexpr (std::is_integral_v<T>) {
    T r;
    if (__builtin_sub_overflow(T{0}, a, &r)) throw ResourceError("integer overflow in Laurent coefficient");
    return r;
  } else {
    return -a;
  }
}

}  // namespace detail

/// Element of the group ring Z[Z^r], sum of c_e * e^e over finitely many
/// exponents, stored as terms sorted by increasing exponent.
template <class Coeff>
class BasicLaurentPoly {
 public:
  struct Term {
    Exponent exp;
    Coeff coeff;
    friend bool operator==(const Term&, const Term&) = default;
  };

  BasicLaurentPoly() = default;
  explicit BasicLaurentPoly(int rank) : rank_(rank) { check_rank(rank); }

  static BasicLaurentPoly monomial(int rank, const Exponent& e, Coeff c = Coeff{1}) {
    BasicLaurentPoly p(rank);
    if (c != Coeff{0}) p.terms_.push_back({e, std::move(c)});
    return p;
  }
  static BasicLaurentPoly constant(int rank, Coeff c) { return monomial(rank, Exponent::zero(), std::move(c)); }
  static BasicLaurentPoly one(int rank) { return constant(rank, Coeff{1}); }

  /// Builds from arbitrary (exponent, coefficient) pairs, merging duplicates.
  static BasicLaurentPoly from_terms(int rank, std::vector<Term> terms) {
    BasicLaurentPoly p(rank);
    p.terms_ = std::move(terms);
    p.normalize();
    return p;
  }

  int rank() const { return rank_; }
  bool is_zero() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  Coeff coefficient(const Exponent& e) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                               [](const Term& t, const Exponent& x) { return t.exp < x; });
    return (it != terms_.end() && it->exp == e) ? it->coeff : Coeff{0};
  }
  Coeff constant_term() const { return coefficient(Exponent::zero()); }

  /// Augmentation: e^g -> 1, the sum of all coefficients.
  Coeff augmentation() const {
    Coeff s{0};
    for (const auto& t : terms_) s = detail::checked_add(s, t.coeff);
    return s;
  }

  /// e^g -> e^{-g}.
  BasicLaurentPoly bar() const {
    BasicLaurentPoly r(rank_);
    r.terms_.reserve(terms_.size());
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) r.terms_.push_back({-it->exp, it->coeff});
    return r;
  }

  struct SignSplit;
  SignSplit sign_split() const;

  /// The unique p supported on negative exponents with p - bar(p) = alpha.
  /// Requires bar(alpha) = -alpha.
  static BasicLaurentPoly skew_solve(const BasicLaurentPoly& alpha) {
    if (!(alpha.bar() == -alpha)) throw UsageError("skew_solve: argument is not skew-symmetric");
    BasicLaurentPoly p(alpha.rank_);
    for (const auto& t : alpha.terms_)
      if (t.exp.sign() < 0) p.terms_.push_back(t);
    return p;
  }

  BasicLaurentPoly operator-() const {
    BasicLaurentPoly r = *this;
    for (auto& t : r.terms_) t.coeff = detail::checked_neg(t.coeff);
    return r;
  }

  BasicLaurentPoly& operator+=(const BasicLaurentPoly& o) { return merge(o, false); }
  BasicLaurentPoly& operator-=(const BasicLaurentPoly& o) { return merge(o, true); }
  friend BasicLaurentPoly operator+(BasicLaurentPoly a, const BasicLaurentPoly& b) { return a += b; }
  friend BasicLaurentPoly operator-(BasicLaurentPoly a, const BasicLaurentPoly& b) { return a -= b; }

  friend BasicLaurentPoly operator*(const BasicLaurentPoly& a, const BasicLaurentPoly& b) {
    check_same_rank(a, b);
    if (a.is_zero() || b.is_zero()) return BasicLaurentPoly(a.rank_);
    if (b.terms_.size() == 1) return a.times_monomial(b.terms_[0].exp, b.terms_[0].coeff);
    if (a.terms_.size() == 1) return b.times_monomial(a.terms_[0].exp, a.terms_[0].coeff);
    std::vector<Term> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& x : a.terms_)
      for (const auto& y : b.terms_) out.push_back({x.exp + y.exp, detail::checked_mul(x.coeff, y.coeff)});
    BasicLaurentPoly r(a.rank_);
    r.terms_ = std::move(out);
    r.normalize();
    return r;
  }
  BasicLaurentPoly& operator*=(const BasicLaurentPoly& o) { return *this = *this * o; }

  BasicLaurentPoly times_monomial(const Exponent& e, const Coeff& c) const {
    BasicLaurentPoly r(rank_);
    if (c == Coeff{0}) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.exp + e, detail::checked_mul(t.coeff, c)});
    return r;
  }

  friend bool operator==(const BasicLaurentPoly& a, const BasicLaurentPoly& b) {
    return a.rank_ == b.rank_ && a.terms_ == b.terms_;
  }

  /// "e[1,-2] + 3 e[0,0] - e[-1,0]"; zero prints as "0". Terms appear in
  /// decreasing exponent order.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      Coeff c = it->coeff;
      const bool neg = c < Coeff{0};
      if (neg) c = -c;
      if (first) {
        if (neg) os << '-';
      } else {
        os << (neg ? " - " : " + ");
      }
      first = false;
      if (c != Coeff{1}) os << c << ' ';
      os << "e[";
      for (int i = 0; i < rank_; ++i) os << (i ? "," : "") << it->exp.v[i];
      os << ']';
    }
    return os.str();
  }

  /// Inverse of to_string. Also accepts bare integers as constants.
  static BasicLaurentPoly parse(std::string_view text, int rank);

 private:
  static void check_rank(int rank) {
    if (rank < 0 || rank > kMaxRank) throw ResourceError("Laurent rank out of range");
  }
  static void check_same_rank(const BasicLaurentPoly& a, const BasicLaurentPoly& b) {
    if (a.rank_ != b.rank_)
      throw UsageError("Laurent rank mismatch: " + std::to_string(a.rank_) + " vs " + std::to_string(b.rank_));
  }

  void normalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& x, const Term& y) { return x.exp < y.exp; });
    std::size_t out = 0;
    for (std::size_t i = 0; i < terms_.size();) {
      Term acc = terms_[i++];
      while (i < terms_.size() && terms_[i].exp == acc.exp) acc.coeff = detail::checked_add(acc.coeff, terms_[i++].coeff);
      if (acc.coeff != Coeff{0}) terms_[out++] = std::move(acc);
    }
    terms_.resize(out);
  }

  BasicLaurentPoly& merge(const BasicLaurentPoly& o, bool subtract) {
    check_same_rank(*this, o);
    if (o.terms_.empty()) return *this;
    std::vector<Term> out;
    out.reserve(terms_.size() + o.terms_.size());
    auto i = terms_.begin();
    auto j = o.terms_.begin();
    while (i != terms_.end() || j != o.terms_.end()) {
      if (j == o.terms_.end() || (i != terms_.end() && i->exp < j->exp)) {
        out.push_back(std::move(*i++));
      } else {
        Coeff c = subtract ? detail::checked_neg(j->coeff) : j->coeff;
        if (i != terms_.end() && i->exp == j->exp) {
          c = detail::checked_add(i->coeff, c);
          ++i;
        }
        if (c != Coeff{0}) out.push_back({j->exp, std::move(c)});
        ++j;
      }
    }
    terms_ = std::move(out);
    return *this;
  }

  int rank_ = 0;
  std::vector<Term> terms_;
};

template <class Coeff>
struct BasicLaurentPoly<Coeff>::SignSplit {
  BasicLaurentPoly negative;
  BasicLaurentPoly constant;
  BasicLaurentPoly positive;
};

template <class Coeff>
typename BasicLaurentPoly<Coeff>::SignSplit BasicLaurentPoly<Coeff>::sign_split() const {
  SignSplit s{BasicLaurentPoly(rank_), BasicLaurentPoly(rank_), BasicLaurentPoly(rank_)};
  for (const auto& t : terms_) {
    const int sg = t.exp.sign();
    (sg < 0 ? s.negative : sg == 0 ? s.constant : s.positive).terms_.push_back(t);
  }
  return s;
}

template <class Coeff>
BasicLaurentPoly<Coeff> BasicLaurentPoly<Coeff>::parse(std::string_view text, int rank) {
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '\t') s += c;
  auto fail = [&](std::size_t pos) {
    return UsageError("cannot parse Laurent polynomial at position " + std::to_string(pos) + ": '" + s + "'");
  };
  std::vector<Term> terms;
  if (s == "0") return BasicLaurentPoly(rank);
  std::size_t pos = 0;
  while (pos < s.size()) {
    bool neg = false;
    if (s[pos] == '+' || s[pos] == '-') {
      neg = s[pos] == '-';
      ++pos;
    } else if (pos != 0) {
      throw fail(pos);
    }
    std::string digits;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) digits += s[pos++];
    Coeff c{1};
    if (!digits.empty()) {
      c = Coeff{0};
      for (char d : digits) c = detail::checked_add(detail::checked_mul(c, Coeff{10}), Coeff{d - '0'});
    }
    Exponent e;
    if (pos < s.size() && s[pos] == 'e') {
      if (pos + 1 >= s.size() || s[pos + 1] != '[') throw fail(pos);
      pos += 2;
      std::vector<std::int64_t> coords;
      while (pos < s.size() && s[pos] != ']') {
        std::size_t used = 0;
        coords.push_back(std::stoll(s.substr(pos), &used));
        pos += used;
        if (pos < s.size() && s[pos] == ',') ++pos;
      }
      if (pos >= s.size()) throw fail(pos);
      ++pos;
      if (static_cast<int>(coords.size()) != rank) throw fail(pos);
      e = Exponent::from(coords);
    } else if (digits.empty()) {
      throw fail(pos);
    }
    terms.push_back({e, neg ? detail::checked_neg(c) : c});
  }
  return from_terms(rank, std::move(terms));
}

template <class Coeff>
std::ostream& operator<<(std::ostream& os, const BasicLaurentPoly<Coeff>& p) {
  return os << p.to_string();
}

#ifdef KLCELLS_BIGINT
using Coeff = boost::multiprecision::cpp_int;
#else
using Coeff = std::int64_t;
#endif

using LaurentPoly = BasicLaurentPoly<Coeff>;

}  // namespace klcells
