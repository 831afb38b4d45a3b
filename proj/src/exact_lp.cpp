#include "klcells/exact_lp.hpp"

#include <algorithm>
#include <numeric>

#include "klcells/error.hpp"

namespace klcells {
namespace {

using boost::multiprecision::cpp_int;

Rational floor_q(const Rational& q) {
  cpp_int n = numerator(q), d = denominator(q);
  cpp_int f = n / d;
  if (n < 0 && f * d != n) f -= 1;
  return Rational(f);
}

Rational ceil_q(const Rational& q) { return -floor_q(-q); }

// Picks a value in [lo, hi] (either side optional), preferring 0, then the
// integer of least magnitude, then the midpoint.
Rational pick(const std::optional<Rational>& lo, const std::optional<Rational>& hi) {
  const Rational zero(0);
  if ((!lo || *lo <= zero) && (!hi || *hi >= zero)) return zero;
  if (lo && !hi) return ceil_q(*lo);
  if (hi && !lo) return floor_q(*hi);
  const Rational a = ceil_q(*lo), b = floor_q(*hi);
  if (a <= b) return a > zero ? a : b;
  return (*lo + *hi) / 2;
}

}  // namespace

RationalMatrix rref(RationalMatrix rows, std::size_t cols, std::vector<std::size_t>* pivots) {
  std::vector<std::size_t> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    const Rational inv = 1 / rows[r][c];
    for (auto& x : rows[r]) x *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const Rational f = rows[i][c];
      for (std::size_t j = 0; j < cols; ++j) rows[i][j] -= f * rows[r][j];
    }
    piv.push_back(c);
    ++r;
  }
  rows.resize(r);
  if (pivots) *pivots = std::move(piv);
  return rows;
}

IntVector primitive_integer(const RationalVector& v) {
  cpp_int l = 1;
  for (const auto& x : v) l = boost::multiprecision::lcm(l, cpp_int(denominator(x)));
  std::vector<cpp_int> ints;
  cpp_int g = 0;
  for (const auto& x : v) {
    cpp_int n = numerator(x) * (l / denominator(x));
    g = boost::multiprecision::gcd(g, n);
    ints.push_back(n);
  }
  if (g == 0) throw UsageError("primitive_integer: zero vector");
  if (g < 0) g = -g;
  IntVector out;
  for (auto& n : ints) {
    n /= g;
    if (n > INT64_MAX || n < -INT64_MAX) throw ResourceError("integer overflow in lattice arithmetic");
    out.push_back(static_cast<std::int64_t>(n));
  }
  return out;
}

std::vector<IntVector> integer_nullspace(const std::vector<IntVector>& rows, std::size_t cols) {
  RationalMatrix m;
  for (const auto& r : rows) m.emplace_back(r.begin(), r.end());
  std::vector<std::size_t> pivots;
  m = rref(std::move(m), cols, &pivots);
  std::vector<IntVector> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
    RationalVector v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][free];
    basis.push_back(primitive_integer(v));
  }
  return basis;
}

std::size_t rank_of(const std::vector<IntVector>& rows, std::size_t cols) {
  RationalMatrix m;
  for (const auto& r : rows) m.emplace_back(r.begin(), r.end());
  return rref(std::move(m), cols).size();
}

std::optional<RationalVector> fourier_motzkin(std::vector<Inequality> system, std::size_t vars) {
  // levels[j] constrains variables 0..j-1.
  std::vector<std::vector<Inequality>> levels(vars + 1);
  levels[vars] = std::move(system);
  for (std::size_t j = vars; j-- > 0;) {
    std::vector<Inequality> pos, neg, next;
    for (const auto& q : levels[j + 1]) {
      if (q.a[j] > 0) pos.push_back(q);
      else if (q.a[j] < 0) neg.push_back(q);
      else next.push_back(q);
    }
    for (const auto& p : pos)
      for (const auto& n : neg) {
        const Rational fp = -n.a[j], fn = p.a[j];
        Inequality c{RationalVector(vars, Rational(0)), p.b * fp + n.b * fn};
        for (std::size_t i = 0; i < j; ++i) c.a[i] = p.a[i] * fp + n.a[i] * fn;
        // Normalize so duplicate constraints collapse.
        Rational scale(0);
        for (std::size_t i = 0; i < j; ++i)
          if (c.a[i] != 0) {
            scale = abs(c.a[i]);
            break;
          }
        if (scale != 0) {
          for (std::size_t i = 0; i < j; ++i) c.a[i] /= scale;
          c.b /= scale;
        }
        next.push_back(std::move(c));
      }
    std::sort(next.begin(), next.end(), [](const Inequality& x, const Inequality& y) {
      if (x.a != y.a) return x.a < y.a;
      return x.b > y.b;
    });
    // Among identical left-hand sides only the largest bound matters.
    next.erase(std::unique(next.begin(), next.end(), [](const Inequality& x, const Inequality& y) { return x.a == y.a; }),
               next.end());
    levels[j] = std::move(next);
  }
  for (const auto& q : levels[0])
    if (q.b > 0) return std::nullopt;

  RationalVector y(vars, Rational(0));
  for (std::size_t j = 0; j < vars; ++j) {
    std::optional<Rational> lo, hi;
    for (const auto& q : levels[j + 1]) {
      if (q.a[j] == 0) continue;
      Rational rest = q.b;
      for (std::size_t i = 0; i < j; ++i) rest -= q.a[i] * y[i];
      const Rational bound = rest / q.a[j];
      if (q.a[j] > 0) {
        if (!lo || bound > *lo) lo = bound;
      } else {
        if (!hi || bound < *hi) hi = bound;
      }
    }
    if (lo && hi && *lo > *hi) throw InternalError("Fourier-Motzkin back-substitution found an empty interval");
    y[j] = pick(lo, hi);
  }
  return y;
}

std::optional<RationalVector> strictly_positive_solution(const std::vector<IntVector>& rows, std::size_t vars) {
  // Homogeneous strict system a.y > 0 is feasible iff a.y >= 1 is.
  std::vector<Inequality> sys;
  for (const auto& r : rows) sys.push_back({RationalVector(r.begin(), r.end()), Rational(1)});
  return fourier_motzkin(std::move(sys), vars);
}

}  // namespace klcells
