#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <vector>

namespace klcells {

using Rational = boost::multiprecision::cpp_rational;
using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;
using IntVector = std::vector<std::int64_t>;

/// Reduced row echelon form over Q; returns the nonzero rows and fills
/// `pivots` with their pivot columns.
RationalMatrix rref(RationalMatrix rows, std::size_t cols, std::vector<std::size_t>* pivots = nullptr);

/// Basis of {x in Q^cols : rows * x = 0}, each vector scaled to a primitive
/// integer vector.
std::vector<IntVector> integer_nullspace(const std::vector<IntVector>& rows, std::size_t cols);

std::size_t rank_of(const std::vector<IntVector>& rows, std::size_t cols);

/// Scales a nonzero rational vector by a positive factor to a primitive
/// integer vector.
IntVector primitive_integer(const RationalVector& v);

/// Inequality a . y >= b.
struct Inequality {
  RationalVector a;
  Rational b;
};

/// Exact feasibility of a system of non-strict linear inequalities by
/// Fourier-Motzkin elimination. Returns a witness (small entries preferred)
/// or nullopt when infeasible.
std::optional<RationalVector> fourier_motzkin(std::vector<Inequality> system, std::size_t vars);

/// Finds y with rows[i] . y > 0 for all i, or nullopt.
std::optional<RationalVector> strictly_positive_solution(const std::vector<IntVector>& rows, std::size_t vars);

}  // namespace klcells
