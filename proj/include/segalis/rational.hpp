#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>

namespace segalis {

using Rational = mpq_class;
using RationalPoint = std::vector<Rational>;

/// "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Exact determinant by fraction-tracking Gaussian elimination.
Rational determinant(std::vector<std::vector<Rational>> m);

/// Result of `lp_maximize`.
struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded } status = Status::Infeasible;
  Rational value;
  std::vector<Rational> x;
};

/// Maximizes c.x subject to A x = b, x >= 0, with the exact two-phase
/// simplex method and Bland's rule.
LpResult lp_maximize(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b,
                     const std::vector<Rational>& c);

}  // namespace segalis
