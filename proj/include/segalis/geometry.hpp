#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "segalis/complexes.hpp"
#include "segalis/rational.hpp"

namespace segalis {

enum class SideVerdict { Above, On, Below };

/// (t, t^2, ..., t^d). Throws ZeroDimension for d < 1.
RationalPoint moment_point(long t, int d);

/// Sign of det[(1, nu(i)) for i in I; (1, y)], with |I| = dim y.
SideVerdict side_of_hyperplane(Simplex I, const RationalPoint& y);

/// Whether |nu_d(I)| and |nu_d(J)| meet exactly in |nu_d(I & J)|.
/// Uses the alternating-circuit criterion.
bool proper_intersection(Simplex I, Simplex J, int d);
/// Same decision by exact linear programming; used as the oracle.
bool proper_intersection_lp(Simplex I, Simplex J, int d);

struct Interval {
  Rational lo;
  Rational hi;
  bool operator==(const Interval&) const = default;
};

/// Vertical fiber of |K| in R^d over x in R^{d-1}, as disjoint sorted
/// closed intervals. Only facets are consulted.
std::vector<Interval> fiber_profile(const Complex& K, int d, const RationalPoint& x);

struct AdmissibilityProbe {
  bool refuted = false;
  RationalPoint witness;
  std::vector<Interval> fiber;
  int samples = 0;
};

/// Samples fibers of |K| over deterministic and seeded random points and
/// reports the first one that is not a single interval. Sound for rejection
/// only.
AdmissibilityProbe oracle_check_admissible(const Complex& K, int d, int sample_budget, std::uint64_t seed);

/// Euclidean volume of the simplex nu_d(I); requires |I| = d + 1.
Rational simplex_volume(Simplex I, int d);

}  // namespace segalis
