#pragma once

#include <optional>
#include <vector>

#include "circumfeas/geometry.hpp"
#include "circumfeas/methods.hpp"

namespace circumfeas {

/// Principal-angle data of a subspace pair. The cosine of the Friedrichs
/// angle is the largest principal cosine strictly below the intersection
/// threshold; it governs the linear rates of the projection methods.
struct FriedrichsAngle {
  double cosine = 0.0;                     // in [0, 1)
  std::vector<double> principal_cosines;   // descending
  int intersection_dim = 0;

  double angle() const;  // acos(cosine)
};

/// Computes the principal cosines of (U, V) from the singular values of
/// Q_U^T Q_V, classifies values >= 1 - 1e-10 as intersection directions and
/// returns the largest remaining value as the Friedrichs cosine (0 if
/// none remain). Cross-checked against the operator norm
/// |P_V P_U - P_{U∩V}|, which must agree to 1e-8.
FriedrichsAngle friedrichs_cosine(const LinearSubspace& u,
                                  const LinearSubspace& v);

/// Friedrichs angle of an affine pair, i.e. of the parallel subspaces.
FriedrichsAngle friedrichs_cosine(const AffineSubspace& a,
                                  const AffineSubspace& b);

/// Orthonormal basis of Fix T = (U ∩ V) ⊕ (U⊥ ∩ V⊥) for the DR operator.
LinearSubspace fix_t_basis(const LinearSubspace& u, const LinearSubspace& v);

/// Intersection of affine/linear subspaces as an affine subspace. Throws
/// InfeasibleInstanceError when the sets have no common point, and
/// InvalidInputError when a set is not a subspace.
AffineSubspace affine_intersection(const std::vector<SetPtr>& sets);

/// The point of U ∩ V closest to x. Works for linear and affine pairs;
/// throws InfeasibleInstanceError when the affine intersection is empty.
Vector best_approximation(const ProjectableSet& u, const ProjectableSet& v,
                          const Vector& x);

/// Geometric mean of the successive error ratios |x_{k+1} - ref| /
/// |x_k - ref| over the tail (last half) of the recorded iterates, skipping
/// ratios whose denominator is below 1e-14. A run that reaches the
/// reference to within roundoff reports rate 0. Throws UndefinedRateError
/// when fewer than three recorded iterates carry positive errors.
double empirical_rate(const RunResult& result, const Vector& reference);

/// Largest singular value of M, by direct SVD for n <= 512 and power
/// iteration (1e-10 relative tolerance) beyond.
double operator_norm(const Matrix& m);

}  // namespace circumfeas
