#pragma once

#include <vector>

#include "circumfeas/geometry.hpp"

namespace circumfeas {

/// The anchored linear system whose solution places the circumcenter of a
/// finite point set inside the affine hull of the points. With anchor x and
/// displacements s_i = p_i - x, the center is x + sum_i coefficients_i s_i
/// where  gram * coefficients = rhs,  gram_ij = <s_i, s_j>  and
/// rhs_i = 0.5 |s_i|^2.
struct CircumcenterSystem {
  Vector anchor;
  std::vector<Vector> displacements;
  Matrix gram;
  Vector rhs;
  Vector coefficients;
  Vector offset;          // center - anchor, in the displacement span
  double residual = 0.0;  // |gram * coefficients - rhs|

  Vector center() const;
};

/// Assembles and solves the anchored equidistance system for >= 2 distinct
/// points (the first point is the anchor). The system is solved through a
/// rank-revealing QR of the displacement matrix with pivot threshold
/// 1e-12 * trace(G) / m on the Gram pivots. A rank-deficient but consistent
/// system (points on a common sphere whose displacements are linearly
/// dependent) still determines the center uniquely; an inconsistent one
/// (e.g. three distinct collinear points) throws
/// DegenerateConfigurationError carrying the rank.
CircumcenterSystem build_system(const std::vector<Vector>& points);

/// Circumcenter of a finite point set: the point of the affine hull
/// equidistant to every input point. Points closer than
/// dedupe_tol * (1 + max norm) are merged; a single surviving point is its
/// own circumcenter and two survivors yield their midpoint.
Vector circumcenter(const std::vector<Vector>& points,
                    double dedupe_tol = tol::kDedupe);

/// The surviving points after merging near-coincident ones (first
/// occurrence kept, order preserved). Exposed for the cardinality rules.
std::vector<Vector> dedupe_points(const std::vector<Vector>& points,
                                  double dedupe_tol = tol::kDedupe);

}  // namespace circumfeas
