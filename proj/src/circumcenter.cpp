#include "circumfeas/circumcenter.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>

namespace circumfeas {

Vector CircumcenterSystem::center() const { return anchor + offset; }

std::vector<Vector> dedupe_points(const std::vector<Vector>& points,
                                  double dedupe_tol) {
  double max_norm = 0.0;
  for (const Vector& p : points) {
    max_norm = std::max(max_norm, p.norm());
  }
  const double merge_dist = dedupe_tol * (1.0 + max_norm);

  std::vector<Vector> unique;
  for (const Vector& p : points) {
    const bool seen = std::any_of(
        unique.begin(), unique.end(),
        [&](const Vector& q) { return (p - q).norm() <= merge_dist; });
    if (!seen) {
      unique.push_back(p);
    }
  }
  return unique;
}

CircumcenterSystem build_system(const std::vector<Vector>& points) {
  if (points.size() < 2) {
    throw InvalidInputError("circumcenter system needs at least two points");
  }
  const Eigen::Index n = points.front().size();
  for (const Vector& p : points) {
    if (p.size() != n) {
      throw InvalidInputError("circumcenter: mixed point dimensions");
    }
    if (!p.allFinite()) {
      throw InvalidInputError("circumcenter: non-finite point");
    }
  }

  CircumcenterSystem sys;
  sys.anchor = points.front();
  const auto m = static_cast<Eigen::Index>(points.size()) - 1;
  Matrix disp(n, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    disp.col(i) = points[static_cast<std::size_t>(i) + 1] - sys.anchor;
    sys.displacements.push_back(disp.col(i));
  }
  sys.gram = disp.transpose() * disp;
  sys.rhs = 0.5 * sys.gram.diagonal();

  // Pivot threshold on the squared R diagonal, which matches thresholding
  // the pivots of the Gram matrix G = R^T R.
  const double pivot_tol = 1e-12 * sys.gram.trace() / static_cast<double>(m);

  // A rank-revealing QR of the displacements keeps the conditioning at
  // kappa(D) instead of the kappa(D)^2 a direct Gram solve would see on
  // thin reflection triangles. With D P = Q R the equidistance equations
  // D^T (c - anchor) = rhs, c - anchor in range(D), become the triangular
  // system R_1^T t = (P^T rhs)_{1..r} with c = anchor + Q_1 t.
  Eigen::ColPivHouseholderQR<Matrix> qr(disp);
  const Matrix r_factor = qr.matrixR()
                              .topRows(std::min(n, m))
                              .template triangularView<Eigen::Upper>();
  Eigen::Index rank = 0;
  while (rank < r_factor.rows() &&
         r_factor(rank, rank) * r_factor(rank, rank) > pivot_tol) {
    ++rank;
  }
  if (rank == 0) {
    throw DegenerateConfigurationError(
        "degenerate point configuration: displacements vanish", 0);
  }

  const Vector permuted_rhs = qr.colsPermutation().transpose() * sys.rhs;
  const Matrix r11 = r_factor.topLeftCorner(rank, rank);
  const Vector t = r11.transpose()
                       .template triangularView<Eigen::Lower>()
                       .solve(permuted_rhs.head(rank));
  const Matrix hull =
      qr.householderQ() * Matrix::Identity(n, rank);
  sys.offset = hull * t;

  Vector beta = Vector::Zero(m);
  beta.head(rank) =
      r11.template triangularView<Eigen::Upper>().solve(t);
  sys.coefficients = qr.colsPermutation() * beta;
  sys.residual = (sys.gram * sys.coefficients - sys.rhs).norm();

  if (rank < m) {
    // Rank-deficient displacements: the solved point must still satisfy
    // every equidistance equation, otherwise no circumcenter exists (for
    // example three distinct collinear points).
    const double defect = (disp.transpose() * sys.offset - sys.rhs).norm();
    if (defect > 1e-10 * (1.0 + sys.rhs.norm())) {
      throw DegenerateConfigurationError(
          "degenerate point configuration: no equidistant point in the "
          "affine hull (rank " + std::to_string(rank) + " of " +
          std::to_string(m) + ")",
          static_cast<int>(rank));
    }
  }
  return sys;
}

Vector circumcenter(const std::vector<Vector>& points, double dedupe_tol) {
  if (points.empty()) {
    throw InvalidInputError("circumcenter of an empty point set");
  }
  const std::vector<Vector> unique = dedupe_points(points, dedupe_tol);
  if (unique.size() == 1) {
    return unique.front();
  }
  if (unique.size() == 2) {
    return 0.5 * (unique[0] + unique[1]);
  }
  return build_system(unique).center();
}

}  // namespace circumfeas
