#include "circumfeas/geometry.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace circumfeas {

namespace {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw InvalidInputError(std::string(what) + ": non-finite entries");
  }
}

}  // namespace

OrthonormalBasis::OrthonormalBasis(Matrix columns, Eigen::Index ambient_dim)
    : columns_(std::move(columns)) {
  if (columns_.rows() != ambient_dim) {
    throw InvalidInputError("orthonormal basis: row count " +
                            std::to_string(columns_.rows()) +
                            " does not match ambient dimension " +
                            std::to_string(ambient_dim));
  }
  if (columns_.cols() > ambient_dim) {
    throw InvalidInputError("orthonormal basis: more columns than ambient dimension");
  }
  require_finite(columns_, "orthonormal basis");
  if (columns_.cols() > 0) {
    const Matrix gram = columns_.transpose() * columns_;
    const double defect =
        (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    if (defect > tol::kOrthonormality) {
      throw InvalidInputError("orthonormal basis: columns are not orthonormal (defect " +
                              std::to_string(defect) + ")");
    }
  }
}

Vector OrthonormalBasis::project(const Vector& x) const {
  if (x.size() != ambient_dim()) {
    throw InvalidInputError("projection: vector dimension mismatch");
  }
  if (dim() == 0) {
    return Vector::Zero(ambient_dim());
  }
  return columns_ * (columns_.transpose() * x);
}

OrthonormalBasis orthonormalize(const Matrix& columns) {
  require_finite(columns, "orthonormalize");
  const Eigen::Index n = columns.rows();
  const Eigen::Index k = columns.cols();

  double max_norm = 0.0;
  for (Eigen::Index j = 0; j < k; ++j) {
    max_norm = std::max(max_norm, columns.col(j).norm());
  }
  const double drop_tol = tol::kColumnDrop * std::max(1.0, max_norm);

  Matrix q(n, k);
  Eigen::Index rank = 0;
  for (Eigen::Index j = 0; j < k; ++j) {
    Vector w = columns.col(j);
    // Modified Gram-Schmidt with one re-orthogonalization pass.
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < rank; ++i) {
        w -= q.col(i).dot(w) * q.col(i);
      }
    }
    const double norm = w.norm();
    if (norm <= drop_tol) {
      continue;  // dependent column
    }
    q.col(rank) = w / norm;
    ++rank;
  }
  return OrthonormalBasis(q.leftCols(rank), n);
}

OrthonormalBasis orthonormalize(const std::vector<Vector>& columns,
                                Eigen::Index ambient_dim) {
  Matrix m(ambient_dim, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != ambient_dim) {
      throw InvalidInputError("orthonormalize: column " + std::to_string(j) +
                              " has length " + std::to_string(columns[j].size()) +
                              ", expected " + std::to_string(ambient_dim));
    }
    m.col(static_cast<Eigen::Index>(j)) = columns[j];
  }
  return orthonormalize(m);
}

Vector ProjectableSet::reflect(const Vector& x) const {
  return 2.0 * project(x) - x;
}

void ProjectableSet::check_dim(const Vector& x) const {
  if (x.size() != ambient_dim()) {
    throw InvalidInputError("set operation: vector dimension " +
                            std::to_string(x.size()) + " does not match ambient " +
                            std::to_string(ambient_dim()));
  }
}

Vector LinearSubspace::project(const Vector& x) const {
  check_dim(x);
  return basis_.project(x);
}

Vector LinearSubspace::reflect(const Vector& x) const {
  check_dim(x);
  return 2.0 * basis_.project(x) - x;
}

AffineSubspace::AffineSubspace(OrthonormalBasis basis, Vector offset)
    : basis_(std::move(basis)), offset_(std::move(offset)) {
  if (offset_.size() != basis_.ambient_dim()) {
    throw InvalidInputError("affine subspace: offset dimension mismatch");
  }
  if (!offset_.allFinite()) {
    throw InvalidInputError("affine subspace: non-finite offset");
  }
}

Vector AffineSubspace::project(const Vector& x) const {
  check_dim(x);
  return offset_ + basis_.project(x - offset_);
}

Ball::Ball(Vector center, double radius)
    : center_(std::move(center)), radius_(radius) {
  if (!center_.allFinite() || !std::isfinite(radius_)) {
    throw InvalidInputError("ball: non-finite parameters");
  }
  if (radius_ <= 0.0) {
    throw InvalidInputError("ball: radius must be positive");
  }
}

Vector Ball::project(const Vector& x) const {
  check_dim(x);
  const Vector d = x - center_;
  const double dist = d.norm();
  if (dist <= radius_) {
    return x;
  }
  return center_ + (radius_ / dist) * d;
}

Sphere::Sphere(Vector center, double radius)
    : center_(std::move(center)), radius_(radius) {
  if (!center_.allFinite() || !std::isfinite(radius_)) {
    throw InvalidInputError("sphere: non-finite parameters");
  }
  if (radius_ <= 0.0) {
    throw InvalidInputError("sphere: radius must be positive");
  }
}

Vector Sphere::project(const Vector& x) const {
  check_dim(x);
  const Vector d = x - center_;
  const double dist = d.norm();
  if (dist <= tol::kSphereCenter * (1.0 + center_.norm())) {
    throw UndefinedProjectionError(
        "sphere projection undefined at the center");
  }
  return center_ + (radius_ / dist) * d;
}

LinearSubspace subspace_sum(const LinearSubspace& u, const LinearSubspace& v) {
  if (u.ambient_dim() != v.ambient_dim()) {
    throw InvalidInputError("subspace_sum: ambient dimensions differ");
  }
  const Eigen::Index n = u.ambient_dim();
  Matrix stacked(n, u.dim() + v.dim());
  stacked << u.basis().columns(), v.basis().columns();
  if (stacked.cols() == 0) {
    return LinearSubspace(OrthonormalBasis::zero(n));
  }
  // Rank via SVD so the result stays consistent with the principal-cosine
  // intersection threshold: a cosine c maps to a small singular value
  // sqrt(1 - c) of the stacked frame.
  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeThinU);
  const double rank_tol = std::sqrt(2.0 * tol::kIntersection);
  Eigen::Index rank = 0;
  while (rank < svd.singularValues().size() &&
         svd.singularValues()(rank) > rank_tol) {
    ++rank;
  }
  return LinearSubspace(OrthonormalBasis(svd.matrixU().leftCols(rank), n));
}

LinearSubspace subspace_intersection(const LinearSubspace& u,
                                     const LinearSubspace& v) {
  if (u.ambient_dim() != v.ambient_dim()) {
    throw InvalidInputError("subspace_intersection: ambient dimensions differ");
  }
  const Eigen::Index n = u.ambient_dim();
  if (u.dim() == 0 || v.dim() == 0) {
    return LinearSubspace(OrthonormalBasis::zero(n));
  }
  const Matrix overlap = u.basis().columns().transpose() * v.basis().columns();
  Eigen::JacobiSVD<Matrix> svd(overlap, Eigen::ComputeFullU);
  std::vector<Vector> directions;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) >= 1.0 - tol::kIntersection) {
      directions.push_back(u.basis().columns() * svd.matrixU().col(i));
    }
  }
  return LinearSubspace(orthonormalize(directions, n));
}

LinearSubspace orthogonal_complement(const LinearSubspace& u) {
  const Eigen::Index n = u.ambient_dim();
  const Eigen::Index k = u.dim();
  if (k == 0) {
    return LinearSubspace(OrthonormalBasis(Matrix::Identity(n, n), n));
  }
  if (k == n) {
    return LinearSubspace(OrthonormalBasis::zero(n));
  }
  // Full Q factor of the frame; trailing columns span the complement.
  Eigen::HouseholderQR<Matrix> qr(u.basis().columns());
  const Matrix full_q = qr.householderQ();
  return LinearSubspace(OrthonormalBasis(full_q.rightCols(n - k), n));
}

}  // namespace circumfeas
