#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "circumfeas/errors.hpp"

namespace circumfeas {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Tolerances shared across the library. Rank and intersection decisions
/// use a single threshold so that principal-angle classification, subspace
/// algebra and the Friedrichs-angle self-check stay mutually consistent.
namespace tol {
inline constexpr double kOrthonormality = 1e-12;   // frame validity
inline constexpr double kColumnDrop = 1e-12;       // Gram-Schmidt rank drop
inline constexpr double kIntersection = 1e-10;     // singular values vs 1
inline constexpr double kDedupe = 1e-12;           // circumcenter point merge
inline constexpr double kSphereCenter = 1e-12;     // undefined projection
}  // namespace tol

/// A frame of pairwise-orthonormal columns spanning a subspace of R^n.
/// An empty frame (zero columns) represents the zero subspace.
class OrthonormalBasis {
 public:
  /// Validates the frame: finite entries and max |Q^T Q - I| <= 1e-12.
  OrthonormalBasis(Matrix columns, Eigen::Index ambient_dim);

  /// The zero subspace of R^n.
  static OrthonormalBasis zero(Eigen::Index ambient_dim) {
    return OrthonormalBasis(Matrix(ambient_dim, 0), ambient_dim);
  }

  const Matrix& columns() const noexcept { return columns_; }
  Eigen::Index ambient_dim() const noexcept { return columns_.rows(); }
  Eigen::Index dim() const noexcept { return columns_.cols(); }

  /// Component of x inside the spanned subspace, Q (Q^T x).
  Vector project(const Vector& x) const;

 private:
  Matrix columns_;
};

/// Builds an orthonormal frame spanning the same space as the given columns.
/// Uses modified Gram-Schmidt with one re-orthogonalization pass; columns
/// whose residual norm falls at or below 1e-12 * max(1, input column norms)
/// are dropped, so rank-deficient inputs are compressed.
OrthonormalBasis orthonormalize(const std::vector<Vector>& columns,
                                Eigen::Index ambient_dim);
OrthonormalBasis orthonormalize(const Matrix& columns);

/// Closed convex (or in the sphere's case, non-convex) set supporting
/// nearest-point projection and the induced reflection 2 P - Id.
class ProjectableSet {
 public:
  virtual ~ProjectableSet() = default;

  virtual Eigen::Index ambient_dim() const = 0;
  virtual Vector project(const Vector& x) const = 0;

  /// 2 project(x) - x. Overridable when a cheaper direct form exists.
  virtual Vector reflect(const Vector& x) const;

  /// Type tag used by serialization ("linear_subspace", "ball", ...).
  virtual std::string type_name() const = 0;

  /// True for linear/affine subspaces (sets with exact projection algebra).
  virtual bool is_affine() const { return false; }

 protected:
  void check_dim(const Vector& x) const;
};

class LinearSubspace : public ProjectableSet {
 public:
  explicit LinearSubspace(OrthonormalBasis basis) : basis_(std::move(basis)) {}

  const OrthonormalBasis& basis() const noexcept { return basis_; }
  Eigen::Index dim() const noexcept { return basis_.dim(); }

  Eigen::Index ambient_dim() const override { return basis_.ambient_dim(); }
  Vector project(const Vector& x) const override;
  Vector reflect(const Vector& x) const override;
  std::string type_name() const override { return "linear_subspace"; }
  bool is_affine() const override { return true; }

 private:
  OrthonormalBasis basis_;
};

/// A translated subspace {offset + u : u in span(basis)}. The offset is any
/// point on the set; project(offset) == offset.
class AffineSubspace : public ProjectableSet {
 public:
  AffineSubspace(OrthonormalBasis basis, Vector offset);

  const OrthonormalBasis& basis() const noexcept { return basis_; }
  const Vector& offset() const noexcept { return offset_; }
  Eigen::Index dim() const noexcept { return basis_.dim(); }

  /// The parallel subspace through the origin.
  LinearSubspace direction() const { return LinearSubspace(basis_); }

  Eigen::Index ambient_dim() const override { return basis_.ambient_dim(); }
  Vector project(const Vector& x) const override;
  std::string type_name() const override { return "affine_subspace"; }
  bool is_affine() const override { return true; }

 private:
  OrthonormalBasis basis_;
  Vector offset_;
};

class Ball : public ProjectableSet {
 public:
  Ball(Vector center, double radius);

  const Vector& center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }

  Eigen::Index ambient_dim() const override { return center_.size(); }
  Vector project(const Vector& x) const override;
  std::string type_name() const override { return "ball"; }

 private:
  Vector center_;
  double radius_;
};

/// Boundary of a ball. Projection is the radial retraction, undefined at
/// the center.
class Sphere : public ProjectableSet {
 public:
  Sphere(Vector center, double radius);

  const Vector& center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }

  Eigen::Index ambient_dim() const override { return center_.size(); }
  Vector project(const Vector& x) const override;
  std::string type_name() const override { return "sphere"; }

 private:
  Vector center_;
  double radius_;
};

using SetPtr = std::shared_ptr<const ProjectableSet>;

/// Orthonormal basis of span(U ∪ V).
LinearSubspace subspace_sum(const LinearSubspace& u, const LinearSubspace& v);

/// Orthonormal basis of U ∩ V, read off from the principal directions of
/// (U, V) whose cosines are within 1e-10 of 1.
LinearSubspace subspace_intersection(const LinearSubspace& u,
                                     const LinearSubspace& v);

/// Orthonormal basis of the orthogonal complement of U.
LinearSubspace orthogonal_complement(const LinearSubspace& u);

}  // namespace circumfeas
