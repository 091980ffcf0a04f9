#include "circumfeas/analysis.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "circumfeas/rng.hpp"

namespace circumfeas {

double FriedrichsAngle::angle() const { return std::acos(cosine); }

double operator_norm(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) {
    return 0.0;
  }
  if (std::max(m.rows(), m.cols()) <= 512) {
    return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
  }
  // Power iteration on M^T M.
  Rng rng(0x5EEDu);
  Vector v(m.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v(i) = rng.normal();
  }
  v.normalize();
  double sigma = 0.0;
  for (int it = 0; it < 10000; ++it) {
    Vector w = m.transpose() * (m * v);
    const double norm = w.norm();
    if (norm == 0.0) {
      return 0.0;
    }
    v = w / norm;
    const double next = std::sqrt(norm);
    if (std::abs(next - sigma) <= 1e-10 * std::max(1.0, next)) {
      return next;
    }
    sigma = next;
  }
  return sigma;
}

namespace {

Matrix projector_matrix(const LinearSubspace& s) {
  const Matrix& q = s.basis().columns();
  if (q.cols() == 0) {
    return Matrix::Zero(s.ambient_dim(), s.ambient_dim());
  }
  return q * q.transpose();
}

}  // namespace

FriedrichsAngle friedrichs_cosine(const LinearSubspace& u,
                                  const LinearSubspace& v) {
  if (u.ambient_dim() != v.ambient_dim()) {
    throw InvalidInputError("friedrichs_cosine: ambient dimensions differ");
  }
  FriedrichsAngle result;
  if (u.dim() > 0 && v.dim() > 0) {
    const Matrix overlap = u.basis().columns().transpose() * v.basis().columns();
    Eigen::JacobiSVD<Matrix> svd(overlap);
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
      const double c = svd.singularValues()(i);
      result.principal_cosines.push_back(c);
      if (c >= 1.0 - tol::kIntersection) {
        ++result.intersection_dim;
      } else if (result.cosine < c) {
        result.cosine = c;
      }
    }
  }

  // Cross-check against the operator-norm characterization
  // c_F = |P_V P_U - P_{U∩V}|.
  const Matrix difference =
      projector_matrix(v) * projector_matrix(u) -
      projector_matrix(subspace_intersection(u, v));
  const double norm = operator_norm(difference);
  if (std::abs(result.cosine - norm) > 1e-8) {
    throw Error("friedrichs cosine self-check failed: principal angles give " +
                std::to_string(result.cosine) + ", operator norm gives " +
                std::to_string(norm));
  }
  return result;
}

FriedrichsAngle friedrichs_cosine(const AffineSubspace& a,
                                  const AffineSubspace& b) {
  return friedrichs_cosine(a.direction(), b.direction());
}

LinearSubspace fix_t_basis(const LinearSubspace& u, const LinearSubspace& v) {
  const LinearSubspace inner = subspace_intersection(u, v);
  const LinearSubspace outer = subspace_intersection(orthogonal_complement(u),
                                                     orthogonal_complement(v));
  Matrix stacked(u.ambient_dim(), inner.dim() + outer.dim());
  stacked << inner.basis().columns(), outer.basis().columns();
  return LinearSubspace(orthonormalize(stacked));
}

AffineSubspace affine_intersection(const std::vector<SetPtr>& sets) {
  if (sets.empty()) {
    throw InvalidInputError("affine_intersection: no sets");
  }
  const Eigen::Index n = sets.front()->ambient_dim();

  std::vector<LinearSubspace> directions;
  bool any_shifted = false;
  for (const SetPtr& set : sets) {
    if (set->ambient_dim() != n) {
      throw InvalidInputError("affine_intersection: mixed ambient dimensions");
    }
    if (const auto* lin = dynamic_cast<const LinearSubspace*>(set.get())) {
      directions.push_back(*lin);
    } else if (const auto* aff = dynamic_cast<const AffineSubspace*>(set.get())) {
      directions.push_back(aff->direction());
      any_shifted = true;
    } else {
      throw InvalidInputError(
          "affine_intersection: set '" + set->type_name() +
          "' is not an (affine) subspace");
    }
  }
  LinearSubspace direction = directions.front();
  for (std::size_t i = 1; i < directions.size(); ++i) {
    direction = subspace_intersection(direction, directions[i]);
  }

  Vector through = Vector::Zero(n);
  if (any_shifted) {
    // A common point solves the stacked normal equations
    // (I - P_i)(x - p_i) = 0 for every genuinely affine member; linear
    // members pass through the origin and contribute (I - P_i) x = 0.
    Matrix lhs(static_cast<Eigen::Index>(sets.size()) * n, n);
    Vector rhs(static_cast<Eigen::Index>(sets.size()) * n);
    Eigen::Index row = 0;
    double scale = 0.0;
    for (const SetPtr& set : sets) {
      Matrix residual_map = Matrix::Identity(n, n);
      Vector point = Vector::Zero(n);
      if (const auto* lin = dynamic_cast<const LinearSubspace*>(set.get())) {
        residual_map -= projector_matrix(*lin);
      } else {
        const auto* aff = dynamic_cast<const AffineSubspace*>(set.get());
        residual_map -= projector_matrix(aff->direction());
        point = aff->offset();
      }
      lhs.middleRows(row, n) = residual_map;
      rhs.segment(row, n) = residual_map * point;
      scale = std::max(scale, point.norm());
      row += n;
    }
    through = lhs.completeOrthogonalDecomposition().solve(rhs);
    const double residual = (lhs * through - rhs).norm();
    if (residual > 1e-8 * (1.0 + scale + through.norm())) {
      throw InfeasibleInstanceError(
          "affine sets have empty intersection (residual " +
          std::to_string(residual) + ")");
    }
  }
  return AffineSubspace(OrthonormalBasis(direction.basis()), through);
}

namespace {

std::vector<SetPtr> borrow(const ProjectableSet& u, const ProjectableSet& v) {
  const auto no_delete = [](const ProjectableSet*) {};
  return {SetPtr(&u, no_delete), SetPtr(&v, no_delete)};
}

}  // namespace

Vector best_approximation(const ProjectableSet& u, const ProjectableSet& v,
                          const Vector& x) {
  const AffineSubspace intersection = affine_intersection(borrow(u, v));
  const Vector solution = intersection.project(x);
  // Optimality characterization: the error is orthogonal to U ∩ V.
  const Vector defect = intersection.basis().columns().transpose() * (x - solution);
  if (intersection.dim() > 0 &&
      defect.cwiseAbs().maxCoeff() > 1e-10 * (1.0 + x.norm())) {
    throw Error("best_approximation: optimality check failed");
  }
  return solution;
}

double empirical_rate(const RunResult& result, const Vector& reference) {
  std::vector<double> errors;
  errors.reserve(result.records.size());
  for (const IterationRecord& rec : result.records) {
    if (rec.iterate) {
      errors.push_back((*rec.iterate - reference).norm());
    } else if (rec.true_error) {
      errors.push_back(*rec.true_error);
    }
  }
  const double tiny = 1e-14 * (1.0 + reference.norm());
  if (errors.size() >= 2 && errors.back() <= tiny) {
    const bool started_positive =
        std::any_of(errors.begin(), errors.end() - 1,
                    [&](double e) { return e > tiny; });
    if (started_positive) {
      return 0.0;  // reached the reference to within roundoff
    }
  }
  const auto positive = static_cast<std::size_t>(
      std::count_if(errors.begin(), errors.end(),
                    [&](double e) { return e > tiny; }));
  if (positive < 3) {
    throw UndefinedRateError(
        "empirical_rate needs at least three iterates with positive error");
  }

  const std::size_t count = errors.size();
  const std::size_t tail_begin = count / 2;
  double log_sum = 0.0;
  int used = 0;
  for (std::size_t k = tail_begin; k + 1 < count; ++k) {
    if (errors[k] < 1e-14) {
      continue;
    }
    const double ratio = errors[k + 1] / errors[k];
    if (!(ratio > 0.0) || !std::isfinite(ratio)) {
      continue;
    }
    log_sum += std::log(ratio);
    ++used;
  }
  if (used == 0) {
    throw UndefinedRateError("empirical_rate: no usable ratios in the tail");
  }
  return std::exp(log_sum / used);
}

}  // namespace circumfeas
