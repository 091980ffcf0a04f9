#include "circumfeas/methods.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "circumfeas/analysis.hpp"
#include "circumfeas/circumcenter.hpp"

namespace circumfeas {

std::string to_string(MethodKind kind) {
  switch (kind) {
    case MethodKind::kMap: return "map";
    case MethodKind::kDrm: return "drm";
    case MethodKind::kCdrm: return "cdrm";
    case MethodKind::kCimmino: return "cimmino";
    case MethodKind::kCircumCimmino: return "c-cimmino";
    case MethodKind::kCircumMap: return "c-map";
    case MethodKind::kCdrmMultiset: return "cdrm-multiset";
  }
  return "unknown";
}

MethodKind method_from_string(const std::string& name) {
  if (name == "map") return MethodKind::kMap;
  if (name == "drm") return MethodKind::kDrm;
  if (name == "cdrm") return MethodKind::kCdrm;
  if (name == "cimmino") return MethodKind::kCimmino;
  if (name == "c-cimmino") return MethodKind::kCircumCimmino;
  if (name == "c-map") return MethodKind::kCircumMap;
  if (name == "cdrm-multiset") return MethodKind::kCdrmMultiset;
  throw InvalidConfigError("unknown method '" + name + "'");
}

std::string to_string(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::kTrueError: return "true-error";
    case CriterionKind::kGapDistance: return "gap";
    case CriterionKind::kFixedPointResidual: return "fixed-point";
  }
  return "unknown";
}

CriterionKind criterion_from_string(const std::string& name) {
  if (name == "true-error") return CriterionKind::kTrueError;
  if (name == "gap") return CriterionKind::kGapDistance;
  if (name == "fixed-point") return CriterionKind::kFixedPointResidual;
  throw InvalidConfigError("unknown criterion '" + name + "'");
}

std::string to_string(Prestep prestep) {
  switch (prestep) {
    case Prestep::kNone: return "none";
    case Prestep::kProjectU: return "project-u";
    case Prestep::kProjectV: return "project-v";
    case Prestep::kProjectSum: return "project-sum";
  }
  return "unknown";
}

Prestep prestep_from_string(const std::string& name) {
  if (name == "none") return Prestep::kNone;
  if (name == "project-u") return Prestep::kProjectU;
  if (name == "project-v") return Prestep::kProjectV;
  if (name == "project-sum") return Prestep::kProjectSum;
  throw InvalidConfigError("unknown prestep '" + name + "'");
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kConverged: return "converged";
    case StopReason::kMaxIter: return "max-iter";
    case StopReason::kDegenerateCircumcenter: return "degenerate-circumcenter";
  }
  return "unknown";
}

Vector map_step(const ProjectableSet& u, const ProjectableSet& v,
                const Vector& x) {
  return v.project(u.project(x));
}

Vector drm_step(const ProjectableSet& u, const ProjectableSet& v,
                const Vector& x) {
  return 0.5 * (x + v.reflect(u.reflect(x)));
}

Vector cdrm_step(const ProjectableSet& u, const ProjectableSet& v,
                 const Vector& x) {
  const Vector y = u.reflect(x);
  return circumcenter({x, y, v.reflect(y)});
}

Vector cimmino_step(const ProjectableSet& u, const ProjectableSet& v,
                    const Vector& x) {
  return 0.5 * (u.reflect(x) + v.reflect(x));
}

Vector circum_cimmino_step(const ProjectableSet& u, const ProjectableSet& v,
                           const Vector& x) {
  return circumcenter({x, u.reflect(x), v.reflect(x)});
}

Vector circum_map_step(const ProjectableSet& u, const ProjectableSet& v,
                       const Vector& x) {
  const Vector pu = u.project(x);
  return circumcenter({x, 2.0 * pu - x, v.reflect(pu)});
}

Vector variant_step(MethodKind kind, const ProjectableSet& u,
                    const ProjectableSet& v, const Vector& x) {
  switch (kind) {
    case MethodKind::kCimmino: return cimmino_step(u, v, x);
    case MethodKind::kCircumCimmino: return circum_cimmino_step(u, v, x);
    case MethodKind::kCircumMap: return circum_map_step(u, v, x);
    default:
      throw InvalidConfigError("variant_step handles cimmino, c-cimmino and c-map only");
  }
}

namespace {

std::vector<Vector> reflection_chain(const std::vector<SetPtr>& sets,
                                     const Vector& x) {
  std::vector<Vector> chain;
  chain.reserve(sets.size() + 1);
  chain.push_back(x);
  Vector current = x;
  for (const SetPtr& set : sets) {
    current = set->reflect(current);
    chain.push_back(current);
  }
  return chain;
}

}  // namespace

Vector multiset_cdrm_step(const std::vector<SetPtr>& sets, const Vector& x) {
  if (sets.size() < 2) {
    throw InvalidConfigError("cdrm-multiset needs at least two sets");
  }
  return circumcenter(reflection_chain(sets, x));
}

double gap_distance(const ProjectableSet& u, const ProjectableSet& v,
                    const Vector& x) {
  return (u.project(x) - v.project(x)).norm();
}

double gap_distance(const std::vector<SetPtr>& sets, const Vector& x) {
  if (sets.size() < 2) {
    throw InvalidConfigError("gap distance needs at least two sets");
  }
  std::vector<Vector> projections;
  projections.reserve(sets.size());
  for (const SetPtr& set : sets) {
    projections.push_back(set->project(x));
  }
  double gap = 0.0;
  for (std::size_t i = 0; i < projections.size(); ++i) {
    for (std::size_t j = i + 1; j < projections.size(); ++j) {
      gap = std::max(gap, (projections[i] - projections[j]).norm());
    }
  }
  return gap;
}

namespace {

bool all_affine(const std::vector<SetPtr>& sets) {
  return std::all_of(sets.begin(), sets.end(),
                     [](const SetPtr& s) { return s->is_affine(); });
}

bool method_uses_circumcenter(MethodKind kind) {
  return kind == MethodKind::kCdrm || kind == MethodKind::kCircumCimmino ||
         kind == MethodKind::kCircumMap || kind == MethodKind::kCdrmMultiset;
}

Vector apply_prestep(Prestep prestep, const std::vector<SetPtr>& sets,
                     const Vector& x) {
  switch (prestep) {
    case Prestep::kNone:
      return x;
    case Prestep::kProjectU:
      return sets[0]->project(x);
    case Prestep::kProjectV:
      return sets[1]->project(x);
    case Prestep::kProjectSum: {
      if (!all_affine(sets)) {
        throw InvalidConfigError(
            "project-sum prestep needs (affine) subspaces");
      }
      // Sum of the direction spaces, through a common point when one of
      // the sets is genuinely affine.
      const Eigen::Index n = x.size();
      LinearSubspace sum(OrthonormalBasis::zero(n));
      Vector through = Vector::Zero(n);
      bool any_offset = false;
      for (const SetPtr& set : sets) {
        if (const auto* lin = dynamic_cast<const LinearSubspace*>(set.get())) {
          sum = subspace_sum(sum, *lin);
        } else if (const auto* aff =
                       dynamic_cast<const AffineSubspace*>(set.get())) {
          sum = subspace_sum(sum, aff->direction());
          any_offset = true;
        }
      }
      if (any_offset) {
        through = affine_intersection(sets).offset();
      }
      return through + sum.project(x - through);
    }
  }
  throw InvalidConfigError("unknown prestep");
}

/// One application of the configured operator.
Vector apply_step(MethodKind method, const std::vector<SetPtr>& sets,
                  const Vector& x) {
  switch (method) {
    case MethodKind::kMap:
      return map_step(*sets[0], *sets[1], x);
    case MethodKind::kDrm:
      return drm_step(*sets[0], *sets[1], x);
    case MethodKind::kCdrm:
      return cdrm_step(*sets[0], *sets[1], x);
    case MethodKind::kCimmino:
    case MethodKind::kCircumCimmino:
    case MethodKind::kCircumMap:
      return variant_step(method, *sets[0], *sets[1], x);
    case MethodKind::kCdrmMultiset:
      return multiset_cdrm_step(sets, x);
  }
  throw InvalidConfigError("unknown method");
}

/// DR-type substitute used when a circumcenter degenerates: the midpoint of
/// x and the full reflection chain (the plain DR point for two sets).
Vector fallback_step(const std::vector<SetPtr>& sets, const Vector& x) {
  Vector current = x;
  for (const SetPtr& set : sets) {
    current = set->reflect(current);
  }
  return 0.5 * (x + current);
}

}  // namespace

RunResult solve(MethodKind method, const std::vector<SetPtr>& sets,
                const Vector& x0, const SolveOptions& options) {
  if (sets.size() < 2) {
    throw InvalidConfigError("solve needs at least two sets");
  }
  if (method == MethodKind::kCdrmMultiset) {
    // any m >= 2
  } else if (sets.size() != 2) {
    throw InvalidConfigError("method '" + to_string(method) +
                             "' operates on exactly two sets");
  }
  if (options.max_iter < 0) {
    throw InvalidConfigError("max_iter must be nonnegative");
  }
  for (const SetPtr& set : sets) {
    if (set->ambient_dim() != x0.size()) {
      throw InvalidInputError("solve: start point dimension mismatch");
    }
  }

  const bool affine = all_affine(sets);
  std::optional<Vector> reference = options.reference;
  if (!reference && affine) {
    reference = affine_intersection(sets).project(x0);
  }
  if (options.criterion.kind == CriterionKind::kTrueError && !reference) {
    throw UnsupportedCriterionError(
        "true-error criterion needs an (affine) instance with a computable "
        "intersection projection");
  }

  TraceMode trace = options.trace;
  if (trace == TraceMode::kAuto) {
    trace = x0.size() <= 16 ? TraceMode::kFull : TraceMode::kScalars;
  }

  RunResult result;
  result.method = method;
  result.reference = reference;

  Vector x = apply_prestep(options.prestep, sets, x0);

  // The gap costs one projection per set; skip it on traceless runs whose
  // criterion does not consult it.
  const bool want_gap =
      trace != TraceMode::kNone ||
      options.criterion.kind == CriterionKind::kGapDistance;

  const auto record_state = [&](int k, const Vector& point, double step_norm) {
    IterationRecord rec;
    rec.index = k;
    if (trace == TraceMode::kFull) {
      rec.iterate = point;
    }
    if (reference) {
      rec.true_error = (point - *reference).norm();
    }
    rec.gap = want_gap ? gap_distance(sets, point)
                       : std::numeric_limits<double>::quiet_NaN();
    rec.step_norm = step_norm;
    if (trace != TraceMode::kNone) {
      result.records.push_back(rec);
    }
    return rec;
  };

  const auto criterion_value = [&](const IterationRecord& rec, int k) {
    switch (options.criterion.kind) {
      case CriterionKind::kTrueError:
        return *rec.true_error;
      case CriterionKind::kGapDistance:
        return rec.gap;
      case CriterionKind::kFixedPointResidual:
        // Not meaningful before the first application.
        return k == 0 ? std::numeric_limits<double>::infinity()
                      : rec.step_norm;
    }
    return std::numeric_limits<double>::infinity();
  };

  IterationRecord last = record_state(0, x, 0.0);
  result.stop_reason = StopReason::kMaxIter;
  result.iterations = 0;

  if (criterion_value(last, 0) < options.criterion.tolerance) {
    result.stop_reason = StopReason::kConverged;
  } else {
    int consecutive_fallbacks = 0;
    for (int k = 1; k <= options.max_iter; ++k) {
      Vector next;
      bool stepped = false;
      if (method_uses_circumcenter(method)) {
        try {
          next = apply_step(method, sets, x);
          stepped = true;
          consecutive_fallbacks = 0;
        } catch (const DegenerateConfigurationError&) {
          ++consecutive_fallbacks;
        }
      } else {
        next = apply_step(method, sets, x);
        stepped = true;
      }
      if (!stepped) {
        if (consecutive_fallbacks > options.fallback_budget) {
          result.stop_reason = StopReason::kDegenerateCircumcenter;
          result.iterations = k - 1;
          break;
        }
        next = fallback_step(sets, x);
      }
      const double step_norm = (next - x).norm();
      x = next;
      last = record_state(k, x, step_norm);
      result.iterations = k;
      if (criterion_value(last, k) < options.criterion.tolerance) {
        result.stop_reason = StopReason::kConverged;
        break;
      }
    }
  }

  result.final_iterate = x;
  result.final_gap = want_gap ? last.gap : gap_distance(sets, x);
  result.final_true_error = last.true_error;
  return result;
}

}  // namespace circumfeas
