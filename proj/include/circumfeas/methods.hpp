#pragma once

#include <optional>
#include <string>
#include <vector>

#include "circumfeas/geometry.hpp"

namespace circumfeas {

enum class MethodKind {
  kMap,
  kDrm,
  kCdrm,
  kCimmino,
  kCircumCimmino,
  kCircumMap,
  kCdrmMultiset,
};

std::string to_string(MethodKind kind);
MethodKind method_from_string(const std::string& name);

enum class CriterionKind { kTrueError, kGapDistance, kFixedPointResidual };

std::string to_string(CriterionKind kind);
CriterionKind criterion_from_string(const std::string& name);

struct StopCriterion {
  CriterionKind kind = CriterionKind::kGapDistance;
  double tolerance = 1e-6;
};

enum class Prestep { kNone, kProjectU, kProjectV, kProjectSum };

std::string to_string(Prestep prestep);
Prestep prestep_from_string(const std::string& name);

enum class StopReason { kConverged, kMaxIter, kDegenerateCircumcenter };

std::string to_string(StopReason reason);

struct IterationRecord {
  int index = 0;
  std::optional<Vector> iterate;      // kept only for full traces
  std::optional<double> true_error;   // |x_k - reference| when available
  double gap = 0.0;
  double step_norm = 0.0;
};

enum class TraceMode {
  kAuto,     // full iterates for n <= 16, scalar records otherwise
  kFull,
  kScalars,
  kNone,
};

struct RunResult {
  MethodKind method = MethodKind::kDrm;
  std::vector<IterationRecord> records;
  int iterations = 0;
  StopReason stop_reason = StopReason::kMaxIter;
  Vector final_iterate;
  std::optional<Vector> reference;  // best-approximation point, if computed
  std::optional<double> final_true_error;
  double final_gap = 0.0;
};

// One-step operators. U is applied first wherever the order matters.
Vector map_step(const ProjectableSet& u, const ProjectableSet& v,
                const Vector& x);
Vector drm_step(const ProjectableSet& u, const ProjectableSet& v,
                const Vector& x);
Vector cdrm_step(const ProjectableSet& u, const ProjectableSet& v,
                 const Vector& x);
Vector cimmino_step(const ProjectableSet& u, const ProjectableSet& v,
                    const Vector& x);
Vector circum_cimmino_step(const ProjectableSet& u, const ProjectableSet& v,
                           const Vector& x);
Vector circum_map_step(const ProjectableSet& u, const ProjectableSet& v,
                       const Vector& x);

/// Dispatch for the three averaged/circumcentered two-set variants.
Vector variant_step(MethodKind kind, const ProjectableSet& u,
                    const ProjectableSet& v, const Vector& x);

/// Circumcenter of the cumulative reflection chain
/// {x, R_1 x, R_2 R_1 x, ..., R_m ... R_1 x}. Matches cdrm_step for m = 2.
Vector multiset_cdrm_step(const std::vector<SetPtr>& sets, const Vector& x);

/// Infeasibility measure |P_U(x) - P_V(x)|.
double gap_distance(const ProjectableSet& u, const ProjectableSet& v,
                    const Vector& x);

/// Many-set gap: the largest pairwise distance between the projections of x
/// onto the sets. Coincides with gap_distance for two sets.
double gap_distance(const std::vector<SetPtr>& sets, const Vector& x);

struct SolveOptions {
  StopCriterion criterion;
  int max_iter = 100000;
  Prestep prestep = Prestep::kNone;
  TraceMode trace = TraceMode::kAuto;
  /// Best-approximation point override; when absent it is computed from the
  /// sets if they are all (affine) subspaces.
  std::optional<Vector> reference;
  /// Consecutive degenerate-circumcenter fallbacks tolerated before the run
  /// aborts.
  int fallback_budget = 10;
};

/// Iterates the one-step operator of `method` from x0 (after the optional
/// feasibility prestep), recording criteria per iteration, until the stop
/// criterion drops below its tolerance or max_iter steps were applied.
/// A degenerate circumcenter is replaced by one DR step; the run aborts
/// with kDegenerateCircumcenter once the consecutive-fallback budget is
/// spent.
RunResult solve(MethodKind method, const std::vector<SetPtr>& sets,
                const Vector& x0, const SolveOptions& options);

}  // namespace circumfeas
