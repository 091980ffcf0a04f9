#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "circumfeas/geometry.hpp"

namespace circumfeas {

enum class InstanceKind { kAffinePair, kAffineMulti, kNonAffine };

std::string to_string(InstanceKind kind);
InstanceKind instance_kind_from_string(const std::string& name);

struct InstanceMetadata {
  std::string name;
  Eigen::Index ambient_dim = 0;
  std::vector<Eigen::Index> dims;  // per-set subspace dims (-1 for non-affine)
  std::optional<Eigen::Index> intersection_dim;  // subspace pairs only
  std::uint64_t seed = 0;
  std::optional<double> friedrichs_cosine;  // affine pairs only
};

/// A feasibility/best-approximation problem: the sets, an optional known
/// solution and generator metadata.
struct ProblemInstance {
  std::vector<SetPtr> sets;
  InstanceKind kind = InstanceKind::kAffinePair;
  std::optional<Vector> reference_solution;
  InstanceMetadata metadata;
};

/// Random pair of linear subspaces of R^n with prescribed dimensions and
/// intersection dimension: a shared random orthonormal block of dim_int
/// columns is given to both subspaces and the remaining columns are filled
/// with independent random draws. The resulting intersection dimension is
/// verified against the principal-angle oracle; generation retries up to 5
/// times before failing. Deterministic for a fixed seed.
ProblemInstance random_pair(Eigen::Index n, Eigen::Index dim_u,
                            Eigen::Index dim_v, Eigen::Index dim_int,
                            std::uint64_t seed);

/// Pair with prescribed principal angles: both subspaces share the first
/// dim_int coordinate directions and each angle θ_i contributes the
/// direction e_{d+2i-1} to U and its rotation by θ_i inside the
/// (e_{d+2i-1}, e_{d+2i}) plane to V; afterwards a seeded random orthogonal
/// change of basis is applied. The Friedrichs cosine is cos(min θ_i).
ProblemInstance canonical_pair(Eigen::Index n,
                               const std::vector<double>& principal_angles,
                               Eigen::Index dim_int, std::uint64_t seed = 0);

/// Named 2-D/3-D example instances. Recognized names: two_balls,
/// ball_line_tangent, ball_line_crossing, circle_line, three_lines,
/// two_lines_3d. Coordinates are artifact defaults, overridable through
/// params; unknown names or parameter keys raise InvalidConfigError.
ProblemInstance gallery(const std::string& name,
                        const std::map<std::string, double>& params = {});

std::vector<std::string> gallery_names();

/// JSON serialization with every real written with 17 significant digits,
/// so equal instances serialize to identical bytes.
std::string to_json(const ProblemInstance& instance);
ProblemInstance instance_from_json(const std::string& text);

}  // namespace circumfeas
