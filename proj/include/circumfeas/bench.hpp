#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "circumfeas/instances.hpp"
#include "circumfeas/methods.hpp"

namespace circumfeas {

/// Which generator produces the experiment's instances.
enum class GeneratorKind { kRandomPair, kCanonicalPair, kGallery };

struct MethodSpec {
  MethodKind method = MethodKind::kCdrm;
  Prestep prestep = Prestep::kNone;
};

/// The monitored sequences start from a projected point, so circumcentered
/// and DR methods default to a P_V start while plain projection methods
/// start from x itself.
Prestep default_prestep(MethodKind method);

struct ExperimentConfig {
  GeneratorKind generator = GeneratorKind::kRandomPair;
  Eigen::Index n = 200;
  int instance_count = 100;
  int starts_per_instance = 20;
  std::vector<MethodSpec> methods;
  StopCriterion criterion{CriterionKind::kGapDistance, 1e-6};
  int max_iter = 100000;
  std::uint64_t seed = 0;

  // canonical generator settings
  std::vector<double> canonical_angles;
  Eigen::Index canonical_dim_int = 1;

  // gallery generator settings
  std::string gallery_name;
  std::map<std::string, double> gallery_params;

  int threads = 0;  // 0: CIRCUMFEAS_THREADS env var, else hardware threads
};

/// One row of the experiment output; missing reals are NaN and dims are -1
/// when the instance is not a subspace pair.
struct RunRecord {
  int instance_id = 0;
  int start_id = 0;
  MethodKind method = MethodKind::kCdrm;
  Prestep prestep = Prestep::kNone;
  Eigen::Index n = 0;
  Eigen::Index dim_u = -1;
  Eigen::Index dim_v = -1;
  Eigen::Index dim_int = -1;
  double c_f = std::numeric_limits<double>::quiet_NaN();
  CriterionKind criterion = CriterionKind::kGapDistance;
  double tol = 0.0;
  int iterations = 0;
  double final_true_error = std::numeric_limits<double>::quiet_NaN();
  double final_gap = std::numeric_limits<double>::quiet_NaN();
  StopReason stop_reason = StopReason::kMaxIter;
  std::int64_t wall_time_us = 0;
};

/// Runs every configured method from the same seeded start points on every
/// generated instance. Start j of instance i is drawn from the substream
/// splitmix64(splitmix64(seed + i) ^ splitmix64(j + 1)); instance i itself
/// uses seed + i. Runs execute on a worker pool; records are returned
/// sorted by (instance_id, start_id, method). Abnormal runs keep their
/// stop_reason and do not abort the experiment.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config);

/// Dolan-More performance profile: per-method step function of the fraction
/// of problems solved within a cost ratio tau of the best method.
struct PerformanceProfile {
  struct Breakpoint {
    double tau = 1.0;
    double fraction = 0.0;
  };
  std::vector<std::string> methods;
  std::vector<std::vector<Breakpoint>> breakpoints;  // parallel to methods
  double failure_ratio_cap = 10.0;

  /// rho_m(tau): fraction of problems method m solved with ratio <= tau.
  double rho(std::size_t method_index, double tau) const;
};

enum class CostField { kIterations, kWallTime };

/// Builds the profile, by default over cost = iterations (wall time is
/// recorded in every run but never the default metric). A problem is one
/// (instance, start) pair; unsolved runs are capped at
/// 2 * (largest finite ratio), or 10 when every finite ratio equals 1.
PerformanceProfile performance_profile(const std::vector<RunRecord>& records,
                                       CostField cost_field = CostField::kIterations);

// --- record / profile I/O -------------------------------------------------

extern const char* const kRecordCsvHeader;

void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records);
void write_records_json(std::ostream& out, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_records(std::istream& in);

void write_profile_csv(std::ostream& out, const PerformanceProfile& profile);
void write_profile_json(std::ostream& out, const PerformanceProfile& profile);

}  // namespace circumfeas
