// Acceptance suite: one numbered check per run-time guarantee the library
// makes. Each check prints a single PASS/FAIL line; run with a list of
// numbers to restrict the selection (default: all).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "circumfeas/analysis.hpp"
#include "circumfeas/bench.hpp"
#include "circumfeas/circumcenter.hpp"
#include "circumfeas/instances.hpp"
#include "circumfeas/methods.hpp"
#include "circumfeas/rng.hpp"
#include "test_support.hpp"

using namespace circumfeas;
using namespace circumfeas::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    if (detail.empty()) {
      detail = why;
    }
  }
};

// --- 1: lemma identities over random affine instances -----------------------

Outcome lemma_identities() {
  Outcome outcome;
  Rng rng(2024);
  int checked = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const ProblemInstance instance = random_affine_instance(rng, 50);
    const auto& u = dynamic_cast<const LinearSubspace&>(*instance.sets[0]);
    const auto& v = dynamic_cast<const LinearSubspace&>(*instance.sets[1]);
    const LinearSubspace intersection = subspace_intersection(u, v);
    const LinearSubspace sum = subspace_sum(u, v);
    const LinearSubspace fix_t = fix_t_basis(u, v);
    const Eigen::Index n = instance.metadata.ambient_dim;
    const Vector x = random_vector(rng, n, 2.0);
    const double scale = 1.0 + x.norm();

    const auto dist_int = [&](const Vector& p) {
      return (p - intersection.project(p)).norm();
    };

    // equal distances of x, R_U x, R_V R_U x to the intersection
    const Vector y = u.reflect(x);
    const Vector z = v.reflect(y);
    const double dx = dist_int(x);
    if (std::abs(dx - dist_int(y)) > 1e-8 * scale ||
        std::abs(dx - dist_int(z)) > 1e-8 * scale) {
      outcome.fail("equal-distance identity violated");
    }
    worst = std::max({worst, std::abs(dx - dist_int(y)) / scale,
                      std::abs(dx - dist_int(z)) / scale});

    // improvement identity for the circumcentered step
    const Vector dr = drm_step(u, v, x);
    const Vector cc = cdrm_step(u, v, x);
    const double lhs = dist_int(cc) * dist_int(cc);
    const double rhs = dist_int(dr) * dist_int(dr) - (dr - cc).squaredNorm();
    if (std::abs(lhs - rhs) > 1e-8 * (1.0 + std::abs(rhs))) {
      outcome.fail("improvement identity violated");
    }

    // the circumcentered step preserves the intersection projection
    if ((intersection.project(cc) - intersection.project(x)).norm() >
        1e-8 * scale) {
      outcome.fail("projection constancy violated");
    }

    // DR drift invariance along 20 iterations
    const double base_drift = (x - sum.project(x)).norm();
    Vector current = x;
    for (int k = 0; k < 20; ++k) {
      current = drm_step(u, v, current);
    }
    if (std::abs((current - sum.project(current)).norm() - base_drift) >
        1e-8 * scale) {
      outcome.fail("drift invariance violated");
    }

    // Fix T membership
    const Vector fixed = fix_t.project(random_vector(rng, n, 2.0));
    if ((drm_step(u, v, fixed) - fixed).norm() > 1e-8 * (1.0 + fixed.norm())) {
      outcome.fail("Fix T membership violated");
    }
    ++checked;
  }
  std::ostringstream detail;
  detail << checked << " instances, worst equal-distance defect " << worst;
  if (outcome.pass) {
    outcome.detail = detail.str();
  }
  return outcome;
}

// --- 2: rate bound for the circumcentered method ----------------------------

Outcome rate_bound() {
  Outcome outcome;
  const std::vector<double> targets = {0.1, 0.5, 0.9, 0.99};
  int pairs = 0;
  int inequalities = 0;
  double worst_margin = 1.0;
  for (std::size_t t = 0; t < targets.size() && pairs < 50; ++t) {
    const double target = targets[t];
    const double theta = std::acos(target);
    const int count = t < 2 ? 13 : 12;  // 13+13+12+12 = 50
    for (int seed = 0; seed < count && pairs < 50; ++seed, ++pairs) {
      const std::vector<double> angles = {
          theta, std::min(1.7 * theta, std::numbers::pi / 2),
          std::min(2.9 * theta, std::numbers::pi / 2)};
      const ProblemInstance instance =
          canonical_pair(10, angles, 1, static_cast<std::uint64_t>(seed));
      const double cosine = *instance.metadata.friedrichs_cosine;
      Rng rng(static_cast<std::uint64_t>(1000 + pairs));
      const Vector x0 = random_vector(rng, 10, 2.0);
      for (Prestep prestep :
           {Prestep::kProjectU, Prestep::kProjectV, Prestep::kProjectSum}) {
        SolveOptions options;
        // Iterates are checked until the error reaches 1e-10; past that,
        // point dedupe freezes the iterate near the solution and double
        // precision cannot follow the geometric envelope further down.
        options.criterion = {CriterionKind::kTrueError, 1e-10};
        options.max_iter = 50;
        options.prestep = prestep;
        options.trace = TraceMode::kScalars;
        const RunResult result =
            solve(MethodKind::kCdrm, instance.sets, x0, options);
        const double initial = *result.records.front().true_error;
        double bound = initial;
        for (std::size_t k = 1; k < result.records.size(); ++k) {
          bound *= cosine;
          const double error = *result.records[k].true_error;
          const double allowed = bound * (1.0 + 1e-6);
          ++inequalities;
          if (error > allowed) {
            std::ostringstream why;
            why << "bound violated at k=" << k << " (cosine " << cosine
                << "): error " << error << " > " << allowed;
            outcome.fail(why.str());
          } else if (allowed > 0.0) {
            worst_margin = std::min(worst_margin, (allowed - error) / allowed);
          }
        }
      }
    }
  }
  if (outcome.pass) {
    std::ostringstream detail;
    detail << pairs << " pairs x 3 starts, " << inequalities
           << " inequalities, worst margin " << worst_margin;
    outcome.detail = detail.str();
  }
  return outcome;
}

// --- 3: DRM converges at exactly the friedrichs-cosine rate -----------------

Outcome drm_sharpness() {
  Outcome outcome;
  double worst = 0.0;
  for (double cosine_target : {0.3, 0.5, 0.8}) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const double theta = std::acos(cosine_target);
      const ProblemInstance instance = canonical_pair(8, {theta}, 2, seed);
      const double cosine = *instance.metadata.friedrichs_cosine;
      Rng rng(300 + seed);
      const Vector x0 = random_vector(rng, 8, 1.5);

      SolveOptions options;
      options.criterion = {CriterionKind::kTrueError, 1e-30};
      options.max_iter =
          static_cast<int>(std::log(1e-10) / std::log(cosine));
      options.prestep = Prestep::kProjectSum;  // a start inside U + V
      options.trace = TraceMode::kScalars;
      const RunResult result =
          solve(MethodKind::kDrm, instance.sets, x0, options);
      const double rate = empirical_rate(result, *result.reference);
      worst = std::max(worst, std::abs(rate - cosine));
      if (std::abs(rate - cosine) > 1e-6) {
        std::ostringstream why;
        why << "measured rate " << rate << " vs cosine " << cosine;
        outcome.fail(why.str());
      }
    }
  }
  if (outcome.pass) {
    std::ostringstream detail;
    detail << "12 runs, worst |rate - cosine| = " << worst;
    outcome.detail = detail.str();
  }
  return outcome;
}

// --- 4: MAP converges at the squared cosine rate -----------------------------

Outcome map_rate() {
  Outcome outcome;
  double worst = 0.0;
  for (double cosine_target : {0.5, 0.8, 0.95}) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const double theta = std::acos(cosine_target);
      const ProblemInstance instance = canonical_pair(8, {theta}, 2, seed);
      const double cosine = *instance.metadata.friedrichs_cosine;
      Rng rng(400 + seed);
      const Vector x0 = random_vector(rng, 8, 1.5);

      SolveOptions options;
      options.criterion = {CriterionKind::kTrueError, 1e-30};
      options.max_iter =
          static_cast<int>(std::log(1e-10) / (2.0 * std::log(cosine)));
      options.trace = TraceMode::kScalars;
      const RunResult result =
          solve(MethodKind::kMap, instance.sets, x0, options);
      const double rate = empirical_rate(result, *result.reference);
      worst = std::max(worst, std::abs(rate - cosine * cosine));
      if (std::abs(rate - cosine * cosine) > 1e-4) {
        std::ostringstream why;
        why << "measured rate " << rate << " vs squared cosine "
            << cosine * cosine;
        outcome.fail(why.str());
      }
    }
  }
  if (outcome.pass) {
    std::ostringstream detail;
    detail << "12 runs, worst |rate - cosine^2| = " << worst;
    outcome.detail = detail.str();
  }
  return outcome;
}

// --- 5: planar problems end within two iterations ---------------------------

Outcome planar_termination() {
  Outcome outcome;
  Rng rng(500);
  int worst_iterations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double a1 = rng.uniform(0.0, std::numbers::pi);
    double a2 = rng.uniform(0.0, std::numbers::pi);
    while (std::abs(std::remainder(a1 - a2, std::numbers::pi)) < 0.05) {
      a2 = rng.uniform(0.0, std::numbers::pi);
    }
    const std::vector<SetPtr> sets = {shared_line2(a1), shared_line2(a2)};
    const Vector x0 = random_vector(rng, 2, 3.0);

    SolveOptions options;
    options.criterion = {CriterionKind::kGapDistance, 1e-12};
    options.max_iter = 10;
    const RunResult result = solve(MethodKind::kCdrm, sets, x0, options);
    worst_iterations = std::max(worst_iterations, result.iterations);
    if (result.stop_reason != StopReason::kConverged ||
        result.iterations > 2) {
      std::ostringstream why;
      why << "two-line run needed " << result.iterations << " iterations ("
          << to_string(result.stop_reason) << ")";
      outcome.fail(why.str());
    }
  }

  const ProblemInstance three = gallery("three_lines");
  for (int trial = 0; trial < 100; ++trial) {
    const Vector x0 = random_vector(rng, 2, 3.0);
    SolveOptions options;
    options.criterion = {CriterionKind::kGapDistance, 1e-12};
    options.max_iter = 10;
    const RunResult result =
        solve(MethodKind::kCdrmMultiset, three.sets, x0, options);
    worst_iterations = std::max(worst_iterations, result.iterations);
    if (result.stop_reason != StopReason::kConverged ||
        result.iterations > 2) {
      std::ostringstream why;
      why << "three-line run needed " << result.iterations << " iterations ("
          << to_string(result.stop_reason) << ")";
      outcome.fail(why.str());
    }
  }
  if (outcome.pass) {
    std::ostringstream detail;
    detail << "200 runs, max iterations " << worst_iterations;
    outcome.detail = detail.str();
  }
  return outcome;
}

// --- 6: paper-scale benchmark dominance --------------------------------------

Outcome benchmark_dominance() {
  Outcome outcome;
  ExperimentConfig config;
  config.generator = GeneratorKind::kRandomPair;
  config.n = 200;
  config.instance_count = 100;
  config.starts_per_instance = 20;
  config.methods = {{MethodKind::kMap, Prestep::kNone},
                    {MethodKind::kDrm, Prestep::kProjectV},
                    {MethodKind::kCdrm, Prestep::kProjectV}};
  config.criterion = {CriterionKind::kGapDistance, 1e-6};
  config.max_iter = 100000;
  config.seed = 7;
  const std::vector<RunRecord> records = run_experiment(config);
  if (records.size() != 6000) {
    outcome.fail("expected 6000 records, got " + std::to_string(records.size()));
    return outcome;
  }

  std::map<std::pair<int, int>, std::map<std::string, const RunRecord*>> problems;
  for (const RunRecord& r : records) {
    problems[{r.instance_id, r.start_id}][to_string(r.method)] = &r;
  }
  int cdrm_wins = 0;
  for (const auto& [key, by_method] : problems) {
    const RunRecord& cdrm = *by_method.at("cdrm");
    const RunRecord& drm = *by_method.at("drm");
    if (cdrm.stop_reason == StopReason::kConverged &&
        cdrm.iterations <= drm.iterations) {
      ++cdrm_wins;
    }
  }
  const double win_fraction =
      static_cast<double>(cdrm_wins) / static_cast<double>(problems.size());
  if (win_fraction < 0.99) {
    std::ostringstream why;
    why << "cdrm beat drm on only " << 100.0 * win_fraction << "% of runs";
    outcome.fail(why.str());
  }

  // profile dominance at every breakpoint of every method
  const PerformanceProfile profile = performance_profile(records);
  std::size_t cdrm_index = 0;
  for (std::size_t m = 0; m < profile.methods.size(); ++m) {
    if (profile.methods[m] == "cdrm") {
      cdrm_index = m;
    }
  }
  for (std::size_t m = 0; m < profile.methods.size(); ++m) {
    for (const auto& bp : profile.breakpoints[m]) {
      if (profile.rho(cdrm_index, bp.tau) + 1e-15 < profile.rho(m, bp.tau)) {
        std::ostringstream why;
        why << "profile of " << profile.methods[m] << " exceeds cdrm at tau="
            << bp.tau;
        outcome.fail(why.str());
      }
    }
  }
  if (outcome.pass) {
    std::ostringstream detail;
    detail << "2000 problems, cdrm <= drm on " << 100.0 * win_fraction
           << "%, profile dominant";
    outcome.detail = detail.str();
  }
  return outcome;
}

// --- 7: the small-angle regime ------------------------------------------------

Outcome small_angle() {
  Outcome outcome;
  int runs = 0;
  long best_lead = std::numeric_limits<long>::max();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ProblemInstance instance =
        canonical_pair(6, {5e-3, 0.9}, 1, seed);
    Rng rng(700 + seed);
    for (int start = 0; start < 4; ++start, ++runs) {
      const Vector x0 = random_vector(rng, 6, 2.0);
      std::map<std::string, int> iterations;
      for (const auto& [method, prestep] :
           std::vector<std::pair<MethodKind, Prestep>>{
               {MethodKind::kCdrm, Prestep::kProjectV},
               {MethodKind::kDrm, Prestep::kProjectV},
               {MethodKind::kMap, Prestep::kNone}}) {
        SolveOptions options;
        options.criterion = {CriterionKind::kTrueError, 1e-3};
        options.max_iter = 2000000;
        options.prestep = prestep;
        options.trace = TraceMode::kNone;
        const RunResult result = solve(method, instance.sets, x0, options);
        if (result.stop_reason != StopReason::kConverged) {
          outcome.fail(to_string(method) + " did not reach 1e-3");
        }
        iterations[to_string(method)] = result.iterations;
      }
      if (iterations["cdrm"] >= iterations["drm"] ||
          iterations["cdrm"] >= iterations["map"]) {
        std::ostringstream why;
        why << "cdrm=" << iterations["cdrm"] << " drm=" << iterations["drm"]
            << " map=" << iterations["map"];
        outcome.fail("cdrm not strictly fastest: " + why.str());
      }
      best_lead = std::min(best_lead,
                           static_cast<long>(iterations["map"]) -
                               static_cast<long>(iterations["cdrm"]));
    }
  }
  if (outcome.pass) {
    std::ostringstream detail;
    detail << runs << " runs, smallest lead over the runner-up " << best_lead
           << " iterations";
    outcome.detail = detail.str();
  }
  return outcome;
}

// --- 8: circumcenter gram route vs brute force --------------------------------

Outcome circumcenter_oracle() {
  Outcome outcome;
  Rng rng(800);
  int checked = 0;
  double worst = 0.0;
  while (checked < 1000) {
    const auto n = static_cast<Eigen::Index>(rng.uniform_int(2, 8));
    const auto count = static_cast<Eigen::Index>(
        rng.uniform_int(3, std::min<Eigen::Index>(n + 1, 5)));
    std::vector<Vector> points;
    for (Eigen::Index i = 0; i < count; ++i) {
      points.push_back(random_vector(rng, n, 1.5));
    }
    Vector center;
    try {
      center = circumcenter(points);
    } catch (const DegenerateConfigurationError&) {
      continue;
    }
    const Vector oracle = brute_force_circumcenter(points);
    const double defect = (center - oracle).norm() / (1.0 + oracle.norm());
    worst = std::max(worst, defect);
    if (defect > 1e-8) {
      outcome.fail("gram route disagrees with the brute-force solve");
    }
    ++checked;
  }
  if (outcome.pass) {
    std::ostringstream detail;
    detail << checked << " point sets, worst relative disagreement " << worst;
    outcome.detail = detail.str();
  }
  return outcome;
}

// --- 9: qualitative non-affine behavior ---------------------------------------

Outcome nonaffine_checks() {
  Outcome outcome;

  // tangent ball and line: the circumcentered iterate reaches the unique
  // common point, the plain DR iterate stalls on its fixed-point ray
  const ProblemInstance tangent = gallery("ball_line_tangent");
  const Vector solution = *tangent.reference_solution;
  Rng rng(900);
  for (int trial = 0; trial < 6; ++trial) {
    const Vector x0 = random_vector(rng, 2, 2.0);
    SolveOptions options;
    options.criterion = {CriterionKind::kTrueError, 1e-6};
    options.max_iter = 10000;
    options.trace = TraceMode::kNone;
    options.reference = solution;

    const RunResult cdrm = solve(MethodKind::kCdrm, tangent.sets, x0, options);
    if (cdrm.stop_reason != StopReason::kConverged) {
      outcome.fail("cdrm missed the tangency point from start " +
                   std::to_string(trial));
    }
    const RunResult drm = solve(MethodKind::kDrm, tangent.sets, x0, options);
    if (drm.stop_reason == StopReason::kConverged) {
      outcome.fail("drm unexpectedly reached the tangency point");
    }
    if (*drm.final_true_error <= 1e-6) {
      outcome.fail("drm final iterate unexpectedly feasible");
    }
  }

  // circle and line: both methods find an intersection point
  const ProblemInstance circle = gallery("circle_line");
  for (int trial = 0; trial < 6; ++trial) {
    Vector x0 = random_vector(rng, 2, 1.5);
    while (std::abs(x0(0)) < 0.05) {
      x0 = random_vector(rng, 2, 1.5);  // stay off the singular axis
    }
    for (MethodKind method : {MethodKind::kCdrm, MethodKind::kDrm}) {
      SolveOptions options;
      options.criterion = {CriterionKind::kGapDistance, 1e-6};
      options.max_iter = 10000;
      options.trace = TraceMode::kNone;
      const RunResult result = solve(method, circle.sets, x0, options);
      if (result.stop_reason != StopReason::kConverged) {
        outcome.fail(to_string(method) + " did not converge on circle_line");
        continue;
      }
      // the iterate itself must be (nearly) feasible
      for (const SetPtr& set : circle.sets) {
        if ((result.final_iterate - set->project(result.final_iterate)).norm() >
            1e-5) {
          outcome.fail(to_string(method) + " iterate is not feasible");
        }
      }
    }
  }
  if (outcome.pass) {
    outcome.detail =
        "tangent: cdrm feasible, drm stalls; circle_line: both converge";
  }
  return outcome;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"lemma identities on 200 random affine instances", lemma_identities},
      {"circumcentered rate bounded by the friedrichs cosine", rate_bound},
      {"DRM rate sharp at the friedrichs cosine", drm_sharpness},
      {"MAP asymptotic rate at the squared cosine", map_rate},
      {"planar problems solved within two iterations", planar_termination},
      {"paper-scale benchmark dominance", benchmark_dominance},
      {"small-angle regime advantage", small_angle},
      {"circumcenter matches the brute-force oracle", circumcenter_oracle},
      {"non-affine tangency and circle-line behavior", nonaffine_checks},
  };

  std::vector<int> selection;
  for (int i = 1; i < argc; ++i) {
    selection.push_back(std::atoi(argv[i]));
  }

  int failures = 0;
  for (std::size_t index = 0; index < criteria.size(); ++index) {
    const int number = static_cast<int>(index) + 1;
    if (!selection.empty() &&
        std::find(selection.begin(), selection.end(), number) ==
            selection.end()) {
      continue;
    }
    const auto begin = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[index].second();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - begin)
            .count();
    std::printf("%s  criterion %d: %s (%s) [%.1fs]\n",
                outcome.pass ? "PASS" : "FAIL", number,
                criteria[index].first.c_str(), outcome.detail.c_str(), seconds);
    std::fflush(stdout);
    if (!outcome.pass) {
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}
