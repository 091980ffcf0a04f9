#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "circumfeas/analysis.hpp"
#include "circumfeas/bench.hpp"
#include "circumfeas/circumcenter.hpp"
#include "circumfeas/geometry.hpp"
#include "circumfeas/instances.hpp"
#include "circumfeas/methods.hpp"

namespace py = pybind11;
using namespace circumfeas;

namespace {

std::vector<SetPtr> as_sets(const std::vector<std::shared_ptr<ProjectableSet>>& sets) {
  return {sets.begin(), sets.end()};
}

SolveOptions make_options(const std::string& criterion, double tol,
                          int max_iter, const std::string& prestep,
                          const std::string& trace,
                          std::optional<Vector> reference) {
  SolveOptions options;
  options.criterion.kind = criterion_from_string(criterion);
  options.criterion.tolerance = tol;
  options.max_iter = max_iter;
  options.prestep = prestep_from_string(prestep);
  if (trace == "auto") {
    options.trace = TraceMode::kAuto;
  } else if (trace == "full") {
    options.trace = TraceMode::kFull;
  } else if (trace == "scalars") {
    options.trace = TraceMode::kScalars;
  } else if (trace == "none") {
    options.trace = TraceMode::kNone;
  } else {
    throw InvalidConfigError("unknown trace mode '" + trace + "'");
  }
  options.reference = std::move(reference);
  return options;
}

}  // namespace

PYBIND11_MODULE(_circumfeas, m) {
  m.doc() = "Circumcentered Douglas-Rachford and companion projection methods";

  py::register_exception<InvalidInputError>(m, "InvalidInputError");
  py::register_exception<InvalidConfigError>(m, "InvalidConfigError");
  py::register_exception<UndefinedProjectionError>(m, "UndefinedProjectionError");
  py::register_exception<DegenerateConfigurationError>(m, "DegenerateConfigurationError");
  py::register_exception<UnsupportedCriterionError>(m, "UnsupportedCriterionError");
  py::register_exception<InfeasibleInstanceError>(m, "InfeasibleInstanceError");
  py::register_exception<UndefinedRateError>(m, "UndefinedRateError");
  py::register_exception<GenerationFailureError>(m, "GenerationFailureError");

  py::class_<OrthonormalBasis>(m, "OrthonormalBasis")
      .def(py::init<Matrix, Eigen::Index>(), py::arg("columns"),
           py::arg("ambient_dim"))
      .def_property_readonly("columns", &OrthonormalBasis::columns)
      .def_property_readonly("ambient_dim", &OrthonormalBasis::ambient_dim)
      .def_property_readonly("dim", &OrthonormalBasis::dim);

  py::class_<ProjectableSet, std::shared_ptr<ProjectableSet>>(m, "ProjectableSet")
      .def("project", &ProjectableSet::project, py::arg("x"))
      .def("reflect", &ProjectableSet::reflect, py::arg("x"))
      .def_property_readonly("ambient_dim", &ProjectableSet::ambient_dim)
      .def_property_readonly("type_name", &ProjectableSet::type_name)
      .def_property_readonly("is_affine", &ProjectableSet::is_affine);

  py::class_<LinearSubspace, ProjectableSet, std::shared_ptr<LinearSubspace>>(
      m, "LinearSubspace")
      .def(py::init<OrthonormalBasis>(), py::arg("basis"))
      .def(py::init([](const Matrix& columns) {
             return LinearSubspace(orthonormalize(columns));
           }),
           py::arg("columns"))
      .def_property_readonly("basis", &LinearSubspace::basis)
      .def_property_readonly("dim", &LinearSubspace::dim);

  py::class_<AffineSubspace, ProjectableSet, std::shared_ptr<AffineSubspace>>(
      m, "AffineSubspace")
      .def(py::init<OrthonormalBasis, Vector>(), py::arg("basis"),
           py::arg("offset"))
      .def(py::init([](const Matrix& columns, const Vector& offset) {
             return AffineSubspace(orthonormalize(columns), offset);
           }),
           py::arg("columns"), py::arg("offset"))
      .def_property_readonly("basis", &AffineSubspace::basis)
      .def_property_readonly("offset", &AffineSubspace::offset)
      .def("direction", &AffineSubspace::direction);

  py::class_<Ball, ProjectableSet, std::shared_ptr<Ball>>(m, "Ball")
      .def(py::init<Vector, double>(), py::arg("center"), py::arg("radius"))
      .def_property_readonly("center", &Ball::center)
      .def_property_readonly("radius", &Ball::radius);

  py::class_<Sphere, ProjectableSet, std::shared_ptr<Sphere>>(m, "Sphere")
      .def(py::init<Vector, double>(), py::arg("center"), py::arg("radius"))
      .def_property_readonly("center", &Sphere::center)
      .def_property_readonly("radius", &Sphere::radius);

  m.def("orthonormalize",
        py::overload_cast<const Matrix&>(&orthonormalize),
        py::arg("columns"));
  m.def("subspace_sum", &subspace_sum, py::arg("u"), py::arg("v"));
  m.def("subspace_intersection", &subspace_intersection, py::arg("u"),
        py::arg("v"));
  m.def("orthogonal_complement", &orthogonal_complement, py::arg("u"));

  m.def("circumcenter", &circumcenter, py::arg("points"),
        py::arg("dedupe_tol") = tol::kDedupe);

  m.def("map_step",
        [](const ProjectableSet& u, const ProjectableSet& v, const Vector& x) {
          return map_step(u, v, x);
        });
  m.def("drm_step",
        [](const ProjectableSet& u, const ProjectableSet& v, const Vector& x) {
          return drm_step(u, v, x);
        });
  m.def("cdrm_step",
        [](const ProjectableSet& u, const ProjectableSet& v, const Vector& x) {
          return cdrm_step(u, v, x);
        });
  m.def("cimmino_step",
        [](const ProjectableSet& u, const ProjectableSet& v, const Vector& x) {
          return cimmino_step(u, v, x);
        });
  m.def("circum_cimmino_step",
        [](const ProjectableSet& u, const ProjectableSet& v, const Vector& x) {
          return circum_cimmino_step(u, v, x);
        });
  m.def("circum_map_step",
        [](const ProjectableSet& u, const ProjectableSet& v, const Vector& x) {
          return circum_map_step(u, v, x);
        });
  m.def("multiset_cdrm_step",
        [](const std::vector<std::shared_ptr<ProjectableSet>>& sets,
           const Vector& x) { return multiset_cdrm_step(as_sets(sets), x); });
  m.def("gap_distance",
        [](const ProjectableSet& u, const ProjectableSet& v, const Vector& x) {
          return gap_distance(u, v, x);
        });

  py::class_<IterationRecord>(m, "IterationRecord")
      .def_readonly("index", &IterationRecord::index)
      .def_readonly("iterate", &IterationRecord::iterate)
      .def_readonly("true_error", &IterationRecord::true_error)
      .def_readonly("gap", &IterationRecord::gap)
      .def_readonly("step_norm", &IterationRecord::step_norm);

  py::class_<RunResult>(m, "RunResult")
      .def_property_readonly(
          "method", [](const RunResult& r) { return to_string(r.method); })
      .def_readonly("records", &RunResult::records)
      .def_readonly("iterations", &RunResult::iterations)
      .def_property_readonly(
          "stop_reason",
          [](const RunResult& r) { return to_string(r.stop_reason); })
      .def_readonly("final_iterate", &RunResult::final_iterate)
      .def_readonly("reference", &RunResult::reference)
      .def_readonly("final_true_error", &RunResult::final_true_error)
      .def_readonly("final_gap", &RunResult::final_gap);

  m.def(
      "solve",
      [](const std::string& method,
         const std::vector<std::shared_ptr<ProjectableSet>>& sets,
         const Vector& x0, const std::string& criterion, double tol,
         int max_iter, const std::string& prestep, const std::string& trace,
         std::optional<Vector> reference) {
        return solve(method_from_string(method), as_sets(sets), x0,
                     make_options(criterion, tol, max_iter, prestep, trace,
                                  std::move(reference)));
      },
      py::arg("method"), py::arg("sets"), py::arg("x0"),
      py::arg("criterion") = "gap", py::arg("tol") = 1e-6,
      py::arg("max_iter") = 100000, py::arg("prestep") = "none",
      py::arg("trace") = "auto", py::arg("reference") = std::nullopt);

  py::class_<FriedrichsAngle>(m, "FriedrichsAngle")
      .def_readonly("cosine", &FriedrichsAngle::cosine)
      .def_readonly("principal_cosines", &FriedrichsAngle::principal_cosines)
      .def_readonly("intersection_dim", &FriedrichsAngle::intersection_dim)
      .def_property_readonly("angle", &FriedrichsAngle::angle);

  m.def("friedrichs_cosine",
        py::overload_cast<const LinearSubspace&, const LinearSubspace&>(
            &friedrichs_cosine),
        py::arg("u"), py::arg("v"));
  m.def("fix_t_basis", &fix_t_basis, py::arg("u"), py::arg("v"));
  m.def("best_approximation",
        [](const ProjectableSet& u, const ProjectableSet& v, const Vector& x) {
          return best_approximation(u, v, x);
        });
  m.def("empirical_rate", &empirical_rate, py::arg("result"),
        py::arg("reference"));

  py::class_<InstanceMetadata>(m, "InstanceMetadata")
      .def_readonly("name", &InstanceMetadata::name)
      .def_readonly("ambient_dim", &InstanceMetadata::ambient_dim)
      .def_readonly("dims", &InstanceMetadata::dims)
      .def_readonly("intersection_dim", &InstanceMetadata::intersection_dim)
      .def_readonly("seed", &InstanceMetadata::seed)
      .def_readonly("friedrichs_cosine", &InstanceMetadata::friedrichs_cosine);

  py::class_<ProblemInstance>(m, "ProblemInstance")
      .def_readonly("sets", &ProblemInstance::sets)
      .def_property_readonly(
          "kind", [](const ProblemInstance& p) { return to_string(p.kind); })
      .def_readonly("reference_solution", &ProblemInstance::reference_solution)
      .def_readonly("metadata", &ProblemInstance::metadata)
      .def("to_json", [](const ProblemInstance& p) { return to_json(p); });

  m.def("random_pair", &random_pair, py::arg("n"), py::arg("dim_u"),
        py::arg("dim_v"), py::arg("dim_int"), py::arg("seed"));
  m.def("canonical_pair", &canonical_pair, py::arg("n"), py::arg("angles"),
        py::arg("dim_int"), py::arg("seed") = 0);
  m.def("gallery", &gallery, py::arg("name"),
        py::arg("params") = std::map<std::string, double>{});
  m.def("gallery_names", &gallery_names);
  m.def("instance_from_json", &instance_from_json, py::arg("text"));

  py::class_<RunRecord>(m, "RunRecord")
      .def_readonly("instance_id", &RunRecord::instance_id)
      .def_readonly("start_id", &RunRecord::start_id)
      .def_property_readonly(
          "method", [](const RunRecord& r) { return to_string(r.method); })
      .def_property_readonly(
          "prestep", [](const RunRecord& r) { return to_string(r.prestep); })
      .def_readonly("n", &RunRecord::n)
      .def_readonly("dim_u", &RunRecord::dim_u)
      .def_readonly("dim_v", &RunRecord::dim_v)
      .def_readonly("dim_int", &RunRecord::dim_int)
      .def_readonly("c_f", &RunRecord::c_f)
      .def_readonly("tol", &RunRecord::tol)
      .def_readonly("iterations", &RunRecord::iterations)
      .def_readonly("final_true_error", &RunRecord::final_true_error)
      .def_readonly("final_gap", &RunRecord::final_gap)
      .def_property_readonly(
          "stop_reason",
          [](const RunRecord& r) { return to_string(r.stop_reason); })
      .def_readonly("wall_time_us", &RunRecord::wall_time_us);

  py::class_<PerformanceProfile>(m, "PerformanceProfile")
      .def_readonly("methods", &PerformanceProfile::methods)
      .def_readonly("failure_ratio_cap", &PerformanceProfile::failure_ratio_cap)
      .def_property_readonly(
          "breakpoints",
          [](const PerformanceProfile& p) {
            std::vector<std::vector<std::pair<double, double>>> out;
            for (const auto& points : p.breakpoints) {
              std::vector<std::pair<double, double>> method_points;
              for (const auto& bp : points) {
                method_points.emplace_back(bp.tau, bp.fraction);
              }
              out.push_back(std::move(method_points));
            }
            return out;
          })
      .def("rho", &PerformanceProfile::rho, py::arg("method_index"),
           py::arg("tau"));

  m.def(
      "run_experiment",
      [](Eigen::Index n, int instances, int starts,
         const std::vector<std::string>& methods, const std::string& criterion,
         double tol, int max_iter, std::uint64_t seed,
         const std::string& generator, const std::vector<double>& angles,
         Eigen::Index dim_int, const std::string& gallery_name, int threads) {
        ExperimentConfig config;
        config.n = n;
        config.instance_count = instances;
        config.starts_per_instance = starts;
        for (const std::string& item : methods) {
          MethodSpec spec;
          const auto colon = item.find(':');
          if (colon == std::string::npos) {
            spec.method = method_from_string(item);
            spec.prestep = default_prestep(spec.method);
          } else {
            spec.method = method_from_string(item.substr(0, colon));
            spec.prestep = prestep_from_string(item.substr(colon + 1));
          }
          config.methods.push_back(spec);
        }
        config.criterion.kind = criterion_from_string(criterion);
        config.criterion.tolerance = tol;
        config.max_iter = max_iter;
        config.seed = seed;
        if (generator == "random") {
          config.generator = GeneratorKind::kRandomPair;
        } else if (generator == "canonical") {
          config.generator = GeneratorKind::kCanonicalPair;
          config.canonical_angles = angles;
          config.canonical_dim_int = dim_int;
        } else if (generator == "gallery") {
          config.generator = GeneratorKind::kGallery;
          config.gallery_name = gallery_name;
        } else {
          throw InvalidConfigError("unknown generator '" + generator + "'");
        }
        config.threads = threads;
        return run_experiment(config);
      },
      py::arg("n") = 200, py::arg("instances") = 100, py::arg("starts") = 20,
      py::arg("methods") = std::vector<std::string>{"map", "drm", "cdrm"},
      py::arg("criterion") = "gap", py::arg("tol") = 1e-6,
      py::arg("max_iter") = 100000, py::arg("seed") = 0,
      py::arg("generator") = "random",
      py::arg("angles") = std::vector<double>{}, py::arg("dim_int") = 1,
      py::arg("gallery_name") = std::string(), py::arg("threads") = 0,
      py::call_guard<py::gil_scoped_release>());

  m.def(
      "performance_profile",
      [](const std::vector<RunRecord>& records, const std::string& cost) {
        if (cost == "iterations") {
          return performance_profile(records, CostField::kIterations);
        }
        if (cost == "wall-time") {
          return performance_profile(records, CostField::kWallTime);
        }
        throw InvalidConfigError("unknown cost field '" + cost + "'");
      },
      py::arg("records"), py::arg("cost") = "iterations");
}
