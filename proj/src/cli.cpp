#include "circumfeas/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "circumfeas/analysis.hpp"
#include "circumfeas/bench.hpp"
#include "circumfeas/instances.hpp"
#include "circumfeas/rng.hpp"

namespace circumfeas {

namespace {

std::vector<double> parse_reals(const std::string& csv) {
  std::vector<double> values;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw InvalidConfigError("could not parse real number '" + item + "'");
    }
  }
  return values;
}

std::map<std::string, double> parse_params(const std::vector<std::string>& kvs) {
  std::map<std::string, double> params;
  for (const std::string& kv : kvs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw InvalidConfigError("parameter '" + kv + "' is not of the form key=value");
    }
    params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
  }
  return params;
}

std::vector<MethodSpec> parse_methods(const std::string& csv) {
  std::vector<MethodSpec> specs;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    MethodSpec spec;
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      spec.method = method_from_string(item);
      spec.prestep = default_prestep(spec.method);
    } else {
      spec.method = method_from_string(item.substr(0, colon));
      spec.prestep = prestep_from_string(item.substr(colon + 1));
    }
    specs.push_back(spec);
  }
  if (specs.empty()) {
    throw InvalidConfigError("no methods given");
  }
  return specs;
}

struct InstanceOptions {
  std::string gallery_name;
  std::vector<std::string> params;
  std::string input_file;
  bool random = false;
  bool canonical = false;
  Eigen::Index n = 0;
  Eigen::Index dim_u = 0;
  Eigen::Index dim_v = 0;
  Eigen::Index dim_int = 1;
  std::string angles;
  std::uint64_t seed = 0;
};

void add_instance_flags(CLI::App* cmd, InstanceOptions& opts) {
  cmd->add_option("--gallery", opts.gallery_name, "gallery instance name");
  cmd->add_option("--param", opts.params,
                  "gallery parameter key=value (repeatable)");
  cmd->add_option("--in", opts.input_file, "instance JSON file");
  cmd->add_flag("--random", opts.random,
                "random subspace pair (--n --dim-u --dim-v --dim-int --seed)");
  cmd->add_flag("--canonical", opts.canonical,
                "prescribed-angle pair (--n --angles --dim-int --seed)");
  cmd->add_option("--n", opts.n, "ambient dimension");
  cmd->add_option("--dim-u", opts.dim_u, "dimension of the first subspace");
  cmd->add_option("--dim-v", opts.dim_v, "dimension of the second subspace");
  cmd->add_option("--dim-int", opts.dim_int, "intersection dimension");
  cmd->add_option("--angles", opts.angles,
                  "comma-separated principal angles in (0, pi/2]");
  cmd->add_option("--seed", opts.seed, "generator seed");
}

ProblemInstance build_instance(const InstanceOptions& opts) {
  if (!opts.gallery_name.empty()) {
    return gallery(opts.gallery_name, parse_params(opts.params));
  }
  if (!opts.input_file.empty()) {
    std::ifstream in(opts.input_file);
    if (!in) {
      throw InvalidConfigError("cannot open instance file '" + opts.input_file + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return instance_from_json(buffer.str());
  }
  if (opts.canonical) {
    return canonical_pair(opts.n, parse_reals(opts.angles), opts.dim_int,
                          opts.seed);
  }
  if (opts.random) {
    return random_pair(opts.n, opts.dim_u, opts.dim_v, opts.dim_int, opts.seed);
  }
  throw InvalidConfigError(
      "no instance given; use --gallery, --in, --random or --canonical");
}

std::ostream& open_output(std::ofstream& file, const std::string& path,
                          std::ostream& fallback) {
  if (path.empty()) {
    return fallback;
  }
  file.open(path);
  if (!file) {
    throw InvalidConfigError("cannot open output file '" + path + "'");
  }
  return file;
}

int command_solve(const InstanceOptions& inst_opts, const std::string& method_name,
                  const std::string& criterion_name, double tolerance,
                  int max_iter, const std::string& prestep_name,
                  std::uint64_t start_seed, const std::string& x0_csv,
                  bool trace, const std::string& format, std::ostream& out) {
  const ProblemInstance instance = build_instance(inst_opts);
  const MethodKind method = method_from_string(method_name);

  SolveOptions options;
  options.criterion.kind = criterion_from_string(criterion_name);
  options.criterion.tolerance = tolerance;
  options.max_iter = max_iter;
  options.prestep = prestep_name == "auto" ? default_prestep(method)
                                           : prestep_from_string(prestep_name);
  options.trace = trace ? TraceMode::kScalars : TraceMode::kNone;
  if (instance.reference_solution &&
      options.criterion.kind == CriterionKind::kTrueError) {
    options.reference = instance.reference_solution;
  }

  Vector x0;
  const Eigen::Index n = instance.metadata.ambient_dim;
  if (!x0_csv.empty()) {
    const std::vector<double> coords = parse_reals(x0_csv);
    if (static_cast<Eigen::Index>(coords.size()) != n) {
      throw InvalidConfigError("--x0 has " + std::to_string(coords.size()) +
                               " coordinates, instance lives in dimension " +
                               std::to_string(n));
    }
    x0 = Eigen::Map<const Vector>(coords.data(), n);
  } else {
    Rng rng(splitmix64(start_seed));
    x0.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      x0(i) = rng.normal();
    }
  }

  const RunResult result = solve(method, instance.sets, x0, options);

  if (format == "json") {
    out << "{\"instance\":\"" << instance.metadata.name << "\",\"method\":\""
        << to_string(method) << "\",\"prestep\":\"" << to_string(options.prestep)
        << "\",\"criterion\":\"" << to_string(options.criterion.kind)
        << "\",\"tol\":" << tolerance << ",\"iterations\":" << result.iterations
        << ",\"stop_reason\":\"" << to_string(result.stop_reason)
        << "\",\"final_gap\":" << result.final_gap;
    if (result.final_true_error) {
      out << ",\"final_true_error\":" << *result.final_true_error;
    }
    out << "}\n";
  } else {
    out << "instance: " << instance.metadata.name << " (n=" << n << ")\n";
    out << "method: " << to_string(method)
        << "  prestep: " << to_string(options.prestep)
        << "  criterion: " << to_string(options.criterion.kind)
        << "  tol: " << tolerance << '\n';
    if (trace) {
      out << "    k";
      if (result.records.size() > 0 && result.records.front().true_error) {
        out << "  true_error";
      }
      out << "  gap  step_norm\n";
      for (const IterationRecord& rec : result.records) {
        out << "    " << rec.index;
        if (rec.true_error) {
          out << "  " << *rec.true_error;
        }
        out << "  " << rec.gap << "  " << rec.step_norm << '\n';
      }
    }
    out << "stop: " << to_string(result.stop_reason) << " after "
        << result.iterations << " iterations\n";
    out << "final gap: " << result.final_gap << '\n';
    if (result.final_true_error) {
      out << "final true error: " << *result.final_true_error << '\n';
    }
    if (instance.metadata.friedrichs_cosine) {
      out << "friedrichs cosine: " << *instance.metadata.friedrichs_cosine
          << '\n';
    }
  }
  return result.stop_reason == StopReason::kDegenerateCircumcenter ? 2 : 0;
}

int command_angles(const InstanceOptions& inst_opts, const std::string& format,
                   std::ostream& out) {
  const ProblemInstance instance = build_instance(inst_opts);
  if (instance.sets.size() != 2) {
    throw InvalidConfigError("angles needs a two-set instance");
  }
  const auto* u = dynamic_cast<const LinearSubspace*>(instance.sets[0].get());
  const auto* v = dynamic_cast<const LinearSubspace*>(instance.sets[1].get());
  FriedrichsAngle angle;
  if (u && v) {
    angle = friedrichs_cosine(*u, *v);
  } else {
    const auto* a = dynamic_cast<const AffineSubspace*>(instance.sets[0].get());
    const auto* b = dynamic_cast<const AffineSubspace*>(instance.sets[1].get());
    LinearSubspace lu = u ? *u : (a ? a->direction() : throw InvalidConfigError(
        "angles needs (affine) subspaces"));
    LinearSubspace lv = v ? *v : (b ? b->direction() : throw InvalidConfigError(
        "angles needs (affine) subspaces"));
    angle = friedrichs_cosine(lu, lv);
  }

  if (format == "json") {
    out << "{\"cosine\":" << angle.cosine << ",\"angle\":" << angle.angle()
        << ",\"intersection_dim\":" << angle.intersection_dim
        << ",\"principal_cosines\":[";
    for (std::size_t i = 0; i < angle.principal_cosines.size(); ++i) {
      if (i > 0) out << ',';
      out << angle.principal_cosines[i];
    }
    out << "]}\n";
  } else if (format == "csv") {
    out << "cosine,angle,intersection_dim\n";
    out << angle.cosine << ',' << angle.angle() << ','
        << angle.intersection_dim << '\n';
  } else {
    out << "friedrichs cosine: " << angle.cosine << '\n';
    out << "friedrichs angle (rad): " << angle.angle() << '\n';
    out << "intersection dimension: " << angle.intersection_dim << '\n';
    out << "principal cosines:";
    for (double c : angle.principal_cosines) {
      out << ' ' << c;
    }
    out << '\n';
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Circumcentered Douglas-Rachford and companion projection "
               "methods for feasibility and best-approximation problems"};
  app.require_subcommand(1);

  // --- solve ---------------------------------------------------------------
  auto* solve_cmd = app.add_subcommand("solve", "run one method on one instance");
  InstanceOptions solve_inst;
  add_instance_flags(solve_cmd, solve_inst);
  std::string solve_method = "cdrm";
  std::string solve_criterion = "gap";
  double solve_tol = 1e-6;
  int solve_max_iter = 100000;
  std::string solve_prestep = "auto";
  std::uint64_t solve_start_seed = 1;
  std::string solve_x0;
  bool solve_trace = false;
  std::string solve_format = "text";
  std::string solve_out_path;
  solve_cmd->add_option("--method", solve_method, "map|drm|cdrm|cimmino|c-cimmino|c-map|cdrm-multiset");
  solve_cmd->add_option("--criterion", solve_criterion, "true-error|gap|fixed-point");
  solve_cmd->add_option("--tol", solve_tol, "stop tolerance");
  solve_cmd->add_option("--max-iter", solve_max_iter, "iteration budget");
  solve_cmd->add_option("--prestep", solve_prestep,
                        "auto|none|project-u|project-v|project-sum");
  solve_cmd->add_option("--start-seed", solve_start_seed, "seed for the random start");
  solve_cmd->add_option("--x0", solve_x0, "explicit start, comma-separated");
  solve_cmd->add_flag("--trace", solve_trace, "print per-iteration criteria");
  solve_cmd->add_option("--format", solve_format, "text|json");
  solve_cmd->add_option("--out", solve_out_path, "write output to a file");

  // --- bench ---------------------------------------------------------------
  auto* bench_cmd = app.add_subcommand("bench", "run a full experiment");
  ExperimentConfig config;
  std::string bench_methods = "map,drm,cdrm";
  std::string bench_criterion = "gap";
  std::string bench_generator = "random";
  std::string bench_gallery;
  std::vector<std::string> bench_params;
  std::string bench_angles;
  std::string bench_out_path;
  std::string bench_format = "csv";
  bench_cmd->add_option("--n", config.n, "ambient dimension");
  bench_cmd->add_option("--instances", config.instance_count, "number of instances");
  bench_cmd->add_option("--starts", config.starts_per_instance,
                        "random starts per instance");
  bench_cmd->add_option("--methods", bench_methods,
                        "comma-separated methods, each optionally method:prestep");
  bench_cmd->add_option("--criterion", bench_criterion, "true-error|gap|fixed-point");
  bench_cmd->add_option("--tol", config.criterion.tolerance, "stop tolerance");
  bench_cmd->add_option("--max-iter", config.max_iter, "iteration budget");
  bench_cmd->add_option("--seed", config.seed, "base seed; instance i uses seed+i");
  bench_cmd->add_option("--generator", bench_generator, "random|canonical|gallery");
  bench_cmd->add_option("--angles", bench_angles,
                        "canonical generator: comma-separated principal angles");
  bench_cmd->add_option("--dim-int", config.canonical_dim_int,
                        "canonical generator: intersection dimension");
  bench_cmd->add_option("--gallery", bench_gallery, "gallery generator: instance name");
  bench_cmd->add_option("--param", bench_params, "gallery parameter key=value");
  bench_cmd->add_option("--threads", config.threads,
                        "worker threads (0 = CIRCUMFEAS_THREADS or hardware)");
  bench_cmd->add_option("--out", bench_out_path, "records file");
  bench_cmd->add_option("--format", bench_format, "csv|json");

  // --- profile ---------------------------------------------------------------
  auto* profile_cmd =
      app.add_subcommand("profile", "performance profile from a records file");
  std::string profile_in;
  std::string profile_out_path;
  std::string profile_format = "csv";
  std::string profile_cost = "iterations";
  profile_cmd->add_option("--in", profile_in, "records file (csv or json)")
      ->required();
  profile_cmd->add_option("--out", profile_out_path, "profile file");
  profile_cmd->add_option("--format", profile_format, "csv|json");
  profile_cmd->add_option("--cost", profile_cost, "iterations|wall-time");

  // --- gallery ---------------------------------------------------------------
  auto* gallery_cmd =
      app.add_subcommand("gallery", "list or emit the example instances");
  bool gallery_list = false;
  std::string gallery_name_opt;
  std::vector<std::string> gallery_params_opt;
  std::string gallery_out_path;
  std::string gallery_format = "json";
  gallery_cmd->add_flag("--list", gallery_list, "list instance names");
  gallery_cmd->add_option("--name", gallery_name_opt, "instance to emit as JSON");
  gallery_cmd->add_option("--param", gallery_params_opt, "parameter key=value");
  gallery_cmd->add_option("--out", gallery_out_path, "output file");
  gallery_cmd->add_option("--format", gallery_format, "json (instances) or text|json (list)");

  // --- angles ---------------------------------------------------------------
  auto* angles_cmd =
      app.add_subcommand("angles", "Friedrichs angle data for an instance");
  InstanceOptions angles_inst;
  add_instance_flags(angles_cmd, angles_inst);
  std::string angles_format = "text";
  std::string angles_out_path;
  angles_cmd->add_option("--format", angles_format, "text|csv|json");
  angles_cmd->add_option("--out", angles_out_path, "output file");

  std::vector<const char*> argv;
  argv.push_back("circumfeas");
  for (const std::string& a : args) {
    argv.push_back(a.c_str());
  }

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve_cmd->parsed()) {
      std::ofstream file;
      std::ostream& sink = open_output(file, solve_out_path, out);
      return command_solve(solve_inst, solve_method, solve_criterion, solve_tol,
                           solve_max_iter, solve_prestep, solve_start_seed,
                           solve_x0, solve_trace, solve_format, sink);
    }
    if (bench_cmd->parsed()) {
      config.methods = parse_methods(bench_methods);
      config.criterion.kind = criterion_from_string(bench_criterion);
      if (bench_generator == "random") {
        config.generator = GeneratorKind::kRandomPair;
      } else if (bench_generator == "canonical") {
        config.generator = GeneratorKind::kCanonicalPair;
        config.canonical_angles = parse_reals(bench_angles);
      } else if (bench_generator == "gallery") {
        config.generator = GeneratorKind::kGallery;
        config.gallery_name = bench_gallery;
        config.gallery_params = parse_params(bench_params);
      } else {
        throw InvalidConfigError("unknown generator '" + bench_generator + "'");
      }
      const std::vector<RunRecord> records = run_experiment(config);
      std::ofstream file;
      std::ostream& sink = open_output(file, bench_out_path, out);
      if (bench_format == "json") {
        write_records_json(sink, records);
      } else if (bench_format == "csv") {
        write_records_csv(sink, records);
      } else {
        throw InvalidConfigError("unknown format '" + bench_format + "'");
      }
      return 0;
    }
    if (profile_cmd->parsed()) {
      std::ifstream in(profile_in);
      if (!in) {
        throw InvalidConfigError("cannot open records file '" + profile_in + "'");
      }
      CostField cost_field = CostField::kIterations;
      if (profile_cost == "wall-time") {
        cost_field = CostField::kWallTime;
      } else if (profile_cost != "iterations") {
        throw InvalidConfigError("unknown cost field '" + profile_cost + "'");
      }
      const PerformanceProfile profile =
          performance_profile(read_records(in), cost_field);
      std::ofstream file;
      std::ostream& sink = open_output(file, profile_out_path, out);
      if (profile_format == "json") {
        write_profile_json(sink, profile);
      } else if (profile_format == "csv") {
        write_profile_csv(sink, profile);
      } else {
        throw InvalidConfigError("unknown format '" + profile_format + "'");
      }
      return 0;
    }
    if (gallery_cmd->parsed()) {
      std::ofstream file;
      std::ostream& sink = open_output(file, gallery_out_path, out);
      if (!gallery_name_opt.empty()) {
        sink << to_json(gallery(gallery_name_opt, parse_params(gallery_params_opt)))
             << '\n';
        return 0;
      }
      // default to the listing
      if (gallery_format == "json") {
        sink << "[";
        const auto names = gallery_names();
        for (std::size_t i = 0; i < names.size(); ++i) {
          if (i > 0) sink << ',';
          sink << '"' << names[i] << '"';
        }
        sink << "]\n";
      } else {
        for (const std::string& name : gallery_names()) {
          sink << name << '\n';
        }
      }
      return 0;
    }
    if (angles_cmd->parsed()) {
      std::ofstream file;
      std::ostream& sink = open_output(file, angles_out_path, out);
      return command_angles(angles_inst, angles_format, sink);
    }
  } catch (const InvalidConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const InvalidInputError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "runtime error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace circumfeas
