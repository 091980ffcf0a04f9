#include "circumfeas/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "circumfeas/analysis.hpp"
#include "circumfeas/rng.hpp"

namespace circumfeas {

Prestep default_prestep(MethodKind method) {
  switch (method) {
    case MethodKind::kDrm:
    case MethodKind::kCdrm:
      return Prestep::kProjectV;
    default:
      return Prestep::kNone;
  }
}

namespace {

int resolve_threads(int requested) {
  if (requested > 0) {
    return requested;
  }
  if (const char* env = std::getenv("CIRCUMFEAS_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) {
      return parsed;
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

ProblemInstance generate_instance(const ExperimentConfig& config, int index) {
  const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(index);
  switch (config.generator) {
    case GeneratorKind::kRandomPair: {
      // Flagship distribution: subspace dimensions uniform in [n/8, n/2],
      // intersection dimension uniform in [1, min/4].
      Rng dims_rng(splitmix64(seed ^ 0xD1355EEDull));
      const auto lo = std::max<Eigen::Index>(1, config.n / 8);
      const auto hi = std::max<Eigen::Index>(lo, config.n / 2);
      const auto dim_u = static_cast<Eigen::Index>(dims_rng.uniform_int(lo, hi));
      const auto dim_v = static_cast<Eigen::Index>(dims_rng.uniform_int(lo, hi));
      const auto max_int =
          std::max<Eigen::Index>(1, std::min(dim_u, dim_v) / 4);
      const auto dim_int =
          static_cast<Eigen::Index>(dims_rng.uniform_int(1, max_int));
      return random_pair(config.n, dim_u, dim_v, dim_int, seed);
    }
    case GeneratorKind::kCanonicalPair:
      return canonical_pair(config.n, config.canonical_angles,
                            config.canonical_dim_int, seed);
    case GeneratorKind::kGallery:
      return gallery(config.gallery_name, config.gallery_params);
  }
  throw InvalidConfigError("unknown generator");
}

Vector draw_start(const ExperimentConfig& config, int instance_id,
                  int start_id, Eigen::Index n) {
  const std::uint64_t stream =
      splitmix64(splitmix64(config.seed + static_cast<std::uint64_t>(instance_id)) ^
                 splitmix64(static_cast<std::uint64_t>(start_id) + 1));
  Rng rng(stream);
  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i) = rng.normal();
  }
  return x;
}

}  // namespace

std::vector<RunRecord> run_experiment(const ExperimentConfig& config) {
  if (config.instance_count < 1) {
    throw InvalidConfigError("experiment needs at least one instance");
  }
  if (config.starts_per_instance < 1) {
    throw InvalidConfigError("experiment needs at least one start per instance");
  }
  if (config.methods.empty()) {
    throw InvalidConfigError("experiment needs at least one method");
  }

  struct InstanceData {
    ProblemInstance instance;
    std::optional<AffineSubspace> intersection;
  };

  std::vector<InstanceData> instances;
  instances.reserve(static_cast<std::size_t>(config.instance_count));
  for (int i = 0; i < config.instance_count; ++i) {
    InstanceData data{generate_instance(config, i), std::nullopt};
    const bool affine = std::all_of(
        data.instance.sets.begin(), data.instance.sets.end(),
        [](const SetPtr& s) { return s->is_affine(); });
    if (affine) {
      data.intersection = affine_intersection(data.instance.sets);
    }
    instances.push_back(std::move(data));
  }

  const int starts = config.starts_per_instance;
  const auto method_count = static_cast<int>(config.methods.size());
  const std::size_t total = static_cast<std::size_t>(config.instance_count) *
                            static_cast<std::size_t>(starts) *
                            static_cast<std::size_t>(method_count);
  std::vector<RunRecord> records(total);

  std::atomic<std::size_t> cursor{0};
  const auto worker = [&]() {
    for (;;) {
      const std::size_t task = cursor.fetch_add(1);
      if (task >= total) {
        return;
      }
      const int method_index = static_cast<int>(task % method_count);
      const int start_id = static_cast<int>((task / method_count) % starts);
      const int instance_id = static_cast<int>(task / method_count / starts);

      const InstanceData& data = instances[static_cast<std::size_t>(instance_id)];
      const ProblemInstance& instance = data.instance;
      const MethodSpec& spec = config.methods[static_cast<std::size_t>(method_index)];

      RunRecord& record = records[task];
      record.instance_id = instance_id;
      record.start_id = start_id;
      record.method = spec.method;
      record.prestep = spec.prestep;
      record.n = instance.metadata.ambient_dim;
      if (instance.metadata.dims.size() >= 2 &&
          instance.metadata.dims[0] >= 0 && instance.metadata.dims[1] >= 0) {
        record.dim_u = instance.metadata.dims[0];
        record.dim_v = instance.metadata.dims[1];
      }
      if (instance.metadata.intersection_dim) {
        record.dim_int = *instance.metadata.intersection_dim;
      }
      if (instance.metadata.friedrichs_cosine) {
        record.c_f = *instance.metadata.friedrichs_cosine;
      }
      record.criterion = config.criterion.kind;
      record.tol = config.criterion.tolerance;

      const Vector x0 = draw_start(config, instance_id, start_id,
                                   instance.metadata.ambient_dim);
      SolveOptions options;
      options.criterion = config.criterion;
      options.max_iter = config.max_iter;
      options.prestep = spec.prestep;
      options.trace = TraceMode::kNone;
      if (data.intersection) {
        options.reference = data.intersection->project(x0);
      }

      const auto begin = std::chrono::steady_clock::now();
      try {
        const RunResult result = solve(spec.method, instance.sets, x0, options);
        record.iterations = result.iterations;
        record.stop_reason = result.stop_reason;
        record.final_gap = result.final_gap;
        if (result.final_true_error) {
          record.final_true_error = *result.final_true_error;
        }
      } catch (const std::exception&) {
        // Keep the record; an aborted run counts as unsolved.
        record.stop_reason = StopReason::kDegenerateCircumcenter;
      }
      const auto end = std::chrono::steady_clock::now();
      record.wall_time_us =
          std::chrono::duration_cast<std::chrono::microseconds>(end - begin)
              .count();
    }
  };

  const int thread_count =
      std::min<int>(resolve_threads(config.threads),
                    static_cast<int>(std::max<std::size_t>(total, 1)));
  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(thread_count));
    for (int t = 0; t < thread_count; ++t) {
      pool.emplace_back(worker);
    }
    for (std::thread& t : pool) {
      t.join();
    }
  }
  return records;
}

double PerformanceProfile::rho(std::size_t method_index, double tau) const {
  double value = 0.0;
  for (const Breakpoint& bp : breakpoints.at(method_index)) {
    if (bp.tau <= tau) {
      value = bp.fraction;
    } else {
      break;
    }
  }
  return value;
}

PerformanceProfile performance_profile(const std::vector<RunRecord>& records,
                                       CostField cost_field) {
  if (records.empty()) {
    throw InvalidInputError("performance_profile: no records");
  }
  const auto cost_of = [cost_field](const RunRecord& r) {
    return cost_field == CostField::kIterations
               ? static_cast<double>(r.iterations)
               : static_cast<double>(r.wall_time_us);
  };

  std::vector<std::string> methods;
  for (const RunRecord& r : records) {
    const std::string name = to_string(r.method);
    if (std::find(methods.begin(), methods.end(), name) == methods.end()) {
      methods.push_back(name);
    }
  }

  using ProblemKey = std::pair<int, int>;
  std::map<ProblemKey, std::map<std::string, const RunRecord*>> problems;
  for (const RunRecord& r : records) {
    problems[{r.instance_id, r.start_id}][to_string(r.method)] = &r;
  }
  const auto total = static_cast<double>(problems.size());

  // Cost ratios per problem relative to the best solving method.
  std::map<std::string, std::vector<double>> solved_ratios;
  double max_finite_ratio = 1.0;
  bool any_above_one = false;
  for (const auto& [key, by_method] : problems) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [name, record] : by_method) {
      if (record->stop_reason == StopReason::kConverged) {
        best = std::min(best, cost_of(*record));
      }
    }
    if (!std::isfinite(best)) {
      continue;  // nobody solved this problem
    }
    best = std::max(best, 1.0);  // guard zero-cost runs
    for (const auto& [name, record] : by_method) {
      if (record->stop_reason != StopReason::kConverged) {
        continue;
      }
      const double ratio = std::max(cost_of(*record), 1.0) / best;
      solved_ratios[name].push_back(ratio);
      max_finite_ratio = std::max(max_finite_ratio, ratio);
      any_above_one = any_above_one || ratio > 1.0;
    }
  }

  PerformanceProfile profile;
  profile.methods = methods;
  profile.failure_ratio_cap = any_above_one ? 2.0 * max_finite_ratio : 10.0;

  for (const std::string& name : methods) {
    std::vector<PerformanceProfile::Breakpoint> points;
    auto& ratios = solved_ratios[name];
    std::sort(ratios.begin(), ratios.end());
    std::size_t index = 0;
    while (index < ratios.size()) {
      const double tau = ratios[index];
      while (index < ratios.size() && ratios[index] == tau) {
        ++index;
      }
      points.push_back({tau, static_cast<double>(index) / total});
    }
    const double solve_fraction = static_cast<double>(ratios.size()) / total;
    if (points.empty() || points.back().tau < profile.failure_ratio_cap) {
      points.push_back({profile.failure_ratio_cap, solve_fraction});
    }
    profile.breakpoints.push_back(std::move(points));
  }
  return profile;
}

// --- I/O --------------------------------------------------------------------

const char* const kRecordCsvHeader =
    "instance_id,start_id,method,prestep,n,dim_u,dim_v,dim_int,c_f,criterion,"
    "tol,iterations,final_true_error,final_gap,stop_reason,wall_time_us";

namespace {

std::string real17(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace

void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << kRecordCsvHeader << '\n';
  for (const RunRecord& r : records) {
    out << r.instance_id << ',' << r.start_id << ',' << to_string(r.method)
        << ',' << to_string(r.prestep) << ',' << r.n << ',' << r.dim_u << ','
        << r.dim_v << ',' << r.dim_int << ',' << real17(r.c_f) << ','
        << to_string(r.criterion) << ',' << real17(r.tol) << ','
        << r.iterations << ',' << real17(r.final_true_error) << ','
        << real17(r.final_gap) << ',' << to_string(r.stop_reason) << ','
        << r.wall_time_us << '\n';
  }
}

void write_records_json(std::ostream& out, const std::vector<RunRecord>& records) {
  out << "[";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const RunRecord& r = records[i];
    if (i > 0) out << ",";
    out << "\n{\"instance_id\":" << r.instance_id
        << ",\"start_id\":" << r.start_id
        << ",\"method\":\"" << to_string(r.method) << '"'
        << ",\"prestep\":\"" << to_string(r.prestep) << '"'
        << ",\"n\":" << r.n << ",\"dim_u\":" << r.dim_u
        << ",\"dim_v\":" << r.dim_v << ",\"dim_int\":" << r.dim_int
        << ",\"c_f\":" << (std::isfinite(r.c_f) ? real17(r.c_f) : "null")
        << ",\"criterion\":\"" << to_string(r.criterion) << '"'
        << ",\"tol\":" << real17(r.tol)
        << ",\"iterations\":" << r.iterations
        << ",\"final_true_error\":"
        << (std::isfinite(r.final_true_error) ? real17(r.final_true_error)
                                              : "null")
        << ",\"final_gap\":"
        << (std::isfinite(r.final_gap) ? real17(r.final_gap) : "null")
        << ",\"stop_reason\":\"" << to_string(r.stop_reason) << '"'
        << ",\"wall_time_us\":" << r.wall_time_us << '}';
  }
  out << "\n]\n";
}

namespace {

RunRecord record_from_fields(const std::vector<std::string>& fields) {
  if (fields.size() != 16) {
    throw InvalidInputError("records CSV: expected 16 fields, got " +
                            std::to_string(fields.size()));
  }
  RunRecord r;
  r.instance_id = std::stoi(fields[0]);
  r.start_id = std::stoi(fields[1]);
  r.method = method_from_string(fields[2]);
  r.prestep = prestep_from_string(fields[3]);
  r.n = std::stol(fields[4]);
  r.dim_u = std::stol(fields[5]);
  r.dim_v = std::stol(fields[6]);
  r.dim_int = std::stol(fields[7]);
  r.c_f = std::strtod(fields[8].c_str(), nullptr);
  r.criterion = criterion_from_string(fields[9]);
  r.tol = std::strtod(fields[10].c_str(), nullptr);
  r.iterations = std::stoi(fields[11]);
  r.final_true_error = std::strtod(fields[12].c_str(), nullptr);
  r.final_gap = std::strtod(fields[13].c_str(), nullptr);
  if (fields[14] == "converged") {
    r.stop_reason = StopReason::kConverged;
  } else if (fields[14] == "max-iter") {
    r.stop_reason = StopReason::kMaxIter;
  } else if (fields[14] == "degenerate-circumcenter") {
    r.stop_reason = StopReason::kDegenerateCircumcenter;
  } else {
    throw InvalidInputError("records CSV: unknown stop reason '" + fields[14] + "'");
  }
  r.wall_time_us = std::stoll(fields[15]);
  return r;
}

}  // namespace

std::vector<RunRecord> read_records(std::istream& in) {
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  const auto first = content.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) {
    throw InvalidInputError("records input is empty");
  }

  std::vector<RunRecord> records;
  if (content[first] == '[') {
    const nlohmann::json j = nlohmann::json::parse(content);
    for (const auto& item : j) {
      RunRecord r;
      r.instance_id = item.at("instance_id").get<int>();
      r.start_id = item.at("start_id").get<int>();
      r.method = method_from_string(item.at("method").get<std::string>());
      r.prestep = prestep_from_string(item.at("prestep").get<std::string>());
      r.n = item.at("n").get<Eigen::Index>();
      r.dim_u = item.at("dim_u").get<Eigen::Index>();
      r.dim_v = item.at("dim_v").get<Eigen::Index>();
      r.dim_int = item.at("dim_int").get<Eigen::Index>();
      r.c_f = item.at("c_f").is_null()
                  ? std::numeric_limits<double>::quiet_NaN()
                  : item.at("c_f").get<double>();
      r.criterion = criterion_from_string(item.at("criterion").get<std::string>());
      r.tol = item.at("tol").get<double>();
      r.iterations = item.at("iterations").get<int>();
      r.final_true_error =
          item.at("final_true_error").is_null()
              ? std::numeric_limits<double>::quiet_NaN()
              : item.at("final_true_error").get<double>();
      r.final_gap = item.at("final_gap").is_null()
                        ? std::numeric_limits<double>::quiet_NaN()
                        : item.at("final_gap").get<double>();
      const std::string reason = item.at("stop_reason").get<std::string>();
      if (reason == "converged") {
        r.stop_reason = StopReason::kConverged;
      } else if (reason == "max-iter") {
        r.stop_reason = StopReason::kMaxIter;
      } else {
        r.stop_reason = StopReason::kDegenerateCircumcenter;
      }
      r.wall_time_us = item.at("wall_time_us").get<std::int64_t>();
      records.push_back(r);
    }
    return records;
  }

  std::istringstream lines(content);
  std::string line;
  bool saw_header = false;
  while (std::getline(lines, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    if (!saw_header) {
      if (line != kRecordCsvHeader) {
        throw InvalidInputError("records CSV: unexpected header");
      }
      saw_header = true;
      continue;
    }
    std::vector<std::string> fields;
    std::string field;
    std::istringstream fs(line);
    while (std::getline(fs, field, ',')) {
      fields.push_back(field);
    }
    records.push_back(record_from_fields(fields));
  }
  if (!saw_header) {
    throw InvalidInputError("records CSV: missing header");
  }
  return records;
}

void write_profile_csv(std::ostream& out, const PerformanceProfile& profile) {
  out << "tau";
  for (const std::string& name : profile.methods) {
    out << ",rho_" << name;
  }
  out << '\n';

  std::set<double> taus;
  for (const auto& points : profile.breakpoints) {
    for (const auto& bp : points) {
      taus.insert(bp.tau);
    }
  }
  for (double tau : taus) {
    out << real17(tau);
    for (std::size_t m = 0; m < profile.methods.size(); ++m) {
      out << ',' << real17(profile.rho(m, tau));
    }
    out << '\n';
  }
}

void write_profile_json(std::ostream& out, const PerformanceProfile& profile) {
  out << "{\"failure_ratio_cap\":" << real17(profile.failure_ratio_cap)
      << ",\"methods\":[";
  for (std::size_t m = 0; m < profile.methods.size(); ++m) {
    if (m > 0) out << ',';
    out << "\n{\"method\":\"" << profile.methods[m] << "\",\"breakpoints\":[";
    const auto& points = profile.breakpoints[m];
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (i > 0) out << ',';
      out << '[' << real17(points[i].tau) << ',' << real17(points[i].fraction)
          << ']';
    }
    out << "]}";
  }
  out << "\n]}\n";
}

}  // namespace circumfeas
