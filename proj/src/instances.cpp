#include "circumfeas/instances.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "circumfeas/analysis.hpp"
#include "circumfeas/rng.hpp"

namespace circumfeas {

std::string to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kAffinePair: return "affine_pair";
    case InstanceKind::kAffineMulti: return "affine_multi";
    case InstanceKind::kNonAffine: return "nonaffine";
  }
  return "unknown";
}

InstanceKind instance_kind_from_string(const std::string& name) {
  if (name == "affine_pair") return InstanceKind::kAffinePair;
  if (name == "affine_multi") return InstanceKind::kAffineMulti;
  if (name == "nonaffine") return InstanceKind::kNonAffine;
  throw InvalidConfigError("unknown instance kind '" + name + "'");
}

namespace {

Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      m(i, j) = rng.normal();
    }
  }
  return m;
}

/// Random orthogonal matrix from the QR factor of a Gaussian draw.
Matrix random_orthogonal(Rng& rng, Eigen::Index n) {
  return orthonormalize(random_matrix(rng, n, n)).columns();
}

LinearSubspace make_line(double angle) {
  Vector direction(2);
  direction << std::cos(angle), std::sin(angle);
  return LinearSubspace(orthonormalize(Matrix(direction)));
}

}  // namespace

ProblemInstance random_pair(Eigen::Index n, Eigen::Index dim_u,
                            Eigen::Index dim_v, Eigen::Index dim_int,
                            std::uint64_t seed) {
  if (n < 1 || dim_u < 1 || dim_v < 1 || dim_int < 1) {
    throw InvalidConfigError("random_pair: dimensions must be positive");
  }
  if (dim_int > std::min(dim_u, dim_v)) {
    throw InvalidConfigError(
        "random_pair: intersection dimension exceeds a subspace dimension");
  }
  if (dim_u + dim_v - dim_int > n) {
    throw InvalidConfigError(
        "random_pair: dim_u + dim_v - dim_int exceeds the ambient dimension");
  }

  Rng rng(splitmix64(seed));
  for (int attempt = 0; attempt < 5; ++attempt) {
    const Matrix shared = orthonormalize(random_matrix(rng, n, dim_int)).columns();
    if (shared.cols() != dim_int) {
      continue;
    }
    Matrix u_cols(n, dim_u);
    u_cols << shared, random_matrix(rng, n, dim_u - dim_int);
    Matrix v_cols(n, dim_v);
    v_cols << shared, random_matrix(rng, n, dim_v - dim_int);

    const OrthonormalBasis u_basis = orthonormalize(u_cols);
    const OrthonormalBasis v_basis = orthonormalize(v_cols);
    if (u_basis.dim() != dim_u || v_basis.dim() != dim_v) {
      continue;
    }
    LinearSubspace u(u_basis);
    LinearSubspace v(v_basis);
    const FriedrichsAngle angle = friedrichs_cosine(u, v);
    if (angle.intersection_dim != dim_int) {
      continue;
    }

    ProblemInstance instance;
    instance.sets = {SetPtr(std::make_shared<LinearSubspace>(std::move(u))),
                     SetPtr(std::make_shared<LinearSubspace>(std::move(v)))};
    instance.kind = InstanceKind::kAffinePair;
    instance.metadata.name = "random_pair";
    instance.metadata.ambient_dim = n;
    instance.metadata.dims = {dim_u, dim_v};
    instance.metadata.intersection_dim = dim_int;
    instance.metadata.seed = seed;
    instance.metadata.friedrichs_cosine = angle.cosine;
    return instance;
  }
  throw GenerationFailureError(
      "random_pair: could not realize the requested intersection dimension "
      "after 5 attempts (seed " + std::to_string(seed) + ")");
}

ProblemInstance canonical_pair(Eigen::Index n,
                               const std::vector<double>& principal_angles,
                               Eigen::Index dim_int, std::uint64_t seed) {
  if (n < 1 || dim_int < 0) {
    throw InvalidConfigError("canonical_pair: bad dimensions");
  }
  if (principal_angles.empty()) {
    throw InvalidConfigError("canonical_pair: need at least one angle");
  }
  const auto pairs = static_cast<Eigen::Index>(principal_angles.size());
  if (dim_int + 2 * pairs > n) {
    throw InvalidConfigError(
        "canonical_pair: dim_int + 2 * |angles| exceeds the ambient dimension");
  }
  double min_angle = std::numeric_limits<double>::infinity();
  for (double theta : principal_angles) {
    if (!(theta > 0.0) || theta > std::numbers::pi / 2 + 1e-15) {
      throw InvalidConfigError("canonical_pair: angles must lie in (0, pi/2]");
    }
    if (std::cos(theta) >= 1.0 - tol::kIntersection) {
      throw InvalidConfigError(
          "canonical_pair: angle below the intersection resolution");
    }
    min_angle = std::min(min_angle, theta);
  }

  Matrix u_cols = Matrix::Zero(n, dim_int + pairs);
  Matrix v_cols = Matrix::Zero(n, dim_int + pairs);
  for (Eigen::Index i = 0; i < dim_int; ++i) {
    u_cols(i, i) = 1.0;
    v_cols(i, i) = 1.0;
  }
  for (Eigen::Index i = 0; i < pairs; ++i) {
    const double theta = principal_angles[static_cast<std::size_t>(i)];
    const Eigen::Index first = dim_int + 2 * i;
    u_cols(first, dim_int + i) = 1.0;
    v_cols(first, dim_int + i) = std::cos(theta);
    v_cols(first + 1, dim_int + i) = std::sin(theta);
  }

  Rng rng(splitmix64(seed ^ 0xC0FFEE11D00Dull));
  const Matrix rotation = random_orthogonal(rng, n);

  ProblemInstance instance;
  instance.sets = {
      SetPtr(std::make_shared<LinearSubspace>(OrthonormalBasis(rotation * u_cols, n))),
      SetPtr(std::make_shared<LinearSubspace>(OrthonormalBasis(rotation * v_cols, n)))};
  const FriedrichsAngle realized = friedrichs_cosine(
      dynamic_cast<const LinearSubspace&>(*instance.sets[0]),
      dynamic_cast<const LinearSubspace&>(*instance.sets[1]));
  if (realized.intersection_dim != dim_int ||
      std::abs(realized.cosine - std::cos(min_angle)) > 1e-10) {
    throw GenerationFailureError(
        "canonical_pair: requested angles are below the intersection "
        "resolution");
  }
  instance.kind = InstanceKind::kAffinePair;
  instance.metadata.name = "canonical_pair";
  instance.metadata.ambient_dim = n;
  instance.metadata.dims = {dim_int + pairs, dim_int + pairs};
  instance.metadata.intersection_dim = dim_int;
  instance.metadata.seed = seed;
  instance.metadata.friedrichs_cosine = std::cos(min_angle);
  return instance;
}

namespace {

Vector vec2(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

void check_params(const std::map<std::string, double>& params,
                  std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : params) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
          return key == a;
        }) == allowed.end()) {
      throw InvalidConfigError("gallery: unknown parameter '" + key + "'");
    }
  }
}

double param_or(const std::map<std::string, double>& params,
                const std::string& key, double fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

}  // namespace

std::vector<std::string> gallery_names() {
  return {"two_balls",   "ball_line_tangent", "ball_line_crossing",
          "circle_line", "three_lines",       "two_lines_3d"};
}

ProblemInstance gallery(const std::string& name,
                        const std::map<std::string, double>& params) {
  ProblemInstance instance;
  instance.metadata.name = name;
  instance.metadata.seed = 0;

  if (name == "two_balls") {
    check_params(params, {"c1x", "c1y", "r1", "c2x", "c2y", "r2"});
    const double r1 = param_or(params, "r1", 2.0);
    const double r2 = param_or(params, "r2", 2.0);
    instance.sets = {
        SetPtr(std::make_shared<Ball>(
            vec2(param_or(params, "c1x", 0.0), param_or(params, "c1y", 0.0)), r1)),
        SetPtr(std::make_shared<Ball>(
            vec2(param_or(params, "c2x", 3.0), param_or(params, "c2y", 0.0)), r2))};
    instance.kind = InstanceKind::kNonAffine;
    instance.metadata.ambient_dim = 2;
    instance.metadata.dims = {-1, -1};
  } else if (name == "ball_line_tangent") {
    check_params(params, {"radius"});
    const double radius = param_or(params, "radius", 1.0);
    if (radius <= 0.0) {
      throw InvalidConfigError("gallery: radius must be positive");
    }
    // Ball tangent to the x-axis from above; the touching point is the
    // unique feasible point.
    instance.sets = {SetPtr(std::make_shared<Ball>(vec2(0.0, radius), radius)),
                     SetPtr(std::make_shared<LinearSubspace>(
                         orthonormalize(Matrix(vec2(1.0, 0.0)))))};
    instance.kind = InstanceKind::kNonAffine;
    instance.metadata.ambient_dim = 2;
    instance.metadata.dims = {-1, 1};
    instance.reference_solution = vec2(0.0, 0.0);
  } else if (name == "ball_line_crossing") {
    check_params(params, {"radius", "height"});
    const double radius = param_or(params, "radius", 2.0);
    const double height = param_or(params, "height", 1.0);
    if (radius <= 0.0 || std::abs(height) >= radius) {
      throw InvalidConfigError(
          "gallery: crossing needs 0 < |height| < radius");
    }
    instance.sets = {SetPtr(std::make_shared<Ball>(vec2(0.0, height), radius)),
                     SetPtr(std::make_shared<LinearSubspace>(
                         orthonormalize(Matrix(vec2(1.0, 0.0)))))};
    instance.kind = InstanceKind::kNonAffine;
    instance.metadata.ambient_dim = 2;
    instance.metadata.dims = {-1, 1};
  } else if (name == "circle_line") {
    check_params(params, {"radius", "height"});
    const double radius = param_or(params, "radius", 1.0);
    const double height = param_or(params, "height", 0.0);
    if (radius <= 0.0 || std::abs(height) > radius) {
      throw InvalidConfigError("gallery: line must touch the circle");
    }
    SetPtr line;
    if (height == 0.0) {
      line = std::make_shared<LinearSubspace>(
          orthonormalize(Matrix(vec2(1.0, 0.0))));
    } else {
      line = std::make_shared<AffineSubspace>(
          orthonormalize(Matrix(vec2(1.0, 0.0))), vec2(0.0, height));
    }
    instance.sets = {SetPtr(std::make_shared<Sphere>(vec2(0.0, 0.0), radius)), line};
    instance.kind = InstanceKind::kNonAffine;
    instance.metadata.ambient_dim = 2;
    instance.metadata.dims = {-1, 1};
  } else if (name == "three_lines") {
    check_params(params, {});
    const double step = std::numbers::pi / 3.0;
    instance.sets = {SetPtr(std::make_shared<LinearSubspace>(make_line(0.0))),
                     SetPtr(std::make_shared<LinearSubspace>(make_line(step))),
                     SetPtr(std::make_shared<LinearSubspace>(make_line(2.0 * step)))};
    instance.kind = InstanceKind::kAffineMulti;
    instance.metadata.ambient_dim = 2;
    instance.metadata.dims = {1, 1, 1};
    instance.reference_solution = vec2(0.0, 0.0);
  } else if (name == "two_lines_3d") {
    check_params(params, {"angle"});
    const double angle = param_or(params, "angle", std::numbers::pi / 3.0);
    if (!(angle > 0.0) || angle > std::numbers::pi / 2 + 1e-15) {
      throw InvalidConfigError("gallery: angle must lie in (0, pi/2]");
    }
    Vector d1 = Vector::Zero(3);
    d1(0) = 1.0;
    Vector d2 = Vector::Zero(3);
    d2(0) = std::cos(angle);
    d2(1) = std::sin(angle);
    instance.sets = {
        SetPtr(std::make_shared<LinearSubspace>(orthonormalize(Matrix(d1)))),
        SetPtr(std::make_shared<LinearSubspace>(orthonormalize(Matrix(d2))))};
    instance.kind = InstanceKind::kAffinePair;
    instance.metadata.ambient_dim = 3;
    instance.metadata.dims = {1, 1};
    instance.metadata.intersection_dim = 0;
    instance.metadata.friedrichs_cosine = std::cos(angle);
    instance.reference_solution = Vector::Zero(3);
  } else {
    throw InvalidConfigError("gallery: unknown instance '" + name + "'");
  }
  return instance;
}

// --- JSON serialization -----------------------------------------------------

namespace {

/// Decimal formatting with 17 significant digits, enough to round-trip any
/// double, so equal instances always serialize to identical bytes.
std::string format_real(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void append_vector(std::string& out, const Vector& v) {
  out += '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    out += format_real(v(i));
  }
  out += ']';
}

void append_columns(std::string& out, const Matrix& m) {
  out += '[';
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (j > 0) out += ',';
    append_vector(out, m.col(j));
  }
  out += ']';
}

void append_set(std::string& out, const ProjectableSet& set) {
  out += "{\"type\":\"" + set.type_name() + "\"";
  if (const auto* lin = dynamic_cast<const LinearSubspace*>(&set)) {
    out += ",\"basis\":";
    append_columns(out, lin->basis().columns());
  } else if (const auto* aff = dynamic_cast<const AffineSubspace*>(&set)) {
    out += ",\"basis\":";
    append_columns(out, aff->basis().columns());
    out += ",\"offset\":";
    append_vector(out, aff->offset());
  } else if (const auto* ball = dynamic_cast<const Ball*>(&set)) {
    out += ",\"center\":";
    append_vector(out, ball->center());
    out += ",\"radius\":" + format_real(ball->radius());
  } else if (const auto* sphere = dynamic_cast<const Sphere*>(&set)) {
    out += ",\"center\":";
    append_vector(out, sphere->center());
    out += ",\"radius\":" + format_real(sphere->radius());
  } else {
    throw InvalidInputError("serialize: unknown set type " + set.type_name());
  }
  out += '}';
}

Vector parse_vector(const nlohmann::json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Matrix parse_columns(const nlohmann::json& j, Eigen::Index ambient_dim) {
  Matrix m(ambient_dim, static_cast<Eigen::Index>(j.size()));
  for (std::size_t col = 0; col < j.size(); ++col) {
    m.col(static_cast<Eigen::Index>(col)) = parse_vector(j[col]);
  }
  return m;
}

}  // namespace

std::string to_json(const ProblemInstance& instance) {
  std::string out;
  out += "{\"name\":\"" + instance.metadata.name + "\"";
  out += ",\"kind\":\"" + to_string(instance.kind) + "\"";
  out += ",\"ambient_dim\":" + std::to_string(instance.metadata.ambient_dim);
  out += ",\"seed\":" + std::to_string(instance.metadata.seed);
  out += ",\"sets\":[";
  for (std::size_t i = 0; i < instance.sets.size(); ++i) {
    if (i > 0) out += ',';
    append_set(out, *instance.sets[i]);
  }
  out += ']';
  if (instance.reference_solution) {
    out += ",\"reference_solution\":";
    append_vector(out, *instance.reference_solution);
  }
  if (instance.metadata.friedrichs_cosine) {
    out += ",\"friedrichs_cosine\":" +
           format_real(*instance.metadata.friedrichs_cosine);
  }
  out += '}';
  return out;
}

ProblemInstance instance_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  ProblemInstance instance;
  instance.metadata.name = j.at("name").get<std::string>();
  instance.kind = instance_kind_from_string(j.at("kind").get<std::string>());
  instance.metadata.ambient_dim = j.at("ambient_dim").get<Eigen::Index>();
  instance.metadata.seed = j.at("seed").get<std::uint64_t>();
  const Eigen::Index n = instance.metadata.ambient_dim;

  for (const auto& set_json : j.at("sets")) {
    const std::string type = set_json.at("type").get<std::string>();
    if (type == "linear_subspace") {
      const Matrix basis = parse_columns(set_json.at("basis"), n);
      instance.sets.push_back(std::make_shared<LinearSubspace>(
          OrthonormalBasis(basis, n)));
      instance.metadata.dims.push_back(basis.cols());
    } else if (type == "affine_subspace") {
      const Matrix basis = parse_columns(set_json.at("basis"), n);
      instance.sets.push_back(std::make_shared<AffineSubspace>(
          OrthonormalBasis(basis, n), parse_vector(set_json.at("offset"))));
      instance.metadata.dims.push_back(basis.cols());
    } else if (type == "ball") {
      instance.sets.push_back(std::make_shared<Ball>(
          parse_vector(set_json.at("center")),
          set_json.at("radius").get<double>()));
      instance.metadata.dims.push_back(-1);
    } else if (type == "sphere") {
      instance.sets.push_back(std::make_shared<Sphere>(
          parse_vector(set_json.at("center")),
          set_json.at("radius").get<double>()));
      instance.metadata.dims.push_back(-1);
    } else {
      throw InvalidConfigError("instance JSON: unknown set type '" + type + "'");
    }
  }
  if (j.contains("reference_solution")) {
    instance.reference_solution = parse_vector(j.at("reference_solution"));
  }
  if (j.contains("friedrichs_cosine")) {
    instance.metadata.friedrichs_cosine =
        j.at("friedrichs_cosine").get<double>();
  }
  return instance;
}

}  // namespace circumfeas
