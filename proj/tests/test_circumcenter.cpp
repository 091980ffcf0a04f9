#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "circumfeas/circumcenter.hpp"
#include "test_support.hpp"

using namespace circumfeas;
using namespace circumfeas::testing;

TEST_CASE("coincident points collapse to themselves") {
  const Vector x = vec({1.5, -2.0});
  CHECK((circumcenter({x, x, x}) - x).norm() == 0.0);
}

TEST_CASE("right triangle has the obvious circumcenter") {
  const Vector c =
      circumcenter({vec({0, 0}), vec({2, 0}), vec({0, 2})});
  CHECK((c - vec({1, 1})).norm() < 1e-12);
  CHECK((c - vec({0, 0})).norm() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("reflection triple across the x-axis and the 60-degree line") {
  // x = (1,1) reflected across the x-axis, then across the 60-degree line;
  // all three vertices lie on the circle of radius sqrt(2) about the origin.
  const double s3 = std::sqrt(3.0);
  const std::vector<Vector> points = {
      vec({1, 1}), vec({1, -1}), vec({-(1.0 + s3) / 2.0, (s3 - 1.0) / 2.0})};
  const Vector oracle = brute_force_circumcenter(points);
  const Vector c = circumcenter(points);
  CHECK((c - oracle).norm() < 1e-10);
  CHECK(c.norm() < 1e-10);
}

TEST_CASE("two distinct points yield their midpoint") {
  CHECK((circumcenter({vec({0, 0}), vec({2, 0})}) - vec({1, 0})).norm() == 0.0);
}

TEST_CASE("system assembly for the right triangle") {
  const auto sys = build_system({vec({0, 0}), vec({2, 0}), vec({0, 2})});
  Matrix expected_gram(2, 2);
  expected_gram << 4, 0, 0, 4;
  CHECK((sys.gram - expected_gram).norm() < 1e-14);
  CHECK((sys.rhs - vec({2, 2})).norm() < 1e-14);
  CHECK((sys.coefficients - vec({0.5, 0.5})).norm() < 1e-14);
  CHECK(sys.residual < 1e-12);
}

TEST_CASE("system assembly for two points is one-dimensional") {
  const auto sys = build_system({vec({0, 0}), vec({2, 0})});
  REQUIRE(sys.gram.rows() == 1);
  CHECK(sys.gram(0, 0) == doctest::Approx(4.0));
  CHECK(sys.rhs(0) == doctest::Approx(2.0));
  CHECK(sys.coefficients(0) == doctest::Approx(0.5));
}

TEST_CASE("distinct collinear points have no circumcenter") {
  try {
    build_system({vec({0, 0}), vec({1, 0}), vec({2, 0})});
    FAIL("expected a degenerate-configuration error");
  } catch (const DegenerateConfigurationError& e) {
    CHECK(e.rank() == 1);
  }
}

TEST_CASE("singular but consistent systems are still solvable") {
  // four points on the unit circle: three displacements in the plane are
  // linearly dependent, yet the center exists and is unique
  std::vector<Vector> points;
  for (double angle : {0.1, 1.3, 2.9, 4.2}) {
    points.push_back(vec({std::cos(angle), std::sin(angle)}));
  }
  const Vector c = circumcenter(points);
  CHECK(c.norm() < 1e-10);
}

TEST_CASE("equidistance and hull membership on random point sets") {
  Rng rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const auto n = static_cast<Eigen::Index>(rng.uniform_int(2, 6));
    const auto count = static_cast<Eigen::Index>(
        rng.uniform_int(2, std::min<Eigen::Index>(n + 1, 5)));
    std::vector<Vector> points;
    for (Eigen::Index i = 0; i < count; ++i) {
      points.push_back(random_vector(rng, n, 2.0));
    }

    Vector c;
    try {
      c = circumcenter(points);
    } catch (const DegenerateConfigurationError&) {
      continue;  // random degeneracy: not this trial's subject
    }

    double max_norm = 0.0;
    double min_dist = std::numeric_limits<double>::infinity();
    double max_dist = 0.0;
    for (const Vector& p : points) {
      max_norm = std::max(max_norm, p.norm());
      const double d = (c - p).norm();
      min_dist = std::min(min_dist, d);
      max_dist = std::max(max_dist, d);
    }
    CHECK(max_dist - min_dist <= 1e-8 * (1.0 + max_norm));

    // the center stays in the affine hull of the inputs
    Matrix disp(n, count - 1);
    for (Eigen::Index i = 0; i + 1 < count; ++i) {
      disp.col(i) = points[static_cast<std::size_t>(i) + 1] - points[0];
    }
    const Matrix hull = orthonormalize(disp).columns();
    const Vector in_hull = hull * (hull.transpose() * (c - points[0]));
    CHECK((c - points[0] - in_hull).norm() <= 1e-10 * (1.0 + max_norm));
  }
}

TEST_CASE("circumcenter of a reflection triple is the hull projection of "
          "intersection points") {
  Rng rng(29);
  for (int trial = 0; trial < 25; ++trial) {
    const ProblemInstance instance = random_affine_instance(rng, 16);
    const auto& u = *instance.sets[0];
    const auto& v = *instance.sets[1];
    const Eigen::Index n = instance.metadata.ambient_dim;

    const Vector x = random_vector(rng, n, 2.0);
    const Vector y = u.reflect(x);
    const Vector z = v.reflect(y);
    if ((y - x).norm() < 1e-8 || (z - x).norm() < 1e-8 ||
        (z - y).norm() < 1e-8) {
      continue;
    }
    const Vector c = circumcenter({x, y, z});

    // sample w in U ∩ V and project it onto aff{x, y, z} directly
    const auto& lu = dynamic_cast<const LinearSubspace&>(u);
    const auto& lv = dynamic_cast<const LinearSubspace&>(v);
    const LinearSubspace inter = subspace_intersection(lu, lv);
    const Vector w = inter.project(random_vector(rng, n, 3.0));

    Matrix disp(n, 2);
    disp << (y - x), (z - x);
    const Matrix hull = orthonormalize(disp).columns();
    const Vector projected = x + hull * (hull.transpose() * (w - x));
    CHECK((projected - c).norm() <= 1e-8 * (1.0 + x.norm() + w.norm()));
  }
}

TEST_CASE("gram route matches the brute-force equidistance solve") {
  Rng rng(31);
  int checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const auto n = static_cast<Eigen::Index>(rng.uniform_int(3, 6));
    const auto count = static_cast<Eigen::Index>(rng.uniform_int(3, 4));
    std::vector<Vector> points;
    for (Eigen::Index i = 0; i < count; ++i) {
      points.push_back(random_vector(rng, n, 1.5));
    }
    Vector c;
    try {
      c = circumcenter(points);
    } catch (const DegenerateConfigurationError&) {
      continue;
    }
    const Vector oracle = brute_force_circumcenter(points);
    CHECK((c - oracle).norm() <= 1e-8 * (1.0 + oracle.norm()));
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("circumcenter is invariant under input permutations") {
  Rng rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = static_cast<Eigen::Index>(rng.uniform_int(3, 6));
    std::vector<Vector> points;
    for (int i = 0; i < 4; ++i) {
      points.push_back(random_vector(rng, n, 1.0));
    }
    Vector base;
    try {
      base = circumcenter(points);
    } catch (const DegenerateConfigurationError&) {
      continue;
    }
    std::vector<Vector> shuffled = points;
    for (std::size_t i = shuffled.size(); i > 1; --i) {
      std::swap(shuffled[i - 1],
                shuffled[static_cast<std::size_t>(rng.uniform_int(
                    0, static_cast<std::int64_t>(i) - 1))]);
    }
    CHECK((circumcenter(shuffled) - base).norm() <= 1e-10 * (1.0 + base.norm()));
  }
}

TEST_CASE("empty input is rejected") {
  CHECK_THROWS_AS(circumcenter({}), InvalidInputError);
}

TEST_CASE("dedupe keeps first occurrences in order") {
  const Vector a = vec({0, 0});
  const Vector b = vec({1, 0});
  const auto unique = dedupe_points({a, a + vec({0, 1e-15}), b});
  REQUIRE(unique.size() == 2);
  CHECK((unique[0] - a).norm() == 0.0);
  CHECK((unique[1] - b).norm() == 0.0);
}
