#include <doctest.h>

#include <cmath>

#include "support/random_graphs.hpp"
#include "wgs/error.hpp"
#include "wgs/generators.hpp"
#include "wgs/heat.hpp"

using namespace wgs;
using testsupport::Rng;

namespace {

HeatOptions chebyshev(double tol = 1e-10) {
  HeatOptions o;
  o.method = HeatMethod::Chebyshev;
  o.tol = tol;
  return o;
}

HeatOptions dense() {
  HeatOptions o;
  o.method = HeatMethod::Dense;
  return o;
}

}  // namespace

TEST_CASE("two-vertex kernel in closed form") {
  const WeightedGraph g = testsupport::two_vertex();
  for (HeatOptions o : {dense(), chebyshev(1e-13)}) {
    const HeatKernel k = heat_kernel(g, 1.0, o);
    CHECK(k(0, 0) == doctest::Approx((1.0 + std::exp(-2.0)) / 2.0).epsilon(1e-12));
    CHECK(k(1, 1) == doctest::Approx((1.0 + std::exp(-2.0)) / 2.0).epsilon(1e-12));
    CHECK(k(0, 1) == doctest::Approx((1.0 - std::exp(-2.0)) / 2.0).epsilon(1e-12));
    CHECK(k(0, 1) == k(1, 0));
  }
  CHECK_THROWS_AS(heat_kernel(g, 0.0), Error);
  CHECK_THROWS_AS(heat_kernel(g, -1.0), Error);
}

TEST_CASE("kernel against a Taylor-series matrix exponential on weighted graphs") {
  Rng rng(20);
  for (int t = 0; t < 10; ++t) {
    testsupport::GraphShape shape;
    shape.max_n = 12;
    const WeightedGraph g = testsupport::random_graph(rng, shape);
    const Eigen::MatrixXd H = laplacian_dense(g);
    const Eigen::MatrixXd E = testsupport::expm_taylor(-0.7 * H);
    const Eigen::MatrixXd K = heat_kernel(g, 0.7).operator_matrix();
    CHECK((E - K).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("large s projects onto the kernel") {
  const WeightedGraph g = lattice_ball(2, 2).graph;
  const HeatKernel k = heat_kernel(g, 200.0);
  CHECK((k.P.array() - 1.0 / 25.0).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("property: diagonal bound, symmetry, semigroup on random graphs") {
  Rng rng(21);
  for (int t = 0; t < 100; ++t) {
    const WeightedGraph g = testsupport::random_graph(rng);
    for (double s : {0.1, 1.0, 10.0}) {
      const HeatKernel k = heat_kernel(g, s);
      const HeatKernel k2 = heat_kernel(g, 2.0 * s);
      for (Index x = 0; x < g.vertex_count(); ++x) {
        CHECK(k(x, x) > 0.0);
        CHECK(1.0 / g.measure(x) - k(x, x) >= -1e-10);
      }
      CHECK((k.P - k.P.transpose()).cwiseAbs().maxCoeff() == 0.0);
      const Eigen::MatrixXd comp = k.P * Eigen::Map<const Eigen::VectorXd>(g.measure().data(), g.vertex_count()).asDiagonal() * k.P;
      CHECK((comp - k2.P).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("heat_apply: invariant kernel, contraction, semigroup, positivity") {
  Rng rng(22);
  for (int t = 0; t < 100; ++t) {
    const WeightedGraph g = testsupport::random_graph(rng);
    const std::size_t n = g.vertex_count();
    const VertexFunction c = VertexFunction::Constant(static_cast<Eigen::Index>(n), Complex(1.5, -0.5));
    CHECK((heat_apply(g, 3.0, c) - c).cwiseAbs().maxCoeff() <= 1e-10 * std::abs(Complex(1.5, -0.5)));

    const VertexFunction f = testsupport::random_vector(rng, n);
    const double s = 0.1 + 2.0 * (t % 5);
    const VertexFunction a = heat_apply(g, s, f);
    CHECK(norm_m(g, a) <= norm_m(g, f) * (1.0 + 1e-12));
    const VertexFunction twice = heat_apply(g, s, a);
    const VertexFunction once = heat_apply(g, 2.0 * s, f);
    CHECK(norm_m(g, twice - once) <= 1e-9 * norm_m(g, f));

    VertexFunction pos(static_cast<Eigen::Index>(n));
    for (auto& v : pos) v = rng.uniform(0.0, 1.0);
    const VertexFunction hp = heat_apply(g, s, pos);
    CHECK(hp.real().minCoeff() >= -1e-10 * pos.real().maxCoeff());
  }
}

TEST_CASE("method cross-validation: Chebyshev against dense") {
  Rng rng(23);
  for (int t = 0; t < 5; ++t) {
    testsupport::GraphShape shape;
    shape.min_n = 200;
    shape.max_n = 500;
    shape.extra_edge_prob = 0.005;
    const WeightedGraph g = testsupport::random_graph(rng, shape);
    const HeatKernel a = heat_kernel(g, 1.0, dense());
    const HeatKernel b = heat_kernel(g, 1.0, chebyshev(1e-10));
    CHECK((a.operator_matrix() - b.operator_matrix()).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(b.method == HeatMethod::Chebyshev);
    const Eigen::VectorXd d1 = heat_diagonal(g, 1.0, dense());
    const Eigen::VectorXd d2 = heat_diagonal(g, 1.0, chebyshev(1e-12));
    CHECK((d1 - d2).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("Chebyshev series meets its tolerance") {
  for (double s : {0.1, 1.0, 10.0}) {
    const ChebyshevSeries c = heat_chebyshev_series(s, 8.0, 1e-10, 1 << 16);
    CHECK(c.error_bound <= 1e-10);
    for (int i = 0; i <= 200; ++i) {
      const double l = 8.0 * i / 200.0;
      const double u = 2.0 * l / 8.0 - 1.0;
      double t0 = 1.0, t1 = u, sum = c.coefficients[0] + (c.coefficients.size() > 1 ? c.coefficients[1] * u : 0.0);
      for (std::size_t k = 2; k < c.coefficients.size(); ++k) {
        const double t2 = 2.0 * u * t1 - t0;
        sum += c.coefficients[k] * t2;
        t0 = t1;
        t1 = t2;
      }
      CHECK(std::abs(sum - std::exp(-s * l)) <= 1e-10);
    }
  }
}

TEST_CASE("diagonal monotone in time and kernel reproduction") {
  Rng rng(24);
  for (int t = 0; t < 30; ++t) {
    const WeightedGraph g = testsupport::random_graph(rng);
    const double s = 1.0;
    Eigen::VectorXd prev = heat_diagonal(g, s / 4);
    for (double r : {s / 2, s, 2 * s}) {
      const Eigen::VectorXd d = heat_diagonal(g, r);
      CHECK((d - prev).maxCoeff() <= 1e-14);
      prev = d;
    }
    const HeatKernel k = heat_kernel(g, s);
    const Eigen::VectorXd d2 = heat_diagonal(g, 2 * s);
    for (Index x = 0; x < g.vertex_count(); ++x) {
      double sum = 0.0;
      for (Index y = 0; y < g.vertex_count(); ++y) sum += k(x, y) * k(x, y) * g.measure(y);
      CHECK(std::abs(sum - d2[static_cast<Eigen::Index>(x)]) <= 1e-10);
    }
  }
}

TEST_CASE("gradient kernel examples and edge bound") {
  const WeightedGraph g = testsupport::two_vertex();
  const GradHeatKernel gk = grad_heat_kernel(g, 1.0);
  const auto e01 = static_cast<Eigen::Index>(*g.find_edge(0, 1));
  CHECK(gk.G(e01, 0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(gk.row_norms[e01] == doctest::Approx(2.0 * std::exp(-4.0)).epsilon(1e-12));
  CHECK(gk.bounds[e01] == doctest::Approx(2.0 * (1.0 + std::exp(-4.0))).epsilon(1e-12));

  Rng rng(25);
  for (int t = 0; t < 50; ++t) {
    testsupport::GraphShape shape;
    shape.max_n = 100;
    shape.extra_edge_prob = 0.05;
    const WeightedGraph r = testsupport::random_graph(rng, shape);
    const GradHeatKernel k = grad_heat_kernel(r, 0.5 + t % 3);
    CHECK(k.min_slack() >= 0.0);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(r.vertex_count()));
    const Eigen::VectorXd m = Eigen::Map<const Eigen::VectorXd>(r.measure().data(), r.vertex_count());
    CHECK((k.G * m.cwiseProduct(ones)).cwiseAbs().maxCoeff() <= 1e-12);
  }
  const HeatKernel a = heat_kernel(g, 1.0);
  const HeatKernel b = heat_kernel(g, 3.0);
  try {
    grad_heat_kernel(g, a, b);
    FAIL("expected TimeMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TimeMismatch);
  }
}

TEST_CASE("sqrt(H) e^{-tH} norm") {
  const WeightedGraph g = testsupport::two_vertex();
  CHECK(sqrt_h_semigroup_norm(g, 0.25) == doctest::Approx(std::sqrt(2.0) * std::exp(-0.5)).epsilon(1e-14));
  Rng rng(26);
  for (int t = 0; t < 30; ++t) {
    const WeightedGraph r = testsupport::random_graph(rng);
    double prev = INFINITY;
    for (double tt : {1.0, 2.0, 4.0, 8.0}) {
      const double v = sqrt_h_semigroup_norm(r, tt);
      CHECK(v <= 1.0 / std::sqrt(2.0 * std::exp(1.0) * tt) + 1e-10);
      CHECK(v <= prev);
      prev = v;
    }
  }
}

TEST_CASE("Chebyshev series: unreachable tolerances are reported") {
  const ChebyshevSeries c = heat_chebyshev_series(2.0, 8.0, 1e-12, 1 << 16);
  CHECK(c.error_bound <= 1e-12);
  CHECK(c.coefficients.size() < 64);
  try {
    heat_chebyshev_series(2.0, 8.0, 1e-18, 1 << 16);
    FAIL("expected ToleranceNotReached");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ToleranceNotReached);
  }
  try {
    heat_chebyshev_series(1000.0, 8.0, 1e-10, 32);
    FAIL("expected ToleranceNotReached");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ToleranceNotReached);
  }
}
