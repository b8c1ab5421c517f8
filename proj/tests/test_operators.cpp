#include <doctest.h>

#include <sstream>

#include "support/random_graphs.hpp"
#include "wgs/error.hpp"
#include "wgs/generators.hpp"
#include "wgs/operators.hpp"

using namespace wgs;
using testsupport::Rng;

namespace {

VertexFunction vec(std::initializer_list<double> v) {
  VertexFunction f(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) f[i++] = x;
  return f;
}

// Ordered-edge index of (x,y).
std::size_t edge(const WeightedGraph& g, Index x, Index y) { return *g.find_edge(x, y); }

Eigen::VectorXd eigenvalues_of(const Eigen::MatrixXd& H) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(H);
  Eigen::VectorXd ev = es.eigenvalues().real();
  std::sort(ev.data(), ev.data() + ev.size());
  return ev;
}

}  // namespace

TEST_CASE("differential examples") {
  const WeightedGraph g = testsupport::two_vertex();
  const EdgeFunction c = differential(g, vec({3.0, 3.0}));
  CHECK(c.values.cwiseAbs().maxCoeff() == 0.0);
  const EdgeFunction d = differential(g, vec({1.0, 0.0}));
  CHECK(d.antisymmetric);
  CHECK(d.values[static_cast<Eigen::Index>(edge(g, 0, 1))] == Complex(1.0));
  CHECK(d.values[static_cast<Eigen::Index>(edge(g, 1, 0))] == Complex(-1.0));
  CHECK_THROWS_AS(differential(g, vec({1.0})), Error);

  Rng rng(5);
  const WeightedGraph p3 = testsupport::path_graph(3);
  for (int t = 0; t < 10; ++t) {
    const VertexFunction f = testsupport::random_vector(rng, 3);
    const EdgeFunction df = differential(p3, f);
    const Complex lhs = inner_b(p3, df, df);
    const Complex rhs = quadratic_form(p3, f, f);
    CHECK(std::abs(lhs - rhs) <= 1e-14 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("codifferential examples") {
  const WeightedGraph g = testsupport::two_vertex();
  EdgeFunction zero{Eigen::VectorXcd::Zero(2), true};
  CHECK(codifferential(g, zero).cwiseAbs().maxCoeff() == 0.0);
  EdgeFunction a{Eigen::VectorXcd::Zero(2), true};
  a.values[static_cast<Eigen::Index>(edge(g, 0, 1))] = 1.0;
  a.values[static_cast<Eigen::Index>(edge(g, 1, 0))] = -1.0;
  const VertexFunction d = codifferential(g, a);
  CHECK(d[0] == Complex(1.0));
  CHECK(d[1] == Complex(-1.0));

  EdgeFunction bad{Eigen::VectorXcd::Ones(2), false};
  try {
    codifferential(g, bad);
    FAIL("expected NotAntisymmetric");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAntisymmetric);
  }
}

TEST_CASE("laplacian examples") {
  const Eigen::MatrixXd H2 = laplacian_dense(testsupport::two_vertex());
  CHECK(H2(0, 0) == 1.0);
  CHECK(H2(0, 1) == -1.0);
  CHECK(H2(1, 0) == -1.0);
  CHECK(H2(1, 1) == 1.0);
  const Eigen::VectorXd e2 = eigenvalues_of(H2);
  CHECK(e2[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(e2[1] == doctest::Approx(2.0).epsilon(1e-15));

  const Eigen::VectorXd e3 = eigenvalues_of(laplacian_dense(testsupport::path_graph(3)));
  CHECK(std::abs(e3[0]) <= 1e-14);
  CHECK(e3[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e3[2] == doctest::Approx(3.0).epsilon(1e-14));

  const WeightedGraph g = lattice_ball(2, 3).graph;
  const VertexFunction c = VertexFunction::Constant(static_cast<Eigen::Index>(g.vertex_count()), 2.5);
  CHECK(laplacian_apply(g, c).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("laplacian_apply equals codifferential of differential bitwise") {
  Rng rng(6);
  for (int t = 0; t < 30; ++t) {
    const WeightedGraph g = testsupport::random_graph(rng);
    const VertexFunction f = testsupport::random_vector(rng, g.vertex_count());
    const VertexFunction a = laplacian_apply(g, f);
    const VertexFunction b = codifferential(g, differential(g, f));
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("quadratic form examples") {
  const WeightedGraph g = testsupport::two_vertex();
  CHECK(quadratic_form(g, vec({1.0, 0.0}), vec({1.0, 0.0})) == Complex(1.0));
  CHECK(quadratic_form(g, vec({2.0, 2.0}), vec({2.0, 2.0})) == Complex(0.0));
  Rng rng(7);
  const WeightedGraph l = lattice_ball(2, 3).graph;
  for (int t = 0; t < 10; ++t) {
    const VertexFunction f = testsupport::random_vector(rng, l.vertex_count());
    const Complex q = quadratic_form(l, f, f);
    CHECK(std::abs(q.imag()) <= 1e-12 * std::abs(q));
    CHECK(std::abs(q - inner_m(l, laplacian_apply(l, f), f)) <= 1e-12 * std::abs(q));
  }
}

TEST_CASE("laplacian_matrix: m-symmetry, nonnegative spectrum, size cap") {
  Rng rng(8);
  for (int t = 0; t < 100; ++t) {
    const WeightedGraph g = testsupport::random_graph(rng);
    const OperatorHandle h = laplacian_matrix(g);
    REQUIRE(h.matrix.has_value());
    const Eigen::MatrixXd& M = *h.matrix;
    for (Index x = 0; x < g.vertex_count(); ++x) {
      for (Index y = 0; y < g.vertex_count(); ++y) {
        const auto i = static_cast<Eigen::Index>(x), j = static_cast<Eigen::Index>(y);
        CHECK(g.measure(x) * M(i, j) == doctest::Approx(g.measure(y) * M(j, i)).epsilon(1e-15));
      }
    }
    CHECK(dense_spectrum(g, false).eigenvalues.minCoeff() >= -1e-10);
  }
  const WeightedGraph p = testsupport::path_graph(10);
  try {
    laplacian_matrix(p, 5);
    FAIL("expected TooLargeForDense");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooLargeForDense);
  }
}

TEST_CASE("property: form identity, adjointness, nonnegativity on random graphs") {
  Rng rng(9);
  for (int t = 0; t < 100; ++t) {
    testsupport::GraphShape shape;
    shape.max_n = 200;
    shape.extra_edge_prob = 0.02;
    const WeightedGraph g = testsupport::random_graph(rng, shape);
    const std::size_t n = g.vertex_count();
    const VertexFunction f = testsupport::random_vector(rng, n);
    const VertexFunction h = testsupport::random_vector(rng, n);
    const Complex q = quadratic_form(g, f, h);
    const Complex r = inner_m(g, laplacian_apply(g, f), h);
    const double scale = norm_m(g, laplacian_apply(g, f)) * norm_m(g, h) + std::abs(q);
    CHECK(std::abs(q - r) <= 1e-12 * scale);

    EdgeFunction beta = differential(g, testsupport::random_vector(rng, n));
    const Complex lhs = inner_b(g, differential(g, f), beta);
    const Complex rhs = inner_m(g, f, codifferential(g, beta));
    const double bscale = std::sqrt(std::abs(inner_b(g, differential(g, f), differential(g, f))) *
                                    std::abs(inner_b(g, beta, beta))) + std::abs(lhs);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * bscale);

    const Complex qq = quadratic_form(g, f, f);
    CHECK(qq.real() >= -1e-12 * norm_m(g, f) * norm_m(g, f));
    CHECK(self_adjointness_residual(laplacian_operator(g), 3, static_cast<std::uint64_t>(t)) <= 1e-12);
  }
}

TEST_CASE("property: kernel consists of component indicators") {
  Rng rng(10);
  for (int t = 0; t < 20; ++t) {
    testsupport::GraphShape shape;
    shape.connected = false;
    shape.extra_edge_prob = 0.05;
    const WeightedGraph g = testsupport::random_graph(rng, shape);
    const auto ids = g.component_ids();
    for (std::size_t c = 0; c < g.component_count(); ++c) {
      VertexFunction f = VertexFunction::Zero(static_cast<Eigen::Index>(g.vertex_count()));
      for (Index x = 0; x < g.vertex_count(); ++x) {
        if (ids[x] == c) f[static_cast<Eigen::Index>(x)] = 1.0;
      }
      CHECK(laplacian_apply(g, f).cwiseAbs().maxCoeff() == 0.0);
    }
    const Eigen::VectorXd ev = dense_spectrum(g, false).eigenvalues;
    std::size_t zeros = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) zeros += std::abs(ev[i]) < 1e-9;
    CHECK(zeros == g.component_count());
  }
}

TEST_CASE("triplet export") {
  std::ostringstream os;
  write_triplets(os, laplacian_dense(testsupport::two_vertex()));
  CHECK(os.str() == "0 0 1\n0 1 -1\n1 0 -1\n1 1 1\n");
}
