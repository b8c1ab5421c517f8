#include "wgs/operators.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "wgs/error.hpp"
#include "wgs/generators.hpp"
#include "wgs/graph_io.hpp"

namespace wgs {

namespace {

void check_size(const WeightedGraph& g, Eigen::Index size, const char* what) {
  if (static_cast<std::size_t>(size) != g.vertex_count()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " has length " + std::to_string(size) +
                                                  ", graph has " + std::to_string(g.vertex_count()) + " vertices");
  }
}

void check_edges(const WeightedGraph& g, const EdgeFunction& a) {
  if (static_cast<std::size_t>(a.values.size()) != g.ordered_edge_count()) {
    throw Error(ErrorCode::DimensionMismatch, "edge function does not match the edge support");
  }
}

void check_cap(const WeightedGraph& g, std::size_t cap) {
  if (g.vertex_count() > cap) {
    throw Error(ErrorCode::TooLargeForDense, std::to_string(g.vertex_count()) + " vertices exceed the dense cap " +
                                                 std::to_string(cap));
  }
}

}  // namespace

EdgeFunction differential(const WeightedGraph& g, const VertexFunction& f) {
  check_size(g, f.size(), "vertex function");
  EdgeFunction out{Eigen::VectorXcd(static_cast<Eigen::Index>(g.ordered_edge_count())), true};
  for (Index x = 0; x < g.vertex_count(); ++x) {
    for (std::size_t e = g.offset(x); e < g.offset(x + 1); ++e) {
      out.values[static_cast<Eigen::Index>(e)] = f[static_cast<Eigen::Index>(x)] - f[static_cast<Eigen::Index>(g.target(e))];
    }
  }
  return out;
}

VertexFunction codifferential(const WeightedGraph& g, const EdgeFunction& alpha) {
  check_edges(g, alpha);
  const double scale = alpha.values.size() ? alpha.values.cwiseAbs().maxCoeff() : 0.0;
  for (std::size_t e = 0; e < g.ordered_edge_count(); ++e) {
    const Complex s = alpha.values[static_cast<Eigen::Index>(e)] + alpha.values[static_cast<Eigen::Index>(g.reverse(e))];
    if (std::abs(s) > 1e-12 * scale) {
      throw Error(ErrorCode::NotAntisymmetric, "alpha(x,y) + alpha(y,x) != 0 at (" + std::to_string(g.source(e)) +
                                                   "," + std::to_string(g.target(e)) + ")");
    }
  }
  VertexFunction out(static_cast<Eigen::Index>(g.vertex_count()));
  for (Index x = 0; x < g.vertex_count(); ++x) {
    Complex sum = 0.0;
    for (std::size_t e = g.offset(x); e < g.offset(x + 1); ++e) sum += g.edge_weight(e) * alpha.values[static_cast<Eigen::Index>(e)];
    out[static_cast<Eigen::Index>(x)] = sum / g.measure(x);
  }
  return out;
}

VertexFunction laplacian_apply(const WeightedGraph& g, const VertexFunction& f) {
  check_size(g, f.size(), "vertex function");
  VertexFunction out(f.size());
  for (Index x = 0; x < g.vertex_count(); ++x) {
    const Complex fx = f[static_cast<Eigen::Index>(x)];
    Complex sum = 0.0;
    for (std::size_t e = g.offset(x); e < g.offset(x + 1); ++e) {
      sum += g.edge_weight(e) * (fx - f[static_cast<Eigen::Index>(g.target(e))]);
    }
    out[static_cast<Eigen::Index>(x)] = sum / g.measure(x);
  }
  return out;
}

Eigen::VectorXd laplacian_apply(const WeightedGraph& g, const Eigen::VectorXd& f) {
  check_size(g, f.size(), "vertex function");
  Eigen::VectorXd out(f.size());
  for (Index x = 0; x < g.vertex_count(); ++x) {
    const double fx = f[static_cast<Eigen::Index>(x)];
    double sum = 0.0;
    for (std::size_t e = g.offset(x); e < g.offset(x + 1); ++e) {
      sum += g.edge_weight(e) * (fx - f[static_cast<Eigen::Index>(g.target(e))]);
    }
    out[static_cast<Eigen::Index>(x)] = sum / g.measure(x);
  }
  return out;
}

Eigen::MatrixXd laplacian_apply_block(const WeightedGraph& g, const Eigen::MatrixXd& f) {
  check_size(g, f.rows(), "vertex block");
  Eigen::MatrixXd out(f.rows(), f.cols());
  // Row-major traversal of f keeps each vertex's neighbors in cache.
  for (Index x = 0; x < g.vertex_count(); ++x) {
    const auto xi = static_cast<Eigen::Index>(x);
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(f.cols());
    for (std::size_t e = g.offset(x); e < g.offset(x + 1); ++e) {
      acc.noalias() += g.edge_weight(e) * (f.row(xi) - f.row(static_cast<Eigen::Index>(g.target(e))));
    }
    out.row(xi) = acc / g.measure(x);
  }
  return out;
}

Eigen::MatrixXd symmetric_laplacian_apply_block(const WeightedGraph& g, const Eigen::MatrixXd& f) {
  check_size(g, f.rows(), "vertex block");
  const std::size_t n = g.vertex_count();
  std::vector<double> rs(n);
  for (Index x = 0; x < n; ++x) rs[x] = 1.0 / std::sqrt(g.measure(x));
  Eigen::MatrixXd out(f.rows(), f.cols());
  for (Index x = 0; x < n; ++x) {
    const auto xi = static_cast<Eigen::Index>(x);
    Eigen::RowVectorXd acc = (g.degree(x) * rs[x]) * f.row(xi);
    for (std::size_t e = g.offset(x); e < g.offset(x + 1); ++e) {
      const Index y = g.target(e);
      acc.noalias() -= (g.edge_weight(e) * rs[y]) * f.row(static_cast<Eigen::Index>(y));
    }
    out.row(xi) = rs[x] * acc;
  }
  return out;
}

Complex inner_m(const std::vector<double>& m, const VertexFunction& f, const VertexFunction& h) {
  if (static_cast<std::size_t>(f.size()) != m.size() || f.size() != h.size()) {
    throw Error(ErrorCode::DimensionMismatch, "inner product of functions with different lengths");
  }
  Complex sum = 0.0;
  for (std::size_t x = 0; x < m.size(); ++x) {
    sum += f[static_cast<Eigen::Index>(x)] * std::conj(h[static_cast<Eigen::Index>(x)]) * m[x];
  }
  return sum;
}

Complex inner_m(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h) {
  return inner_m(g.measure(), f, h);
}

double norm_m(const std::vector<double>& m, const VertexFunction& f) {
  return std::sqrt(std::max(0.0, inner_m(m, f, f).real()));
}

double norm_m(const WeightedGraph& g, const VertexFunction& f) { return norm_m(g.measure(), f); }

Complex inner_b(const WeightedGraph& g, const EdgeFunction& alpha, const EdgeFunction& beta) {
  check_edges(g, alpha);
  check_edges(g, beta);
  Complex sum = 0.0;
  for (std::size_t e = 0; e < g.ordered_edge_count(); ++e) {
    const auto i = static_cast<Eigen::Index>(e);
    sum += alpha.values[i] * std::conj(beta.values[i]) * g.edge_weight(e);
  }
  return 0.5 * sum;
}

Complex quadratic_form(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h) {
  check_size(g, f.size(), "vertex function");
  check_size(g, h.size(), "vertex function");
  return inner_b(g, differential(g, f), differential(g, h));
}

OperatorHandle laplacian_operator(const WeightedGraph& g) {
  OperatorHandle op;
  op.size = g.vertex_count();
  op.measure = g.measure();
  op.self_adjoint = true;
  op.apply = [g](const VertexFunction& f) { return laplacian_apply(g, f); };
  return op;
}

Eigen::MatrixXd laplacian_dense(const WeightedGraph& g, std::size_t cap) {
  check_cap(g, cap);
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (Index x = 0; x < g.vertex_count(); ++x) {
    const auto xi = static_cast<Eigen::Index>(x);
    h(xi, xi) = g.degree(x) / g.measure(x);
    for (std::size_t e = g.offset(x); e < g.offset(x + 1); ++e) {
      h(xi, static_cast<Eigen::Index>(g.target(e))) = -g.edge_weight(e) / g.measure(x);
    }
  }
  return h;
}

OperatorHandle laplacian_matrix(const WeightedGraph& g, std::size_t cap) {
  OperatorHandle op;
  op.size = g.vertex_count();
  op.measure = g.measure();
  op.self_adjoint = true;
  op.matrix = laplacian_dense(g, cap);
  op.apply = [h = *op.matrix](const VertexFunction& f) -> VertexFunction { return h.cast<Complex>() * f; };
  return op;
}

double self_adjointness_residual(const OperatorHandle& op, int trials, std::uint64_t seed) {
  const CounterRng rng(seed);
  const auto n = static_cast<Eigen::Index>(op.size);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    VertexFunction f(n), h(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto u = static_cast<std::uint64_t>(i);
      f[i] = {rng.uniform(0, t, u) - 0.5, rng.uniform(1, t, u) - 0.5};
      h[i] = {rng.uniform(2, t, u) - 0.5, rng.uniform(3, t, u) - 0.5};
    }
    const Complex a = inner_m(op.measure, op.apply(f), h);
    const Complex b = inner_m(op.measure, f, op.apply(h));
    const double scale = std::abs(a) + std::abs(b);
    if (scale > 0.0) worst = std::max(worst, std::abs(a - b) / scale);
  }
  return worst;
}

Eigen::MatrixXd DenseSpectrum::eigenvectors() const {
  Eigen::MatrixXd phi = sym_vectors;
  for (std::size_t x = 0; x < measure.size(); ++x) phi.row(static_cast<Eigen::Index>(x)) /= std::sqrt(measure[x]);
  return phi;
}

DenseSpectrum dense_spectrum(const WeightedGraph& g, bool vectors, std::size_t cap) {
  check_cap(g, cap);
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  std::vector<double> rs(g.vertex_count());
  for (Index x = 0; x < g.vertex_count(); ++x) rs[x] = 1.0 / std::sqrt(g.measure(x));
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (Index x = 0; x < g.vertex_count(); ++x) {
    const auto xi = static_cast<Eigen::Index>(x);
    s(xi, xi) = g.degree(x) / g.measure(x);
    for (std::size_t e = g.offset(x); e < g.offset(x + 1); ++e) {
      const Index y = g.target(e);
      s(xi, static_cast<Eigen::Index>(y)) = -g.edge_weight(e) * rs[x] * rs[y];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "dense eigensolver failed");
  DenseSpectrum out;
  out.eigenvalues = solver.eigenvalues();
  if (vectors) out.sym_vectors = solver.eigenvectors();
  out.measure = g.measure();
  return out;
}

void write_triplets(std::ostream& os, const Eigen::MatrixXd& a, double drop) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (std::abs(a(i, j)) > drop) os << i << ' ' << j << ' ' << format_double(a(i, j)) << '\n';
    }
  }
}

void write_triplets(std::ostream& os, const Eigen::MatrixXcd& a, double drop) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (std::abs(a(i, j)) > drop) {
        os << i << ' ' << j << ' ' << format_double(a(i, j).real()) << ' ' << format_double(a(i, j).imag()) << '\n';
      }
    }
  }
}

}  // namespace wgs
