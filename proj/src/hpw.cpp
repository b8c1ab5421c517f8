#include "wgs/hpw.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "wgs/error.hpp"
#include "wgs/heat.hpp"
#include "wgs/perturbation.hpp"

namespace wgs {

namespace {

Eigen::VectorXd measure_vector(const std::vector<double>& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), static_cast<Eigen::Index>(m.size()));
}

void require_common_support(const GraphPair& pair) {
  pair.require_equivalence("HPW construction");
  const WeightedGraph& g1 = pair.g1();
  const WeightedGraph& g2 = pair.g2();
  for (Index x = 0; x <= g1.vertex_count(); ++x) {
    if (g1.offset(x) != g2.offset(x)) throw Error(ErrorCode::NotApplicable, "edge supports differ");
  }
  for (std::size_t e = 0; e < g1.ordered_edge_count(); ++e) {
    if (g1.target(e) != g2.target(e)) throw Error(ErrorCode::NotApplicable, "edge supports differ");
  }
}

double sgn1(double v) { return v < 0.0 ? -1.0 : 1.0; }

// Differential as a (2E x N) matrix.
Eigen::MatrixXd differential_matrix(const WeightedGraph& g) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g.ordered_edge_count()),
                                            static_cast<Eigen::Index>(g.vertex_count()));
  for (Index x = 0; x < g.vertex_count(); ++x) {
    for (std::size_t e = g.offset(x); e < g.offset(x + 1); ++e) {
      D(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(x)) = 1.0;
      D(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(g.target(e))) = -1.0;
    }
  }
  return D;
}

Eigen::VectorXd edge_measure(const WeightedGraph& g) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(g.ordered_edge_count()));
  for (std::size_t e = 0; e < g.ordered_edge_count(); ++e) w[static_cast<Eigen::Index>(e)] = 0.5 * g.edge_weight(e);
  return w;
}

// Per ordered edge of g1, the tilde of rho_b.
Eigen::VectorXd edge_tilde(const GraphPair& pair) {
  const WeightedGraph& g1 = pair.g1();
  const WeightedGraph& g2 = pair.g2();
  Eigen::VectorXd t(static_cast<Eigen::Index>(g1.ordered_edge_count()));
  for (std::size_t e = 0; e < g1.ordered_edge_count(); ++e) {
    t[static_cast<Eigen::Index>(e)] = tilde(g2.edge_weight(e) / g1.edge_weight(e));
  }
  return t;
}

Eigen::VectorXd vertex_rho(const GraphPair& pair) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(pair.vertex_count()));
  for (Index x = 0; x < pair.vertex_count(); ++x) r[static_cast<Eigen::Index>(x)] = pair.g2().measure(x) / pair.g1().measure(x);
  return r;
}

HsEntry make_entry(std::string name, double hs, double bound_sq, double printed_sq) {
  return {std::move(name), hs, std::sqrt(std::max(0.0, bound_sq)), std::sqrt(std::max(0.0, printed_sq))};
}

}  // namespace

Identification identification(const GraphPair& pair) {
  const Eigen::VectorXd rho = vertex_rho(pair);
  Identification id;
  id.adjoint_factor = rho;
  id.I.size = id.I_adjoint.size = pair.vertex_count();
  id.I.measure = pair.g1().measure();
  id.I_adjoint.measure = pair.g2().measure();
  id.I.apply = [](const VertexFunction& f) { return f; };
  id.I_adjoint.apply = [rho](const VertexFunction& g) -> VertexFunction { return rho.cast<Complex>().cwiseProduct(g); };
  id.norm = std::sqrt(rho.maxCoeff());
  id.inverse_norm = std::sqrt(1.0 / rho.minCoeff());
  return id;
}

MultiplicationOps multiplication_ops(const GraphPair& pair) {
  require_common_support(pair);
  const Eigen::VectorXd rho = vertex_rho(pair);
  const Eigen::VectorXd tb = edge_tilde(pair);
  MultiplicationOps ops;
  const auto n = rho.size();
  ops.S.resize(n);
  ops.U.resize(n);
  for (Eigen::Index x = 0; x < n; ++x) {
    const double t = tilde(rho[x]);
    ops.S[x] = std::sqrt(std::abs(t));
    ops.U[x] = sgn1(t) / std::sqrt(rho[x]);
  }
  ops.S_hat.resize(tb.size());
  ops.U_hat.resize(tb.size());
  for (Eigen::Index e = 0; e < tb.size(); ++e) {
    const double r = pair.g2().edge_weight(static_cast<std::size_t>(e)) / pair.g1().edge_weight(static_cast<std::size_t>(e));
    ops.S_hat[e] = std::sqrt(std::abs(tb[e]));
    ops.U_hat[e] = sgn1(tb[e]) / std::sqrt(r);
  }
  ops.S_norm = n ? ops.S.maxCoeff() : 0.0;
  ops.S_hat_norm = tb.size() ? ops.S_hat.maxCoeff() : 0.0;
  return ops;
}

double hs_norm(const Eigen::MatrixXd& K, const Eigen::VectorXd& mu_in, const Eigen::VectorXd& mu_out) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < K.cols(); ++j) {
    for (Eigen::Index i = 0; i < K.rows(); ++i) sum += K(i, j) * K(i, j) * mu_out[i] / mu_in[j];
  }
  return std::sqrt(sum);
}

double trace_norm(const Eigen::MatrixXd& K, const std::vector<double>& m_in, const std::vector<double>& m_out) {
  Eigen::MatrixXd W = K;
  for (Eigen::Index i = 0; i < W.rows(); ++i) W.row(i) *= std::sqrt(m_out[static_cast<std::size_t>(i)]);
  for (Eigen::Index j = 0; j < W.cols(); ++j) W.col(j) /= std::sqrt(m_in[static_cast<std::size_t>(j)]);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(W);
  return svd.singularValues().sum();
}

const HsEntry& HpwBundle::entry(const std::string& name) const {
  for (const HsEntry& e : hs) {
    if (e.name == name) return e;
  }
  throw Error(ErrorCode::InvalidArgument, "no HS entry named " + name);
}

HpwBundle hpw_operator(const GraphPair& pair, double s, std::size_t cap) {
  require_common_support(pair);
  return hpw_operator(pair, s, dense_spectrum(pair.g1(), true, cap), dense_spectrum(pair.g2(), true, cap));
}

HpwBundle hpw_operator(const GraphPair& pair, double s, const DenseSpectrum& sp1, const DenseSpectrum& sp2) {
  if (!(s > 0.0)) throw Error(ErrorCode::NonPositiveTime, "HPW time s must be > 0");
  require_common_support(pair);
  const WeightedGraph& g1 = pair.g1();
  const WeightedGraph& g2 = pair.g2();
  const MultiplicationOps ops = multiplication_ops(pair);
  const Eigen::VectorXd m1 = measure_vector(g1.measure());
  const Eigen::VectorXd m2 = measure_vector(g2.measure());
  const Eigen::VectorXd w1 = edge_measure(g1);
  const Eigen::VectorXd w2 = edge_measure(g2);
  const Eigen::VectorXd rho = vertex_rho(pair);

  const HeatKernel p1_half = heat_kernel(sp1, 0.5 * s);
  const HeatKernel p1_s = heat_kernel(sp1, s);
  const HeatKernel p1_2s = heat_kernel(sp1, 2.0 * s);
  const HeatKernel p2_half = heat_kernel(sp2, 0.5 * s);
  const HeatKernel p2_s = heat_kernel(sp2, s);
  const HeatKernel p2_2s = heat_kernel(sp2, 2.0 * s);
  const Eigen::MatrixXd E1_half = p1_half.operator_matrix();
  const Eigen::MatrixXd E1 = p1_s.operator_matrix();
  const Eigen::MatrixXd E2 = p2_s.operator_matrix();
  const Eigen::MatrixXd D = differential_matrix(g1);
  const Eigen::MatrixXd H1 = laplacian_dense(g1, std::max(default_dense_cap, g1.vertex_count()));

  HpwBundle b;
  b.s = s;
  b.B1 = ops.S_hat.asDiagonal() * (D * E1);
  b.B2 = ops.S_hat.asDiagonal() * (D * E2);
  b.C1 = ops.S.asDiagonal() * E1_half;
  b.C2 = ops.S.asDiagonal() * E2;
  b.A = (rho.array() - 1.0).matrix().asDiagonal() * E1;

  // Adjoints with respect to the weighted inner products:
  // (B2)* = M2^{-1} B2^T W2 and (C2)* = M2^{-1} C2^T M2.
  const Eigen::MatrixXd B2_adj = m2.cwiseInverse().asDiagonal() * b.B2.transpose() * w2.asDiagonal();
  const Eigen::MatrixXd C2_adj = m2.cwiseInverse().asDiagonal() * b.C2.transpose() * m2.asDiagonal();
  b.T = B2_adj * ops.U_hat.asDiagonal() * b.B1 - C2_adj * ops.U.asDiagonal() * b.C1 * H1 * E1_half;

  const Eigen::VectorXd tm = ops.S.array().square().matrix();  // |m~|
  const Eigen::VectorXd tb = ops.S_hat.array().square().matrix();  // |b~| per ordered edge
  auto b_bound = [&](const WeightedGraph& g, const HeatKernel& p) {
    double sum = 0.0;
    for (Index x = 0; x < g.vertex_count(); ++x) {
      for (std::size_t e = g.offset(x); e < g.offset(x + 1); ++e) {
        sum += tb[static_cast<Eigen::Index>(e)] * (p(x, x) + p(g.target(e), g.target(e))) * g.edge_weight(e);
      }
    }
    return sum;
  };
  auto m_bound = [&](const Eigen::VectorXd& m, const HeatKernel& p, double c) {
    double sum = 0.0;
    for (Eigen::Index x = 0; x < m.size(); ++x) sum += c * tm[x] * p(static_cast<Index>(x), static_cast<Index>(x)) * m[x];
    return sum;
  };
  b.a_constant = 0.0;
  for (Eigen::Index x = 0; x < rho.size(); ++x) {
    if (tm[x] > 0.0) b.a_constant = std::max(b.a_constant, (rho[x] - 1.0) * (rho[x] - 1.0) / tm[x]);
  }

  b.hs.push_back(make_entry("B1", hs_norm(b.B1, m1, w1), b_bound(g1, p1_2s), b_bound(g1, p1_half)));
  b.hs.push_back(make_entry("B2", hs_norm(b.B2, m2, w2), b_bound(g2, p2_2s), b_bound(g2, p2_half)));
  b.hs.push_back(make_entry("C1", hs_norm(b.C1, m1, m1), m_bound(m1, p1_s, 1.0), m_bound(m1, p1_half, 1.0)));
  b.hs.push_back(make_entry("C2", hs_norm(b.C2, m2, m2), m_bound(m2, p2_2s, 1.0), m_bound(m2, p2_half, 1.0)));
  b.hs.push_back(make_entry("A", hs_norm(b.A, m1, m1), m_bound(m1, p1_2s, b.a_constant),
                            m_bound(m1, p1_half, b.a_constant)));

  b.h1_semigroup_norm = 0.0;
  for (Eigen::Index i = 0; i < sp1.eigenvalues.size(); ++i) {
    const double l = std::max(0.0, sp1.eigenvalues[i]);
    b.h1_semigroup_norm = std::max(b.h1_semigroup_norm, l * std::exp(-0.5 * s * l));
  }
  b.trace_norm = trace_norm(b.T, g1.measure(), g2.measure());
  b.factorization_bound = b.entry("B2").hs_norm * b.entry("B1").hs_norm +
                          b.entry("C2").hs_norm * b.h1_semigroup_norm * b.entry("C1").hs_norm;
  return b;
}

double hpw_identity_check(const GraphPair& pair, const HpwBundle& bundle, const VertexFunction& f1,
                          const VertexFunction& f2) {
  const WeightedGraph& g1 = pair.g1();
  const WeightedGraph& g2 = pair.g2();
  if (static_cast<std::size_t>(f1.size()) != pair.vertex_count() || f2.size() != f1.size()) {
    throw Error(ErrorCode::DimensionMismatch, "test vectors do not match the vertex count");
  }
  const Complex lhs = inner_m(g2, f2, bundle.T.cast<Complex>() * f1);
  HeatOptions tight;
  tight.method = HeatMethod::Chebyshev;
  tight.tol = 1e-12;
  const double s = bundle.s;
  const VertexFunction a = heat_apply(g2, s, heat_apply(g1, s, f1, tight), tight);
  const VertexFunction c = heat_apply(g2, s, heat_apply(g1, s, laplacian_apply(g1, f1), tight), tight);
  const Complex rhs = inner_m(g2, laplacian_apply(g2, f2), a) - inner_m(g2, f2, c);
  return std::abs(lhs - rhs) / (1.0 + std::abs(lhs) + std::abs(rhs));
}

bool BbReport::all_verified() const {
  return std::all_of(hypotheses.begin(), hypotheses.end(), [](const Hypothesis& h) { return h.verified; });
}

BbReport bb_hypotheses_report(const GraphPair& pair, const HpwBundle& bundle) {
  const Identification id = identification(pair);
  BbReport r;
  r.inverse_norm = id.inverse_norm;
  r.defect_norm = (id.adjoint_factor.array() - 1.0).abs().maxCoeff();
  const bool finite_inverse = std::isfinite(id.inverse_norm);
  r.hypotheses.push_back({"identification_bounded_invertible", finite_inverse && std::isfinite(id.norm),
                          id.inverse_norm, "value is ||I^{-1}||"});
  r.hypotheses.push_back({"form_domains_mapped", pair.equivalence().holds(), 0.0,
                          "all forms are everywhere defined on a finite graph"});
  const double a = bundle.entry("A").hs_norm;
  r.hypotheses.push_back({"compactness_of_A", std::isfinite(a), a, "value is ||(I*I - id) P1(s)||_HS"});
  const bool tc = std::isfinite(bundle.trace_norm) && bundle.trace_norm <= bundle.factorization_bound + 1e-8;
  r.hypotheses.push_back({"T_trace_class", tc, bundle.trace_norm, "value is the trace norm of T"});
  return r;
}

CookResult cook_integrand(const GraphPair& pair, const DenseSpectrum& sp1, const VertexFunction& f,
                          const std::vector<double>& times) {
  const WeightedGraph& g1 = pair.g1();
  const WeightedGraph& g2 = pair.g2();
  if (static_cast<std::size_t>(f.size()) != pair.vertex_count()) {
    throw Error(ErrorCode::DimensionMismatch, "wave packet does not match the vertex count");
  }
  const Eigen::MatrixXd phi = sp1.eigenvectors();
  // Coefficients in the m1-orthonormal eigenbasis.
  VertexFunction mf = f;
  for (Index x = 0; x < g1.vertex_count(); ++x) mf[static_cast<Eigen::Index>(x)] *= g1.measure(x);
  const VertexFunction coeff = phi.transpose().cast<Complex>() * mf;
  CookResult out;
  out.caveat =
      "finite graph: pure point spectrum, the integrand does not decay; values after the boundary reflection time "
      "reflect finite-size effects";
  for (double t : times) {
    VertexFunction c = coeff;
    for (Eigen::Index i = 0; i < c.size(); ++i) c[i] *= std::polar(1.0, -t * sp1.eigenvalues[i]);
    const VertexFunction g = phi.cast<Complex>() * c;
    out.samples.push_back({t, norm_m(g2, laplacian_apply(g2, g) - laplacian_apply(g1, g))});
  }
  return out;
}

CookResult cook_integrand(const GraphPair& pair, const VertexFunction& f, const std::vector<double>& times,
                          std::size_t cap) {
  return cook_integrand(pair, dense_spectrum(pair.g1(), true, cap), f, times);
}

}  // namespace wgs
