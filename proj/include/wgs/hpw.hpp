#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wgs/graph.hpp"
#include "wgs/operators.hpp"

namespace wgs {

// Orientation: the HPW algebra is written with rho_m = m2/m1 = 1/m_{1,2} and
// rho_b = b2/b1. Tilde magnitudes are the same in either orientation.

struct Identification {
  OperatorHandle I;
  OperatorHandle I_adjoint;
  /// I* multiplies by m2/m1.
  Eigen::VectorXd adjoint_factor;
  double norm = 0.0;
  double inverse_norm = 0.0;
};

Identification identification(const GraphPair& pair);

/// Diagonals of the multiplication operators. Vertex operators are indexed by
/// vertex, edge operators by ordered edge in the shared CSR order.
struct MultiplicationOps {
  Eigen::VectorXd S;
  Eigen::VectorXd U;
  Eigen::VectorXd S_hat;
  Eigen::VectorXd U_hat;
  double S_norm = 0.0;
  double S_hat_norm = 0.0;
};

/// sgn(0) is taken as +1 so U and U_hat are unitary everywhere.
MultiplicationOps multiplication_ops(const GraphPair& pair);

struct HsEntry {
  std::string name;
  double hs_norm = 0.0;
  /// Bound derived from the semigroup property (2s-version), as a norm.
  double bound = 0.0;
  /// Bound with the time index as printed in the proof, as a norm.
  double printed_bound = 0.0;
  double slack() const { return bound - hs_norm; }
  double printed_slack() const { return printed_bound - hs_norm; }
};

/// Matrices act on coefficient vectors. Edge operators have one row per
/// ordered edge of the common support.
struct HpwBundle {
  double s = 0.0;
  Eigen::MatrixXd T;
  Eigen::MatrixXd B1, B2, C1, C2, A;
  std::vector<HsEntry> hs;
  double trace_norm = 0.0;
  /// ||B2|| ||B1|| + ||C2|| ||H1 P1(s/2)|| ||C1||
  double factorization_bound = 0.0;
  double h1_semigroup_norm = 0.0;
  /// sup |rho_m - 1|^2 / |m~| over the support of m~.
  double a_constant = 0.0;

  const HsEntry& entry(const std::string& name) const;
};

HpwBundle hpw_operator(const GraphPair& pair, double s, std::size_t cap = default_dense_cap);
HpwBundle hpw_operator(const GraphPair& pair, double s, const DenseSpectrum& sp1, const DenseSpectrum& sp2);

/// Sum of singular values of K : l^2(m_in) -> l^2(m_out).
double trace_norm(const Eigen::MatrixXd& K, const std::vector<double>& m_in, const std::vector<double>& m_out);
double hs_norm(const Eigen::MatrixXd& K, const Eigen::VectorXd& mu_in, const Eigen::VectorXd& mu_out);

/// |L - R| / (1 + |L| + |R|) where L = <f2, T f1>_{m2} and R is the right
/// side evaluated independently with matrix-free heat flows.
double hpw_identity_check(const GraphPair& pair, const HpwBundle& bundle, const VertexFunction& f1,
                          const VertexFunction& f2);

struct Hypothesis {
  std::string name;
  bool verified = false;
  double value = 0.0;
  std::string note;
};

struct BbReport {
  std::vector<Hypothesis> hypotheses;
  double inverse_norm = 0.0;
  double defect_norm = 0.0;  // ||I*I - id||
  bool all_verified() const;
};

BbReport bb_hypotheses_report(const GraphPair& pair, const HpwBundle& bundle);

struct CookSample {
  double t = 0.0;
  double value = 0.0;
};

struct CookResult {
  std::vector<CookSample> samples;
  std::string caveat;
};

/// t -> ||(H2 I - I H1) e^{-itH1} f||_{m2} by exact unitary evolution.
CookResult cook_integrand(const GraphPair& pair, const VertexFunction& f, const std::vector<double>& times,
                          std::size_t cap = default_dense_cap);
CookResult cook_integrand(const GraphPair& pair, const DenseSpectrum& sp1, const VertexFunction& f,
                          const std::vector<double>& times);

}  // namespace wgs
