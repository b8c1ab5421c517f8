#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wgs/graph.hpp"
#include "wgs/operators.hpp"

namespace wgs {

enum class HeatMethod { Auto, Dense, Chebyshev };

std::string to_string(HeatMethod method);
HeatMethod parse_heat_method(const std::string& text);

struct HeatOptions {
  HeatMethod method = HeatMethod::Auto;
  /// Sup-norm error target for the polynomial approximation of exp(-s lambda).
  double tol = 1e-10;
  std::size_t dense_cap = default_dense_cap;
  /// Columns per block when a kernel is built from heat_apply.
  int block = 64;
  int max_degree = 1 << 16;
};

/// P_s(x,y) with (e^{-sH} f)(x) = sum_y P_s(x,y) f(y) m(y).
struct HeatKernel {
  double s = 0.0;
  Eigen::MatrixXd P;
  std::vector<double> measure;
  HeatMethod method = HeatMethod::Dense;
  /// Bound on the sup-norm error of the scalar approximation (0 for dense).
  double accuracy = 0.0;

  double operator()(Index x, Index y) const { return P(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)); }
  Eigen::VectorXd diagonal() const { return P.diagonal(); }
  /// Matrix of e^{-sH} acting on coefficient vectors: P * diag(m).
  Eigen::MatrixXd operator_matrix() const;
};

/// Chebyshev expansion of exp(-s lambda) on [0, lambda_max].
struct ChebyshevSeries {
  double lambda_max = 0.0;
  std::vector<double> coefficients;
  double error_bound = 0.0;
};

ChebyshevSeries heat_chebyshev_series(double s, double lambda_max, double tol, int max_degree);

HeatKernel heat_kernel(const WeightedGraph& g, double s, const HeatOptions& options = {});
/// Kernel from a precomputed decomposition (exact spectral calculus).
HeatKernel heat_kernel(const DenseSpectrum& spectrum, double s);

/// P_s(x,x) for every x. Auto uses the dense route up to 1024 vertices and
/// the Chebyshev route beyond.
Eigen::VectorXd heat_diagonal(const WeightedGraph& g, double s, const HeatOptions& options = {});

/// e^{-sH} f. Auto is matrix-free (Chebyshev); Dense uses an eigen-decomposition.
VertexFunction heat_apply(const WeightedGraph& g, double s, const VertexFunction& f, const HeatOptions& options = {});
Eigen::MatrixXd heat_apply_block(const WeightedGraph& g, double s, const Eigen::MatrixXd& f,
                                 const HeatOptions& options = {});

/// Rows of d e^{-sH} on the edge support: G(e, z) = P_s(x,z) - P_s(y,z) for
/// ordered edge e = (x,y).
struct GradHeatKernel {
  double s = 0.0;
  Eigen::MatrixXd G;
  /// Per ordered edge: sum_z |G(e,z)|^2 m(z) and 2 P_2s(x,x) + 2 P_2s(y,y).
  Eigen::VectorXd row_norms;
  Eigen::VectorXd bounds;

  double min_slack() const;
};

/// Builds the gradient kernel and checks the edge bound on every stored edge;
/// throws BoundViolation when a row exceeds its bound by more than 1e-10.
GradHeatKernel grad_heat_kernel(const WeightedGraph& g, double s, const HeatOptions& options = {});
GradHeatKernel grad_heat_kernel(const WeightedGraph& g, const HeatKernel& ps, const HeatKernel& p2s);

/// ||sqrt(H) e^{-tH}|| on l^2(X,m); throws BoundViolation above (2et)^{-1/2}.
double sqrt_h_semigroup_norm(const WeightedGraph& g, double t, std::size_t cap = default_dense_cap);
double sqrt_h_semigroup_norm(const DenseSpectrum& spectrum, double t);

}  // namespace wgs
