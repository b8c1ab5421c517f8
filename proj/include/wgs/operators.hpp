#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "wgs/graph.hpp"

namespace wgs {

using Complex = std::complex<double>;
/// Element of l^2(X, m).
using VertexFunction = Eigen::VectorXcd;

inline constexpr std::size_t default_dense_cap = 4096;

/// Function on ordered pairs, stored aligned with the graph's CSR edge order
/// (values[e] = alpha(source(e), target(e))). Element of l^2(X x X, b).
struct EdgeFunction {
  Eigen::VectorXcd values;
  bool antisymmetric = false;
};

/// df(x,y) = f(x) - f(y) on the support of b.
EdgeFunction differential(const WeightedGraph& g, const VertexFunction& f);

/// (d* alpha)(x) = (1/m(x)) sum_y b(x,y) alpha(x,y). Rejects alpha that is not
/// antisymmetric (tolerance 1e-12 of its largest entry).
VertexFunction codifferential(const WeightedGraph& g, const EdgeFunction& alpha);

/// Hf(x) = (1/m(x)) sum_y b(x,y)(f(x) - f(y)); bitwise equal to d*(df).
VertexFunction laplacian_apply(const WeightedGraph& g, const VertexFunction& f);
Eigen::VectorXd laplacian_apply(const WeightedGraph& g, const Eigen::VectorXd& f);
/// Column-wise H applied to a block of real vectors.
Eigen::MatrixXd laplacian_apply_block(const WeightedGraph& g, const Eigen::MatrixXd& f);
/// Column-wise S = M^{1/2} H M^{-1/2}, the symmetric form of H in l^2(X).
Eigen::MatrixXd symmetric_laplacian_apply_block(const WeightedGraph& g, const Eigen::MatrixXd& f);

/// <f,h>_m = sum_x f(x) conj(h(x)) m(x), ascending order.
Complex inner_m(const std::vector<double>& m, const VertexFunction& f, const VertexFunction& h);
Complex inner_m(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h);
double norm_m(const std::vector<double>& m, const VertexFunction& f);
double norm_m(const WeightedGraph& g, const VertexFunction& f);

/// <alpha,beta>_b = 1/2 sum_{x,y} alpha(x,y) conj(beta(x,y)) b(x,y).
Complex inner_b(const WeightedGraph& g, const EdgeFunction& alpha, const EdgeFunction& beta);

/// Q(f,h) = <df, dh>_b.
Complex quadratic_form(const WeightedGraph& g, const VertexFunction& f, const VertexFunction& h);

/// Action of an operator on l^2(X, m) together with the measure defining
/// its adjoint, and optionally the materialized matrix.
struct OperatorHandle {
  std::size_t size = 0;
  std::vector<double> measure;
  std::function<VertexFunction(const VertexFunction&)> apply;
  std::optional<Eigen::MatrixXd> matrix;
  bool self_adjoint = false;
};

/// Matrix-free handle for H.
OperatorHandle laplacian_operator(const WeightedGraph& g);
/// Dense handle for H; matrix(x,y) acts as (Hf)(x) = sum_y H(x,y) f(y).
OperatorHandle laplacian_matrix(const WeightedGraph& g, std::size_t cap = default_dense_cap);
Eigen::MatrixXd laplacian_dense(const WeightedGraph& g, std::size_t cap = default_dense_cap);

/// Largest |<Af,h>_m - <f,Ah>_m| / (|<Af,h>_m| + |<f,Ah>_m|) over `trials`
/// random pairs drawn from `seed`.
double self_adjointness_residual(const OperatorHandle& op, int trials, std::uint64_t seed);

/// Eigen-decomposition of H: H phi_i = lambda_i phi_i with phi_i orthonormal
/// in l^2(X, m). `sym_vectors` are the orthonormal eigenvectors of S.
struct DenseSpectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd sym_vectors;
  std::vector<double> measure;

  /// phi = M^{-1/2} V.
  Eigen::MatrixXd eigenvectors() const;
};

DenseSpectrum dense_spectrum(const WeightedGraph& g, bool vectors = true, std::size_t cap = default_dense_cap);

/// `i j value` lines for entries with |value| > drop.
void write_triplets(std::ostream& os, const Eigen::MatrixXd& a, double drop = 0.0);
void write_triplets(std::ostream& os, const Eigen::MatrixXcd& a, double drop = 0.0);

}  // namespace wgs
