#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wgs/generators.hpp"
#include "wgs/graph.hpp"
#include "wgs/operators.hpp"

namespace wgs {

struct SpectralDensity {
  std::vector<double> grid;
  std::vector<double> density;
  /// Gaussian smoothing width; 0 for pointwise (unsmoothed) densities.
  double bandwidth = 0.0;
  std::string method;
  /// Trapezoid integral of the density over the grid.
  double normalization = 0.0;
  std::optional<std::pair<double, double>> support;
  std::map<std::string, std::string> metadata;

  void update_normalization();
};

std::vector<double> linear_grid(double lo, double hi, std::size_t points);
double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

/// Ascending eigenvalues of H.
Eigen::VectorXd eigen_spectrum(const WeightedGraph& g, std::size_t cap = default_dense_cap);

/// sum_i w_i phi_sigma(lambda - nodes_i) on the grid.
SpectralDensity smoothed_measure(const std::vector<double>& nodes, const std::vector<double>& weights,
                                 const std::vector<double>& grid, double sigma);
/// Equal-weight smoothed eigenvalue histogram.
SpectralDensity empirical_dos(const Eigen::VectorXd& eigenvalues, const std::vector<double>& grid, double sigma);

/// Numerical convolution of a sampled density with a Gaussian of width sigma;
/// the result carries bandwidth sqrt(old^2 + sigma^2).
SpectralDensity gaussian_smooth(const SpectralDensity& d, double sigma, const std::vector<double>& grid);

struct KpmOptions {
  /// Exact trace over basis vectors up to this many vertices, stochastic above.
  std::size_t exact_trace_limit = 8192;
  int random_vectors = 64;
  std::uint64_t seed = 0;
  bool jackson = false;
  int block = 64;
};

/// mu_k = (1/N) tr T_k(2H/L - 1), k < num_moments.
std::vector<double> kpm_moments(const WeightedGraph& g, int num_moments, double lambda_max,
                                const KpmOptions& options = {});

/// Gaussian-smoothed DOS of H from Chebyshev moments; the smoothing kernel is
/// expanded in the same basis, so the result approximates the smoothed
/// eigenvalue histogram.
SpectralDensity kpm_dos(const WeightedGraph& g, int num_moments, const std::vector<double>& grid, double bandwidth,
                        const KpmOptions& options = {});

/// Density of lambda(theta) = sum_i (2 - 2 cos theta_i) at one energy.
double lattice_dos_value(int d, double lambda);
/// Pointwise density on the grid, support [0, 4d].
SpectralDensity lattice_dos_exact(int d, const std::vector<double>& grid);
/// Gaussian-smoothed lattice density via
/// (1/pi) int_0^inf cos((2d - lambda) t) J0(2t)^d exp(-sigma^2 t^2 / 2) dt.
SpectralDensity lattice_dos_smoothed(int d, const std::vector<double>& grid, double sigma);

struct TreeDos {
  SpectralDensity density;
  /// Band from the discriminant of the Green quadratic.
  std::pair<double, double> support;
  /// [2(k+1) - 2 sqrt k, 2(k+1) + 2 sqrt k], reported for comparison.
  std::pair<double, double> reference_interval;
  std::string convention;
};

/// Vertex spectral density of the (k+1)-regular tree Laplacian at z = lambda + i eta.
TreeDos regular_tree_dos(int k, const std::vector<double>& grid, double eta);

struct GreenOptions {
  double eta = 1e-3;
  double tol = 1e-12;
  int max_iter = 200000;
  int root_label = 1;
  /// Per-label child counts of the root; default row root_label of M.
  std::optional<std::vector<int>> root_children;
  /// Per-label degrees of non-root vertices; default sum_l M[k][l] + 1.
  std::optional<std::vector<double>> degrees;
};

/// Forward Green functions G_k(z) = (z - deg_k - sum_l M[k][l] G_l(z))^{-1}
/// of G = (z - H)^{-1}, plus the root value.
struct GreenFunctionTable {
  std::vector<Complex> z;
  std::vector<std::vector<Complex>> forward;
  std::vector<Complex> root;
  std::vector<double> residual;
  std::vector<int> iterations;
  std::string convention;

  /// -Im G_root / pi.
  SpectralDensity root_density() const;
};

GreenFunctionTable cone_tree_green(const SubstitutionMatrix& M, const std::vector<double>& grid,
                                   const GreenOptions& options = {});

/// Spectral measure of H at delta_x / ||delta_x||: Gauss nodes and weights
/// from `steps` Lanczos iterations with full reorthogonalization.
struct SpectralMeasure {
  std::vector<double> nodes;
  std::vector<double> weights;
};

SpectralMeasure vertex_spectral_measure(const WeightedGraph& g, Index x, int steps);

struct DistanceOptions {
  bool allow_resample = true;
};

/// L1 distance by the trapezoid rule after matching bandwidths to the larger
/// of the two and resampling onto the finer grid.
double dos_distance(const SpectralDensity& a, const SpectralDensity& b, const DistanceOptions& options = {});

}  // namespace wgs
