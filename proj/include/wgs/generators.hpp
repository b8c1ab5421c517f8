#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wgs/graph.hpp"

namespace wgs {

struct GeneratedGraph {
  WeightedGraph graph;
  SphereDecomposition spheres;
  std::vector<std::string> warnings;
};

/// Sup-norm ball of Z^d with standard weights. Vertices are ordered
/// lexicographically by coordinate, labels hold the coordinates.
GeneratedGraph lattice_ball(int d, int radius);

/// Rooted tree: the root has k children and every other vertex k forward
/// children, so #S_n = k^n and interior degree is k+1.
GeneratedGraph regular_tree_ball(int k, int depth);

using SubstitutionMatrix = std::vector<std::vector<int>>;

/// Tree of finite cone type: a vertex of label k has M[k-1][l-1] forward
/// children of label l. Labels are 1-based. `root_children` overrides the
/// root's child counts per label (used e.g. for the full (k+1)-regular tree).
/// Vertices are numbered breadth first.
GeneratedGraph cone_tree_ball(const SubstitutionMatrix& M, int root_label, int depth,
                              const std::optional<std::vector<int>>& root_children = std::nullopt);

/// Perron eigenvalue of a nonnegative matrix by power iteration on M + I.
double perron_eigenvalue(const SubstitutionMatrix& M, double tol = 1e-13, int max_iter = 100000);

void validate_substitution_matrix(const SubstitutionMatrix& M);

/// Stateless counter-based generator: every draw is a hash of its key.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t stream, std::uint64_t sphere, std::uint64_t local) const;
  /// Uniform in [0, 1) with 53 random bits.
  double uniform(std::uint64_t stream, std::uint64_t sphere, std::uint64_t local) const;

 private:
  std::uint64_t seed_;
};

using RateFunction = std::function<double(std::size_t)>;

/// rate(n) = base * max(n,1)^(-exponent).
RateFunction power_rate(double base, double exponent);

/// Random (beta, mu) whose sphere averages mu_n, beta_n track rate(n) within a
/// factor 2. mu is drawn per vertex, beta only on existing edges and balanced
/// across spheres by alternating rescaling. Deterministic in `seed`.
PerturbationSpec decay_perturbation(const WeightedGraph& g, const SphereDecomposition& spheres,
                                    const RateFunction& rate, std::uint64_t seed);

}  // namespace wgs
