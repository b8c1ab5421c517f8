#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "wgs/graph.hpp"
#include "wgs/operators.hpp"

namespace testsupport {

/// Thin wrapper so generators read uniformly; std::mt19937_64 underneath.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(eng_); }
  double normal() { return std::normal_distribution<double>()(eng_); }
  bool coin(double p) { return uniform(0.0, 1.0) < p; }

 private:
  std::mt19937_64 eng_;
};

struct GraphShape {
  std::size_t min_n = 2;
  std::size_t max_n = 40;
  double extra_edge_prob = 0.1;
  bool connected = true;
  bool standard = false;
};

/// Random spanning tree plus extra edges; weights in [0.2, 2], measure in [0.3, 3].
inline wgs::WeightedGraph random_graph(Rng& rng, const GraphShape& shape = {}) {
  const std::size_t n = shape.min_n + rng.index(shape.max_n - shape.min_n + 1);
  std::vector<wgs::Edge> edges;
  auto weight = [&] { return shape.standard ? 1.0 : rng.uniform(0.2, 2.0); };
  std::vector<std::vector<char>> used(n, std::vector<char>(n, 0));
  if (shape.connected) {
    for (std::size_t x = 1; x < n; ++x) {
      const std::size_t y = rng.index(x);
      edges.push_back({x, y, weight()});
      used[x][y] = used[y][x] = 1;
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      if (!used[x][y] && rng.coin(shape.extra_edge_prob)) edges.push_back({x, y, weight()});
    }
  }
  std::vector<double> m(n);
  for (auto& v : m) v = shape.standard ? 1.0 : rng.uniform(0.3, 3.0);
  return wgs::WeightedGraph::from_edges(edges, m);
}

/// Same support, b and m scaled by factors in [1 - amp, 1 + amp].
inline wgs::GraphPair random_admissible_pair(Rng& rng, const GraphShape& shape = {}, double amp = 0.3) {
  const wgs::WeightedGraph g1 = random_graph(rng, shape);
  std::vector<wgs::Edge> edges = g1.edges();
  for (auto& e : edges) e.weight *= rng.uniform(1.0 - amp, 1.0 + amp);
  std::vector<double> m = g1.measure();
  for (auto& v : m) v *= rng.uniform(1.0 - amp, 1.0 + amp);
  return wgs::GraphPair(g1, wgs::WeightedGraph::from_edges(edges, m));
}

inline wgs::VertexFunction random_vector(Rng& rng, std::size_t n) {
  wgs::VertexFunction f(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = wgs::Complex(rng.normal(), rng.normal());
  return f;
}

inline wgs::WeightedGraph two_vertex(double b = 1.0, double m0 = 1.0, double m1 = 1.0) {
  const std::vector<wgs::Edge> e{{0, 1, b}};
  return wgs::WeightedGraph::from_edges(e, {m0, m1});
}

inline wgs::WeightedGraph path_graph(std::size_t n) {
  std::vector<wgs::Edge> e;
  for (std::size_t x = 0; x + 1 < n; ++x) e.push_back({x, x + 1, 1.0});
  return wgs::WeightedGraph::from_edges(e, std::vector<double>(n, 1.0));
}

/// exp(A) by scaling and squaring with a Taylor series; test-only oracle.
inline Eigen::MatrixXd expm_taylor(const Eigen::MatrixXd& A) {
  int k = 0;
  double norm = A.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.5) {
    norm /= 2.0;
    ++k;
  }
  const Eigen::MatrixXd B = A / std::pow(2.0, k);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(A.rows(), A.cols());
  Eigen::MatrixXd sum = term;
  for (int j = 1; j < 30; ++j) {
    term = term * B / j;
    sum += term;
  }
  for (int i = 0; i < k; ++i) sum = sum * sum;
  return sum;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace testsupport
