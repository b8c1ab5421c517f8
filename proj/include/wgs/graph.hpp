#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wgs {

using Index = std::size_t;

/// One edge record (x, y, b(x,y)). Inputs may list either orientation.
struct Edge {
  Index x = 0;
  Index y = 0;
  double weight = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Finite weighted graph (X, b, m) with dense 0-based vertex indices.
///
/// Edge weights are stored once per ordered pair in CSR form (rows sorted by
/// target), so every edge appears as (x,y) and (y,x) with identical weight.
/// Pairs with b(x,y) = 0 are not stored. Immutable after construction apart
/// from metadata annotations.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  /// Validates and symmetrizes `edges`. Duplicates of a pair in either
  /// orientation must agree exactly; zero-weight records are dropped.
  static WeightedGraph from_edges(std::span<const Edge> edges, std::vector<double> measure,
                                  std::vector<std::string> labels = {});

  std::size_t vertex_count() const noexcept { return measure_.size(); }
  std::size_t edge_count() const noexcept { return targets_.size() / 2; }
  std::size_t ordered_edge_count() const noexcept { return targets_.size(); }

  const std::vector<double>& measure() const noexcept { return measure_; }
  double measure(Index x) const { return measure_[x]; }

  /// CSR view: ordered edges of vertex x occupy [offset(x), offset(x+1)).
  std::size_t offset(Index x) const { return offsets_[x]; }
  Index target(std::size_t e) const { return targets_[e]; }
  double edge_weight(std::size_t e) const { return weights_[e]; }
  /// Index of the ordered edge (y,x) for the ordered edge e = (x,y).
  std::size_t reverse(std::size_t e) const { return reverse_[e]; }
  /// Source vertex of ordered edge e (binary search over offsets).
  Index source(std::size_t e) const;

  std::span<const Index> neighbors(Index x) const;
  std::span<const double> neighbor_weights(Index x) const;

  /// b(x,y), zero for non-adjacent pairs and for x == y.
  double weight(Index x, Index y) const;
  /// Ordered-edge index of (x,y), or nullopt when b(x,y) = 0.
  std::optional<std::size_t> find_edge(Index x, Index y) const;

  /// Weighted degree sum_y b(x,y).
  double degree(Index x) const;

  /// Unordered edges with x < y in ascending (x, y) order.
  std::vector<Edge> edges() const;

  /// b takes values in {0,1} and m is identically 1.
  bool has_standard_weights() const;

  /// max_x (2/m(x)) sum_y b(x,y), an upper bound for the spectrum of H.
  double gershgorin_bound() const;

  std::size_t component_count() const;
  /// Component id per vertex, numbered in order of first appearance.
  std::vector<std::size_t> component_ids() const;

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::map<std::string, std::string>& metadata() const noexcept { return metadata_; }
  void set_metadata(const std::string& key, const std::string& value) { metadata_[key] = value; }

  friend bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
    return a.measure_ == b.measure_ && a.offsets_ == b.offsets_ && a.targets_ == b.targets_ &&
           a.weights_ == b.weights_ && a.labels_ == b.labels_;
  }

 private:
  std::vector<double> measure_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Index> targets_;
  std::vector<double> weights_;
  std::vector<std::size_t> reverse_;
  std::vector<std::string> labels_;
  std::map<std::string, std::string> metadata_;
};

/// Partition of the vertex set into ordered, pairwise disjoint spheres
/// S_0, ..., S_R. Empty spheres are allowed and stay explicitly present.
class SphereDecomposition {
 public:
  SphereDecomposition() = default;
  SphereDecomposition(std::vector<std::vector<Index>> spheres, std::size_t vertex_count);

  std::size_t sphere_count() const noexcept { return spheres_.size(); }
  std::size_t vertex_count() const noexcept { return sphere_of_.size(); }
  const std::vector<Index>& sphere(std::size_t n) const { return spheres_[n]; }
  const std::vector<std::vector<Index>>& spheres() const noexcept { return spheres_; }
  std::size_t sphere_of(Index x) const { return sphere_of_[x]; }
  std::vector<std::size_t> sizes() const;

  friend bool operator==(const SphereDecomposition& a, const SphereDecomposition& b) {
    return a.spheres_ == b.spheres_;
  }

 private:
  std::vector<std::vector<Index>> spheres_;
  std::vector<std::size_t> sphere_of_;
};

/// Additive perturbation (beta, mu): b2 = b1 + beta, m2 = m1 + mu.
/// beta is stored once per unordered pair with x < y.
struct PerturbationSpec {
  std::size_t vertex_count = 0;
  std::vector<Edge> beta;
  std::vector<double> mu;
  std::optional<double> decay_exponent;
  std::optional<double> base_rate;
  std::uint64_t seed = 0;

  static PerturbationSpec zero(std::size_t vertex_count, std::uint64_t seed = 0);

  /// Checks storage invariants: x < y, unique pairs, indices and mu in range.
  void validate() const;

  friend bool operator==(const PerturbationSpec&, const PerturbationSpec&) = default;
};

struct Bounds {
  double lower = 1.0;
  double upper = 1.0;
};

/// Constants with lower * w2 <= w1 <= upper * w2. `b` is empty when an edge
/// changes support, i.e. b1 ~ b2 fails.
struct Equivalence {
  Bounds m;
  std::optional<Bounds> b;

  bool holds() const noexcept { return b.has_value(); }
};

/// Edge of the union of both supports, x < y.
struct PairEdge {
  Index x = 0;
  Index y = 0;
  double b1 = 0.0;
  double b2 = 0.0;
  /// b_{1,2} = b1/b2 where b2 != 0, else 1.
  double ratio = 1.0;
};

struct SupportChange {
  Index x = 0;
  Index y = 0;
  double b1 = 0.0;
  double b2 = 0.0;
};

/// Two weighted graphs on one vertex set with their distortion ratios
/// m_{1,2} = m1/m2 and b_{1,2}.
class GraphPair {
 public:
  GraphPair(WeightedGraph g1, WeightedGraph g2);

  const WeightedGraph& g1() const noexcept { return g1_; }
  const WeightedGraph& g2() const noexcept { return g2_; }
  const WeightedGraph& graph(int k) const { return k == 1 ? g1_ : g2_; }
  std::size_t vertex_count() const noexcept { return g1_.vertex_count(); }

  const std::vector<double>& ratio_m() const noexcept { return ratio_m_; }
  const std::vector<PairEdge>& edges() const noexcept { return edges_; }
  const std::vector<SupportChange>& support_changes() const noexcept { return support_changes_; }
  const Equivalence& equivalence() const noexcept { return equivalence_; }

  /// Human-readable list of support-changed edges, used in refusal messages.
  std::string support_change_summary(std::size_t max_listed = 8) const;

  /// Throws NotApplicable naming the offending edges when b1 ~ b2 fails.
  void require_equivalence(std::string_view what) const;

  GraphPair swapped() const { return GraphPair(g2_, g1_); }

 private:
  WeightedGraph g1_;
  WeightedGraph g2_;
  std::vector<double> ratio_m_;
  std::vector<PairEdge> edges_;
  std::vector<SupportChange> support_changes_;
  Equivalence equivalence_;
};

/// Applies `spec` to `g1`. Edges whose weight becomes exactly zero (or appears
/// from zero) are kept on the pair's support-change list.
GraphPair perturb(const WeightedGraph& g1, const PerturbationSpec& spec);

}  // namespace wgs
