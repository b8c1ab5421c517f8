#include "wgs/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <tuple>

#include "wgs/error.hpp"

namespace wgs {

namespace {

std::string pair_name(Index x, Index y) {
  std::ostringstream os;
  os << "(" << x << "," << y << ")";
  return os.str();
}

void check_measure(const std::vector<double>& measure, std::string_view which) {
  for (std::size_t x = 0; x < measure.size(); ++x) {
    if (!(measure[x] > 0.0) || !std::isfinite(measure[x])) {
      std::ostringstream os;
      os << which << "(" << x << ") = " << measure[x] << " is not strictly positive";
      throw Error(ErrorCode::NonPositiveMeasure, os.str());
    }
  }
}

}  // namespace

WeightedGraph WeightedGraph::from_edges(std::span<const Edge> edges, std::vector<double> measure,
                                        std::vector<std::string> labels) {
  const std::size_t n = measure.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "graph needs at least one vertex");
  check_measure(measure, "m");
  if (!labels.empty() && labels.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "label count differs from vertex count");
  }

  std::vector<Edge> normalized;
  normalized.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.x >= n || e.y >= n) {
      throw Error(ErrorCode::IndexOutOfRange, "edge " + pair_name(e.x, e.y) + " outside vertex range");
    }
    if (!std::isfinite(e.weight) || e.weight < 0.0) {
      throw Error(ErrorCode::NegativeEdgeWeight, "edge " + pair_name(e.x, e.y) + " has invalid weight");
    }
    if (e.x == e.y) {
      if (e.weight != 0.0) throw Error(ErrorCode::SelfLoop, "b(x,x) != 0 at x = " + std::to_string(e.x));
      continue;
    }
    normalized.push_back({std::min(e.x, e.y), std::max(e.x, e.y), e.weight});
  }
  std::stable_sort(normalized.begin(), normalized.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.x, a.y) < std::tie(b.x, b.y);
  });
  std::vector<Edge> unique;
  for (const Edge& e : normalized) {
    if (!unique.empty() && unique.back().x == e.x && unique.back().y == e.y) {
      if (unique.back().weight != e.weight) {
        throw Error(ErrorCode::NonSymmetricInput, "conflicting weights for pair " + pair_name(e.x, e.y));
      }
      continue;
    }
    unique.push_back(e);
  }
  std::erase_if(unique, [](const Edge& e) { return e.weight == 0.0; });

  WeightedGraph g;
  g.measure_ = std::move(measure);
  g.labels_ = std::move(labels);
  g.offsets_.assign(n + 1, 0);
  for (const Edge& e : unique) {
    ++g.offsets_[e.x + 1];
    ++g.offsets_[e.y + 1];
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  g.targets_.resize(2 * unique.size());
  g.weights_.resize(2 * unique.size());
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const Edge& e : unique) {
    g.targets_[fill[e.x]] = e.y;
    g.weights_[fill[e.x]++] = e.weight;
    g.targets_[fill[e.y]] = e.x;
    g.weights_[fill[e.y]++] = e.weight;
  }
  for (Index x = 0; x < n; ++x) {
    const std::size_t lo = g.offsets_[x];
    const std::size_t hi = g.offsets_[x + 1];
    std::vector<std::size_t> order(hi - lo);
    std::iota(order.begin(), order.end(), lo);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return g.targets_[a] < g.targets_[b]; });
    std::vector<Index> t(order.size());
    std::vector<double> w(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      t[i] = g.targets_[order[i]];
      w[i] = g.weights_[order[i]];
    }
    std::copy(t.begin(), t.end(), g.targets_.begin() + static_cast<std::ptrdiff_t>(lo));
    std::copy(w.begin(), w.end(), g.weights_.begin() + static_cast<std::ptrdiff_t>(lo));
  }
  g.reverse_.resize(g.targets_.size());
  for (Index x = 0; x < n; ++x) {
    for (std::size_t e = g.offsets_[x]; e < g.offsets_[x + 1]; ++e) {
      g.reverse_[e] = *g.find_edge(g.targets_[e], x);
    }
  }
  return g;
}

Index WeightedGraph::source(std::size_t e) const {
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), e);
  return static_cast<Index>(std::distance(offsets_.begin(), it) - 1);
}

std::span<const Index> WeightedGraph::neighbors(Index x) const {
  return {targets_.data() + offsets_[x], offsets_[x + 1] - offsets_[x]};
}

std::span<const double> WeightedGraph::neighbor_weights(Index x) const {
  return {weights_.data() + offsets_[x], offsets_[x + 1] - offsets_[x]};
}

std::optional<std::size_t> WeightedGraph::find_edge(Index x, Index y) const {
  if (x >= vertex_count() || y >= vertex_count()) return std::nullopt;
  const auto first = targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[x]);
  const auto last = targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[x + 1]);
  const auto it = std::lower_bound(first, last, y);
  if (it == last || *it != y) return std::nullopt;
  return static_cast<std::size_t>(std::distance(targets_.begin(), it));
}

double WeightedGraph::weight(Index x, Index y) const {
  const auto e = find_edge(x, y);
  return e ? weights_[*e] : 0.0;
}

double WeightedGraph::degree(Index x) const {
  double sum = 0.0;
  for (std::size_t e = offsets_[x]; e < offsets_[x + 1]; ++e) sum += weights_[e];
  return sum;
}

std::vector<Edge> WeightedGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (Index x = 0; x < vertex_count(); ++x) {
    for (std::size_t e = offsets_[x]; e < offsets_[x + 1]; ++e) {
      if (x < targets_[e]) out.push_back({x, targets_[e], weights_[e]});
    }
  }
  return out;
}

bool WeightedGraph::has_standard_weights() const {
  return std::all_of(measure_.begin(), measure_.end(), [](double v) { return v == 1.0; }) &&
         std::all_of(weights_.begin(), weights_.end(), [](double v) { return v == 1.0; });
}

double WeightedGraph::gershgorin_bound() const {
  double bound = 0.0;
  for (Index x = 0; x < vertex_count(); ++x) bound = std::max(bound, 2.0 * degree(x) / measure_[x]);
  return bound;
}

std::vector<std::size_t> WeightedGraph::component_ids() const {
  constexpr auto unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> id(vertex_count(), unset);
  std::size_t next = 0;
  std::vector<Index> stack;
  for (Index start = 0; start < vertex_count(); ++start) {
    if (id[start] != unset) continue;
    id[start] = next;
    stack.push_back(start);
    while (!stack.empty()) {
      const Index x = stack.back();
      stack.pop_back();
      for (Index y : neighbors(x)) {
        if (id[y] == unset) {
          id[y] = next;
          stack.push_back(y);
        }
      }
    }
    ++next;
  }
  return id;
}

std::size_t WeightedGraph::component_count() const {
  const auto ids = component_ids();
  return ids.empty() ? 0 : *std::max_element(ids.begin(), ids.end()) + 1;
}

SphereDecomposition::SphereDecomposition(std::vector<std::vector<Index>> spheres, std::size_t vertex_count)
    : spheres_(std::move(spheres)) {
  constexpr auto unset = static_cast<std::size_t>(-1);
  sphere_of_.assign(vertex_count, unset);
  for (std::size_t n = 0; n < spheres_.size(); ++n) {
    for (Index x : spheres_[n]) {
      if (x >= vertex_count) {
        throw Error(ErrorCode::IndexOutOfRange, "sphere " + std::to_string(n) + " lists vertex " +
                                                    std::to_string(x) + " outside the graph");
      }
      if (sphere_of_[x] != unset) {
        throw Error(ErrorCode::InvalidArgument, "vertex " + std::to_string(x) + " lies in spheres " +
                                                    std::to_string(sphere_of_[x]) + " and " + std::to_string(n));
      }
      sphere_of_[x] = n;
    }
  }
  for (Index x = 0; x < vertex_count; ++x) {
    if (sphere_of_[x] == unset) {
      throw Error(ErrorCode::InvalidArgument, "vertex " + std::to_string(x) + " is not covered by any sphere");
    }
  }
}

std::vector<std::size_t> SphereDecomposition::sizes() const {
  std::vector<std::size_t> out;
  out.reserve(spheres_.size());
  for (const auto& s : spheres_) out.push_back(s.size());
  return out;
}

PerturbationSpec PerturbationSpec::zero(std::size_t vertex_count, std::uint64_t seed) {
  PerturbationSpec spec;
  spec.vertex_count = vertex_count;
  spec.mu.assign(vertex_count, 0.0);
  spec.seed = seed;
  return spec;
}

void PerturbationSpec::validate() const {
  if (mu.size() != vertex_count) {
    throw Error(ErrorCode::DimensionMismatch, "mu has " + std::to_string(mu.size()) + " entries for " +
                                                  std::to_string(vertex_count) + " vertices");
  }
  for (std::size_t i = 0; i < beta.size(); ++i) {
    const Edge& e = beta[i];
    if (e.x >= vertex_count || e.y >= vertex_count) {
      throw Error(ErrorCode::IndexOutOfRange, "beta entry " + pair_name(e.x, e.y) + " outside vertex range");
    }
    if (e.x == e.y) throw Error(ErrorCode::SelfLoop, "beta(x,x) != 0 at x = " + std::to_string(e.x));
    if (e.x > e.y) throw Error(ErrorCode::InvalidArgument, "beta entries must be stored with x < y");
    if (i > 0 && std::tie(beta[i - 1].x, beta[i - 1].y) >= std::tie(e.x, e.y)) {
      throw Error(ErrorCode::NonSymmetricInput, "beta entries must be unique and ascending near " + pair_name(e.x, e.y));
    }
    if (!std::isfinite(e.weight)) throw Error(ErrorCode::InvalidArgument, "beta value not finite");
  }
  for (double v : mu) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "mu value not finite");
  }
}

GraphPair::GraphPair(WeightedGraph g1, WeightedGraph g2) : g1_(std::move(g1)), g2_(std::move(g2)) {
  const std::size_t n = g1_.vertex_count();
  if (g2_.vertex_count() != n) {
    throw Error(ErrorCode::DimensionMismatch, "graphs of a pair must share the vertex set");
  }
  ratio_m_.resize(n);
  equivalence_.m = {g1_.measure(0) / g2_.measure(0), g1_.measure(0) / g2_.measure(0)};
  for (Index x = 0; x < n; ++x) {
    ratio_m_[x] = g1_.measure(x) / g2_.measure(x);
    equivalence_.m.lower = std::min(equivalence_.m.lower, ratio_m_[x]);
    equivalence_.m.upper = std::max(equivalence_.m.upper, ratio_m_[x]);
  }

  const auto e1 = g1_.edges();
  const auto e2 = g2_.edges();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < e1.size() || j < e2.size()) {
    PairEdge pe;
    if (j == e2.size() || (i < e1.size() && std::tie(e1[i].x, e1[i].y) < std::tie(e2[j].x, e2[j].y))) {
      pe = {e1[i].x, e1[i].y, e1[i].weight, 0.0, 1.0};
      ++i;
    } else if (i == e1.size() || std::tie(e2[j].x, e2[j].y) < std::tie(e1[i].x, e1[i].y)) {
      pe = {e2[j].x, e2[j].y, 0.0, e2[j].weight, 0.0};
      ++j;
    } else {
      pe = {e1[i].x, e1[i].y, e1[i].weight, e2[j].weight, e1[i].weight / e2[j].weight};
      ++i;
      ++j;
    }
    edges_.push_back(pe);
  }

  Bounds b{1.0, 1.0};
  bool first = true;
  for (const PairEdge& pe : edges_) {
    if (pe.b1 > 0.0 && pe.b2 > 0.0) {
      b.lower = first ? pe.ratio : std::min(b.lower, pe.ratio);
      b.upper = first ? pe.ratio : std::max(b.upper, pe.ratio);
      first = false;
    } else {
      support_changes_.push_back({pe.x, pe.y, pe.b1, pe.b2});
    }
  }
  if (support_changes_.empty()) equivalence_.b = b;
}

std::string GraphPair::support_change_summary(std::size_t max_listed) const {
  std::ostringstream os;
  for (std::size_t i = 0; i < support_changes_.size() && i < max_listed; ++i) {
    const auto& c = support_changes_[i];
    if (i > 0) os << ", ";
    os << pair_name(c.x, c.y) << " b1=" << c.b1 << " b2=" << c.b2;
  }
  if (support_changes_.size() > max_listed) os << ", ... (" << support_changes_.size() << " total)";
  return os.str();
}

void GraphPair::require_equivalence(std::string_view what) const {
  if (!support_changes_.empty()) {
    throw Error(ErrorCode::NotApplicable, std::string(what) + " requires b1 ~ b2; support changes at " +
                                              support_change_summary());
  }
}

GraphPair perturb(const WeightedGraph& g1, const PerturbationSpec& spec) {
  spec.validate();
  const std::size_t n = g1.vertex_count();
  if (spec.vertex_count != n) {
    throw Error(ErrorCode::DimensionMismatch, "perturbation is for " + std::to_string(spec.vertex_count) +
                                                  " vertices, graph has " + std::to_string(n));
  }
  std::vector<double> m2(n);
  for (Index x = 0; x < n; ++x) {
    m2[x] = g1.measure(x) + spec.mu[x];
    if (!(m2[x] > 0.0)) {
      std::ostringstream os;
      os << "m2(" << x << ") = " << g1.measure(x) << " + " << spec.mu[x] << " is not strictly positive";
      throw Error(ErrorCode::NonPositiveMeasure, os.str());
    }
  }

  const auto e1 = g1.edges();
  std::vector<Edge> e2;
  e2.reserve(e1.size() + spec.beta.size());
  std::size_t i = 0;
  std::size_t j = 0;
  auto push = [&](Index x, Index y, double w) {
    if (w < 0.0) {
      std::ostringstream os;
      os << "b2" << pair_name(x, y) << " = " << w << " < 0";
      throw Error(ErrorCode::NegativeEdgeWeight, os.str());
    }
    e2.push_back({x, y, w});
  };
  while (i < e1.size() || j < spec.beta.size()) {
    const auto& b = spec.beta;
    if (j == b.size() || (i < e1.size() && std::tie(e1[i].x, e1[i].y) < std::tie(b[j].x, b[j].y))) {
      push(e1[i].x, e1[i].y, e1[i].weight);
      ++i;
    } else if (i == e1.size() || std::tie(b[j].x, b[j].y) < std::tie(e1[i].x, e1[i].y)) {
      push(b[j].x, b[j].y, b[j].weight);
      ++j;
    } else {
      push(e1[i].x, e1[i].y, e1[i].weight + b[j].weight);
      ++i;
      ++j;
    }
  }
  WeightedGraph g2 = WeightedGraph::from_edges(e2, std::move(m2), g1.labels());
  for (const auto& [k, v] : g1.metadata()) g2.set_metadata(k, v);
  return GraphPair(g1, std::move(g2));
}

}  // namespace wgs
