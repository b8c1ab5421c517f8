#include "wgs/generators.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>

#include "wgs/error.hpp"

namespace wgs {

namespace {

constexpr std::size_t max_generated_vertices = 20'000'000;

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t stream, std::uint64_t sphere, std::uint64_t local) const {
  std::uint64_t h = splitmix(seed_);
  h = splitmix(h ^ stream);
  h = splitmix(h ^ sphere);
  return splitmix(h ^ local);
}

double CounterRng::uniform(std::uint64_t stream, std::uint64_t sphere, std::uint64_t local) const {
  return static_cast<double>(bits(stream, sphere, local) >> 11) * 0x1.0p-53;
}

GeneratedGraph lattice_ball(int d, int radius) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "lattice dimension must be >= 1");
  if (radius < 0) throw Error(ErrorCode::InvalidArgument, "radius must be >= 0");
  const std::size_t side = 2 * static_cast<std::size_t>(radius) + 1;
  std::size_t n = 1;
  for (int i = 0; i < d; ++i) {
    if (n > max_generated_vertices / side) throw Error(ErrorCode::InvalidArgument, "lattice ball too large");
    n *= side;
  }
  // Index = sum_i (c_i + R) side^(d-1-i): lexicographic in coordinates.
  std::vector<std::size_t> stride(d, 1);
  for (int i = d - 2; i >= 0; --i) stride[i] = stride[i + 1] * side;

  std::vector<Edge> edges;
  edges.reserve(n * d);
  std::vector<std::vector<Index>> spheres(radius + 1);
  std::vector<std::string> labels(n);
  std::vector<int> c(d);
  for (std::size_t x = 0; x < n; ++x) {
    std::size_t rest = x;
    int sup = 0;
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < d; ++i) {
      c[i] = static_cast<int>(rest / stride[i]) - radius;
      rest %= stride[i];
      sup = std::max(sup, std::abs(c[i]));
      os << (i ? "," : "") << c[i];
      if (c[i] < radius) edges.push_back({x, x + stride[i], 1.0});
    }
    os << ')';
    labels[x] = os.str();
    spheres[sup].push_back(x);
  }
  GeneratedGraph out{WeightedGraph::from_edges(edges, std::vector<double>(n, 1.0), std::move(labels)),
                     SphereDecomposition(std::move(spheres), n),
                     {}};
  out.graph.set_metadata("family", "lattice");
  out.graph.set_metadata("dimension", std::to_string(d));
  out.graph.set_metadata("radius", std::to_string(radius));
  out.graph.set_metadata("spheres", "sup-norm distance spheres");
  return out;
}

GeneratedGraph regular_tree_ball(int k, int depth) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "regular tree branching must be >= 2");
  if (depth < 0) throw Error(ErrorCode::InvalidArgument, "depth must be >= 0");
  GeneratedGraph out = cone_tree_ball({{k}}, 1, depth);
  out.graph = WeightedGraph::from_edges(out.graph.edges(), out.graph.measure());
  out.graph.set_metadata("family", "regular-tree");
  out.graph.set_metadata("branching", std::to_string(k));
  out.graph.set_metadata("depth", std::to_string(depth));
  out.graph.set_metadata("degree_convention", "root has k children, non-root degree k+1");
  out.warnings.clear();
  return out;
}

void validate_substitution_matrix(const SubstitutionMatrix& M) {
  if (M.empty()) throw Error(ErrorCode::InvalidArgument, "substitution matrix is empty");
  for (const auto& row : M) {
    if (row.size() != M.size()) throw Error(ErrorCode::DimensionMismatch, "substitution matrix must be square");
    for (int v : row) {
      if (v < 0) throw Error(ErrorCode::InvalidArgument, "substitution matrix entries must be >= 0");
    }
  }
}

double perron_eigenvalue(const SubstitutionMatrix& M, double tol, int max_iter) {
  validate_substitution_matrix(M);
  const std::size_t n = M.size();
  std::vector<double> v(n, 1.0 / static_cast<double>(n));
  std::vector<double> w(n);
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = v[i];
      for (std::size_t j = 0; j < n; ++j) w[i] += M[i][j] * v[j];
    }
    const double norm = std::accumulate(w.begin(), w.end(), 0.0);
    if (norm == 0.0) return 0.0;
    for (auto& x : w) x /= norm;
    const double next = norm - 1.0;
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(w[i] - v[i]));
    v.swap(w);
    if (std::abs(next - lambda) <= tol * std::max(1.0, next) && diff <= tol) return next;
    lambda = next;
  }
  return lambda;
}

GeneratedGraph cone_tree_ball(const SubstitutionMatrix& M, int root_label, int depth,
                              const std::optional<std::vector<int>>& root_children) {
  validate_substitution_matrix(M);
  const int labels_n = static_cast<int>(M.size());
  if (root_label < 1 || root_label > labels_n) {
    throw Error(ErrorCode::InvalidLabel,
                "root label " + std::to_string(root_label) + " not in {1.." + std::to_string(labels_n) + "}");
  }
  if (depth < 0) throw Error(ErrorCode::InvalidArgument, "depth must be >= 0");
  if (root_children) {
    if (root_children->size() != M.size()) {
      throw Error(ErrorCode::DimensionMismatch, "root child counts must have one entry per label");
    }
    for (int v : *root_children) {
      if (v < 0) throw Error(ErrorCode::InvalidArgument, "root child counts must be >= 0");
    }
  }

  GeneratedGraph out;
  for (int k = 0; k < labels_n; ++k) {
    if (M[k][k] <= 0) {
      out.warnings.push_back("substitution matrix has zero diagonal entry for label " + std::to_string(k + 1));
      break;
    }
  }
  // Irreducibility: every label reaches every other through positive entries.
  for (int s = 0; s < labels_n; ++s) {
    std::vector<bool> seen(labels_n, false);
    std::vector<int> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      for (int b = 0; b < labels_n; ++b) {
        if (M[a][b] > 0 && !seen[b]) {
          seen[b] = true;
          stack.push_back(b);
        }
      }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
      out.warnings.push_back("substitution matrix is not irreducible");
      break;
    }
  }

  std::vector<int> label{root_label};
  std::vector<Edge> edges;
  std::vector<std::vector<Index>> spheres{{0}};
  for (int n = 1; n <= depth; ++n) {
    std::vector<Index> next;
    for (Index parent : spheres.back()) {
      const int pl = label[parent] - 1;
      for (int l = 0; l < labels_n; ++l) {
        const int count = (parent == 0 && root_children) ? (*root_children)[l] : M[pl][l];
        for (int c = 0; c < count; ++c) {
          const Index child = label.size();
          if (child >= max_generated_vertices) throw Error(ErrorCode::InvalidArgument, "cone tree ball too large");
          label.push_back(l + 1);
          edges.push_back({parent, child, 1.0});
          next.push_back(child);
        }
      }
    }
    spheres.push_back(std::move(next));
  }
  const std::size_t n = label.size();
  std::vector<std::string> tags(n);
  for (std::size_t x = 0; x < n; ++x) tags[x] = std::to_string(label[x]);

  out.graph = WeightedGraph::from_edges(edges, std::vector<double>(n, 1.0), std::move(tags));
  out.spheres = SphereDecomposition(std::move(spheres), n);
  std::ostringstream ms;
  for (int i = 0; i < labels_n; ++i) {
    ms << (i ? ";" : "");
    for (int j = 0; j < labels_n; ++j) ms << (j ? "," : "") << M[i][j];
  }
  out.graph.set_metadata("family", "cone-tree");
  out.graph.set_metadata("matrix", ms.str());
  out.graph.set_metadata("root_label", std::to_string(root_label));
  out.graph.set_metadata("depth", std::to_string(depth));
  std::ostringstream gs;
  gs.precision(17);
  gs << perron_eigenvalue(M);
  out.graph.set_metadata("growth_rate", gs.str());
  out.graph.set_metadata("degree_convention", "label-k vertex has sum_l M[k][l] children plus one parent");
  return out;
}

RateFunction power_rate(double base, double exponent) {
  return [base, exponent](std::size_t n) {
    return base * std::pow(static_cast<double>(std::max<std::size_t>(n, 1)), -exponent);
  };
}

PerturbationSpec decay_perturbation(const WeightedGraph& g, const SphereDecomposition& spheres,
                                    const RateFunction& rate, std::uint64_t seed) {
  const std::size_t n = g.vertex_count();
  if (spheres.vertex_count() != n) {
    throw Error(ErrorCode::DimensionMismatch, "sphere decomposition does not match the graph");
  }
  const std::size_t R = spheres.sphere_count();
  std::vector<double> r(R);
  for (std::size_t k = 0; k < R; ++k) {
    r[k] = rate(k);
    if (!(r[k] >= 0.0) || !std::isfinite(r[k])) {
      throw Error(ErrorCode::InvalidArgument, "rate at sphere " + std::to_string(k) + " is negative or not finite");
    }
  }
  const CounterRng rng(seed);
  enum : std::uint64_t { mu_size = 1, mu_sign = 2, beta_size = 3, beta_sign = 4 };

  PerturbationSpec spec = PerturbationSpec::zero(n, seed);
  for (std::size_t k = 0; k < R; ++k) {
    const auto& S = spheres.sphere(k);
    for (std::size_t i = 0; i < S.size(); ++i) {
      const Index x = S[i];
      const double mag = (0.5 + rng.uniform(mu_size, k, i)) * r[k];
      double v = rng.uniform(mu_sign, k, i) < 0.5 ? -mag : mag;
      if (g.measure(x) + v <= 0.25 * g.measure(x)) v = mag;
      spec.mu[x] = v;
    }
  }

  // beta: one value per existing edge, keyed by the lower sphere of its ends.
  const auto edges = g.edges();
  std::vector<double> mag(edges.size());
  std::vector<std::size_t> local(edges.size());
  std::vector<std::size_t> counter(R, 0);
  std::vector<double> target(R);
  for (std::size_t k = 0; k < R; ++k) target[k] = static_cast<double>(spheres.sphere(k).size()) * r[k];
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const std::size_t a = spheres.sphere_of(edges[e].x);
    const std::size_t b = spheres.sphere_of(edges[e].y);
    const std::size_t lo = std::min(a, b);
    local[e] = counter[lo]++;
    mag[e] = (0.5 + rng.uniform(beta_size, lo, local[e])) * std::min(r[a], r[b]);
  }
  std::vector<double> sums(R);
  for (int pass = 0; pass < 60; ++pass) {
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      sums[spheres.sphere_of(edges[e].x)] += mag[e];
      sums[spheres.sphere_of(edges[e].y)] += mag[e];
    }
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const std::size_t a = spheres.sphere_of(edges[e].x);
      const std::size_t b = spheres.sphere_of(edges[e].y);
      if (target[a] == 0.0 || target[b] == 0.0 || mag[e] == 0.0) {
        mag[e] = 0.0;
        continue;
      }
      mag[e] /= std::sqrt((sums[a] / target[a]) * (sums[b] / target[b]));
    }
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (mag[e] == 0.0) continue;
    const std::size_t lo = std::min(spheres.sphere_of(edges[e].x), spheres.sphere_of(edges[e].y));
    double v = mag[e];
    if (rng.uniform(beta_sign, lo, local[e]) < 0.5 && v <= 0.5 * edges[e].weight) v = -v;
    spec.beta.push_back({edges[e].x, edges[e].y, v});
  }
  return spec;
}

}  // namespace wgs
