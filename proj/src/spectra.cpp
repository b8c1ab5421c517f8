#include "wgs/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "wgs/error.hpp"
#include "wgs/graph_io.hpp"

namespace wgs {

namespace {

constexpr double pi = std::numbers::pi;

double gaussian(double x, double sigma) {
  return std::exp(-0.5 * (x / sigma) * (x / sigma)) / (sigma * std::sqrt(2.0 * pi));
}

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "energy grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw Error(ErrorCode::InvalidArgument, "energy grid must be strictly ascending");
  }
}

double interpolate(const std::vector<double>& x, const std::vector<double>& y, double t) {
  if (t < x.front() || t > x.back()) return 0.0;
  auto it = std::upper_bound(x.begin(), x.end(), t);
  if (it == x.end()) return y.back();
  const std::size_t i = static_cast<std::size_t>(it - x.begin());
  if (i == 0) return y.front();
  const double w = (t - x[i - 1]) / (x[i] - x[i - 1]);
  return (1.0 - w) * y[i - 1] + w * y[i];
}

// y = S x on a subset of rows, S = M^{1/2} H M^{-1/2}, row-major blocks.
using RowBlock = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

void SpectralDensity::update_normalization() { normalization = trapezoid(grid, density); }

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  if (points < 2 || !(hi > lo)) throw Error(ErrorCode::InvalidArgument, "grid needs >= 2 points and hi > lo");
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  return g;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double sum = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) sum += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return sum;
}

Eigen::VectorXd eigen_spectrum(const WeightedGraph& g, std::size_t cap) {
  return dense_spectrum(g, false, cap).eigenvalues;
}

SpectralDensity smoothed_measure(const std::vector<double>& nodes, const std::vector<double>& weights,
                                 const std::vector<double>& grid, double sigma) {
  check_grid(grid);
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "bandwidth must be > 0");
  SpectralDensity d;
  d.grid = grid;
  d.density.assign(grid.size(), 0.0);
  d.bandwidth = sigma;
  d.method = "measure";
  for (std::size_t j = 0; j < grid.size(); ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * gaussian(grid[j] - nodes[i], sigma);
    d.density[j] = sum;
  }
  d.update_normalization();
  return d;
}

SpectralDensity empirical_dos(const Eigen::VectorXd& eigenvalues, const std::vector<double>& grid, double sigma) {
  std::vector<double> nodes(eigenvalues.data(), eigenvalues.data() + eigenvalues.size());
  std::vector<double> w(nodes.size(), 1.0 / static_cast<double>(std::max<std::size_t>(1, nodes.size())));
  SpectralDensity d = smoothed_measure(nodes, w, grid, sigma);
  d.method = "eigen";
  return d;
}

SpectralDensity gaussian_smooth(const SpectralDensity& d, double sigma, const std::vector<double>& grid) {
  check_grid(grid);
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "bandwidth must be > 0");
  SpectralDensity out;
  out.grid = grid;
  out.density.assign(grid.size(), 0.0);
  out.bandwidth = std::sqrt(d.bandwidth * d.bandwidth + sigma * sigma);
  out.method = d.method + "+smoothed";
  out.metadata = d.metadata;
  out.support = d.support;
  const auto& x = d.grid;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    double sum = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
      const double a = d.density[i - 1] * gaussian(grid[j] - x[i - 1], sigma);
      const double b = d.density[i] * gaussian(grid[j] - x[i], sigma);
      sum += 0.5 * (x[i] - x[i - 1]) * (a + b);
    }
    out.density[j] = sum;
  }
  out.update_normalization();
  return out;
}

std::vector<double> kpm_moments(const WeightedGraph& g, int num_moments, double lambda_max,
                                const KpmOptions& options) {
  if (num_moments < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 moments");
  const std::size_t n = g.vertex_count();
  const double L = lambda_max > 0.0 ? lambda_max : 1.0;
  std::vector<double> rs(n), diag(n);
  for (Index x = 0; x < n; ++x) {
    rs[x] = 1.0 / std::sqrt(g.measure(x));
    diag[x] = g.degree(x) / g.measure(x);
  }
  const int half = num_moments / 2 + 1;
  std::vector<double> sq(half + 1, 0.0), cross(half + 1, 0.0);

  // t_{k+1} = 2 A t_k - t_{k-1}, A = 2S/L - 1, evaluated only on rows that can
  // be nonzero (the neighborhood of the starting support grows by one hop).
  auto run_block = [&](RowBlock t0, std::vector<Index> rows) {
    const Eigen::Index B = t0.cols();
    RowBlock t1 = RowBlock::Zero(t0.rows(), B);
    RowBlock t2 = RowBlock::Zero(t0.rows(), B);
    std::vector<char> active(n, 0);
    for (Index r : rows) active[r] = 1;
    auto expand = [&]() {
      if (rows.size() == n) return;
      std::vector<Index> add;
      for (Index r : rows) {
        for (Index y : g.neighbors(r)) {
          if (!active[y]) {
            active[y] = 1;
            add.push_back(y);
          }
        }
      }
      if (add.empty()) return;
      rows.insert(rows.end(), add.begin(), add.end());
      std::sort(rows.begin(), rows.end());
    };
    auto apply = [&](const RowBlock& in, const RowBlock* prev, RowBlock& out, double scale) {
      for (Index r : rows) {
        const auto ri = static_cast<Eigen::Index>(r);
        Eigen::RowVectorXd acc = (diag[r]) * in.row(ri);
        for (std::size_t e = g.offset(r); e < g.offset(r + 1); ++e) {
          const Index y = g.target(e);
          acc.noalias() -= (g.edge_weight(e) * rs[r] * rs[y]) * in.row(static_cast<Eigen::Index>(y));
        }
        Eigen::RowVectorXd v = scale * ((2.0 / L) * acc - in.row(ri));
        if (prev) v -= prev->row(ri);
        out.row(ri) = v;
      }
    };
    auto dot = [&](const RowBlock& a, const RowBlock& b) {
      double s = 0.0;
      for (Index r : rows) s += a.row(static_cast<Eigen::Index>(r)).dot(b.row(static_cast<Eigen::Index>(r)));
      return s;
    };
    sq[0] += dot(t0, t0);
    expand();
    apply(t0, nullptr, t1, 1.0);
    cross[0] += dot(t1, t0);
    for (int k = 1; k < half; ++k) {
      sq[k] += dot(t1, t1);
      expand();
      apply(t1, &t0, t2, 2.0);
      cross[k] += dot(t2, t1);
      std::swap(t0, t1);
      std::swap(t1, t2);
    }
  };

  double norm = 0.0;
  if (n <= options.exact_trace_limit) {
    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(options.block)) {
      const std::size_t cols = std::min<std::size_t>(static_cast<std::size_t>(options.block), n - start);
      RowBlock t0 = RowBlock::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols));
      std::vector<Index> rows;
      for (std::size_t j = 0; j < cols; ++j) {
        t0(static_cast<Eigen::Index>(start + j), static_cast<Eigen::Index>(j)) = 1.0;
        rows.push_back(start + j);
      }
      run_block(std::move(t0), std::move(rows));
    }
    norm = static_cast<double>(n);
  } else {
    const CounterRng rng(options.seed);
    std::vector<Index> all(n);
    for (Index x = 0; x < n; ++x) all[x] = x;
    for (int start = 0; start < options.random_vectors; start += options.block) {
      const int cols = std::min(options.block, options.random_vectors - start);
      RowBlock t0(static_cast<Eigen::Index>(n), cols);
      for (Index x = 0; x < n; ++x) {
        for (int j = 0; j < cols; ++j) {
          t0(static_cast<Eigen::Index>(x), j) = (rng.bits(7, static_cast<std::uint64_t>(start + j), x) >> 63) ? 1.0 : -1.0;
        }
      }
      run_block(std::move(t0), all);
    }
    norm = static_cast<double>(n) * options.random_vectors;
  }
  // Doubling: mu_2k = 2<t_k,t_k> - mu_0, mu_2k+1 = 2<t_k+1,t_k> - mu_1.
  std::vector<double> mu(num_moments);
  const double mu0 = sq[0] / norm;
  const double mu1 = cross[0] / norm;
  mu[0] = mu0;
  mu[1] = mu1;
  for (int k = 1; k < half; ++k) {
    if (2 * k < num_moments) mu[2 * k] = 2.0 * sq[k] / norm - mu0;
    if (2 * k + 1 < num_moments) mu[2 * k + 1] = 2.0 * cross[k] / norm - mu1;
  }
  return mu;
}

SpectralDensity kpm_dos(const WeightedGraph& g, int num_moments, const std::vector<double>& grid, double bandwidth,
                        const KpmOptions& options) {
  check_grid(grid);
  if (!(bandwidth > 0.0)) throw Error(ErrorCode::InvalidArgument, "bandwidth must be > 0");
  const double L = g.gershgorin_bound() > 0.0 ? g.gershgorin_bound() : 1.0;
  std::vector<double> mu = kpm_moments(g, num_moments, L, options);
  const int K = num_moments;
  if (options.jackson) {
    const double a = pi / (K + 1);
    for (int k = 0; k < K; ++k) {
      mu[k] *= ((K - k + 1) * std::cos(a * k) + std::sin(a * k) / std::tan(a)) / (K + 1);
    }
  }
  // Series at Chebyshev nodes, then integrated against the Gaussian.
  const double sigma_u = 2.0 * bandwidth / L;
  const int Q = std::max(4 * K, static_cast<int>(std::ceil(40.0 / std::sqrt(sigma_u)))) + 64;
  std::vector<double> w(Q), xq(Q);
  for (int q = 0; q < Q; ++q) {
    const double th = pi * (q + 0.5) / Q;
    xq[q] = 0.5 * L * (1.0 + std::cos(th));
    double s = mu[0];
    for (int k = 1; k < K; ++k) s += 2.0 * mu[k] * std::cos(k * th);
    w[q] = s / Q;
  }
  SpectralDensity d;
  d.grid = grid;
  d.density.assign(grid.size(), 0.0);
  d.bandwidth = bandwidth;
  d.method = "kpm";
  for (std::size_t j = 0; j < grid.size(); ++j) {
    double s = 0.0;
    for (int q = 0; q < Q; ++q) s += w[q] * gaussian(grid[j] - xq[q], bandwidth);
    d.density[j] = std::max(0.0, s);
  }
  d.update_normalization();
  d.support = std::make_pair(0.0, L);
  d.metadata["moments"] = std::to_string(K);
  d.metadata["lambda_max"] = format_double(L);
  d.metadata["trace"] = g.vertex_count() <= options.exact_trace_limit ? "exact" : "stochastic";
  d.metadata["damping"] = options.jackson ? "jackson" : "none";
  return d;
}

double lattice_dos_value(int d, double lambda) {
  if (d < 1 || d > 3) throw Error(ErrorCode::UnsupportedDimension, "lattice DOS supports d in {1,2,3}");
  const double hi = 4.0 * d;
  if (!(lambda > 0.0) || !(lambda < hi)) return 0.0;
  // rho1 with its argument l and complement 4 - l passed separately.
  auto rho1 = [](double l, double lc) { return (l > 0.0 && lc > 0.0) ? 1.0 / (pi * std::sqrt(l * lc)) : 0.0; };
  if (d == 1) return rho1(lambda, 4.0 - lambda);
  // Integrable log singularity of the d = 2 density, reported as 0 like the
  // d = 1 band edges.
  if (d == 2 && lambda == 4.0) return 0.0;
  boost::math::quadrature::tanh_sinh<double> ts;
  // int inner(a) rho1(lambda - a) da, split where inner is singular. tanh_sinh
  // passes the signed distance to the nearer endpoint (xc = lo - a near lo,
  // hi - a near hi), which keeps the singular factors accurate at the ends.
  // inner(a, e) receives e = 4 - a computed the same way.
  auto conv = [&](auto&& inner, double inner_hi) {
    const double a0 = std::max(0.0, lambda - 4.0);
    const double a1 = std::min(inner_hi, lambda);
    if (!(a1 > a0)) return 0.0;
    std::vector<double> cuts{a0};
    if (inner_hi > 4.0 && a0 < 4.0 && a1 > 4.0) cuts.push_back(4.0);
    cuts.push_back(a1);
    double total = 0.0;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
      const double lo = cuts[i - 1], hi2 = cuts[i];
      auto f = [&](double a, double xc) {
        double u = lambda - a, uc = 4.0 - u, e = 4.0 - a;
        if (xc > 0.0 && hi2 == lambda) u = xc;
        if (xc > 0.0 && hi2 == 4.0) e = xc;
        if (xc < 0.0 && lo == lambda - 4.0) uc = -xc;
        if (xc < 0.0 && lo == 4.0) e = xc;
        return inner(a, e) * rho1(u, uc);
      };
      total += ts.integrate(f, lo, hi2, 1e-12);
    }
    return total;
  };
  if (d == 2) return conv(rho1, 4.0);
  // d = 2 density in closed form, 1 / (4 pi AGM(1, |4 - a| / 4)).
  auto rho2 = [](double a, double e) {
    if (!(a > 0.0 && a < 8.0) || e == 0.0) return 0.0;
    double x = 1.0, y = std::abs(e) / 4.0;
    for (int it = 0; it < 64 && std::abs(x - y) > 4e-16 * x; ++it) {
      const double m = 0.5 * (x + y);
      y = std::sqrt(x * y);
      x = m;
    }
    return 1.0 / (4.0 * pi * x);
  };
  return conv(rho2, 8.0);
}

SpectralDensity lattice_dos_exact(int d, const std::vector<double>& grid) {
  if (d < 1 || d > 3) throw Error(ErrorCode::UnsupportedDimension, "lattice DOS supports d in {1,2,3}");
  check_grid(grid);
  SpectralDensity out;
  out.grid = grid;
  out.density.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out.density[i] = lattice_dos_value(d, grid[i]);
  out.method = "lattice-exact";
  out.bandwidth = 0.0;
  out.support = std::make_pair(0.0, 4.0 * d);
  out.metadata["dimension"] = std::to_string(d);
  out.update_normalization();
  return out;
}

SpectralDensity lattice_dos_smoothed(int d, const std::vector<double>& grid, double sigma) {
  if (d < 1 || d > 3) throw Error(ErrorCode::UnsupportedDimension, "lattice DOS supports d in {1,2,3}");
  check_grid(grid);
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "bandwidth must be > 0");
  // Damping exp(-sigma^2 t^2 / 2) < 1e-17 beyond t_max.
  const double t_max = std::sqrt(2.0 * 40.0) / sigma;
  const double h = std::min(0.01, 0.1 / (4.0 * d + 1.0));
  const std::size_t steps = static_cast<std::size_t>(std::ceil(t_max / h));
  std::vector<double> t(steps + 1), w(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    t[i] = t_max * static_cast<double>(i) / static_cast<double>(steps);
    const double j = std::cyl_bessel_j(0.0, 2.0 * t[i]);
    // Simpson weights.
    const double sw = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    w[i] = sw * std::pow(j, d) * std::exp(-0.5 * sigma * sigma * t[i] * t[i]);
  }
  const double hh = t_max / static_cast<double>(steps);
  SpectralDensity out;
  out.grid = grid;
  out.density.resize(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double c = 2.0 * d - grid[g];
    double s = 0.0;
    for (std::size_t i = 0; i <= steps; ++i) s += w[i] * std::cos(c * t[i]);
    out.density[g] = std::max(0.0, s * hh / 3.0 / pi);
  }
  out.bandwidth = sigma;
  out.method = "lattice-smoothed";
  out.support = std::make_pair(0.0, 4.0 * d);
  out.metadata["dimension"] = std::to_string(d);
  out.update_normalization();
  return out;
}

TreeDos regular_tree_dos(int k, const std::vector<double>& grid, double eta) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "tree branching must be >= 2");
  if (!(eta > 0.0)) throw Error(ErrorCode::InvalidArgument, "eta must be > 0");
  check_grid(grid);
  const double kk = k;
  TreeDos out;
  out.convention = "(k+1)-regular tree, H = (k+1) - A, G = (z - H)^{-1}, density = -Im G(o,o)/pi";
  // Discriminant (lambda - k - 1)^2 - 4k = lambda^2 - 2(k+1) lambda + (k-1)^2.
  const double b = -2.0 * (kk + 1.0);
  const double c = (kk - 1.0) * (kk - 1.0);
  const double root = std::sqrt(b * b - 4.0 * c);
  const double hi = (-b + root) / 2.0;
  out.support = {c / hi, hi};
  out.reference_interval = {2.0 * (kk + 1.0) - 2.0 * std::sqrt(kk), 2.0 * (kk + 1.0) + 2.0 * std::sqrt(kk)};
  out.density.grid = grid;
  out.density.density.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Complex z(grid[i], eta);
    const Complex w = z - (kk + 1.0);
    // Forward branch: k G^2 - w G + 1 = 0, Herglotz root has Im G < 0.
    const Complex disc = std::sqrt(w * w - 4.0 * kk);
    Complex g1 = (w + disc) / (2.0 * kk);
    Complex g2 = (w - disc) / (2.0 * kk);
    Complex gf = std::abs(g1) <= std::abs(g2) ? g1 : g2;
    if (gf.imag() > 0.0) {
      throw Error(ErrorCode::NoPhysicalRoot, "no Herglotz root at lambda = " + format_double(grid[i]));
    }
    const Complex gd = 1.0 / (w - (kk + 1.0) * gf);
    out.density.density[i] = std::max(0.0, -gd.imag() / pi);
  }
  out.density.method = "tree-green";
  out.density.bandwidth = 0.0;
  out.density.support = out.support;
  out.density.metadata["k"] = std::to_string(k);
  out.density.metadata["eta"] = format_double(eta);
  out.density.metadata["convention"] = out.convention;
  out.density.metadata["support"] = format_double(out.support.first) + " " + format_double(out.support.second);
  out.density.metadata["reference_interval"] =
      format_double(out.reference_interval.first) + " " + format_double(out.reference_interval.second);
  out.density.update_normalization();
  return out;
}

SpectralDensity GreenFunctionTable::root_density() const {
  SpectralDensity d;
  for (std::size_t i = 0; i < z.size(); ++i) {
    d.grid.push_back(z[i].real());
    d.density.push_back(std::max(0.0, -root[i].imag() / pi));
  }
  d.method = "cone-green";
  d.metadata["convention"] = convention;
  if (!z.empty()) d.metadata["eta"] = format_double(z[0].imag());
  d.update_normalization();
  return d;
}

GreenFunctionTable cone_tree_green(const SubstitutionMatrix& M, const std::vector<double>& grid,
                                   const GreenOptions& o) {
  validate_substitution_matrix(M);
  check_grid(grid);
  if (!(o.eta > 0.0)) throw Error(ErrorCode::InvalidArgument, "eta must be > 0");
  const std::size_t L = M.size();
  if (o.root_label < 1 || o.root_label > static_cast<int>(L)) {
    throw Error(ErrorCode::InvalidLabel, "root label " + std::to_string(o.root_label) + " out of range");
  }
  std::vector<double> deg(L);
  for (std::size_t k = 0; k < L; ++k) {
    deg[k] = 1.0;
    for (int v : M[k]) deg[k] += v;
  }
  if (o.degrees) {
    if (o.degrees->size() != L) throw Error(ErrorCode::DimensionMismatch, "one degree per label required");
    deg = *o.degrees;
  }
  const std::vector<int> root_children = o.root_children.value_or(M[static_cast<std::size_t>(o.root_label - 1)]);
  if (root_children.size() != L) throw Error(ErrorCode::DimensionMismatch, "one root child count per label required");
  double root_deg = 0.0;
  for (int v : root_children) root_deg += v;

  GreenFunctionTable t;
  t.convention =
      "G = (z - H)^{-1}, H = D - A; non-root label k has degree sum_l M[k][l] + 1; root has no parent; "
      "density = -Im G(root)/pi";
  std::vector<Complex> G(L, Complex(0.0, -1.0));
  for (double lambda : grid) {
    const Complex z(lambda, o.eta);
    std::vector<Complex> next(L);
    double res = INFINITY;
    double last = INFINITY;
    double damping = 1.0;
    int it = 0;
    // Warm start from the previous grid point keeps iteration counts low.
    for (auto& g : G) {
      if (!(g.imag() < 0.0) || !std::isfinite(std::abs(g))) g = Complex(0.0, -1.0);
    }
    for (; it < o.max_iter; ++it) {
      for (std::size_t k = 0; k < L; ++k) {
        Complex s = 0.0;
        for (std::size_t l = 0; l < L; ++l) s += static_cast<double>(M[k][l]) * G[l];
        next[k] = 1.0 / (z - deg[k] - s);
      }
      res = 0.0;
      for (std::size_t k = 0; k < L; ++k) res = std::max(res, std::abs(next[k] - G[k]));
      if (res > 0.999 * last) damping = 0.5;
      last = res;
      for (std::size_t k = 0; k < L; ++k) G[k] = damping * next[k] + (1.0 - damping) * G[k];
      if (res <= o.tol) break;
    }
    if (res > o.tol) {
      throw Error(ErrorCode::NoConvergence, "Green recursion at lambda = " + format_double(lambda) +
                                                " stopped with residual " + format_double(res));
    }
    Complex s = 0.0;
    for (std::size_t l = 0; l < L; ++l) s += static_cast<double>(root_children[l]) * G[l];
    t.z.push_back(z);
    t.forward.push_back(G);
    t.root.push_back(1.0 / (z - root_deg - s));
    t.residual.push_back(res);
    t.iterations.push_back(it);
  }
  return t;
}

SpectralMeasure vertex_spectral_measure(const WeightedGraph& g, Index x, int steps) {
  if (x >= g.vertex_count()) throw Error(ErrorCode::IndexOutOfRange, "vertex out of range");
  if (steps < 1) throw Error(ErrorCode::InvalidArgument, "Lanczos needs >= 1 step");
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  std::vector<Eigen::VectorXd> Q;
  std::vector<double> alpha, beta;
  Eigen::VectorXd q = Eigen::VectorXd::Zero(n);
  q[static_cast<Eigen::Index>(x)] = 1.0;
  for (int j = 0; j < steps && j < n; ++j) {
    Q.push_back(q);
    Eigen::VectorXd w = symmetric_laplacian_apply_block(g, q);
    const double a = q.dot(w);
    alpha.push_back(a);
    w -= a * q;
    if (j > 0) w -= beta.back() * Q[Q.size() - 2];
    // Full reorthogonalization, twice.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& v : Q) w -= v.dot(w) * v;
    }
    const double b = w.norm();
    if (b < 1e-12 || j + 1 == steps) break;
    beta.push_back(b);
    q = w / b;
  }
  const auto m = static_cast<Eigen::Index>(alpha.size());
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    T(i, i) = alpha[static_cast<std::size_t>(i)];
    if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[static_cast<std::size_t>(i)];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  SpectralMeasure out;
  for (Eigen::Index i = 0; i < m; ++i) {
    out.nodes.push_back(es.eigenvalues()[i]);
    out.weights.push_back(es.eigenvectors()(0, i) * es.eigenvectors()(0, i));
  }
  return out;
}

double dos_distance(const SpectralDensity& a0, const SpectralDensity& b0, const DistanceOptions& options) {
  check_grid(a0.grid);
  check_grid(b0.grid);
  // Canonical operand order keeps the result exactly symmetric.
  auto key = [](const SpectralDensity& d) {
    return std::make_tuple(d.bandwidth, d.grid.size(), d.grid.front(), d.grid.back(), d.density);
  };
  const bool swap = key(b0) < key(a0);
  const SpectralDensity& a = swap ? b0 : a0;
  const SpectralDensity& b = swap ? a0 : b0;
  const bool same_grid = a.grid == b.grid;
  std::vector<double> grid = a.grid;
  if (!same_grid) {
    if (!options.allow_resample) throw Error(ErrorCode::IncompatibleGrids, "densities live on different grids");
    if (a.grid.back() < b.grid.front() || b.grid.back() < a.grid.front()) {
      throw Error(ErrorCode::IncompatibleGrids, "density grids do not overlap");
    }
    auto spacing = [](const SpectralDensity& d) { return (d.grid.back() - d.grid.front()) / static_cast<double>(d.grid.size() - 1); };
    const double lo = std::min(a.grid.front(), b.grid.front());
    const double hi = std::max(a.grid.back(), b.grid.back());
    const double h = std::min(spacing(a), spacing(b));
    grid = linear_grid(lo, hi, static_cast<std::size_t>(std::ceil((hi - lo) / h)) + 1);
  }
  const double target = std::max(a.bandwidth, b.bandwidth);
  auto prepare = [&](const SpectralDensity& d) {
    std::vector<double> v;
    if (d.bandwidth < target) {
      const double extra = std::sqrt(target * target - d.bandwidth * d.bandwidth);
      return gaussian_smooth(d, extra, grid).density;
    }
    if (d.grid == grid) return d.density;
    v.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = interpolate(d.grid, d.density, grid[i]);
    return v;
  };
  const std::vector<double> va = prepare(a);
  const std::vector<double> vb = prepare(b);
  std::vector<double> diff(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) diff[i] = std::abs(va[i] - vb[i]);
  return trapezoid(grid, diff);
}

}  // namespace wgs
