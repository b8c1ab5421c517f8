#include "wgs/heat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "wgs/error.hpp"
#include "wgs/graph_io.hpp"

namespace wgs {

namespace {

void check_time(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw Error(ErrorCode::NonPositiveTime, "heat time must be > 0");
}

void check_diagonal(const HeatKernel& k) {
  for (std::size_t x = 0; x < k.measure.size(); ++x) {
    const double excess = k.P(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x)) * k.measure[x] - 1.0;
    if (excess > 1e-10) {
      throw Error(ErrorCode::BoundViolation, "P_s(x,x) m(x) = 1 + " + std::to_string(excess) + " at x = " +
                                                 std::to_string(x));
    }
  }
}

bool use_dense(const WeightedGraph& g, const HeatOptions& o, std::size_t auto_limit) {
  switch (o.method) {
    case HeatMethod::Dense:
      return true;
    case HeatMethod::Chebyshev:
      return false;
    case HeatMethod::Auto:
      break;
  }
  return g.vertex_count() <= std::min(auto_limit, o.dense_cap);
}

Eigen::MatrixXd chebyshev_apply(const WeightedGraph& g, const ChebyshevSeries& c, const Eigen::MatrixXd& f) {
  // T_k recursion in u = 2 lambda / L - 1.
  const double L = c.lambda_max;
  auto shifted = [&](const Eigen::MatrixXd& v) -> Eigen::MatrixXd {
    return (2.0 / L) * laplacian_apply_block(g, v) - v;
  };
  Eigen::MatrixXd t0 = f;
  Eigen::MatrixXd out = c.coefficients[0] * t0;
  if (c.coefficients.size() == 1) return out;
  Eigen::MatrixXd t1 = shifted(t0);
  out += c.coefficients[1] * t1;
  for (std::size_t k = 2; k < c.coefficients.size(); ++k) {
    Eigen::MatrixXd t2 = 2.0 * shifted(t1) - t0;
    out += c.coefficients[k] * t2;
    t0.swap(t1);
    t1.swap(t2);
  }
  return out;
}

}  // namespace

std::string to_string(HeatMethod method) {
  switch (method) {
    case HeatMethod::Auto:
      return "auto";
    case HeatMethod::Dense:
      return "dense";
    case HeatMethod::Chebyshev:
      return "chebyshev";
  }
  return "auto";
}

HeatMethod parse_heat_method(const std::string& text) {
  if (text == "auto") return HeatMethod::Auto;
  if (text == "dense") return HeatMethod::Dense;
  if (text == "chebyshev") return HeatMethod::Chebyshev;
  throw Error(ErrorCode::InvalidArgument, "unknown heat method '" + text + "'");
}

Eigen::MatrixXd HeatKernel::operator_matrix() const {
  Eigen::MatrixXd e = P;
  for (std::size_t y = 0; y < measure.size(); ++y) e.col(static_cast<Eigen::Index>(y)) *= measure[y];
  return e;
}

ChebyshevSeries heat_chebyshev_series(double s, double lambda_max, double tol, int max_degree) {
  check_time(s);
  ChebyshevSeries out;
  out.lambda_max = lambda_max > 0.0 ? lambda_max : 1.0;
  const double a = 0.5 * s * out.lambda_max;
  // Interpolate exp(-a(1+u)) at n Chebyshev points, doubling n until the
  // trailing coefficients are negligible.
  for (int n = 16; n <= 2 * max_degree; n *= 2) {
    std::vector<double> fv(n);
    for (int j = 0; j < n; ++j) {
      const double u = std::cos(std::numbers::pi * (j + 0.5) / n);
      fv[j] = std::exp(-a * (1.0 + u));
    }
    std::vector<double> c(n);
    for (int k = 0; k < n; ++k) {
      double sum = 0.0;
      for (int j = 0; j < n; ++j) sum += fv[j] * std::cos(std::numbers::pi * k * (j + 0.5) / n);
      c[k] = (k == 0 ? 1.0 : 2.0) * sum / n;
    }
    double tail = 0.0;
    for (int k = n / 2; k < n; ++k) tail += std::abs(c[k]);
    // Once the tail is at the rounding floor, doubling n cannot help.
    const double floor = 4.0 * n * std::numeric_limits<double>::epsilon();
    if (tail > 0.01 * tol && tail > floor) continue;
    // Keep the shortest prefix whose dropped tail stays below tol/2.
    int keep = n;
    double dropped = 0.0;
    while (keep > 1 && dropped + std::abs(c[keep - 1]) <= 0.5 * tol) dropped += std::abs(c[--keep]);
    c.resize(keep);
    out.coefficients = std::move(c);
    // Aliasing error of the interpolant is bounded by twice the neglected tail;
    // a tail at the floor is rounding noise rather than truncation.
    out.error_bound = dropped + (tail > floor ? 2.0 * tail : floor);
    if (out.error_bound > tol) {
      throw Error(ErrorCode::ToleranceNotReached,
                  "Chebyshev tolerance " + format_double(tol) + " is below the rounding floor " +
                      format_double(out.error_bound));
    }
    return out;
  }
  throw Error(ErrorCode::ToleranceNotReached, "Chebyshev degree limit reached for s*lambda_max = " +
                                                  std::to_string(s * out.lambda_max));
}

HeatKernel heat_kernel(const DenseSpectrum& spectrum, double s) {
  check_time(s);
  if (spectrum.sym_vectors.size() == 0) throw Error(ErrorCode::InvalidArgument, "spectrum has no eigenvectors");
  const Eigen::VectorXd w = (-s * spectrum.eigenvalues.cwiseMax(0.0)).array().exp();
  const Eigen::MatrixXd& V = spectrum.sym_vectors;
  HeatKernel k;
  k.s = s;
  k.measure = spectrum.measure;
  k.method = HeatMethod::Dense;
  k.P = V * w.asDiagonal() * V.transpose();
  Eigen::VectorXd rs(V.rows());
  for (Eigen::Index x = 0; x < V.rows(); ++x) rs[x] = 1.0 / std::sqrt(k.measure[static_cast<std::size_t>(x)]);
  k.P = rs.asDiagonal() * k.P * rs.asDiagonal();
  k.P = 0.5 * (k.P + k.P.transpose()).eval();
  check_diagonal(k);
  return k;
}

HeatKernel heat_kernel(const WeightedGraph& g, double s, const HeatOptions& options) {
  check_time(s);
  if (use_dense(g, options, options.dense_cap)) return heat_kernel(dense_spectrum(g, true, options.dense_cap), s);
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  const ChebyshevSeries c = heat_chebyshev_series(s, g.gershgorin_bound(), options.tol, options.max_degree);
  HeatKernel k;
  k.s = s;
  k.measure = g.measure();
  k.method = HeatMethod::Chebyshev;
  k.accuracy = c.error_bound;
  k.P.resize(n, n);
  for (Eigen::Index start = 0; start < n; start += options.block) {
    const Eigen::Index cols = std::min<Eigen::Index>(options.block, n - start);
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(n, cols);
    for (Eigen::Index j = 0; j < cols; ++j) basis(start + j, j) = 1.0 / k.measure[static_cast<std::size_t>(start + j)];
    k.P.middleCols(start, cols) = chebyshev_apply(g, c, basis);
  }
  k.P = 0.5 * (k.P + k.P.transpose()).eval();
  check_diagonal(k);
  return k;
}

Eigen::VectorXd heat_diagonal(const WeightedGraph& g, double s, const HeatOptions& options) {
  check_time(s);
  if (use_dense(g, options, 1024)) {
    const DenseSpectrum sp = dense_spectrum(g, true, std::max(options.dense_cap, g.vertex_count()));
    const Eigen::VectorXd w = (-s * sp.eigenvalues.cwiseMax(0.0)).array().exp();
    Eigen::VectorXd d = (sp.sym_vectors.array().square().matrix() * w);
    for (Eigen::Index x = 0; x < d.size(); ++x) d[x] /= sp.measure[static_cast<std::size_t>(x)];
    return d;
  }
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  const ChebyshevSeries c = heat_chebyshev_series(s, g.gershgorin_bound(), options.tol, options.max_degree);
  Eigen::VectorXd d(n);
  for (Eigen::Index start = 0; start < n; start += options.block) {
    const Eigen::Index cols = std::min<Eigen::Index>(options.block, n - start);
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(n, cols);
    for (Eigen::Index j = 0; j < cols; ++j) basis(start + j, j) = 1.0 / g.measure(static_cast<Index>(start + j));
    const Eigen::MatrixXd out = chebyshev_apply(g, c, basis);
    for (Eigen::Index j = 0; j < cols; ++j) d[start + j] = out(start + j, j);
  }
  for (Eigen::Index x = 0; x < n; ++x) {
    if (d[x] * g.measure(static_cast<Index>(x)) - 1.0 > 1e-10) {
      throw Error(ErrorCode::BoundViolation, "P_s(x,x) m(x) > 1 at x = " + std::to_string(x));
    }
  }
  return d;
}

Eigen::MatrixXd heat_apply_block(const WeightedGraph& g, double s, const Eigen::MatrixXd& f, const HeatOptions& options) {
  check_time(s);
  if (static_cast<std::size_t>(f.rows()) != g.vertex_count()) {
    throw Error(ErrorCode::DimensionMismatch, "heat_apply input length differs from vertex count");
  }
  if (options.method == HeatMethod::Dense) {
    return heat_kernel(g, s, options).operator_matrix() * f;
  }
  const ChebyshevSeries c = heat_chebyshev_series(s, g.gershgorin_bound(), options.tol, options.max_degree);
  return chebyshev_apply(g, c, f);
}

VertexFunction heat_apply(const WeightedGraph& g, double s, const VertexFunction& f, const HeatOptions& options) {
  Eigen::MatrixXd parts(f.size(), 2);
  parts.col(0) = f.real();
  parts.col(1) = f.imag();
  const Eigen::MatrixXd out = heat_apply_block(g, s, parts, options);
  VertexFunction r(f.size());
  r.real() = out.col(0);
  r.imag() = out.col(1);
  return r;
}

double GradHeatKernel::min_slack() const {
  if (bounds.size() == 0) return 0.0;
  return (bounds - row_norms).minCoeff();
}

GradHeatKernel grad_heat_kernel(const WeightedGraph& g, const HeatKernel& ps, const HeatKernel& p2s) {
  if (std::abs(p2s.s - 2.0 * ps.s) > 1e-14 * ps.s) {
    throw Error(ErrorCode::TimeMismatch, "gradient kernel needs kernels at s and 2s");
  }
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  const auto ne = static_cast<Eigen::Index>(g.ordered_edge_count());
  GradHeatKernel out;
  out.s = ps.s;
  out.G.resize(ne, n);
  out.row_norms.resize(ne);
  out.bounds.resize(ne);
  Eigen::VectorXd m(n);
  for (Eigen::Index z = 0; z < n; ++z) m[z] = g.measure(static_cast<Index>(z));
  for (Index x = 0; x < g.vertex_count(); ++x) {
    for (std::size_t e = g.offset(x); e < g.offset(x + 1); ++e) {
      const auto ei = static_cast<Eigen::Index>(e);
      const auto xi = static_cast<Eigen::Index>(x);
      const auto yi = static_cast<Eigen::Index>(g.target(e));
      out.G.row(ei) = ps.P.row(xi) - ps.P.row(yi);
      out.row_norms[ei] = out.G.row(ei).array().square().matrix().dot(m);
      out.bounds[ei] = 2.0 * p2s.P(xi, xi) + 2.0 * p2s.P(yi, yi);
      const double tol = 1e-10 * std::max(1.0, out.bounds[ei]);
      if (out.row_norms[ei] > out.bounds[ei] + tol) {
        throw Error(ErrorCode::BoundViolation, "gradient kernel bound fails on edge (" + std::to_string(x) + "," +
                                                   std::to_string(g.target(e)) + ")");
      }
    }
  }
  return out;
}

GradHeatKernel grad_heat_kernel(const WeightedGraph& g, double s, const HeatOptions& options) {
  check_time(s);
  if (use_dense(g, options, options.dense_cap)) {
    const DenseSpectrum sp = dense_spectrum(g, true, std::max(options.dense_cap, g.vertex_count()));
    return grad_heat_kernel(g, heat_kernel(sp, s), heat_kernel(sp, 2.0 * s));
  }
  return grad_heat_kernel(g, heat_kernel(g, s, options), heat_kernel(g, 2.0 * s, options));
}

double sqrt_h_semigroup_norm(const DenseSpectrum& spectrum, double t) {
  check_time(t);
  double best = 0.0;
  for (Eigen::Index i = 0; i < spectrum.eigenvalues.size(); ++i) {
    const double l = std::max(0.0, spectrum.eigenvalues[i]);
    best = std::max(best, std::sqrt(l) * std::exp(-t * l));
  }
  const double bound = 1.0 / std::sqrt(2.0 * std::numbers::e * t);
  if (best > bound + 1e-10) {
    throw Error(ErrorCode::BoundViolation, "||sqrt(H) exp(-tH)|| exceeds (2et)^(-1/2)");
  }
  return best;
}

double sqrt_h_semigroup_norm(const WeightedGraph& g, double t, std::size_t cap) {
  check_time(t);
  return sqrt_h_semigroup_norm(dense_spectrum(g, false, cap), t);
}

}  // namespace wgs
