#include "wgs/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "wgs/error.hpp"
#include "wgs/exact_sum.hpp"
#include "wgs/graph_io.hpp"

namespace wgs {

double tilde(double ratio) {
  if (ratio == 1.0) return 0.0;
  return (ratio - 1.0) / std::sqrt(ratio);
}

TildeFields tilde_fields(const GraphPair& pair) {
  TildeFields t;
  t.m.reserve(pair.vertex_count());
  for (double r : pair.ratio_m()) t.m.push_back(tilde(r));
  t.b.reserve(pair.edges().size());
  for (const PairEdge& e : pair.edges()) t.b.push_back(e.b1 > 0.0 && e.b2 > 0.0 ? tilde(e.ratio) : 0.0);
  return t;
}

std::string to_string(CriterionId id) {
  switch (id) {
    case CriterionId::Theorem:
      return "theorem";
    case CriterionId::Geometric:
      return "geometric";
    case CriterionId::Sphere:
      return "sphere";
  }
  return "geometric";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Satisfied:
      return "satisfied";
    case Verdict::Violated:
      return "violated";
    case Verdict::NotApplicable:
      return "not-applicable";
  }
  return "satisfied";
}

std::string to_string(TailVerdict v) {
  switch (v) {
    case TailVerdict::Convergent:
      return "CONVERGENT";
    case TailVerdict::Divergent:
      return "DIVERGENT";
    case TailVerdict::Inconclusive:
      return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

CriterionId parse_criterion(const std::string& text) {
  if (text == "theorem") return CriterionId::Theorem;
  if (text == "geometric") return CriterionId::Geometric;
  if (text == "sphere") return CriterionId::Sphere;
  throw Error(ErrorCode::InvalidArgument, "unknown criterion '" + text + "'");
}

double CriterionReport::total() const { return m_sum[0] + m_sum[1] + b_sum[0] + b_sum[1]; }

namespace {

CriterionReport base_report(const GraphPair& pair, CriterionId id, std::string_view what) {
  pair.require_equivalence(what);
  CriterionReport r;
  r.id = id;
  r.equivalence = pair.equivalence();
  return r;
}

// Shared shape of the theorem and geometric sums: w_k(x) is P_k(x,x) or
// 1/m_k(x).
template <class W>
void fill_sums(const GraphPair& pair, CriterionReport& r, W&& w) {
  const TildeFields t = tilde_fields(pair);
  for (int k = 1; k <= 2; ++k) {
    const WeightedGraph& g = pair.graph(k);
    ExactSum ms;
    for (Index x = 0; x < pair.vertex_count(); ++x) ms.add(std::abs(t.m[x]) * w(k, x) * g.measure(x));
    ExactSum bs;
    for (std::size_t i = 0; i < pair.edges().size(); ++i) {
      const PairEdge& e = pair.edges()[i];
      const double bk = k == 1 ? e.b1 : e.b2;
      if (t.b[i] == 0.0 || bk == 0.0) continue;
      // Both orientations (x,y) and (y,x) of the ordered sum.
      const double term = std::abs(t.b[i]) * (w(k, e.x) + w(k, e.y)) * bk;
      bs.add(term);
      bs.add(term);
    }
    r.m_sum[k - 1] = ms.value();
    r.b_sum[k - 1] = bs.value();
  }
}

}  // namespace

CriterionReport criterion_theorem(const GraphPair& pair, double s, const Eigen::VectorXd& diag1,
                                  const Eigen::VectorXd& diag2) {
  if (!(s > 0.0)) throw Error(ErrorCode::NonPositiveTime, "criterion time s must be > 0");
  const auto n = static_cast<Eigen::Index>(pair.vertex_count());
  if (diag1.size() != n || diag2.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "heat diagonals do not match the vertex count");
  }
  CriterionReport r = base_report(pair, CriterionId::Theorem, "theorem criterion");
  r.s = s;
  fill_sums(pair, r, [&](int k, Index x) { return (k == 1 ? diag1 : diag2)[static_cast<Eigen::Index>(x)]; });
  return r;
}

CriterionReport criterion_theorem(const GraphPair& pair, double s, const HeatKernel& heat1, const HeatKernel& heat2) {
  if (heat1.s != s || heat2.s != s) {
    throw Error(ErrorCode::TimeMismatch, "heat kernels at s = " + format_double(heat1.s) + ", " +
                                             format_double(heat2.s) + " for criterion time " + format_double(s));
  }
  return criterion_theorem(pair, s, heat1.diagonal(), heat2.diagonal());
}

CriterionReport criterion_theorem(const GraphPair& pair, double s, const HeatOptions& options) {
  pair.require_equivalence("theorem criterion");
  return criterion_theorem(pair, s, heat_diagonal(pair.g1(), s, options), heat_diagonal(pair.g2(), s, options));
}

CriterionReport criterion_geometric(const GraphPair& pair) {
  CriterionReport r = base_report(pair, CriterionId::Geometric, "geometric criterion");
  fill_sums(pair, r, [&](int k, Index x) { return 1.0 / pair.graph(k).measure(x); });
  return r;
}

CriterionReport criterion_sphere(const GraphPair& pair, const SphereDecomposition& spheres) {
  if (spheres.vertex_count() != pair.vertex_count()) {
    throw Error(ErrorCode::DimensionMismatch, "sphere decomposition does not match the pair");
  }
  CriterionReport r = base_report(pair, CriterionId::Sphere, "sphere criterion");
  if (!pair.g1().has_standard_weights()) {
    r.warnings.push_back("base graph does not carry standard weights");
  }
  const std::size_t R = spheres.sphere_count();
  std::vector<ExactSum> beta(R), mu(R);
  for (Index x = 0; x < pair.vertex_count(); ++x) {
    mu[spheres.sphere_of(x)].add(std::abs(pair.g2().measure(x) - pair.g1().measure(x)));
  }
  for (const PairEdge& e : pair.edges()) {
    const double v = std::abs(e.b2 - e.b1);
    beta[spheres.sphere_of(e.x)].add(v);
    beta[spheres.sphere_of(e.y)].add(v);
  }
  ExactSum beta_total, mu_total, running;
  for (std::size_t n = 0; n < R; ++n) {
    beta_total.merge(beta[n]);
    mu_total.merge(mu[n]);
    running.merge(beta[n]);
    running.merge(mu[n]);
    SphereRow row;
    row.n = n;
    row.size = spheres.sphere(n).size();
    if (row.size > 0) {
      row.beta_n = beta[n].value() / static_cast<double>(row.size);
      row.mu_n = mu[n].value() / static_cast<double>(row.size);
    }
    row.partial_sum = running.value();
    r.spheres.push_back(row);
  }
  r.m_sum[0] = mu_total.value();
  r.b_sum[0] = beta_total.value();
  return r;
}

CriterionReport not_applicable_report(const GraphPair& pair, CriterionId id, const std::string& reason) {
  CriterionReport r;
  r.id = id;
  r.equivalence = pair.equivalence();
  r.support_changes = pair.support_changes();
  r.verdict = Verdict::NotApplicable;
  r.reason = reason;
  return r;
}

void write_sphere_table(std::ostream& os, const CriterionReport& report) {
  os << "# n #S_n beta_n mu_n partial_sum\n";
  for (const SphereRow& row : report.spheres) {
    os << row.n << ' ' << row.size << ' ' << format_double(row.beta_n) << ' ' << format_double(row.mu_n) << ' '
       << format_double(row.partial_sum) << '\n';
  }
}

TailSeries classify_tail(const std::string& name, const std::vector<int>& radii, const std::vector<double>& sums) {
  TailSeries t;
  t.name = name;
  t.sums = sums;
  if (radii.size() != sums.size()) throw Error(ErrorCode::DimensionMismatch, "one sum per radius required");
  if (radii.size() < 3) {
    t.verdict = TailVerdict::Inconclusive;
    return t;
  }
  std::vector<double> density;
  std::vector<double> at;
  for (std::size_t i = 1; i < radii.size(); ++i) {
    density.push_back((sums[i] - sums[i - 1]) / (radii[i] - radii[i - 1]));
    at.push_back(radii[i]);
  }
  const double scale = std::max(1e-300, std::abs(sums.back()));
  if (std::all_of(density.begin(), density.end(), [&](double d) { return std::abs(d) <= 1e-15 * scale; }) ||
      sums.back() == 0.0) {
    t.verdict = TailVerdict::Convergent;
    t.increment_exponent = -INFINITY;
    return t;
  }
  const std::size_t half = density.size() / 2;
  std::vector<double> lx, ly;
  for (std::size_t i = half; i < density.size(); ++i) {
    if (density[i] > 0.0) {
      lx.push_back(std::log(at[i]));
      ly.push_back(std::log(density[i]));
    }
  }
  double p = 0.0;
  if (lx.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    p = sxx > 0.0 ? sxy / sxx : 0.0;
  } else {
    // Increments vanish over the last half.
    p = -INFINITY;
  }
  t.increment_exponent = p;
  std::vector<double> sorted = density;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t k = sorted.size();
  const double median = k % 2 ? sorted[k / 2] : 0.5 * (sorted[k / 2 - 1] + sorted[k / 2]);
  const bool bounded_below = median > 0.0 && std::all_of(density.begin() + static_cast<std::ptrdiff_t>(half),
                                                        density.end(), [&](double d) { return d >= 0.5 * median; });
  if (p <= -1.1) {
    t.verdict = TailVerdict::Convergent;
  } else if (bounded_below) {
    t.verdict = TailVerdict::Divergent;
  } else {
    t.verdict = TailVerdict::Inconclusive;
  }
  return t;
}

TailReport tail_extrapolation(const PairFamily& family, const std::vector<int>& radii, CriterionId id,
                              std::optional<double> s, const HeatOptions& options) {
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (radii[i] <= radii[i - 1]) throw Error(ErrorCode::InvalidArgument, "radii must be strictly increasing");
  }
  if (id == CriterionId::Theorem && !s) throw Error(ErrorCode::InvalidArgument, "theorem criterion needs s");
  TailReport out;
  out.id = id;
  out.radii = radii;
  for (int R : radii) {
    const FamilyMember member = family(R);
    switch (id) {
      case CriterionId::Theorem:
        out.reports.push_back(criterion_theorem(member.pair, *s, options));
        break;
      case CriterionId::Geometric:
        out.reports.push_back(criterion_geometric(member.pair));
        break;
      case CriterionId::Sphere:
        out.reports.push_back(criterion_sphere(member.pair, member.spheres));
        break;
    }
  }
  const int parts = id == CriterionId::Sphere ? 1 : 2;
  const char* mnames[2] = {"m_sum_1", "m_sum_2"};
  const char* bnames[2] = {"b_sum_1", "b_sum_2"};
  for (int k = 0; k < parts; ++k) {
    std::vector<double> ms, bs;
    for (const auto& r : out.reports) {
      ms.push_back(r.m_sum[k]);
      bs.push_back(r.b_sum[k]);
    }
    out.series.push_back(classify_tail(id == CriterionId::Sphere ? "mu_sum" : mnames[k], radii, ms));
    out.series.push_back(classify_tail(id == CriterionId::Sphere ? "beta_sum" : bnames[k], radii, bs));
  }
  bool any_divergent = false, all_convergent = true;
  double largest = -1.0;
  out.increment_exponent = -INFINITY;
  for (const TailSeries& t : out.series) {
    any_divergent |= t.verdict == TailVerdict::Divergent;
    all_convergent &= t.verdict == TailVerdict::Convergent;
    const double last = t.sums.empty() ? 0.0 : t.sums.back();
    if (std::isfinite(t.increment_exponent) && last > largest) {
      largest = last;
      out.increment_exponent = t.increment_exponent;
    }
  }
  out.tail_exponent = out.increment_exponent + 1.0;
  out.verdict = any_divergent ? TailVerdict::Divergent
                              : (all_convergent ? TailVerdict::Convergent : TailVerdict::Inconclusive);
  return out;
}

}  // namespace wgs
