// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "support/random_graphs.hpp"
#include "wgs/cli.hpp"
#include "wgs/error.hpp"
#include "wgs/exact_sum.hpp"
#include "wgs/generators.hpp"
#include "wgs/graph_io.hpp"
#include "wgs/heat.hpp"
#include "wgs/hpw.hpp"
#include "wgs/operators.hpp"
#include "wgs/perturbation.hpp"
#include "wgs/report.hpp"
#include "wgs/spectra.hpp"

using namespace wgs;
using testsupport::Rng;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the worst value of a quantity together with its limit.
struct Worst {
  std::string name;
  double limit;
  bool upper = true;  // value must stay <= limit, else >= limit
  double value = NAN;

  void add(double v) {
    if (std::isnan(value) || (upper ? v > value : v < value) || std::isnan(v)) value = v;
  }
  bool ok() const { return !std::isnan(value) && (upper ? value <= limit : value >= limit); }
  std::string str() const {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s=%.3g (%s %.3g)", name.c_str(), value, upper ? "<=" : ">=", limit);
    return buf;
  }
};

Outcome collect(std::initializer_list<const Worst*> ws, std::initializer_list<std::pair<bool, const char*>> flags = {}) {
  Outcome o;
  for (const Worst* w : ws) {
    o.pass = o.pass && w->ok();
    o.detail += (o.detail.empty() ? "" : ", ") + w->str();
  }
  for (const auto& [ok, what] : flags) {
    o.pass = o.pass && ok;
    o.detail += std::string(o.detail.empty() ? "" : ", ") + what + (ok ? "=yes" : "=NO");
  }
  return o;
}

EdgeFunction random_antisymmetric(Rng& rng, const WeightedGraph& g) {
  EdgeFunction a;
  a.values.resize(static_cast<Eigen::Index>(g.ordered_edge_count()));
  a.antisymmetric = true;
  for (std::size_t e = 0; e < g.ordered_edge_count(); ++e) {
    const std::size_t r = g.reverse(e);
    if (r < e) continue;
    const Complex v(rng.normal(), rng.normal());
    a.values[static_cast<Eigen::Index>(e)] = v;
    a.values[static_cast<Eigen::Index>(r)] = -v;
  }
  return a;
}

Outcome criterion1() {
  Rng rng(1001);
  Worst form{"form_residual", 1e-12}, adj{"adjoint_residual", 1e-12};
  for (int t = 0; t < 100; ++t) {
    const WeightedGraph g = testsupport::random_graph(rng, {2, 200, 0.02, t % 4 != 0, t % 3 == 0});
    const VertexFunction f = testsupport::random_vector(rng, g.vertex_count());
    const VertexFunction h = testsupport::random_vector(rng, g.vertex_count());
    const EdgeFunction df = differential(g, f), dh = differential(g, h);
    const Complex q = quadratic_form(g, f, h);
    const Complex l = inner_m(g, laplacian_apply(g, f), h);
    const double scale_q = std::sqrt(inner_b(g, df, df).real() * inner_b(g, dh, dh).real());
    form.add(std::abs(q - l) / std::max(scale_q, 1e-300));
    const EdgeFunction a = random_antisymmetric(rng, g);
    const Complex lhs = inner_b(g, df, a);
    const Complex rhs = inner_m(g, f, codifferential(g, a));
    const double scale_a = std::sqrt(inner_b(g, df, df).real() * inner_b(g, a, a).real());
    adj.add(std::abs(lhs - rhs) / std::max(scale_a, 1e-300));
  }
  return collect({&form, &adj});
}

Outcome criterion2() {
  Rng rng(1002);
  Worst diag{"diag_slack", -1e-10, false}, semi{"semigroup_residual", 1e-9}, edge{"edge_slack", -1e-10, false};
  for (int t = 0; t < 100; ++t) {
    const WeightedGraph g = testsupport::random_graph(rng, {2, 60, 0.05, true, t % 3 == 0});
    const Eigen::Map<const Eigen::VectorXd> m(g.measure().data(), static_cast<Eigen::Index>(g.vertex_count()));
    for (double s : {0.1, 1.0, 10.0}) {
      const HeatKernel p = heat_kernel(g, s);
      const HeatKernel p2 = heat_kernel(g, 2.0 * s);
      for (Index x = 0; x < g.vertex_count(); ++x) diag.add(1.0 / g.measure(x) - p(x, x));
      const Eigen::MatrixXd comp = p.P * m.asDiagonal() * p.P;
      semi.add((comp - p2.P).cwiseAbs().maxCoeff() / std::max(1.0, p2.P.cwiseAbs().maxCoeff()));
      try {
        edge.add(grad_heat_kernel(g, p, p2).min_slack());
      } catch (const Error&) {
        edge.add(-INFINITY);
      }
    }
  }
  return collect({&diag, &semi, &edge});
}

Outcome criterion3() {
  Rng rng(1003);
  Worst slack{"norm_slack", -1e-10, false};
  for (int t = 0; t < 50; ++t) {
    const WeightedGraph g = testsupport::random_graph(rng, {2, 80, 0.05, t % 5 != 0, t % 2 == 0});
    const DenseSpectrum sp = dense_spectrum(g, false);
    for (double time : {0.25, 1.0, 4.0}) {
      const double bound = 1.0 / std::sqrt(2.0 * std::numbers::e * time);
      try {
        slack.add(bound - sqrt_h_semigroup_norm(sp, time));
      } catch (const Error&) {
        slack.add(-INFINITY);
      }
    }
  }
  return collect({&slack});
}

struct HpwCase {
  GraphPair pair;
  double s;
  HpwBundle bundle;
};

std::vector<HpwCase>& hpw_cases() {
  static std::vector<HpwCase> cases = [] {
    std::vector<HpwCase> out;
    Rng rng(1004);
    for (int t = 0; t < 50; ++t) {
      const GraphPair p = testsupport::random_admissible_pair(rng, {2, 100, 0.03, true, t % 4 == 0});
      const DenseSpectrum s1 = dense_spectrum(p.g1()), s2 = dense_spectrum(p.g2());
      for (double s : {0.5, 1.0, 2.0}) out.push_back({p, s, hpw_operator(p, s, s1, s2)});
    }
    return out;
  }();
  return cases;
}

Outcome criterion4() {
  Rng rng(1005);
  Worst res{"max_residual", 1e-8};
  for (const HpwCase& c : hpw_cases()) {
    for (int k = 0; k < 20; ++k) {
      const VertexFunction f1 = testsupport::random_vector(rng, c.pair.vertex_count());
      const VertexFunction f2 = testsupport::random_vector(rng, c.pair.vertex_count());
      res.add(hpw_identity_check(c.pair, c.bundle, f1, f2));
    }
  }
  bool zero = true;
  for (int t = 0; t < 5; ++t) {
    const WeightedGraph g = testsupport::random_graph(rng, {2, 100, 0.03, true, false});
    const HpwBundle b = hpw_operator(GraphPair(g, g), 1.0);
    zero = zero && b.T.cwiseAbs().maxCoeff() == 0.0;
  }
  return collect({&res}, {{zero, "identity_T_zero"}});
}

Outcome criterion5() {
  Worst fact{"factorization_slack", -1e-8, false};
  Worst c1{"C1_slack", -1e-8, false}, c2{"C2_slack", -1e-8, false}, a{"A_slack", -1e-8, false};
  for (const HpwCase& c : hpw_cases()) {
    fact.add(c.bundle.factorization_bound - c.bundle.trace_norm);
    c1.add(c.bundle.entry("C1").slack());
    c2.add(c.bundle.entry("C2").slack());
    a.add(c.bundle.entry("A").slack());
  }
  return collect({&fact, &c1, &c2, &a});
}

Outcome criterion6() {
  bool exact = true;
  auto check = [&](const GeneratedGraph& gen, const PerturbationSpec& spec) {
    const GraphPair pair = perturb(gen.graph, spec);
    const CriterionReport r = criterion_sphere(pair, gen.spheres);
    ExactSum direct;
    for (Index x = 0; x < pair.vertex_count(); ++x) direct.add(std::abs(pair.g2().measure(x) - pair.g1().measure(x)));
    ExactSum by_sphere;
    for (const SphereRow& row : r.spheres) by_sphere.add(static_cast<double>(row.size) * row.mu_n);
    // The reported sum is exact; the row averages are rounded once each.
    exact = exact && r.m_sum[0] == direct.value() &&
            std::abs(by_sphere.value() - direct.value()) <= 1e-12 * std::max(1.0, direct.value());
  };
  for (int d = 1; d <= 3; ++d) {
    const GeneratedGraph z = lattice_ball(d, d == 1 ? 500 : d == 2 ? 30 : 8);
    check(z, decay_perturbation(z.graph, z.spheres, power_rate(0.5, d + 1.5), 60 + d));
  }
  for (int k : {2, 3}) {
    const GeneratedGraph t = regular_tree_ball(k, k == 2 ? 10 : 7);
    check(t, decay_perturbation(t.graph, t.spheres, power_rate(0.5, 2.0), 70 + k));
  }
  Rng rng(1006);
  Worst dom{"theorem_minus_geometric", 1e-12};
  for (int t = 0; t < 100; ++t) {
    const GraphPair p = testsupport::random_admissible_pair(rng);
    const CriterionReport geo = criterion_geometric(p);
    const CriterionReport th = criterion_theorem(p, 1.0);
    for (int k = 0; k < 2; ++k) {
      dom.add((th.m_sum[k] - geo.m_sum[k]) / std::max(1.0, geo.m_sum[k]));
      dom.add((th.b_sum[k] - geo.b_sum[k]) / std::max(1.0, geo.b_sum[k]));
    }
  }
  return collect({&dom}, {{exact, "sphere_identity_exact"}});
}

Outcome criterion7() {
  const std::vector<double> grid = linear_grid(-0.5, 4.5, 2001);
  const SpectralDensity kpm = kpm_dos(lattice_ball(1, 2000).graph, 512, grid, 0.05);
  Worst dist{"L1_distance", 2e-2};
  dist.add(dos_distance(kpm, lattice_dos_smoothed(1, grid, 0.05)));
  bool support = true;
  for (int d = 1; d <= 3; ++d) {
    const SpectralDensity e = lattice_dos_exact(d, linear_grid(0.0, 4.0 * d, 5));
    support = support && e.support && e.support->first == 0.0 && e.support->second == 4.0 * d;
  }
  return collect({&dist}, {{support, "support_0_4d"}});
}

Outcome criterion8() {
  const std::vector<double> grid = linear_grid(-0.5, 6.5, 1401);
  const TreeDos t = regular_tree_dos(2, grid, 1e-3);
  Worst edge{"support_error", 1e-6};
  edge.add(std::abs(t.support.first - (3.0 - 2.0 * std::sqrt(2.0))));
  edge.add(std::abs(t.support.second - (3.0 + 2.0 * std::sqrt(2.0))));
  GreenOptions opt;
  opt.eta = 1e-3;
  opt.root_children = std::vector<int>{3};
  Worst cone{"cone_L1", 1e-6};
  cone.add(dos_distance(cone_tree_green({{2}}, grid, opt).root_density(), t.density));
  const GeneratedGraph tree = cone_tree_ball({{2}}, 1, 12, std::vector<int>{3});
  const SpectralMeasure m = vertex_spectral_measure(tree.graph, 0, 26);
  const std::vector<double> wide = linear_grid(-1.0, 7.0, 1601);
  Worst trunc{"truncation_L1", 5e-2};
  trunc.add(dos_distance(smoothed_measure(m.nodes, m.weights, wide, 0.3), regular_tree_dos(2, wide, 1e-6).density));
  return collect({&edge, &cone, &trunc});
}

Outcome criterion9() {
  const double sigma = 0.05;
  const std::vector<double> grid = linear_grid(-0.5, 8.5, 3601);
  const GeneratedGraph small = lattice_ball(1, 1000);
  const GeneratedGraph big = lattice_ball(1, 2000);
  const SpectralDensity base = kpm_dos(big.graph, 512, grid, sigma);
  const double B = dos_distance(kpm_dos(small.graph, 512, grid, sigma), base);

  const PerturbationSpec adm = decay_perturbation(big.graph, big.spheres, power_rate(0.5, 2.5), 2024);
  const double d_adm = dos_distance(kpm_dos(perturb(big.graph, adm).g2(), 512, grid, sigma), base);

  std::vector<Edge> doubled = big.graph.edges();
  for (Edge& e : doubled) e.weight *= 2.0;
  const WeightedGraph scaled = WeightedGraph::from_edges(doubled, big.graph.measure());
  const double d_scaled = dos_distance(kpm_dos(scaled, 512, grid, sigma), base);

  Worst adm_w{"admissible/B", 3.0}, inad_w{"scaled/B", 10.0, false};
  adm_w.add(d_adm / B);
  inad_w.add(d_scaled / B);
  Outcome o = collect({&adm_w, &inad_w});
  char buf[96];
  std::snprintf(buf, sizeof buf, ", B=%.3g", B);
  o.detail += buf;
  return o;
}

Outcome criterion10() {
  bool graphs = graph_to_string(lattice_ball(2, 12).graph) == graph_to_string(lattice_ball(2, 12).graph) &&
                graph_to_string(cone_tree_ball({{1, 1}, {4, 1}}, 1, 6).graph) ==
                    graph_to_string(cone_tree_ball({{1, 1}, {4, 1}}, 1, 6).graph);
  const GeneratedGraph z = lattice_ball(2, 12);
  const std::string p1 = perturbation_to_string(decay_perturbation(z.graph, z.spheres, power_rate(0.5, 3.5), 77));
  const std::string p2 = perturbation_to_string(decay_perturbation(z.graph, z.spheres, power_rate(0.5, 3.5), 77));
  const std::string p3 = perturbation_to_string(decay_perturbation(z.graph, z.spheres, power_rate(0.5, 3.5), 78));
  const bool specs = p1 == p2 && p1 != p3;

  auto run = [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    const std::string text = out.str();
    return std::to_string(code) + "\n" + (text.rfind("[report]", 0) == 0 ? normalize_report(text) : text);
  };
  bool reports = true;
  const std::vector<std::vector<std::string>> commands = {
      {"check", "--family", "lattice", "--radii", "10,20,40", "--criterion", "theorem", "--s", "1"},
      {"check", "--family", "regular-tree", "--radii", "2,3,4,5", "--criterion", "sphere"},
      {"--seed", "4", "dos", "--method", "lattice-smoothed", "--d", "2", "--points", "201"},
  };
  for (const auto& c : commands) reports = reports && run(c) == run(c);
  return collect({}, {{graphs, "graphs_identical"}, {specs, "specs_identical"}, {reports, "reports_identical"}});
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"form and operator identities", criterion1},
      {"heat kernel contract", criterion2},
      {"sqrt(H) semigroup norm bound", criterion3},
      {"HPW identity", criterion4},
      {"trace-class factorization", criterion5},
      {"sphere identity and domination", criterion6},
      {"lattice DOS oracle", criterion7},
      {"tree Green oracle", criterion8},
      {"stability demonstration", criterion9},
      {"reproducibility", criterion10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += o.pass ? 0 : 1;
    std::printf("criterion %2zu: %s  %s (%s) [%.1fs]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
