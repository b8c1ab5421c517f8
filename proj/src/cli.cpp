#include "wgs/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <queue>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "wgs/density_io.hpp"
#include "wgs/error.hpp"
#include "wgs/generators.hpp"
#include "wgs/graph_io.hpp"
#include "wgs/heat.hpp"
#include "wgs/hpw.hpp"
#include "wgs/perturbation.hpp"
#include "wgs/report.hpp"
#include "wgs/spectra.hpp"

namespace wgs::cli {

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::string heat_method = "auto";
  double heat_tol = 1e-10;
  int threads = 1;
  std::string out;
};

HeatOptions heat_options(const Globals& g) {
  HeatOptions o;
  o.method = parse_heat_method(g.heat_method);
  o.tol = g.heat_tol;
  return o;
}

SubstitutionMatrix parse_matrix(const std::string& text) {
  SubstitutionMatrix M;
  std::stringstream rows(text);
  std::string row;
  while (std::getline(rows, row, ';')) {
    for (char& c : row) {
      if (c == ',') c = ' ';
    }
    std::istringstream ss(row);
    std::vector<int> r;
    std::string tok;
    while (ss >> tok) {
      const double v = parse_double(tok);
      if (v != std::floor(v) || v < 0) throw Error(ErrorCode::InvalidArgument, "matrix entries must be nonnegative integers");
      r.push_back(static_cast<int>(v));
    }
    M.push_back(std::move(r));
  }
  validate_substitution_matrix(M);
  return M;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> v;
  std::string s = text;
  for (char& c : s) {
    if (c == ',') c = ' ';
  }
  std::istringstream ss(s);
  std::string tok;
  while (ss >> tok) {
    const double d = parse_double(tok);
    if (d != std::floor(d)) throw Error(ErrorCode::InvalidArgument, "expected integers in '" + text + "'");
    v.push_back(static_cast<int>(d));
  }
  return v;
}

/// Breadth-first distance spheres from `root`; unreachable vertices go last.
SphereDecomposition distance_spheres(const WeightedGraph& g, Index root) {
  const std::size_t n = g.vertex_count();
  if (n == 0) return SphereDecomposition({}, 0);
  if (root >= n) throw Error(ErrorCode::IndexOutOfRange, "sphere root out of range");
  std::vector<std::size_t> dist(n, SIZE_MAX);
  std::queue<Index> q;
  dist[root] = 0;
  q.push(root);
  std::size_t maxd = 0;
  while (!q.empty()) {
    const Index x = q.front();
    q.pop();
    for (Index y : g.neighbors(x)) {
      if (dist[y] == SIZE_MAX) {
        dist[y] = dist[x] + 1;
        maxd = std::max(maxd, dist[y]);
        q.push(y);
      }
    }
  }
  std::vector<std::vector<Index>> s(maxd + 1);
  std::vector<Index> rest;
  for (Index x = 0; x < n; ++x) {
    if (dist[x] == SIZE_MAX) {
      rest.push_back(x);
    } else {
      s[dist[x]].push_back(x);
    }
  }
  if (!rest.empty()) s.push_back(rest);
  return SphereDecomposition(std::move(s), n);
}

WeightedGraph load_graph(const std::string& path) { return graph_from_string(read_file(path)); }

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
  } else {
    write_file(path, content);
  }
}

/// Resolved option values of a subcommand, in declaration order.
void record_config(Report& r, const CLI::App& app, const std::string& command) {
  r.set("config", "command", command);
  auto add = [&](const CLI::App& a) {
    for (const CLI::Option* opt : a.get_options()) {
      const std::string name = opt->get_single_name();
      if (name.empty() || name == "help") continue;
      std::string value;
      if (opt->count() > 0) {
        const auto& res = opt->results();
        for (std::size_t i = 0; i < res.size(); ++i) value += (i ? "," : "") + res[i];
        if (opt->get_type_size() == 0 && value.empty()) value = "true";
      } else {
        value = opt->get_default_str();
      }
      r.set("config", name, value);
    }
  };
  add(*app.get_parent());
  add(app);
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_double(v[i]);
  return s;
}

void report_criterion(Report& r, const std::string& sec, const CriterionReport& c) {
  r.set(sec, "criterion", to_string(c.id));
  r.set(sec, "verdict", to_string(c.verdict));
  if (c.s) r.set(sec, "s", *c.s);
  r.set(sec, "m_sum_1", c.m_sum[0]);
  r.set(sec, "m_sum_2", c.m_sum[1]);
  r.set(sec, "b_sum_1", c.b_sum[0]);
  r.set(sec, "b_sum_2", c.b_sum[1]);
  r.set(sec, "total", c.total());
  r.set(sec, "m_equivalence", format_double(c.equivalence.m.lower) + " " + format_double(c.equivalence.m.upper));
  r.set(sec, "b_equivalence",
        c.equivalence.b ? format_double(c.equivalence.b->lower) + " " + format_double(c.equivalence.b->upper)
                        : std::string("fails"));
  r.set(sec, "support_changes", std::to_string(c.support_changes.size()));
  if (!c.reason.empty()) r.set(sec, "reason", c.reason);
  for (std::size_t i = 0; i < c.warnings.size(); ++i) r.set(sec, "warning." + std::to_string(i), c.warnings[i]);
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct GenerateArgs {
  std::string family;
  int d = 1, radius = 1, k = 2, depth = 1, root_label = 1;
  std::string matrix = "2";
  std::string graph;
  std::size_t root = 0;
  std::string spheres_out;
};

int cmd_generate(const Globals& gl, const GenerateArgs& a, const CLI::App& app, std::ostream& out, std::ostream& err) {
  Timer timer;
  GeneratedGraph gen;
  if (a.family == "lattice") {
    gen = lattice_ball(a.d, a.radius);
  } else if (a.family == "regular-tree") {
    gen = regular_tree_ball(a.k, a.depth);
  } else if (a.family == "cone-tree") {
    gen = cone_tree_ball(parse_matrix(a.matrix), a.root_label, a.depth);
  } else if (a.family == "file") {
    if (a.graph.empty()) throw Error(ErrorCode::InvalidArgument, "family 'file' needs --graph");
    gen.graph = load_graph(a.graph);
    gen.spheres = distance_spheres(gen.graph, a.root);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown family '" + a.family + "'");
  }
  for (const auto& w : gen.warnings) err << "warning: " << w << '\n';
  emit(gl.out, graph_to_string(gen.graph), out);
  if (!gl.out.empty()) {
    const std::string sp = a.spheres_out.empty() ? gl.out + ".spheres" : a.spheres_out;
    write_file(sp, spheres_to_string(gen.spheres));
    Report r;
    record_config(r, app, "generate");
    r.set("graph", "vertices", std::to_string(gen.graph.vertex_count()));
    r.set("graph", "edges", std::to_string(gen.graph.edge_count()));
    r.set("graph", "spheres", std::to_string(gen.spheres.sphere_count()));
    r.set("graph", "graph_file", gl.out);
    r.set("graph", "spheres_file", sp);
    for (std::size_t i = 0; i < gen.warnings.size(); ++i) r.set("graph", "warning." + std::to_string(i), gen.warnings[i]);
    r.set("timing", "wall_seconds", timer.seconds());
    out << r.to_string();
  }
  return Success;
}

struct PerturbArgs {
  std::string graph, spheres, mode = "decay", g2_out;
  double base_rate = 0.5, decay = 2.5, factor = 2.0, measure_factor = 1.0;
  std::size_t root = 0;
};

PerturbationSpec make_perturbation(const WeightedGraph& g, const SphereDecomposition& spheres, const PerturbArgs& a,
                                   std::uint64_t seed) {
  if (a.mode == "zero") return PerturbationSpec::zero(g.vertex_count(), seed);
  if (a.mode == "scale") {
    if (!(a.factor > 0.0) || !(a.measure_factor > 0.0)) throw Error(ErrorCode::InvalidArgument, "scale factors must be > 0");
    PerturbationSpec p = PerturbationSpec::zero(g.vertex_count(), seed);
    for (const Edge& e : g.edges()) p.beta.push_back({e.x, e.y, (a.factor - 1.0) * e.weight});
    for (Index x = 0; x < g.vertex_count(); ++x) p.mu[x] = (a.measure_factor - 1.0) * g.measure(x);
    return p;
  }
  if (a.mode == "decay") {
    PerturbationSpec p = decay_perturbation(g, spheres, power_rate(a.base_rate, a.decay), seed);
    return p;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown perturbation mode '" + a.mode + "'");
}

int cmd_perturb(const Globals& gl, const PerturbArgs& a, const CLI::App& app, std::ostream& out) {
  Timer timer;
  const WeightedGraph g = load_graph(a.graph);
  const SphereDecomposition spheres =
      a.spheres.empty() ? distance_spheres(g, a.root) : spheres_from_string(read_file(a.spheres));
  const PerturbationSpec p = make_perturbation(g, spheres, a, gl.seed);
  const GraphPair pair = perturb(g, p);
  emit(gl.out, perturbation_to_string(p), out);
  if (!a.g2_out.empty()) write_file(a.g2_out, graph_to_string(pair.g2()));
  if (!gl.out.empty()) {
    Report r;
    record_config(r, app, "perturb");
    r.set("perturbation", "beta_entries", std::to_string(p.beta.size()));
    r.set("perturbation", "support_changes", std::to_string(pair.support_changes().size()));
    r.set("perturbation", "file", gl.out);
    r.set("timing", "wall_seconds", timer.seconds());
    out << r.to_string();
  }
  return Success;
}

struct CheckArgs {
  std::string graph, perturbation, g2, spheres, criterion = "sphere", family, radii;
  std::optional<double> s;
  int d = 1, k = 2;
  double base_rate = 0.5, decay = 2.5;
  std::size_t root = 0;
};

int verdict_code(Verdict v) {
  switch (v) {
    case Verdict::Satisfied: return Success;
    case Verdict::Violated: return Failure;
    case Verdict::NotApplicable: return NotApplicable;
  }
  return Failure;
}

int cmd_check(const Globals& gl, const CheckArgs& a, const CLI::App& app, std::ostream& out) {
  Timer timer;
  const CriterionId id = parse_criterion(a.criterion);
  if (id == CriterionId::Theorem && !a.s) throw Error(ErrorCode::InvalidArgument, "criterion 'theorem' needs --s");
  const HeatOptions hopt = heat_options(gl);
  Report r;
  record_config(r, app, "check");
  int code = Success;
  if (!a.radii.empty()) {
    if (a.family != "lattice" && a.family != "regular-tree") {
      throw Error(ErrorCode::InvalidArgument, "sweep mode needs --family lattice or regular-tree");
    }
    const std::vector<int> radii = parse_int_list(a.radii);
    PerturbArgs pa;
    pa.base_rate = a.base_rate;
    pa.decay = a.decay;
    const std::uint64_t seed = gl.seed;
    PairFamily family = [&](int radius) {
      GeneratedGraph gen = a.family == "lattice" ? lattice_ball(a.d, radius) : regular_tree_ball(a.k, radius);
      PerturbationSpec p = make_perturbation(gen.graph, gen.spheres, pa, seed);
      return FamilyMember{perturb(gen.graph, p), gen.spheres};
    };
    const TailReport t = tail_extrapolation(family, radii, id, a.s, hopt);
    std::vector<double> rd(t.radii.begin(), t.radii.end());
    r.set("sweep", "criterion", to_string(id));
    r.set("sweep", "radii", join(rd));
    for (const auto& s : t.series) {
      r.set("sweep", "series." + s.name + ".sums", join(s.sums));
      r.set("sweep", "series." + s.name + ".increment_exponent", s.increment_exponent);
      r.set("sweep", "series." + s.name + ".verdict", to_string(s.verdict));
    }
    r.set("sweep", "increment_exponent", t.increment_exponent);
    r.set("sweep", "tail_exponent", t.tail_exponent);
    r.set("sweep", "verdict", to_string(t.verdict));
    for (std::size_t i = 0; i < t.reports.size(); ++i) {
      report_criterion(r, "radius." + std::to_string(t.radii[i]), t.reports[i]);
      if (t.reports[i].verdict == Verdict::NotApplicable) code = NotApplicable;
    }
    if (code != NotApplicable) code = t.verdict == TailVerdict::Divergent ? Failure : Success;
  } else {
    if (a.graph.empty()) throw Error(ErrorCode::InvalidArgument, "check needs --graph or a --radii sweep");
    const WeightedGraph g1 = load_graph(a.graph);
    std::optional<GraphPair> pair;
    if (!a.g2.empty()) {
      pair.emplace(g1, load_graph(a.g2));
    } else if (!a.perturbation.empty()) {
      pair.emplace(perturb(g1, perturbation_from_string(read_file(a.perturbation))));
    } else {
      throw Error(ErrorCode::InvalidArgument, "check needs --perturbation or --g2");
    }
    CriterionReport c;
    if (!pair->equivalence().holds()) {
      c = not_applicable_report(*pair, id, "b1 ~ b2 fails: " + pair->support_change_summary());
    } else if (id == CriterionId::Theorem) {
      c = criterion_theorem(*pair, *a.s, hopt);
    } else if (id == CriterionId::Geometric) {
      c = criterion_geometric(*pair);
    } else {
      const SphereDecomposition sp =
          a.spheres.empty() ? distance_spheres(g1, a.root) : spheres_from_string(read_file(a.spheres));
      c = criterion_sphere(*pair, sp);
      for (const auto& row : c.spheres) {
        r.set("spheres", "n." + std::to_string(row.n),
              std::to_string(row.size) + " " + format_double(row.beta_n) + " " + format_double(row.mu_n) + " " +
                  format_double(row.partial_sum));
      }
    }
    report_criterion(r, "criterion", c);
    code = verdict_code(c.verdict);
  }
  r.set("timing", "wall_seconds", timer.seconds());
  emit(gl.out, r.to_string(), out);
  return code;
}

struct HpwArgs {
  std::string g1, g2, graph, perturbation;
  double s = 1.0;
  int pairs = 20;
};

int cmd_hpw(const Globals& gl, const HpwArgs& a, const CLI::App& app, std::ostream& out) {
  Timer timer;
  std::optional<GraphPair> pair;
  if (!a.g1.empty() && !a.g2.empty()) {
    pair.emplace(load_graph(a.g1), load_graph(a.g2));
  } else if (!a.graph.empty() && !a.perturbation.empty()) {
    pair.emplace(perturb(load_graph(a.graph), perturbation_from_string(read_file(a.perturbation))));
  } else {
    throw Error(ErrorCode::InvalidArgument, "hpw needs --g1/--g2 or --graph/--perturbation");
  }
  if (!(a.s > 0.0)) throw Error(ErrorCode::NonPositiveTime, "s must be > 0");
  Report r;
  record_config(r, app, "hpw");
  if (!pair->equivalence().holds()) {
    r.set("hpw", "verdict", "not-applicable");
    r.set("hpw", "reason", "b1 ~ b2 fails: " + pair->support_change_summary());
    r.set("timing", "wall_seconds", timer.seconds());
    emit(gl.out, r.to_string(), out);
    return NotApplicable;
  }
  const HpwBundle b = hpw_operator(*pair, a.s);
  const auto n = static_cast<Eigen::Index>(pair->vertex_count());
  const CounterRng rng(gl.seed);
  double max_res = 0.0;
  for (int j = 0; j < a.pairs; ++j) {
    VertexFunction f1(n), f2(n);
    for (Eigen::Index x = 0; x < n; ++x) {
      const auto ux = static_cast<std::uint64_t>(x);
      const auto uj = static_cast<std::uint64_t>(j);
      f1[x] = Complex(2.0 * rng.uniform(11, uj, ux) - 1.0, 2.0 * rng.uniform(12, uj, ux) - 1.0);
      f2[x] = Complex(2.0 * rng.uniform(13, uj, ux) - 1.0, 2.0 * rng.uniform(14, uj, ux) - 1.0);
    }
    max_res = std::max(max_res, hpw_identity_check(*pair, b, f1, f2));
  }
  double min_slack = b.factorization_bound - b.trace_norm;
  r.set("hpw", "s", a.s);
  r.set("hpw", "vertices", std::to_string(pair->vertex_count()));
  r.set("hpw", "t_max_abs", n > 0 ? b.T.cwiseAbs().maxCoeff() : 0.0);
  r.set("hpw", "max_residual", max_res);
  r.set("hpw", "trace_norm", b.trace_norm);
  r.set("hpw", "factorization_bound", b.factorization_bound);
  r.set("hpw", "h1_semigroup_norm", b.h1_semigroup_norm);
  for (const HsEntry& e : b.hs) {
    r.set("hs", e.name, format_double(e.hs_norm) + " " + format_double(e.bound) + " " + format_double(e.printed_bound));
    min_slack = std::min(min_slack, e.slack());
  }
  r.set("hpw", "min_slack", min_slack);
  const BbReport bb = bb_hypotheses_report(*pair, b);
  for (const Hypothesis& h : bb.hypotheses) {
    r.set("hypotheses", h.name, std::string(h.verified ? "verified" : "failed") + " " + format_double(h.value));
  }
  r.set("hypotheses", "inverse_norm", bb.inverse_norm);
  r.set("hypotheses", "defect_norm", bb.defect_norm);
  const bool ok = max_res <= 1e-8 && min_slack >= -1e-8;
  r.set("hpw", "verdict", ok ? "pass" : "fail");
  r.set("timing", "wall_seconds", timer.seconds());
  emit(gl.out, r.to_string(), out);
  return ok ? Success : Failure;
}

struct DosArgs {
  std::string method, family, graph, matrix = "1,1;4,1", root_children;
  int moments = 512, d = 1, k = 2, root_label = 1, random_vectors = 64;
  double bandwidth = 0.05, eta = 1e-3;
  std::optional<double> grid_min, grid_max;
  std::size_t points = 2001;
  bool jackson = false;
};

int cmd_dos(const Globals& gl, const DosArgs& a, const CLI::App& app, std::ostream& out) {
  Timer timer;
  const std::string method = !a.method.empty() ? a.method : a.family;
  if (method.empty()) throw Error(ErrorCode::InvalidArgument, "dos needs --method");
  auto grid_for = [&](double lo, double hi) { return linear_grid(a.grid_min.value_or(lo), a.grid_max.value_or(hi), a.points); };
  SpectralDensity d;
  if (method == "eigen" || method == "kpm") {
    if (a.graph.empty()) throw Error(ErrorCode::InvalidArgument, "method '" + method + "' needs --graph");
    const WeightedGraph g = load_graph(a.graph);
    const auto grid = grid_for(-0.5, g.gershgorin_bound() + 0.5);
    if (method == "eigen") {
      d = empirical_dos(eigen_spectrum(g), grid, a.bandwidth);
    } else {
      KpmOptions ko;
      ko.seed = gl.seed;
      ko.random_vectors = a.random_vectors;
      ko.jackson = a.jackson;
      d = kpm_dos(g, a.moments, grid, a.bandwidth, ko);
    }
  } else if (method == "lattice-exact") {
    d = lattice_dos_exact(a.d, grid_for(-0.5, 4.0 * a.d + 0.5));
  } else if (method == "lattice-smoothed") {
    d = lattice_dos_smoothed(a.d, grid_for(-0.5, 4.0 * a.d + 0.5), a.bandwidth);
  } else if (method == "tree-green") {
    d = regular_tree_dos(a.k, grid_for(0.0, 2.0 * (a.k + 1)), a.eta).density;
  } else if (method == "cone-green") {
    const SubstitutionMatrix M = parse_matrix(a.matrix);
    GreenOptions go;
    go.eta = a.eta;
    go.root_label = a.root_label;
    if (!a.root_children.empty()) go.root_children = parse_int_list(a.root_children);
    double hi = 0.0;
    for (const auto& row : M) {
      double s = 1.0;
      for (int v : row) s += v;
      hi = std::max(hi, 2.0 * s);
    }
    d = cone_tree_green(M, grid_for(0.0, hi), go).root_density();
    d.metadata["matrix"] = a.matrix;
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown dos method '" + method + "'");
  }
  emit(gl.out, density_to_string(d), out);
  if (!gl.out.empty()) {
    Report r;
    record_config(r, app, "dos");
    r.set("dos", "method", d.method);
    r.set("dos", "points", std::to_string(d.grid.size()));
    r.set("dos", "bandwidth", d.bandwidth);
    r.set("dos", "normalization", d.normalization);
    if (d.support) r.set("dos", "support", format_double(d.support->first) + " " + format_double(d.support->second));
    for (const auto& [k, v] : d.metadata) r.set("dos", "meta." + k, v);
    r.set("dos", "density_file", gl.out);
    r.set("timing", "wall_seconds", timer.seconds());
    out << r.to_string();
  }
  return Success;
}

int cmd_compare(const Globals& gl, const std::string& fa, const std::string& fb, bool no_resample, const CLI::App& app,
                std::ostream& out) {
  Timer timer;
  const SpectralDensity a = density_from_string(read_file(fa));
  const SpectralDensity b = density_from_string(read_file(fb));
  DistanceOptions o;
  o.allow_resample = !no_resample;
  const double dist = dos_distance(a, b, o);
  Report r;
  record_config(r, app, "compare");
  r.set("compare", "distance", dist);
  r.set("compare", "bandwidth", std::max(a.bandwidth, b.bandwidth));
  r.set("timing", "wall_seconds", timer.seconds());
  emit(gl.out, r.to_string(), out);
  return Success;
}

int map_error(const Error& e) {
  switch (e.code()) {
    case ErrorCode::IoError: return IoFailure;
    case ErrorCode::NotApplicable: return NotApplicable;
    case ErrorCode::BoundViolation:
    case ErrorCode::NoConvergence:
    case ErrorCode::ToleranceNotReached: return Failure;
    default: return InvalidInput;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"weighted graph scattering toolkit", "wgscat"};
  app.require_subcommand(1);
  // Global options may also follow the subcommand.
  app.fallthrough();
  Globals gl;
  app.add_option("--seed", gl.seed, "random seed")->capture_default_str();
  app.add_option("--heat-method", gl.heat_method, "auto | dense | chebyshev")->capture_default_str();
  app.add_option("--heat-tol", gl.heat_tol, "heat semigroup tolerance")->capture_default_str();
  app.add_option("--threads", gl.threads, "worker threads for dense linear algebra")->capture_default_str();
  app.add_option("--out", gl.out, "primary output path (stdout when empty)");

  GenerateArgs ga;
  CLI::App* gen = app.add_subcommand("generate", "write a graph and its sphere decomposition");
  gen->add_option("family", ga.family, "lattice | regular-tree | cone-tree | file")->required();
  gen->add_option("--d", ga.d)->capture_default_str();
  gen->add_option("--radius", ga.radius)->capture_default_str();
  gen->add_option("--k", ga.k)->capture_default_str();
  gen->add_option("--depth", ga.depth)->capture_default_str();
  gen->add_option("--matrix", ga.matrix, "rows separated by ';', entries by ','")->capture_default_str();
  gen->add_option("--root-label", ga.root_label)->capture_default_str();
  gen->add_option("--graph", ga.graph, "input graph for family 'file'");
  gen->add_option("--root", ga.root, "sphere centre for family 'file'")->capture_default_str();
  gen->add_option("--spheres-out", ga.spheres_out);

  PerturbArgs pa;
  CLI::App* per = app.add_subcommand("perturb", "write a perturbation spec for a graph");
  per->add_option("--graph", pa.graph)->required();
  per->add_option("--spheres", pa.spheres);
  per->add_option("--root", pa.root)->capture_default_str();
  per->add_option("--mode", pa.mode, "decay | zero | scale")->capture_default_str();
  per->add_option("--base-rate", pa.base_rate)->capture_default_str();
  per->add_option("--decay", pa.decay)->capture_default_str();
  per->add_option("--factor", pa.factor, "edge weight factor for mode 'scale'")->capture_default_str();
  per->add_option("--measure-factor", pa.measure_factor)->capture_default_str();
  per->add_option("--g2-out", pa.g2_out, "also write the perturbed graph");

  CheckArgs ca;
  CLI::App* chk = app.add_subcommand("check", "evaluate a perturbation criterion");
  chk->add_option("--graph", ca.graph);
  chk->add_option("--perturbation", ca.perturbation);
  chk->add_option("--g2", ca.g2);
  chk->add_option("--spheres", ca.spheres);
  chk->add_option("--root", ca.root)->capture_default_str();
  chk->add_option("--criterion", ca.criterion, "theorem | geometric | sphere")->capture_default_str();
  chk->add_option("--s", ca.s);
  chk->add_option("--family", ca.family, "lattice | regular-tree (sweep mode)");
  chk->add_option("--radii", ca.radii, "comma separated radii (sweep mode)");
  chk->add_option("--d", ca.d)->capture_default_str();
  chk->add_option("--k", ca.k)->capture_default_str();
  chk->add_option("--base-rate", ca.base_rate)->capture_default_str();
  chk->add_option("--decay", ca.decay)->capture_default_str();

  HpwArgs ha;
  CLI::App* hpw = app.add_subcommand("hpw", "verify the HPW identity and trace-class bounds");
  hpw->add_option("--g1", ha.g1);
  hpw->add_option("--g2", ha.g2);
  hpw->add_option("--graph", ha.graph);
  hpw->add_option("--perturbation", ha.perturbation);
  hpw->add_option("--s", ha.s)->capture_default_str();
  hpw->add_option("--pairs", ha.pairs, "random vector pairs")->capture_default_str();

  DosArgs da;
  CLI::App* dos = app.add_subcommand("dos", "compute a density of states");
  dos->add_option("--method", da.method, "eigen | kpm | lattice-exact | lattice-smoothed | tree-green | cone-green");
  dos->add_option("--family", da.family, "alias of --method");
  dos->add_option("--graph", da.graph);
  dos->add_option("--moments", da.moments)->capture_default_str();
  dos->add_option("--bandwidth", da.bandwidth)->capture_default_str();
  dos->add_option("--random-vectors", da.random_vectors)->capture_default_str();
  dos->add_flag("--jackson", da.jackson, "apply Jackson damping to the moments");
  dos->add_option("--d", da.d)->capture_default_str();
  dos->add_option("--k", da.k)->capture_default_str();
  dos->add_option("--eta", da.eta)->capture_default_str();
  dos->add_option("--matrix", da.matrix)->capture_default_str();
  dos->add_option("--root-label", da.root_label)->capture_default_str();
  dos->add_option("--root-children", da.root_children);
  dos->add_option("--grid-min", da.grid_min);
  dos->add_option("--grid-max", da.grid_max);
  dos->add_option("--points", da.points)->capture_default_str();

  std::string fa, fb;
  bool no_resample = false;
  CLI::App* cmp = app.add_subcommand("compare", "L1 distance between two density files");
  cmp->add_option("a", fa)->required();
  cmp->add_option("b", fb)->required();
  cmp->add_flag("--no-resample", no_resample);

  std::string rfile;
  bool normalize = false;
  CLI::App* rep = app.add_subcommand("report", "re-emit a report file");
  rep->add_option("file", rfile)->required();
  rep->add_flag("--normalize", normalize, "drop timing fields");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? Success : InvalidInput;
  }

  try {
    if (gl.threads < 1) throw Error(ErrorCode::InvalidArgument, "--threads must be >= 1");
    Eigen::setNbThreads(gl.threads);
    parse_heat_method(gl.heat_method);
    if (!(gl.heat_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "--heat-tol must be > 0");
    if (*gen) return cmd_generate(gl, ga, *gen, out, err);
    if (*per) return cmd_perturb(gl, pa, *per, out);
    if (*chk) return cmd_check(gl, ca, *chk, out);
    if (*hpw) return cmd_hpw(gl, ha, *hpw, out);
    if (*dos) return cmd_dos(gl, da, *dos, out);
    if (*cmp) return cmd_compare(gl, fa, fb, no_resample, *cmp, out);
    if (*rep) {
      const std::string text = read_file(rfile);
      emit(gl.out, normalize ? normalize_report(text) : Report::parse(text).to_string(), out);
      return Success;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return map_error(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return InvalidInput;
  }
  return InvalidInput;
}

}  // namespace wgs::cli
