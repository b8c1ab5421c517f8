#include "wgs/graph_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "wgs/error.hpp"

namespace wgs {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

template <class T>
T parse_integer(std::string_view text, std::size_t line_no) {
  T v{};
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line_no) + ": expected integer, got '" + std::string(text) + "'");
  }
  return v;
}

double parse_value(std::string_view text, std::size_t line_no) {
  try {
    return parse_double(text);
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + e.what());
  }
}

std::size_t parse_header_field(const std::string& tok, std::string_view key, std::size_t line_no) {
  const std::string prefix = std::string(key) + "=";
  if (tok.rfind(prefix, 0) != 0) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected " + prefix + "<count>");
  }
  return parse_integer<std::size_t>(std::string_view(tok).substr(prefix.size()), line_no);
}

// Iterates over non-empty, non-comment lines. Comment lines are handed to
// `on_comment` so metadata can be recovered.
struct LineReader {
  std::istream& is;
  std::size_t line_no = 0;

  template <class OnComment>
  bool next(std::vector<std::string>& tokens, OnComment&& on_comment) {
    std::string line;
    while (std::getline(is, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos) continue;
      if (line[first] == '#') {
        on_comment(line.substr(first + 1));
        continue;
      }
      tokens = split(line);
      return true;
    }
    return false;
  }
  bool next(std::vector<std::string>& tokens) {
    return next(tokens, [](const std::string&) {});
  }
};

void expect_arity(const std::vector<std::string>& t, std::size_t n, std::size_t line_no) {
  if (t.size() != n) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": record '" + t[0] + "' expects " +
                                           std::to_string(n - 1) + " fields");
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error(ErrorCode::InvalidArgument, "cannot format number");
  return std::string(buf, p);
}

double parse_double(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::ParseError, "expected number, got '" + std::string(text) + "'");
  }
  return v;
}

void write_graph(std::ostream& os, const WeightedGraph& g) {
  os << "graph v=" << g.vertex_count() << '\n';
  for (const auto& [k, v] : g.metadata()) os << "# meta " << k << ' ' << v << '\n';
  for (Index x = 0; x < g.vertex_count(); ++x) os << "m " << x << ' ' << format_double(g.measure(x)) << '\n';
  for (const Edge& e : g.edges()) os << "b " << e.x << ' ' << e.y << ' ' << format_double(e.weight) << '\n';
  for (Index x = 0; x < g.labels().size(); ++x) os << "l " << x << ' ' << g.labels()[x] << '\n';
}

WeightedGraph read_graph(std::istream& is) {
  LineReader r{is};
  std::vector<std::pair<std::string, std::string>> meta;
  auto on_comment = [&](const std::string& c) {
    auto t = split(c);
    if (t.size() >= 2 && t[0] == "meta") {
      const auto pos = c.find(t[1]) + t[1].size();
      const auto vpos = c.find_first_not_of(" \t", pos);
      meta.emplace_back(t[1], vpos == std::string::npos ? "" : c.substr(vpos));
    }
  };
  std::vector<std::string> t;
  if (!r.next(t, on_comment) || t.size() != 2 || t[0] != "graph") {
    throw Error(ErrorCode::ParseError, "missing 'graph v=<N>' header");
  }
  const std::size_t n = parse_header_field(t[1], "v", r.line_no);
  std::vector<double> m(n, 0.0);
  std::vector<bool> seen(n, false);
  std::vector<Edge> edges;
  std::vector<std::string> labels;
  while (r.next(t, on_comment)) {
    const std::string& tag = t[0];
    if (tag == "m") {
      expect_arity(t, 3, r.line_no);
      const auto x = parse_integer<std::size_t>(t[1], r.line_no);
      if (x >= n) throw Error(ErrorCode::IndexOutOfRange, "line " + std::to_string(r.line_no) + ": vertex out of range");
      m[x] = parse_value(t[2], r.line_no);
      seen[x] = true;
    } else if (tag == "b") {
      expect_arity(t, 4, r.line_no);
      edges.push_back({parse_integer<std::size_t>(t[1], r.line_no), parse_integer<std::size_t>(t[2], r.line_no),
                       parse_value(t[3], r.line_no)});
    } else if (tag == "l") {
      expect_arity(t, 3, r.line_no);
      const auto x = parse_integer<std::size_t>(t[1], r.line_no);
      if (x >= n) throw Error(ErrorCode::IndexOutOfRange, "line " + std::to_string(r.line_no) + ": vertex out of range");
      if (labels.empty()) labels.resize(n);
      labels[x] = t[2];
    } else {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(r.line_no) + ": unknown record '" + tag + "'");
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (!seen[x]) throw Error(ErrorCode::ParseError, "no measure given for vertex " + std::to_string(x));
  }
  WeightedGraph g = WeightedGraph::from_edges(edges, std::move(m), std::move(labels));
  for (auto& [k, v] : meta) g.set_metadata(k, v);
  return g;
}

std::string graph_to_string(const WeightedGraph& g) {
  std::ostringstream os;
  write_graph(os, g);
  return os.str();
}

WeightedGraph graph_from_string(const std::string& text) {
  std::istringstream is(text);
  return read_graph(is);
}

void write_perturbation(std::ostream& os, const PerturbationSpec& spec) {
  os << "perturbation v=" << spec.vertex_count << '\n';
  os << "seed " << spec.seed << '\n';
  if (spec.decay_exponent) os << "decay_exponent " << format_double(*spec.decay_exponent) << '\n';
  if (spec.base_rate) os << "base_rate " << format_double(*spec.base_rate) << '\n';
  for (Index x = 0; x < spec.mu.size(); ++x) {
    if (spec.mu[x] != 0.0 || std::signbit(spec.mu[x])) os << "mu " << x << ' ' << format_double(spec.mu[x]) << '\n';
  }
  for (const Edge& e : spec.beta) os << "beta " << e.x << ' ' << e.y << ' ' << format_double(e.weight) << '\n';
}

PerturbationSpec read_perturbation(std::istream& is) {
  LineReader r{is};
  std::vector<std::string> t;
  if (!r.next(t) || t.size() != 2 || t[0] != "perturbation") {
    throw Error(ErrorCode::ParseError, "missing 'perturbation v=<N>' header");
  }
  PerturbationSpec spec;
  spec.vertex_count = parse_header_field(t[1], "v", r.line_no);
  spec.mu.assign(spec.vertex_count, 0.0);
  while (r.next(t)) {
    const std::string& tag = t[0];
    if (tag == "seed") {
      expect_arity(t, 2, r.line_no);
      spec.seed = parse_integer<std::uint64_t>(t[1], r.line_no);
    } else if (tag == "decay_exponent") {
      expect_arity(t, 2, r.line_no);
      spec.decay_exponent = parse_value(t[1], r.line_no);
    } else if (tag == "base_rate") {
      expect_arity(t, 2, r.line_no);
      spec.base_rate = parse_value(t[1], r.line_no);
    } else if (tag == "mu") {
      expect_arity(t, 3, r.line_no);
      const auto x = parse_integer<std::size_t>(t[1], r.line_no);
      if (x >= spec.vertex_count) {
        throw Error(ErrorCode::IndexOutOfRange, "line " + std::to_string(r.line_no) + ": vertex out of range");
      }
      spec.mu[x] = parse_value(t[2], r.line_no);
    } else if (tag == "beta") {
      expect_arity(t, 4, r.line_no);
      spec.beta.push_back({parse_integer<std::size_t>(t[1], r.line_no), parse_integer<std::size_t>(t[2], r.line_no),
                           parse_value(t[3], r.line_no)});
    } else {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(r.line_no) + ": unknown record '" + tag + "'");
    }
  }
  spec.validate();
  return spec;
}

std::string perturbation_to_string(const PerturbationSpec& spec) {
  std::ostringstream os;
  write_perturbation(os, spec);
  return os.str();
}

PerturbationSpec perturbation_from_string(const std::string& text) {
  std::istringstream is(text);
  return read_perturbation(is);
}

void write_spheres(std::ostream& os, const SphereDecomposition& spheres) {
  os << "spheres n=" << spheres.sphere_count() << " v=" << spheres.vertex_count() << '\n';
  for (std::size_t n = 0; n < spheres.sphere_count(); ++n) {
    os << "s " << n;
    for (Index x : spheres.sphere(n)) os << ' ' << x;
    os << '\n';
  }
}

SphereDecomposition read_spheres(std::istream& is) {
  LineReader r{is};
  std::vector<std::string> t;
  if (!r.next(t) || t.size() != 3 || t[0] != "spheres") {
    throw Error(ErrorCode::ParseError, "missing 'spheres n=<R> v=<N>' header");
  }
  const std::size_t count = parse_header_field(t[1], "n", r.line_no);
  const std::size_t n = parse_header_field(t[2], "v", r.line_no);
  std::vector<std::vector<Index>> spheres(count);
  while (r.next(t)) {
    if (t[0] != "s" || t.size() < 2) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(r.line_no) + ": expected 's <n> <x>...'");
    }
    const auto k = parse_integer<std::size_t>(t[1], r.line_no);
    if (k >= count) throw Error(ErrorCode::IndexOutOfRange, "line " + std::to_string(r.line_no) + ": sphere index out of range");
    for (std::size_t i = 2; i < t.size(); ++i) spheres[k].push_back(parse_integer<std::size_t>(t[i], r.line_no));
  }
  return SphereDecomposition(std::move(spheres), n);
}

std::string spheres_to_string(const SphereDecomposition& spheres) {
  std::ostringstream os;
  write_spheres(os, spheres);
  return os.str();
}

SphereDecomposition spheres_from_string(const std::string& text) {
  std::istringstream is(text);
  return read_spheres(is);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "read failure on '" + path + "'");
  return os.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failure on '" + path + "'");
}

}  // namespace wgs
