#include "wgs/density_io.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "wgs/error.hpp"
#include "wgs/graph_io.hpp"

namespace wgs {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "density line " + std::to_string(line) + ": " + what);
}

}  // namespace

void write_density(std::ostream& os, const SpectralDensity& d) {
  os << "# density v=1\n";
  os << "# method: " << d.method << '\n';
  os << "# bandwidth: " << format_double(d.bandwidth) << '\n';
  os << "# normalization: " << format_double(d.normalization) << '\n';
  if (d.support) os << "# support: " << format_double(d.support->first) << ' ' << format_double(d.support->second) << '\n';
  for (const auto& [k, v] : d.metadata) os << "# meta." << k << ": " << v << '\n';
  os << "lambda density\n";
  for (std::size_t i = 0; i < d.grid.size(); ++i) {
    os << format_double(d.grid[i]) << ' ' << format_double(d.density[i]) << '\n';
  }
}

SpectralDensity read_density(std::istream& is) {
  SpectralDensity d;
  std::string line;
  std::size_t no = 0;
  bool header_seen = false;
  bool columns_seen = false;
  while (std::getline(is, line)) {
    ++no;
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = trim(line.substr(1));
      if (!header_seen) {
        if (body != "density v=1") fail(no, "expected header '# density v=1'");
        header_seen = true;
        continue;
      }
      const auto colon = body.find(':');
      if (colon == std::string::npos) continue;
      const std::string key = trim(body.substr(0, colon));
      const std::string value = trim(body.substr(colon + 1));
      try {
        if (key == "method") {
          d.method = value;
        } else if (key == "bandwidth") {
          d.bandwidth = parse_double(value);
        } else if (key == "normalization") {
          d.normalization = parse_double(value);
        } else if (key == "support") {
          std::istringstream ss(value);
          std::string a, b;
          if (!(ss >> a >> b)) fail(no, "support needs two values");
          d.support = std::make_pair(parse_double(a), parse_double(b));
        } else if (key.rfind("meta.", 0) == 0) {
          d.metadata[key.substr(5)] = value;
        }
      } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError && std::string(e.what()).rfind("density line", 0) == 0) throw;
        fail(no, e.what());
      }
      continue;
    }
    if (!header_seen) fail(no, "missing header");
    if (!columns_seen) {
      if (line != "lambda density") fail(no, "expected column line 'lambda density'");
      columns_seen = true;
      continue;
    }
    std::istringstream ss(line);
    std::string a, b, extra;
    if (!(ss >> a >> b) || (ss >> extra)) fail(no, "expected two columns");
    try {
      d.grid.push_back(parse_double(a));
      d.density.push_back(parse_double(b));
    } catch (const Error& e) {
      fail(no, e.what());
    }
    if (d.grid.size() > 1 && !(d.grid.back() > d.grid[d.grid.size() - 2])) fail(no, "grid must be ascending");
  }
  if (!header_seen) throw Error(ErrorCode::ParseError, "empty density file");
  return d;
}

std::string density_to_string(const SpectralDensity& d) {
  std::ostringstream os;
  write_density(os, d);
  return os.str();
}

SpectralDensity density_from_string(const std::string& text) {
  std::istringstream is(text);
  return read_density(is);
}

}  // namespace wgs
