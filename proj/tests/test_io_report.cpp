#include <doctest.h>

#include <functional>
#include <sstream>

#include "support/random_graphs.hpp"
#include "wgs/density_io.hpp"
#include "wgs/error.hpp"
#include "wgs/graph_io.hpp"
#include "wgs/report.hpp"
#include "wgs/spectra.hpp"

using namespace wgs;
using testsupport::Rng;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no exception");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("density round trip is exact") {
  Rng rng(61);
  for (int t = 0; t < 20; ++t) {
    SpectralDensity d;
    d.grid = linear_grid(rng.uniform(-2.0, 0.0), rng.uniform(1.0, 9.0), 5 + rng.index(200));
    for (double x : d.grid) d.density.push_back(std::exp(-x * x) * rng.uniform(0.0, 3.0));
    d.bandwidth = rng.uniform(0.0, 0.5);
    d.method = t % 2 ? "kpm" : "eigen";
    if (t % 3 == 0) d.support = std::make_pair(0.0, rng.uniform(1.0, 8.0));
    d.metadata["convention"] = "non-root degree k+1";
    d.metadata["moments"] = std::to_string(t);
    d.update_normalization();
    const SpectralDensity r = density_from_string(density_to_string(d));
    CHECK(r.grid == d.grid);
    CHECK(r.density == d.density);
    CHECK(r.bandwidth == d.bandwidth);
    CHECK(r.method == d.method);
    CHECK(r.normalization == d.normalization);
    CHECK(r.support == d.support);
    CHECK(r.metadata == d.metadata);
    CHECK(density_to_string(r) == density_to_string(d));
  }
}

TEST_CASE("density parse errors") {
  const std::string good = density_to_string(lattice_dos_smoothed(1, linear_grid(0.0, 4.0, 5), 0.1));
  CHECK_NOTHROW(density_from_string(good));
  CHECK(code_of([] { density_from_string("0 1\n1 2\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([&] { density_from_string(good + "3.5\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([&] { density_from_string(good + "0.5 1\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([&] { density_from_string(good + "5 x\n"); }) == ErrorCode::ParseError);
  try {
    density_from_string(good + "5 x\n");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }
}

TEST_CASE("report layout and round trip") {
  Report r;
  r.set("config", "seed", "7");
  r.set("result", "value", 0.1);
  r.set("result", "flag", "true");
  r.set("timing", "wall_seconds", 1.25);
  const std::string text = r.to_string();
  CHECK(text.rfind("[report]\nschema_version=1\nlibrary_version=0.1.0\n", 0) == 0);
  CHECK(text.find("value=0.1\n") != std::string::npos);
  CHECK(r.get("result", "flag") == "true");
  CHECK(r.get("result", "missing").empty());
  CHECK(r.has_section("config"));
  CHECK_FALSE(r.has_section("nothing"));

  const Report p = Report::parse(text);
  CHECK(p.to_string() == text);
  CHECK(parse_double(p.get("result", "value")) == 0.1);

  const std::string norm = normalize_report(text);
  CHECK(norm.find("[timing]") == std::string::npos);
  CHECK(norm.find("wall_seconds") == std::string::npos);
  CHECK(norm.find("[result]") != std::string::npos);
  Report other = r;
  other.set("timing", "wall_seconds", 9.5);
  CHECK(normalize_report(other.to_string()) == norm);
  CHECK(normalize_report(norm) == norm);
}

TEST_CASE("report parse errors") {
  CHECK(code_of([] { Report::parse("[report]\nschema_version=99\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { Report::parse("[report]\nschema_version=1\nno equals sign\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { Report::parse("key=value\n"); }) == ErrorCode::ParseError);
}

TEST_CASE("format_double is shortest round-trip") {
  Rng rng(62);
  for (int t = 0; t < 1000; ++t) {
    const double v = std::ldexp(rng.uniform(-1.0, 1.0), static_cast<int>(rng.index(200)) - 100);
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(code_of([] { parse_double("1.0x"); }) == ErrorCode::ParseError);
}

TEST_CASE("file helpers report IO failures") {
  CHECK(code_of([] { read_file("/nonexistent/dir/file.txt"); }) == ErrorCode::IoError);
  CHECK(code_of([] { write_file("/nonexistent/dir/file.txt", "x"); }) == ErrorCode::IoError);
}
