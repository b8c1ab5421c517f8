#include "wgs/report.hpp"

#include <sstream>

#include "wgs/error.hpp"
#include "wgs/graph_io.hpp"

namespace wgs {

Report::Report() {
  set("report", "schema_version", std::to_string(report_schema_version));
  set("report", "library_version", library_version);
}

Report::Entries& Report::section(const std::string& name) {
  for (auto& [n, e] : sections_) {
    if (n == name) return e;
  }
  sections_.emplace_back(name, Entries{});
  return sections_.back().second;
}

void Report::set(const std::string& sec, const std::string& key, const std::string& value) {
  if (key.empty() || key.find('=') != std::string::npos || value.find('\n') != std::string::npos) {
    throw Error(ErrorCode::InvalidArgument, "report entries need a key without '=' and a one-line value");
  }
  Entries& e = section(sec);
  for (auto& [k, v] : e) {
    if (k == key) {
      v = value;
      return;
    }
  }
  e.emplace_back(key, value);
}

void Report::set(const std::string& sec, const std::string& key, double value) { set(sec, key, format_double(value)); }

std::string Report::get(const std::string& sec, const std::string& key) const {
  for (const auto& [n, e] : sections_) {
    if (n != sec) continue;
    for (const auto& [k, v] : e) {
      if (k == key) return v;
    }
  }
  return {};
}

bool Report::has_section(const std::string& name) const {
  for (const auto& s : sections_) {
    if (s.first == name) return true;
  }
  return false;
}

std::string Report::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [name, entries] : sections_) {
    if (!first) os << '\n';
    first = false;
    os << '[' << name << "]\n";
    for (const auto& [k, v] : entries) os << k << '=' << v << '\n';
  }
  return os.str();
}

Report Report::parse(const std::string& text) {
  Report r;
  r.sections_.clear();
  std::istringstream is(text);
  std::string line;
  std::string current;
  std::size_t no = 0;
  while (std::getline(is, line)) {
    ++no;
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorCode::ParseError, "report line " + std::to_string(no) + ": bad section");
      current = line.substr(1, line.size() - 2);
      r.section(current);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || current.empty()) {
      throw Error(ErrorCode::ParseError, "report line " + std::to_string(no) + ": expected key=value in a section");
    }
    r.section(current).emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  if (r.get("report", "schema_version") != std::to_string(report_schema_version)) {
    throw Error(ErrorCode::ParseError, "unsupported or missing report schema_version");
  }
  return r;
}

std::string normalize_report(const std::string& text) {
  Report r = Report::parse(text);
  Report out;
  out.sections_.clear();
  for (const auto& [name, entries] : r.sections()) {
    if (name == "timing") continue;
    out.section(name) = entries;
  }
  return out.to_string();
}

}  // namespace wgs
