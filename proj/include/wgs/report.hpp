#pragma once

#include <string>
#include <utility>
#include <vector>

namespace wgs {

inline constexpr const char* library_version = "0.1.0";
inline constexpr int report_schema_version = 1;

/// Versioned key=value text with `[section]` headers. Sections and keys keep
/// insertion order so identical runs print identical bytes.
std::string normalize_report(const std::string& text);

class Report {
 public:
  using Entries = std::vector<std::pair<std::string, std::string>>;

  Report();

  /// Returns the named section, creating it at the end on first use.
  Entries& section(const std::string& name);
  void set(const std::string& section, const std::string& key, const std::string& value);
  void set(const std::string& section, const std::string& key, double value);
  /// Value lookup; empty when absent.
  std::string get(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& name) const;

  const std::vector<std::pair<std::string, Entries>>& sections() const noexcept { return sections_; }

  std::string to_string() const;
  static Report parse(const std::string& text);

 private:
  friend std::string normalize_report(const std::string& text);
  std::vector<std::pair<std::string, Entries>> sections_;
};

/// Drops the [timing] section so reports from identical runs compare equal.
std::string normalize_report(const std::string& text);

}  // namespace wgs
