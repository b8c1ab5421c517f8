#pragma once

#include <iosfwd>
#include <string>

#include "wgs/spectra.hpp"

namespace wgs {

/// Two-column `lambda density` text with a `# key: value` header carrying
/// method, bandwidth, normalization, support and free-form metadata.
void write_density(std::ostream& os, const SpectralDensity& d);
SpectralDensity read_density(std::istream& is);
std::string density_to_string(const SpectralDensity& d);
SpectralDensity density_from_string(const std::string& text);

}  // namespace wgs
