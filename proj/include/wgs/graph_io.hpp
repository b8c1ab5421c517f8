#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "wgs/graph.hpp"

namespace wgs {

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);
/// Strict full-string parse; throws ParseError.
double parse_double(std::string_view text);

// Text formats:
//   graph v=<N>            perturbation v=<N>         spheres n=<R+1> v=<N>
//   m <x> <value>          seed <u64>                 s <n> <x> <x> ...
//   b <x> <y> <value>      decay_exponent <value>
//   l <x> <tag>            base_rate <value>
//                          mu <x> <value>
//                          beta <x> <y> <value>
// Lines starting with '#' are comments. Graph metadata is written as
// "# meta <key> <value>" and restored on read.

void write_graph(std::ostream& os, const WeightedGraph& g);
WeightedGraph read_graph(std::istream& is);
std::string graph_to_string(const WeightedGraph& g);
WeightedGraph graph_from_string(const std::string& text);

void write_perturbation(std::ostream& os, const PerturbationSpec& spec);
PerturbationSpec read_perturbation(std::istream& is);
std::string perturbation_to_string(const PerturbationSpec& spec);
PerturbationSpec perturbation_from_string(const std::string& text);

void write_spheres(std::ostream& os, const SphereDecomposition& spheres);
SphereDecomposition read_spheres(std::istream& is);
std::string spheres_to_string(const SphereDecomposition& spheres);
SphereDecomposition spheres_from_string(const std::string& text);

/// Whole-file helpers; failures throw IoError.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace wgs
