#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wgs/graph.hpp"
#include "wgs/heat.hpp"

namespace wgs {

/// r^{1/2} - r^{-1/2}, exactly zero iff r == 1.
double tilde(double ratio);

/// m~ per vertex and b~ per entry of pair.edges() (zero unless b1, b2 > 0).
struct TildeFields {
  std::vector<double> m;
  std::vector<double> b;
};

TildeFields tilde_fields(const GraphPair& pair);

enum class CriterionId { Theorem, Geometric, Sphere };
enum class Verdict { Satisfied, Violated, NotApplicable };

std::string to_string(CriterionId id);
std::string to_string(Verdict v);
CriterionId parse_criterion(const std::string& text);

struct SphereRow {
  std::size_t n = 0;
  std::size_t size = 0;
  double beta_n = 0.0;
  double mu_n = 0.0;
  /// sum_{j<=n} #S_j (beta_j + mu_j)
  double partial_sum = 0.0;
};

struct CriterionReport {
  CriterionId id = CriterionId::Geometric;
  /// Index k-1: the m-part and b-part for graph k. For the sphere criterion
  /// entry 0 holds sum_n #S_n mu_n and sum_n #S_n beta_n, entry 1 is unused.
  std::array<double, 2> m_sum{};
  std::array<double, 2> b_sum{};
  std::optional<double> s;
  Equivalence equivalence;
  std::vector<SupportChange> support_changes;
  Verdict verdict = Verdict::Satisfied;
  std::string reason;
  std::vector<SphereRow> spheres;
  std::vector<std::string> warnings;

  /// Sum of all reported parts.
  double total() const;
};

/// Theorem criterion from the heat diagonals P^{(k)}_s(x,x).
CriterionReport criterion_theorem(const GraphPair& pair, double s, const Eigen::VectorXd& diag1,
                                  const Eigen::VectorXd& diag2);
CriterionReport criterion_theorem(const GraphPair& pair, double s, const HeatKernel& heat1, const HeatKernel& heat2);
CriterionReport criterion_theorem(const GraphPair& pair, double s, const HeatOptions& options = {});

CriterionReport criterion_geometric(const GraphPair& pair);

CriterionReport criterion_sphere(const GraphPair& pair, const SphereDecomposition& spheres);

/// Report with verdict NotApplicable carrying the support-change list.
CriterionReport not_applicable_report(const GraphPair& pair, CriterionId id, const std::string& reason);

/// `n #S_n beta_n mu_n partial_sum` rows.
void write_sphere_table(std::ostream& os, const CriterionReport& report);

enum class TailVerdict { Convergent, Divergent, Inconclusive };
std::string to_string(TailVerdict v);

struct FamilyMember {
  GraphPair pair;
  SphereDecomposition spheres;
};

using PairFamily = std::function<FamilyMember(int radius)>;

struct TailSeries {
  std::string name;
  std::vector<double> sums;
  /// Fitted exponent p of (increment / radius step) ~ R^p over the last half.
  double increment_exponent = 0.0;
  TailVerdict verdict = TailVerdict::Inconclusive;
};

struct TailReport {
  CriterionId id = CriterionId::Geometric;
  std::vector<int> radii;
  std::vector<CriterionReport> reports;
  std::vector<TailSeries> series;
  /// Exponent of the largest non-trivial series; tail_exponent = p + 1 is the
  /// decay rate of the remaining tail sum.
  double increment_exponent = 0.0;
  double tail_exponent = 0.0;
  TailVerdict verdict = TailVerdict::Inconclusive;
};

/// Classifies one sequence of partial sums over increasing radii.
TailSeries classify_tail(const std::string& name, const std::vector<int>& radii, const std::vector<double>& sums);

TailReport tail_extrapolation(const PairFamily& family, const std::vector<int>& radii, CriterionId id,
                              std::optional<double> s = std::nullopt, const HeatOptions& options = {});

}  // namespace wgs
