#pragma once

#include <vector>

namespace wgs {

/// Floating-point accumulator that keeps the running sum exactly as a list of
/// non-overlapping partials (Shewchuk). `value()` is the correctly rounded sum,
/// so the result does not depend on the order in which terms were added.
class ExactSum {
 public:
  void add(double x);
  void merge(const ExactSum& other);
  double value() const;

 private:
  std::vector<double> partials_;
};

}  // namespace wgs
