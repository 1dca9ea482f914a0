#pragma once

#include <vector>

namespace hadeq {

/// Parameter sequence indexed from k = 0.
///
/// CONSTANT(c) = c, GEOMETRIC(a, q) = a q^k, HARMONIC = 1/(k+1), CUSTOM holds
/// its last listed value past the end of the list.
class Schedule {
 public:
  enum class Kind { kConstant, kGeometric, kHarmonic, kCustom };

  static Schedule constant(double c);
  static Schedule geometric(double a, double q);
  static Schedule harmonic();
  static Schedule custom(std::vector<double> values);

  double at(int k) const;

  Kind kind() const { return kind_; }
  double a() const { return a_; }
  double q() const { return q_; }
  const std::vector<double>& values() const { return values_; }

  /// Regularization role: every value in (theta, lambda_bar]. Returns
  /// lambda_bar, the supremum of the schedule.
  double validate_as_lambda(double theta) const;
  /// Inexactness role: nonnegative and summable. Returns the certified sum.
  double validate_as_error() const;
  /// Halpern role: values in (0,1) for k >= 1, alpha_k -> 0 and a divergent
  /// sum. Only HARMONIC is certified.
  void validate_as_alpha() const;

 private:
  Schedule(Kind kind, double a, double q, std::vector<double> values)
      : kind_(kind), a_(a), q_(q), values_(std::move(values)) {}

  Kind kind_;
  double a_ = 0.0;
  double q_ = 0.0;
  std::vector<double> values_;
};

const char* to_string(Schedule::Kind kind);

}  // namespace hadeq
