#pragma once

#include <span>
#include <vector>

namespace fpn {

/// Fractional order alpha of the pseudo-Newton method.
/// Valid values lie in [-2, 2] and stay more than 1e-12 away from every
/// integer; construction throws invalid_fractional_order otherwise.
class FractionalOrder {
 public:
  static constexpr double integer_guard = 1e-12;

  explicit FractionalOrder(double value);

  double value() const noexcept { return value_; }

  static bool is_valid(double value) noexcept;

  friend bool operator==(FractionalOrder, FractionalOrder) = default;

 private:
  double value_;
};

/// Diagonal of P_{eps,beta}(x). Only the diagonal is stored; dense() exists
/// for checks that want the full matrix.
struct PDiagonal {
  std::vector<double> entries;
  std::vector<double> order_used;

  std::size_t size() const noexcept { return entries.size(); }
  std::vector<std::vector<double>> dense() const;
};

/// Gamma function. Throws pole_argument within 1e-12 of a non-positive integer.
double gamma(double z);

/// Order applied to one component: alpha for nonzero components, exactly 1
/// when the component is zero.
double beta_select(FractionalOrder alpha, double component) noexcept;

/// Order-beta Riemann-Liouville derivative (base point 0) of the unit
/// constant, evaluated at |x|:
///
///   D^beta 1 = |x|^(-beta) / Gamma(1 - beta)
///
/// beta == 1 returns exactly 0 without touching gamma. Throws domain_error
/// for x == 0 with beta != 1.
double constant_frac_deriv(double beta, double x);

/// Builds the diagonal of P_{eps,beta}(x). Throws domain_error unless
/// epsilon > 0.
PDiagonal p_matrix(FractionalOrder alpha, std::span<const double> x, double epsilon);

}  // namespace fpn
