#include "fpn/fractional_kernel.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "fpn/errors.hpp"

namespace fpn {

FractionalOrder::FractionalOrder(double value) : value_(value) {
  if (!is_valid(value)) {
    throw invalid_fractional_order(
        fmt::format("fractional order {} must lie in [-2, 2] and be non-integer", value));
  }
}

bool FractionalOrder::is_valid(double value) noexcept {
  if (!std::isfinite(value) || value < -2.0 || value > 2.0) return false;
  return std::abs(value - std::nearbyint(value)) > integer_guard;
}

std::vector<std::vector<double>> PDiagonal::dense() const {
  std::vector<std::vector<double>> m(size(), std::vector<double>(size(), 0.0));
  for (std::size_t k = 0; k < size(); ++k) m[k][k] = entries[k];
  return m;
}

double gamma(double z) {
  if (z <= 0.0 && std::abs(z - std::nearbyint(z)) <= 1e-12) {
    throw pole_argument(fmt::format("gamma has a pole at {}", z));
  }
  return std::tgamma(z);
}

double beta_select(FractionalOrder alpha, double component) noexcept {
  return std::abs(component) != 0.0 ? alpha.value() : 1.0;
}

double constant_frac_deriv(double beta, double x) {
  if (beta == 1.0) return 0.0;
  if (x == 0.0) {
    throw domain_error(fmt::format("derivative of order {} of a constant is singular at 0", beta));
  }
  return std::pow(std::abs(x), -beta) / gamma(1.0 - beta);
}

PDiagonal p_matrix(FractionalOrder alpha, std::span<const double> x, double epsilon) {
  if (!(epsilon > 0.0)) {
    throw domain_error(fmt::format("epsilon must be positive, got {}", epsilon));
  }
  PDiagonal p;
  p.entries.resize(x.size());
  p.order_used.resize(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double beta = beta_select(alpha, x[k]);
    p.order_used[k] = beta;
    p.entries[k] = constant_frac_deriv(beta, x[k]) + epsilon;
  }
  return p;
}

}  // namespace fpn
