#pragma once

#include <stdexcept>
#include <string>

namespace fpn {

// Raised by gamma() when the argument sits on a pole.
class pole_argument : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class invalid_fractional_order : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Any failure to evaluate a residual function. The fixed-point driver maps
// these onto SolveStatus::evaluation_failed.
class evaluation_failed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Residual requested at a point where real powers are undefined.
class non_real_evaluation : public evaluation_failed {
 public:
  using evaluation_failed::evaluation_failed;
};

// x1^(a3+a4) == x2^(a3+a4): the reduced threshold system has no denominator.
class degenerate_thresholds : public evaluation_failed {
 public:
  using evaluation_failed::evaluation_failed;
};

class singular_jacobian : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class insufficient_data : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class invalid_primitives : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace fpn
