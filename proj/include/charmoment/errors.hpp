#pragma once

#include <stdexcept>
#include <string>

namespace charmoment {

/// Base class for all library-thrown conditions.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class zero_inverse_error : public error {
 public:
  using error::error;
};

class zero_argument_error : public error {
 public:
  using error::error;
};

class order_not_dividing_error : public error {
 public:
  using error::error;
};

class both_zero_error : public error {
 public:
  using error::error;
};

class degree_collapse_error : public error {
 public:
  using error::error;
};

class factorial_divisible_error : public error {
 public:
  using error::error;
};

class degenerate_degree_error : public error {
 public:
  using error::error;
};

class interval_out_of_range_error : public error {
 public:
  using error::error;
};

class empty_sweep_error : public error {
 public:
  using error::error;
};

class too_few_points_error : public error {
 public:
  using error::error;
};

class io_error : public error {
 public:
  using error::error;
};

}  // namespace charmoment
