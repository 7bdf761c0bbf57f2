#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace freemix {

/// One row of a norm-decay experiment: an exact (or partially exact) lower
/// bound for the C*-norm of a Cesaro average and an analytic upper bound.
struct DecayRecord {
  std::string label;
  long n = 1;
  /// Exact rational square attached to the lower bound. For group-algebra
  /// rows this is the full squared lower bound; for free-product rows it is
  /// the exact shift-averaging factor 1/n (the d x d inner products enter
  /// lower_float in double precision).
  boost::multiprecision::cpp_rational lower_square;
  bool lower_square_is_full = true;
  double lower_float = 0.0;
  double upper_float = 0.0;
  std::string constants_mode;
  int word_length = 0;  // p
};

}  // namespace freemix
