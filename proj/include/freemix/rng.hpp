#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace freemix {

/// Seeded random source with hand-rolled Gaussian sampling. mt19937_64 is
/// pinned by the standard and Box-Muller is ours, so streams are identical
/// across standard-library implementations; std::normal_distribution is not.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    // 53-bit mantissa uniform in [0, 1).
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  std::complex<double> complex_gaussian() {
    return {gaussian(), gaussian()};
  }

  Eigen::MatrixXcd gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = complex_gaussian();
    return m;
  }

  Eigen::VectorXcd unit_vector(Eigen::Index dim) {
    Eigen::VectorXcd v = gaussian_matrix(dim, 1);
    v /= v.norm();
    return v;
  }

private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace freemix
