#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "freemix/errors.hpp"

namespace freemix {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Default tolerance for self-adjointness / PSD checks; comfortably above
/// double-precision eigensolver residuals at the dimensions handled here.
inline constexpr double kDefaultTol = 1e-9;

/// Block structure of a finite direct sum of matrix algebras M_{d1} + ... + M_{dm}.
struct BlockShape {
  std::vector<Eigen::Index> dims;

  /// Linear dimension of the algebra, D = sum d_j^2.
  Eigen::Index total_dim() const {
    Eigen::Index d = 0;
    for (auto n : dims) d += n * n;
    return d;
  }

  /// Size of the block-diagonal embedding, N = sum d_j.
  Eigen::Index embed_dim() const {
    Eigen::Index d = 0;
    for (auto n : dims) d += n;
    return d;
  }

  std::size_t block_count() const { return dims.size(); }

  bool operator==(const BlockShape&) const = default;
};

/// Element of a block-diagonal complex matrix algebra. Immutable value type;
/// all arithmetic returns fresh elements and requires matching shapes.
class AlgebraElement {
public:
  explicit AlgebraElement(std::vector<Matrix> blocks);

  static AlgebraElement zero(const BlockShape& shape);
  static AlgebraElement identity(const BlockShape& shape);
  /// e_{ij} inside block `block`, zero elsewhere.
  static AlgebraElement matrix_unit(const BlockShape& shape, std::size_t block,
                                    Eigen::Index i, Eigen::Index j);
  /// Rebuild from the stacked column-major vectorization (inverse of vectorize()).
  static AlgebraElement from_vector(const BlockShape& shape, const Vector& v);
  /// Block-diagonal compression of a full embed_dim x embed_dim matrix.
  static AlgebraElement compress(const BlockShape& shape, const Matrix& full);

  const BlockShape& shape() const { return shape_; }
  std::size_t block_count() const { return blocks_.size(); }
  const Matrix& block(std::size_t j) const { return blocks_[j]; }

  AlgebraElement adjoint() const;
  Complex trace() const;

  /// Stacked column-major vectorization, length shape().total_dim().
  Vector vectorize() const;
  /// Block-diagonal embedding into M_N, N = shape().embed_dim().
  Matrix embed() const;

  AlgebraElement operator+(const AlgebraElement& rhs) const;
  AlgebraElement operator-(const AlgebraElement& rhs) const;
  AlgebraElement operator*(const AlgebraElement& rhs) const;  // blockwise product
  AlgebraElement operator*(Complex c) const;
  AlgebraElement operator/(Complex c) const { return *this * (Complex{1.0, 0.0} / c); }

private:
  BlockShape shape_;
  std::vector<Matrix> blocks_;

  void require_same_shape(const AlgebraElement& rhs) const;
};

inline AlgebraElement operator*(Complex c, const AlgebraElement& x) { return x * c; }

/// C*-norm: the largest singular value across blocks.
double operator_norm(const AlgebraElement& x);

/// Hilbert-Schmidt norm, sqrt(sum |entries|^2).
double frobenius_norm(const AlgebraElement& x);

/// Hilbert-Schmidt pairing sum_j tr(x_j^* y_j), conjugate-linear in x.
Complex hs_inner(const AlgebraElement& x, const AlgebraElement& y);

/// True iff x is self-adjoint within tol and every block has min eigenvalue >= -tol.
/// Throws DomainError when x is not self-adjoint within tol.
bool is_psd(const AlgebraElement& x, double tol = kDefaultTol);

struct EigenPair {
  Complex value;
  std::size_t block;
  Vector vector;  // eigenvector within its block
};

/// Dense non-normal eigendecomposition, blockwise. Each returned pair
/// satisfies |x v - lambda v| <= tol * max(|x|, 1); otherwise NumericalError.
std::vector<EigenPair> eig(const AlgebraElement& x, double tol = 1e-8);

/// Same contract for a plain square matrix (used on superoperators).
std::vector<std::pair<Complex, Vector>> eig_matrix(const Matrix& m, double tol = 1e-8);

/// Positive unit-trace functional on a block algebra, paired with elements by
/// psi(x) = sum_j tr(rho_j x_j).
class State {
public:
  State(const BlockShape& shape, std::vector<Matrix> densities,
        double tol = kDefaultTol);

  static State maximally_mixed(const BlockShape& shape);
  /// Vector state from a unit vector in C^N (N = embed_dim); the density is
  /// the block compression of v v^*.
  static State pure(const BlockShape& shape, const Vector& v,
                    double tol = kDefaultTol);

  const BlockShape& shape() const { return shape_; }
  const Matrix& density(std::size_t j) const { return rho_[j]; }

  Complex operator()(const AlgebraElement& x) const;

  /// vec(rho); pairing is psi(x) = vec(rho)^dagger vec(x).
  Vector vectorized_density() const;

  /// True iff every density block has min eigenvalue > tol.
  bool faithful(double tol = 1e-12) const;

private:
  BlockShape shape_;
  std::vector<Matrix> rho_;
};

}  // namespace freemix
