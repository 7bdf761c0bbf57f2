#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "freemix/algebra.hpp"
#include "freemix/markov.hpp"

namespace freemix {

/// Exact-mode capacity of wmz_quantity: the phase search is exponential in n.
inline constexpr long kWmzExactMaxN = 12;

/// Bounded sequence in a finite-dimensional normed space, supplied as a rule
/// k -> x_k (k >= 1) plus a uniform norm cap and the norm itself. The norm
/// defaults to Euclidean; Markov-orbit sequences carry the operator norm of
/// the devectorized element.
class VectorSequence {
public:
  using Generator = std::function<Vector(long)>;
  using Norm = std::function<double(const Vector&)>;

  VectorSequence(std::string name, Generator gen, double norm_cap,
                 Norm norm = {});

  const std::string& name() const { return name_; }
  double norm_cap() const { return norm_cap_; }

  /// x_k for k >= 1; enforces the boundedness invariant on every access.
  Vector at(long k) const;
  double norm(const Vector& v) const { return norm_(v); }

  static VectorSequence eigen_sequence(Complex z, const Vector& v);
  static VectorSequence alternating(const Vector& v);
  static VectorSequence inverse_sqrt(const Vector& v);
  static VectorSequence zero(Eigen::Index dim);
  /// x_k = T^k(x) - F(x) with the C*-operator norm; the orbit is cached.
  static VectorSequence markov_orbit(const MarkovOperator& t,
                                     const AlgebraElement& x);

private:
  std::string name_;
  Generator gen_;
  double norm_cap_;
  Norm norm_;
};

/// Strictly increasing positive integers k_1 < k_2 < ...
class IndexSequence {
public:
  IndexSequence(std::string name, std::vector<long> indices);

  const std::string& name() const { return name_; }
  std::span<const long> indices() const { return indices_; }
  long size() const { return static_cast<long>(indices_.size()); }

  static IndexSequence all(long count);
  static IndexSequence evens(long horizon);
  static IndexSequence odds(long horizon);
  static IndexSequence squares(long horizon);
  static IndexSequence arithmetic(long start, long step, long horizon);

private:
  std::string name_;
  std::vector<long> indices_;
};

enum class WmzCertificate { kExact, kLowerBound };

struct WmzResult {
  double value = 0.0;
  WmzCertificate certificate = WmzCertificate::kLowerBound;
};

struct WmzSampling {
  long trials = 2000;
  unsigned seed = 1;
};

/// sup over unit-ball functionals f of (1/n) sum_{k=1}^n |f(x_k)|, computed
/// through the unimodular-phase identity as sup over phase patterns of
/// |(1/n) sum eps_k x_k|. Exact mode (n <= kWmzExactMaxN) exhausts a coarse
/// phase grid (budgeted resolution, at least pi/32 for n <= 4) and polishes
/// with monotone coordinate-ascent refinement; throws CapacityError beyond
/// the cutoff.
WmzResult wmz_quantity(const VectorSequence& seq, long n);

/// Sampled mode: seeded random phase patterns plus the same refinement;
/// the value is a certified lower bound for the supremum.
WmzResult wmz_quantity(const VectorSequence& seq, long n,
                       const WmzSampling& sampling);

/// |(1/n) sum_{j=1}^n x_{k_j}|; requires at least n stored indices.
double subsequence_cesaro_norm(const VectorSequence& seq,
                               const IndexSequence& idx, long n);

/// Finite-horizon lower envelope of the counting ratio |idx * [1,m]| / m,
/// minimized over the last eighth of the horizon (a liminf proxy; the true
/// asymptotic density is not computable from finitely many terms).
double lower_density(const IndexSequence& idx, long horizon);

struct RelativeDensity {
  bool relatively_dense = false;
  long max_gap = 0;
};

/// Finite-horizon proxy for bounded gaps: the sequence must reach the horizon
/// (within its own largest gap) and the gaps in the second half of the
/// horizon must not exceed those seen in the first half.
RelativeDensity relatively_dense(const IndexSequence& idx, long horizon);

}  // namespace freemix
