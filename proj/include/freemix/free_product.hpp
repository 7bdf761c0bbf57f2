#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "freemix/algebra.hpp"
#include "freemix/decay.hpp"

namespace freemix {

/// Centering tolerance for word letters.
inline constexpr double kCenteringTol = 1e-12;

/// The common state on the d x d factor algebra; every copy in the free
/// product carries the same one (heterogeneous copies are rejected by
/// construction since there is only one state object).
class AmalgamState {
public:
  explicit AmalgamState(Matrix rho, double tol = kDefaultTol);

  static AmalgamState trace_state(Eigen::Index d);

  Eigen::Index dim() const { return rho_.rows(); }
  const Matrix& density() const { return rho_; }
  bool faithful() const { return faithful_; }

  Complex expect(const Matrix& a) const;

private:
  Matrix rho_;
  bool faithful_ = false;
};

/// a - phi(a) 1: the centered part of a factor element.
Matrix center(const Matrix& a, const AmalgamState& st);

/// One tensor leg of a reduced word: the copy index and a centered element.
struct CenteredLetter {
  long index = 0;
  Matrix element;
};

/// Alternating product of centered letters, length p >= 1. Consecutive copy
/// indices must differ; letters must be centered and nonzero.
class ProductWord {
public:
  ProductWord(std::vector<CenteredLetter> letters, const AmalgamState& st);

  std::size_t length() const { return letters_.size(); }
  const std::vector<CenteredLetter>& letters() const { return letters_; }
  std::vector<long> index_pattern() const;

private:
  explicit ProductWord(std::vector<CenteredLetter> letters)
      : letters_(std::move(letters)) {}
  friend ProductWord shift_word(const ProductWord&, long);

  std::vector<CenteredLetter> letters_;
};

/// Copy-index translation m(i) -> m(i) + k; letters unchanged, alternation
/// preserved.
ProductWord shift_word(const ProductWord& w, long k);

/// Finite linear combination of alternating words plus a scalar part.
class FreeProductElement {
public:
  FreeProductElement() = default;
  explicit FreeProductElement(Complex scalar) : scalar_(scalar) {}

  static FreeProductElement word(const ProductWord& w, Complex coeff = 1.0);

  Complex scalar() const { return scalar_; }
  const std::vector<std::pair<Complex, ProductWord>>& terms() const {
    return terms_;
  }

  void add_scalar(Complex c) { scalar_ += c; }
  void add_word(const ProductWord& w, Complex coeff);

private:
  Complex scalar_{0.0, 0.0};
  std::vector<std::pair<Complex, ProductWord>> terms_;
};

/// Vacuum expectation: the scalar part; every word of length >= 1 has
/// expectation zero.
Complex phi(const FreeProductElement& x);

/// Vacuum inner product of two words: zero unless the index patterns agree
/// exactly, in which case it factorizes over the legs as
/// prod_i phi(a_i^{(v)*} a_i^{(w)}). Throws DomainError on uncentered letters.
Complex word_inner(const ProductWord& w, const ProductWord& v,
                   const AmalgamState& st);

/// |x Omega|: bilinear expansion through word_inner plus the scalar part; a
/// certified lower bound for the C*-norm of x.
double gns_norm(const FreeProductElement& x, const AmalgamState& st);

/// Uniform Cesaro combination (1/n) sum_j alpha^{k_j}(w) over distinct shifts
/// of a single word; the only shape for which the word-length norm bound is
/// asserted.
class CesaroShifts {
public:
  CesaroShifts(ProductWord base, std::vector<long> shifts);

  const ProductWord& base() const { return base_; }
  std::span<const long> shifts() const { return shifts_; }
  long n() const { return static_cast<long>(shifts_.size()); }

  FreeProductElement element() const;

private:
  ProductWord base_;
  std::vector<long> shifts_;
};

/// Exact-factor GNS norm of the Cesaro combination: sqrt of the exact
/// rational 1/n times the word's own inner product.
double gns_norm(const CesaroShifts& x, const AmalgamState& st);

/// (2p+1)/sqrt(n) * prod_i |a_i|: upper bound for the reduced C*-norm of the
/// Cesaro combination; always dominates gns_norm.
double ad_norm_bound(const CesaroShifts& x, const AmalgamState& st);

/// Per n: GNS lower bound and word-length upper bound of the Cesaro average
/// of the first n shifts; both proportional to 1/sqrt(n).
std::vector<DecayRecord> product_decay_experiment(const ProductWord& w,
                                                  std::span<const long> n_values,
                                                  const AmalgamState& st,
                                                  const std::string& label);

}  // namespace freemix
