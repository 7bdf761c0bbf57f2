#include "freemix/free_product.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

namespace freemix {

AmalgamState::AmalgamState(Matrix rho, double tol) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() < 1)
    throw StructuralError("amalgam state: density must be square");
  if ((rho_ - rho_.adjoint()).norm() > tol)
    throw DomainError("amalgam state: density is not self-adjoint");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol)
    throw DomainError("amalgam state: density is not positive semidefinite");
  if (std::abs(rho_.trace().real() - 1.0) > tol)
    throw DomainError("amalgam state: density trace differs from 1");
  faithful_ = es.eigenvalues().minCoeff() > tol;
}

AmalgamState AmalgamState::trace_state(Eigen::Index d) {
  return AmalgamState(Matrix::Identity(d, d) / static_cast<double>(d));
}

Complex AmalgamState::expect(const Matrix& a) const {
  if (a.rows() != dim() || a.cols() != dim())
    throw StructuralError("amalgam state: element dimension mismatch");
  return (rho_ * a).trace();
}

Matrix center(const Matrix& a, const AmalgamState& st) {
  return a - st.expect(a) * Matrix::Identity(st.dim(), st.dim());
}

ProductWord::ProductWord(std::vector<CenteredLetter> letters,
                         const AmalgamState& st)
    : letters_(std::move(letters)) {
  if (letters_.empty())
    throw StructuralError("product word needs at least one letter");
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    const auto& l = letters_[i];
    if (l.element.rows() != st.dim() || l.element.cols() != st.dim())
      throw StructuralError("product word: letter dimension mismatch");
    if (l.element.norm() == 0.0)
      throw DomainError("product word: zero letter");
    if (std::abs(st.expect(l.element)) > kCenteringTol) {
      std::ostringstream msg;
      msg << "product word: letter " << i << " is not centered (phi = "
          << std::abs(st.expect(l.element)) << ")";
      throw DomainError(msg.str());
    }
    if (i > 0 && letters_[i - 1].index == l.index)
      throw DomainError("product word: consecutive letters share a copy index");
  }
}

std::vector<long> ProductWord::index_pattern() const {
  std::vector<long> pattern;
  pattern.reserve(letters_.size());
  for (const auto& l : letters_) pattern.push_back(l.index);
  return pattern;
}

ProductWord shift_word(const ProductWord& w, long k) {
  std::vector<CenteredLetter> letters = w.letters();
  for (auto& l : letters) l.index += k;
  return ProductWord(std::move(letters));
}

FreeProductElement FreeProductElement::word(const ProductWord& w,
                                            Complex coeff) {
  FreeProductElement x;
  x.add_word(w, coeff);
  return x;
}

void FreeProductElement::add_word(const ProductWord& w, Complex coeff) {
  terms_.emplace_back(coeff, w);
}

Complex phi(const FreeProductElement& x) { return x.scalar(); }

Complex word_inner(const ProductWord& w, const ProductWord& v,
                   const AmalgamState& st) {
  for (const auto* word : {&w, &v}) {
    for (const auto& l : word->letters())
      if (std::abs(st.expect(l.element)) > kCenteringTol)
        throw DomainError("word_inner: uncentered letter");
  }
  if (w.length() != v.length()) return {0.0, 0.0};
  const auto pw = w.index_pattern();
  const auto pv = v.index_pattern();
  if (pw != pv) return {0.0, 0.0};
  // Same tensor summand: the inner product factorizes over the legs.
  Complex prod{1.0, 0.0};
  for (std::size_t i = 0; i < w.length(); ++i)
    prod *= st.expect(v.letters()[i].element.adjoint() * w.letters()[i].element);
  return prod;
}

double gns_norm(const FreeProductElement& x, const AmalgamState& st) {
  double square = std::norm(x.scalar());
  Complex cross{0.0, 0.0};
  const auto& terms = x.terms();
  for (std::size_t a = 0; a < terms.size(); ++a)
    for (std::size_t b = 0; b < terms.size(); ++b)
      cross += terms[a].first * std::conj(terms[b].first) *
               word_inner(terms[a].second, terms[b].second, st);
  square += cross.real();
  return std::sqrt(std::max(0.0, square));
}

CesaroShifts::CesaroShifts(ProductWord base, std::vector<long> shifts)
    : base_(std::move(base)), shifts_(std::move(shifts)) {
  if (shifts_.empty())
    throw StructuralError("Cesaro combination needs at least one shift");
  std::set<long> distinct(shifts_.begin(), shifts_.end());
  if (distinct.size() != shifts_.size())
    throw StructuralError("Cesaro combination: shifts must be distinct");
}

FreeProductElement CesaroShifts::element() const {
  FreeProductElement x;
  const Complex weight{1.0 / static_cast<double>(n()), 0.0};
  for (long k : shifts_) x.add_word(shift_word(base_, k), weight);
  return x;
}

double gns_norm(const CesaroShifts& x, const AmalgamState& st) {
  // Distinct shifts are orthogonal, so the square is exactly (1/n) times the
  // base word's own inner product; the rational factor is kept exact.
  const boost::multiprecision::cpp_rational factor(1, x.n());
  const double base_sq = word_inner(x.base(), x.base(), st).real();
  return std::sqrt(factor.convert_to<double>() * std::max(0.0, base_sq));
}

double ad_norm_bound(const CesaroShifts& x, const AmalgamState& st) {
  (void)st;
  const double p = static_cast<double>(x.base().length());
  double prod = 1.0;
  for (const auto& l : x.base().letters()) {
    Eigen::JacobiSVD<Matrix> svd(l.element);
    prod *= svd.singularValues()(0);
  }
  return (2.0 * p + 1.0) / std::sqrt(static_cast<double>(x.n())) * prod;
}

std::vector<DecayRecord> product_decay_experiment(const ProductWord& w,
                                                  std::span<const long> n_values,
                                                  const AmalgamState& st,
                                                  const std::string& label) {
  std::vector<DecayRecord> records;
  records.reserve(n_values.size());
  for (long n : n_values) {
    std::vector<long> shifts(n);
    for (long k = 0; k < n; ++k) shifts[k] = k + 1;
    const CesaroShifts cs(w, std::move(shifts));
    DecayRecord rec;
    rec.label = label;
    rec.n = n;
    rec.lower_square = boost::multiprecision::cpp_rational(1, n);
    rec.lower_square_is_full = false;
    rec.lower_float = gns_norm(cs, st);
    rec.upper_float = ad_norm_bound(cs, st);
    rec.constants_mode = "word-length";
    rec.word_length = static_cast<int>(w.length());
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace freemix
