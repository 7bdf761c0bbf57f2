#include "freemix/algebra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <sstream>
#include <utility>

namespace freemix {

namespace {

BlockShape shape_of(const std::vector<Matrix>& blocks) {
  BlockShape s;
  s.dims.reserve(blocks.size());
  for (const auto& b : blocks) {
    if (b.rows() != b.cols())
      throw StructuralError("algebra blocks must be square");
    if (b.rows() == 0) throw StructuralError("algebra blocks must be nonempty");
    s.dims.push_back(b.rows());
  }
  if (s.dims.empty()) throw StructuralError("algebra needs at least one block");
  return s;
}

}  // namespace

AlgebraElement::AlgebraElement(std::vector<Matrix> blocks)
    : shape_(shape_of(blocks)), blocks_(std::move(blocks)) {}

AlgebraElement AlgebraElement::zero(const BlockShape& shape) {
  std::vector<Matrix> blocks;
  blocks.reserve(shape.dims.size());
  for (auto d : shape.dims) blocks.push_back(Matrix::Zero(d, d));
  return AlgebraElement(std::move(blocks));
}

AlgebraElement AlgebraElement::identity(const BlockShape& shape) {
  std::vector<Matrix> blocks;
  blocks.reserve(shape.dims.size());
  for (auto d : shape.dims) blocks.push_back(Matrix::Identity(d, d));
  return AlgebraElement(std::move(blocks));
}

AlgebraElement AlgebraElement::matrix_unit(const BlockShape& shape,
                                           std::size_t block, Eigen::Index i,
                                           Eigen::Index j) {
  if (block >= shape.dims.size())
    throw StructuralError("matrix_unit: block index out of range");
  const Eigen::Index d = shape.dims[block];
  if (i < 0 || j < 0 || i >= d || j >= d)
    throw StructuralError("matrix_unit: entry index out of range");
  AlgebraElement x = zero(shape);
  x.blocks_[block](i, j) = 1.0;
  return x;
}

AlgebraElement AlgebraElement::from_vector(const BlockShape& shape,
                                           const Vector& v) {
  if (v.size() != shape.total_dim())
    throw StructuralError("from_vector: length does not match shape");
  std::vector<Matrix> blocks;
  blocks.reserve(shape.dims.size());
  Eigen::Index off = 0;
  for (auto d : shape.dims) {
    blocks.push_back(Eigen::Map<const Matrix>(v.data() + off, d, d));
    off += d * d;
  }
  return AlgebraElement(std::move(blocks));
}

AlgebraElement AlgebraElement::compress(const BlockShape& shape,
                                        const Matrix& full) {
  const Eigen::Index n = shape.embed_dim();
  if (full.rows() != n || full.cols() != n)
    throw StructuralError("compress: matrix does not match embedding size");
  std::vector<Matrix> blocks;
  blocks.reserve(shape.dims.size());
  Eigen::Index off = 0;
  for (auto d : shape.dims) {
    blocks.push_back(full.block(off, off, d, d));
    off += d;
  }
  return AlgebraElement(std::move(blocks));
}

void AlgebraElement::require_same_shape(const AlgebraElement& rhs) const {
  if (shape_ != rhs.shape_)
    throw StructuralError("algebra elements have different block shapes");
}

AlgebraElement AlgebraElement::adjoint() const {
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (const auto& b : blocks_) blocks.push_back(b.adjoint());
  return AlgebraElement(std::move(blocks));
}

Complex AlgebraElement::trace() const {
  Complex t = 0.0;
  for (const auto& b : blocks_) t += b.trace();
  return t;
}

Vector AlgebraElement::vectorize() const {
  Vector v(shape_.total_dim());
  Eigen::Index off = 0;
  for (const auto& b : blocks_) {
    const Eigen::Index sz = b.size();
    v.segment(off, sz) = Eigen::Map<const Vector>(b.data(), sz);
    off += sz;
  }
  return v;
}

Matrix AlgebraElement::embed() const {
  const Eigen::Index n = shape_.embed_dim();
  Matrix full = Matrix::Zero(n, n);
  Eigen::Index off = 0;
  for (const auto& b : blocks_) {
    full.block(off, off, b.rows(), b.cols()) = b;
    off += b.rows();
  }
  return full;
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& rhs) const {
  require_same_shape(rhs);
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (std::size_t j = 0; j < blocks_.size(); ++j)
    blocks.push_back(blocks_[j] + rhs.blocks_[j]);
  return AlgebraElement(std::move(blocks));
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& rhs) const {
  require_same_shape(rhs);
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (std::size_t j = 0; j < blocks_.size(); ++j)
    blocks.push_back(blocks_[j] - rhs.blocks_[j]);
  return AlgebraElement(std::move(blocks));
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& rhs) const {
  require_same_shape(rhs);
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (std::size_t j = 0; j < blocks_.size(); ++j)
    blocks.push_back(blocks_[j] * rhs.blocks_[j]);
  return AlgebraElement(std::move(blocks));
}

AlgebraElement AlgebraElement::operator*(Complex c) const {
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (const auto& b : blocks_) blocks.push_back(b * c);
  return AlgebraElement(std::move(blocks));
}

double operator_norm(const AlgebraElement& x) {
  double best = 0.0;
  for (std::size_t j = 0; j < x.block_count(); ++j) {
    const Matrix& b = x.block(j);
    if (b.rows() == 1) {
      best = std::max(best, std::abs(b(0, 0)));
      continue;
    }
    if (b.rows() == 2) {
      // Largest eigenvalue of the 2x2 Gram matrix in closed form; the norm
      // is evaluated in tight loops by the phase searches.
      const Matrix g = b.adjoint() * b;
      const double t = g(0, 0).real() + g(1, 1).real();
      const double det = (g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0)).real();
      const double disc = std::max(0.0, 0.25 * t * t - det);
      best = std::max(best, std::sqrt(std::max(0.0, 0.5 * t + std::sqrt(disc))));
      continue;
    }
    Eigen::JacobiSVD<Matrix> svd(b);
    best = std::max(best, svd.singularValues()(0));
  }
  return best;
}

double frobenius_norm(const AlgebraElement& x) {
  double sq = 0.0;
  for (std::size_t j = 0; j < x.block_count(); ++j)
    sq += x.block(j).squaredNorm();
  return std::sqrt(sq);
}

Complex hs_inner(const AlgebraElement& x, const AlgebraElement& y) {
  if (x.shape() != y.shape())
    throw StructuralError("hs_inner: shape mismatch");
  Complex acc = 0.0;
  for (std::size_t j = 0; j < x.block_count(); ++j)
    acc += (x.block(j).adjoint() * y.block(j)).trace();
  return acc;
}

bool is_psd(const AlgebraElement& x, double tol) {
  const double herm_defect = operator_norm(x - x.adjoint());
  if (herm_defect > tol) {
    std::ostringstream msg;
    msg << "is_psd: input is not self-adjoint (defect " << herm_defect << ")";
    throw DomainError(msg.str());
  }
  for (std::size_t j = 0; j < x.block_count(); ++j) {
    const Matrix herm = 0.5 * (x.block(j) + x.block(j).adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol) return false;
  }
  return true;
}

std::vector<std::pair<Complex, Vector>> eig_matrix(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) throw StructuralError("eig: matrix must be square");
  Eigen::ComplexEigenSolver<Matrix> es(m, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success)
    throw NumericalError("eig: eigensolver failed to converge");
  const double scale = std::max(m.norm(), 1.0);
  std::vector<std::pair<Complex, Vector>> pairs;
  pairs.reserve(m.rows());
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    const Complex lambda = es.eigenvalues()(k);
    const Vector v = es.eigenvectors().col(k);
    const double resid = (m * v - lambda * v).norm();
    if (resid > tol * scale) {
      std::ostringstream msg;
      msg << "eig: residual " << resid << " exceeds " << tol * scale
          << " for eigenvalue (" << lambda.real() << "," << lambda.imag() << ")";
      throw NumericalError(msg.str());
    }
    pairs.emplace_back(lambda, v);
  }
  return pairs;
}

std::vector<EigenPair> eig(const AlgebraElement& x, double tol) {
  std::vector<EigenPair> out;
  for (std::size_t j = 0; j < x.block_count(); ++j) {
    for (auto& [value, vec] : eig_matrix(x.block(j), tol))
      out.push_back(EigenPair{value, j, vec});
  }
  return out;
}

State::State(const BlockShape& shape, std::vector<Matrix> densities, double tol)
    : shape_(shape), rho_(std::move(densities)) {
  if (rho_.size() != shape_.dims.size())
    throw StructuralError("state: density block count mismatch");
  double total_trace = 0.0;
  for (std::size_t j = 0; j < rho_.size(); ++j) {
    const Matrix& r = rho_[j];
    if (r.rows() != shape_.dims[j] || r.cols() != shape_.dims[j])
      throw StructuralError("state: density block dimension mismatch");
    if ((r - r.adjoint()).norm() > tol)
      throw DomainError("state: density block is not self-adjoint");
    Eigen::SelfAdjointEigenSolver<Matrix> es(r, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol)
      throw DomainError("state: density block is not positive semidefinite");
    total_trace += r.trace().real();
  }
  if (std::abs(total_trace - 1.0) > tol)
    throw DomainError("state: total trace differs from 1");
}

State State::maximally_mixed(const BlockShape& shape) {
  std::vector<Matrix> rho;
  rho.reserve(shape.dims.size());
  const double n = static_cast<double>(shape.embed_dim());
  for (auto d : shape.dims)
    rho.push_back(Matrix::Identity(d, d) / n);
  return State(shape, std::move(rho));
}

State State::pure(const BlockShape& shape, const Vector& v, double tol) {
  if (v.size() != shape.embed_dim())
    throw StructuralError("pure state: vector length must equal embed_dim");
  if (std::abs(v.norm() - 1.0) > tol)
    throw DomainError("pure state: vector must be normalized");
  const Matrix outer = v * v.adjoint();
  AlgebraElement c = AlgebraElement::compress(shape, outer);
  std::vector<Matrix> rho;
  rho.reserve(shape.dims.size());
  for (std::size_t j = 0; j < shape.dims.size(); ++j) rho.push_back(c.block(j));
  return State(shape, std::move(rho), tol);
}

Complex State::operator()(const AlgebraElement& x) const {
  if (x.shape() != shape_) throw StructuralError("state pairing: shape mismatch");
  Complex acc = 0.0;
  for (std::size_t j = 0; j < rho_.size(); ++j)
    acc += (rho_[j] * x.block(j)).trace();
  return acc;
}

Vector State::vectorized_density() const {
  std::vector<Matrix> copy = rho_;
  return AlgebraElement(std::move(copy)).vectorize();
}

bool State::faithful(double tol) const {
  for (const auto& r : rho_) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (r + r.adjoint()),
                                             Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= tol) return false;
  }
  return true;
}

}  // namespace freemix
