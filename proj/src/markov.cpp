#include "freemix/markov.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace freemix {

namespace {

constexpr double kProjectionCheckTol = 1e-8;

// Orthonormal basis of the (numerical) kernel, columns of the returned matrix.
Matrix kernel_basis(const Matrix& a, double tol) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = tol * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) <= cut) ++r;
  return svd.matrixV().rightCols(r);
}

struct NullSplit {
  Matrix right_null;   // kernel of A
  Matrix left_null;    // kernel of A^*
  Matrix range_basis;  // orthonormal basis of range(A)
};

NullSplit null_split(const Matrix& a, double tol) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = tol * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) <= cut) ++r;
  NullSplit out;
  out.right_null = svd.matrixV().rightCols(r);
  out.left_null = svd.matrixU().rightCols(r);
  out.range_basis = svd.matrixU().leftCols(sv.size() - r);
  return out;
}

Eigen::Index svd_rank(const Matrix& a, double tol) {
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double cut = tol * std::max(1.0, sv(0));
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return r;
}

double spectral_norm(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

std::vector<AlgebraElement> columns_to_elements(const BlockShape& shape,
                                                const Matrix& cols) {
  std::vector<AlgebraElement> out;
  out.reserve(cols.cols());
  for (Eigen::Index j = 0; j < cols.cols(); ++j)
    out.push_back(AlgebraElement::from_vector(shape, cols.col(j)));
  return out;
}

// Column index of the (i, j) entry of block `b` in the stacked vectorization.
Eigen::Index unit_index(const BlockShape& shape, std::size_t b, Eigen::Index i,
                        Eigen::Index j) {
  Eigen::Index off = 0;
  for (std::size_t k = 0; k < b; ++k) off += shape.dims[k] * shape.dims[k];
  return off + j * shape.dims[b] + i;
}

}  // namespace

MarkovOperator MarkovOperator::from_super(BlockShape shape, Matrix super) {
  const Eigen::Index d = shape.total_dim();
  if (super.rows() != d || super.cols() != d)
    throw StructuralError("superoperator must be total_dim x total_dim");
  return MarkovOperator(std::move(shape), std::move(super), std::nullopt);
}

MarkovOperator MarkovOperator::from_kraus(BlockShape shape,
                                          std::vector<Matrix> kraus,
                                          double leak_tol) {
  const Eigen::Index n = shape.embed_dim();
  const Eigen::Index d = shape.total_dim();
  if (kraus.empty()) throw StructuralError("at least one Kraus matrix required");
  for (const auto& k : kraus)
    if (k.rows() != n || k.cols() != n)
      throw StructuralError("Kraus matrices must be embed_dim x embed_dim");

  Matrix super(d, d);
  for (std::size_t b = 0; b < shape.dims.size(); ++b) {
    for (Eigen::Index jj = 0; jj < shape.dims[b]; ++jj) {
      for (Eigen::Index ii = 0; ii < shape.dims[b]; ++ii) {
        const Matrix e =
            AlgebraElement::matrix_unit(shape, b, ii, jj).embed();
        Matrix y = Matrix::Zero(n, n);
        for (const auto& k : kraus) y += k.adjoint() * e * k;
        const AlgebraElement compressed = AlgebraElement::compress(shape, y);
        const double leakage = (y - compressed.embed()).norm();
        if (leakage > leak_tol * std::max(1.0, y.norm()))
          throw StructuralError(
              "Kraus family does not preserve the block algebra");
        super.col(unit_index(shape, b, ii, jj)) = compressed.vectorize();
      }
    }
  }
  return MarkovOperator(std::move(shape), std::move(super), std::move(kraus));
}

MarkovOperator MarkovOperator::identity_map(BlockShape shape) {
  const Eigen::Index d = shape.total_dim();
  return MarkovOperator(std::move(shape), Matrix::Identity(d, d), std::nullopt);
}

MarkovOperator MarkovOperator::unitary_conjugation(BlockShape shape,
                                                   const Matrix& u) {
  const Eigen::Index n = shape.embed_dim();
  if (u.rows() != n || u.cols() != n)
    throw StructuralError("conjugating matrix must be embed_dim x embed_dim");
  if ((u.adjoint() * u - Matrix::Identity(n, n)).norm() > 1e-10)
    throw DomainError("conjugating matrix is not unitary");
  // x -> U x U^* is x -> K^* x K with K = U^*.
  return from_kraus(std::move(shape), {u.adjoint()});
}

MarkovOperator MarkovOperator::depolarizing(Eigen::Index d, double lambda) {
  if (d < 1) throw StructuralError("depolarizing: block size must be >= 1");
  if (lambda < 0.0 || lambda > 1.0)
    throw DomainError("depolarizing: lambda must lie in [0, 1]");
  BlockShape shape{{d}};
  const Eigen::Index dd = d * d;
  const Vector vec_id = AlgebraElement::identity(shape).vectorize();
  Matrix super = (1.0 - lambda) * Matrix::Identity(dd, dd);
  super += (lambda / static_cast<double>(d)) * (vec_id * vec_id.adjoint());
  return from_super(std::move(shape), std::move(super));
}

MarkovOperator MarkovOperator::transpose_map(Eigen::Index d) {
  BlockShape shape{{d}};
  const Eigen::Index dd = d * d;
  Matrix super = Matrix::Zero(dd, dd);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      super.col(unit_index(shape, 0, i, j)) =
          AlgebraElement::matrix_unit(shape, 0, j, i).vectorize();
  return MarkovOperator(std::move(shape), std::move(super), std::nullopt);
}

MarkovOperator MarkovOperator::random_unital_cp(Eigen::Index d, int kraus_count,
                                                Rng& rng) {
  if (kraus_count < 1) throw StructuralError("need at least one Kraus matrix");
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<Matrix> kraus;
    kraus.reserve(kraus_count);
    Matrix m = Matrix::Zero(d, d);
    for (int i = 0; i < kraus_count; ++i) {
      kraus.push_back(rng.gaussian_matrix(d, d));
      m += kraus.back().adjoint() * kraus.back();
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    if (es.eigenvalues().minCoeff() < 1e-8 * es.eigenvalues().maxCoeff())
      continue;  // nearly singular normalizer, redraw
    const Matrix inv_sqrt = es.operatorInverseSqrt();
    for (auto& k : kraus) k = k * inv_sqrt;
    return from_kraus(BlockShape{{d}}, std::move(kraus));
  }
  throw NumericalError("random_unital_cp: could not draw a well-conditioned family");
}

AlgebraElement MarkovOperator::apply(const AlgebraElement& x) const {
  if (x.shape() != shape_)
    throw StructuralError("operator and element shapes differ");
  return AlgebraElement::from_vector(shape_, super_ * x.vectorize());
}

Matrix MarkovOperator::choi() const {
  const Eigen::Index n = shape_.embed_dim();
  Matrix c = Matrix::Zero(n * n, n * n);
  Eigen::Index off = 0;
  for (std::size_t b = 0; b < shape_.dims.size(); ++b) {
    const Eigen::Index d = shape_.dims[b];
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        const AlgebraElement image =
            apply(AlgebraElement::matrix_unit(shape_, b, i, j));
        c.block((off + i) * n, (off + j) * n, n, n) += image.embed();
      }
    }
    off += d;
  }
  return c;
}

ValidationReport MarkovOperator::validate(double tol) const {
  ValidationReport report;
  report.tolerance = tol;
  const AlgebraElement one = AlgebraElement::identity(shape_);
  report.unitality_defect = operator_norm(apply(one) - one);
  const Matrix c = choi();
  report.choi_hermiticity_defect = spectral_norm(c - c.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (c + c.adjoint()),
                                           Eigen::EigenvaluesOnly);
  report.min_choi_eigenvalue = es.eigenvalues().minCoeff();
  return report;
}

void MarkovOperator::require_valid(double tol) const {
  const ValidationReport r = validate(tol);
  if (!r.unital()) {
    std::ostringstream msg;
    msg << "unitality violated: |T(1) - 1| = " << r.unitality_defect;
    throw ValidationError(msg.str());
  }
  if (!r.completely_positive()) {
    std::ostringstream msg;
    msg << "complete positivity violated: min Choi eigenvalue = "
        << r.min_choi_eigenvalue
        << ", hermiticity defect = " << r.choi_hermiticity_defect;
    throw ValidationError(msg.str());
  }
}

AlgebraElement ProjectionMap::apply(const AlgebraElement& x) const {
  if (x.shape() != shape_)
    throw StructuralError("projection and element shapes differ");
  return AlgebraElement::from_vector(shape_, super_ * x.vectorize());
}

AlgebraElement cesaro_mean(const MarkovOperator& t, const AlgebraElement& x,
                           long n) {
  if (n < 1) throw DomainError("cesaro_mean: n must be >= 1");
  Vector y = x.vectorize();
  Vector acc = y;
  for (long k = 1; k < n; ++k) {
    y = t.super() * y;
    acc += y;
  }
  return AlgebraElement::from_vector(t.shape(),
                                     acc / static_cast<double>(n));
}

ProjectionMap markov_projection(const MarkovOperator& t, double tol) {
  const Matrix& s = t.super();
  const Eigen::Index d = s.rows();
  const Matrix a = s - Matrix::Identity(d, d);
  const NullSplit split = null_split(a, tol);
  const Eigen::Index r = split.right_null.cols();
  if (r == 0)
    throw NumericalError("markov_projection: no fixed points detected");

  // Oblique projection onto ker(S - 1) along range(S - 1). Requires the
  // eigenvalue 1 to be semisimple, i.e. L^* R invertible.
  const Matrix m = split.left_null.adjoint() * split.right_null;
  Eigen::JacobiSVD<Matrix> msvd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (msvd.singularValues()(msvd.singularValues().size() - 1) < 1e-8)
    throw NumericalError(
        "markov_projection: eigenvalue 1 appears defective (non-semisimple)");
  const Matrix p =
      split.right_null * m.inverse() * split.left_null.adjoint();

  const double idem = (p * p - p).norm();
  const double left = (s * p - p).norm();
  const double right = (p * s - p).norm();
  const Vector one = AlgebraElement::identity(t.shape()).vectorize();
  const double unital = (p * one - one).norm();
  if (idem > kProjectionCheckTol || left > kProjectionCheckTol ||
      right > kProjectionCheckTol || unital > kProjectionCheckTol) {
    std::ostringstream msg;
    msg << "markov_projection: projection identities violated (|F^2-F|="
        << idem << ", |TF-F|=" << left << ", |FT-F|=" << right
        << ", |F(1)-1|=" << unital << ")";
    throw NumericalError(msg.str());
  }

  MarkovOperator f = MarkovOperator::from_super(t.shape(), p);
  const ValidationReport fv = f.validate(kProjectionCheckTol);
  if (!fv.passes()) {
    std::ostringstream msg;
    msg << "markov_projection: limit map is not Markov (min Choi eigenvalue = "
        << fv.min_choi_eigenvalue << ")";
    throw NumericalError(msg.str());
  }

  return ProjectionMap(t.shape(), p,
                       columns_to_elements(t.shape(), split.right_null));
}

std::vector<AlgebraElement> fixed_point_space(const MarkovOperator& t,
                                              double tol) {
  const Eigen::Index d = t.super().rows();
  return columns_to_elements(
      t.shape(), kernel_basis(t.super() - Matrix::Identity(d, d), tol));
}

std::vector<AlgebraElement> eigenspace(const MarkovOperator& t, Complex z,
                                       double tol) {
  if (std::abs(z) > 1.0 + tol)
    throw DomainError("eigenspace: |z| must be <= 1 + tol for a contraction");
  const Eigen::Index d = t.super().rows();
  return columns_to_elements(
      t.shape(), kernel_basis(t.super() - z * Matrix::Identity(d, d), tol));
}

double swm_defect(const MarkovOperator& t, const ProjectionMap& f,
                  const AlgebraElement& x, const State& psi, long n) {
  if (n < 1) throw DomainError("swm_defect: n must be >= 1");
  const Complex target = psi(f.apply(x));
  AlgebraElement y = x;
  double acc = 0.0;
  for (long k = 0; k < n; ++k) {
    acc += std::abs(psi(y) - target);
    if (k + 1 < n) y = t.apply(y);
  }
  return acc / static_cast<double>(n);
}

double swm_defect(const MarkovOperator& t, const AlgebraElement& x,
                  const State& psi, long n) {
  return swm_defect(t, markov_projection(t), x, psi, n);
}

std::vector<State> defect_probe_states(const BlockShape& shape, unsigned seed) {
  Rng rng(seed);
  std::vector<State> states;
  for (int i = 0; i < 8; ++i)
    states.push_back(State::pure(shape, rng.unit_vector(shape.embed_dim())));
  states.push_back(State::maximally_mixed(shape));
  return states;
}

MixingReport classify(const MarkovOperator& t, double tol, long n_probe) {
  if (n_probe < 1) throw DomainError("classify: n_probe must be >= 1");
  t.require_valid();
  const ProjectionMap f = markov_projection(t, tol);
  const Matrix& s = t.super();
  const Eigen::Index d = s.rows();

  MixingReport report;
  report.uniquely_ergodic = true;  // Cesaro means of the contraction converge
  report.n_probe = n_probe;

  bool peripheral_only_one = true;
  std::vector<Complex> peripheral;
  for (const auto& [lambda, v] : eig_matrix(s)) {
    (void)v;
    if (std::abs(lambda) < 1.0 - tol) continue;
    if (std::abs(lambda - 1.0) > tol) peripheral_only_one = false;
    bool seen = false;
    for (const auto& p : peripheral)
      if (std::abs(p - lambda) < 1e-6) {
        seen = true;
        break;
      }
    if (!seen) peripheral.push_back(lambda);
  }
  std::sort(peripheral.begin(), peripheral.end(), [](Complex a, Complex b) {
    return std::arg(a) < std::arg(b);
  });
  report.peripheral_eigenvalues = peripheral;

  // Semisimplicity of eigenvalue 1 via Jordan-block detection: a nontrivial
  // block at 1 strictly drops the rank from (S - 1) to (S - 1)^2.
  const Matrix a = s - Matrix::Identity(d, d);
  const bool one_semisimple = svd_rank(a, tol) == svd_rank(a * a, tol);
  const bool spectral_swm = peripheral_only_one && one_semisimple;

  // Empirical guard over the documented probe set: every matrix unit against
  // 8 seeded pure states plus the maximally mixed state.
  const std::vector<State> probes = defect_probe_states(t.shape());
  std::vector<long> checkpoints{std::max<long>(1, n_probe / 10),
                                std::max<long>(1, n_probe / 2), n_probe};
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()),
                    checkpoints.end());
  std::vector<double> max_at(checkpoints.size(), 0.0);

  for (std::size_t b = 0; b < t.shape().dims.size(); ++b) {
    for (Eigen::Index i = 0; i < t.shape().dims[b]; ++i) {
      for (Eigen::Index j = 0; j < t.shape().dims[b]; ++j) {
        const AlgebraElement x =
            AlgebraElement::matrix_unit(t.shape(), b, i, j);
        std::vector<Complex> targets;
        targets.reserve(probes.size());
        const AlgebraElement fx = f.apply(x);
        for (const auto& psi : probes) targets.push_back(psi(fx));
        std::vector<double> acc(probes.size(), 0.0);
        AlgebraElement y = x;
        std::size_t next_cp = 0;
        for (long k = 0; k < n_probe; ++k) {
          for (std::size_t sidx = 0; sidx < probes.size(); ++sidx)
            acc[sidx] += std::abs(probes[sidx](y) - targets[sidx]);
          if (next_cp < checkpoints.size() && k + 1 == checkpoints[next_cp]) {
            for (std::size_t sidx = 0; sidx < probes.size(); ++sidx)
              max_at[next_cp] = std::max(
                  max_at[next_cp], acc[sidx] / static_cast<double>(k + 1));
            ++next_cp;
          }
          if (k + 1 < n_probe) y = t.apply(y);
        }
      }
    }
  }

  for (std::size_t c = 0; c < checkpoints.size(); ++c)
    report.defect_trace.emplace_back(checkpoints[c], max_at[c]);
  report.max_defect = max_at.back();

  const bool empirical_swm = report.max_defect < kSwmDefectGuard;
  if (empirical_swm != spectral_swm) {
    std::ostringstream msg;
    msg << "classify: spectral verdict (swm=" << (spectral_swm ? "yes" : "no")
        << ") disagrees with empirical probe defect " << report.max_defect
        << " at n=" << n_probe << "; numerical problem suspected";
    throw DiagnosticError(msg.str());
  }
  report.strictly_weak_mixing = spectral_swm;
  return report;
}

DecompositionReport ergodic_decomposition_check(const MarkovOperator& t,
                                                double tol) {
  const Eigen::Index d = t.super().rows();
  const Matrix a = t.super() - Matrix::Identity(d, d);

  DecompositionReport report;
  report.total_dim = d;

  const NullSplit split = null_split(a, tol);
  report.fixed_dim = split.right_null.cols();

  // Rank estimated by a second factorization so the dimension count is a
  // genuine cross-check rather than a restatement of one SVD.
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  qr.setThreshold(tol);
  report.range_rank = qr.rank();
  report.dims_match = report.fixed_dim + report.range_rank == d;

  if (report.fixed_dim == 0 || report.range_rank == 0) {
    report.principal_angle = M_PI / 2.0;
    return report;
  }
  // Smallest principal angle between ker(1 - T) and range(1 - T).
  const Matrix overlap = split.right_null.adjoint() * split.range_basis;
  const double c = std::min(1.0, spectral_norm(overlap));
  report.principal_angle = std::acos(c);
  return report;
}

InvariantStates invariant_states(const MarkovOperator& t, double tol) {
  const Eigen::Index d = t.super().rows();
  const BlockShape& shape = t.shape();
  const Matrix adj_kernel =
      kernel_basis(t.super().adjoint() - Matrix::Identity(d, d), tol);

  InvariantStates out;

  // The kernel is closed under rho -> rho^*; collect a real-orthonormal
  // self-adjoint spanning set.
  std::vector<Vector> herm;
  auto try_add = [&](const AlgebraElement& candidate) {
    Vector w = candidate.vectorize();
    for (const auto& h : herm) w -= h * (h.adjoint() * w).real()(0, 0);
    if (w.norm() > 1e-8) herm.push_back(w / w.norm());
  };
  for (Eigen::Index j = 0; j < adj_kernel.cols(); ++j) {
    const AlgebraElement rho =
        AlgebraElement::from_vector(shape, adj_kernel.col(j));
    try_add((rho + rho.adjoint()) * Complex{0.5, 0.0});
    try_add((rho - rho.adjoint()) * Complex{0.0, -0.5});
  }
  out.real_dimension = static_cast<Eigen::Index>(herm.size());
  for (const auto& h : herm)
    out.hermitian_basis.push_back(AlgebraElement::from_vector(shape, h));
  out.unique = herm.size() == 1;

  const ProjectionMap f = markov_projection(t, tol);

  if (out.unique) {
    AlgebraElement rho = out.hermitian_basis.front();
    const double tr = rho.trace().real();
    if (std::abs(tr) < 1e-10)
      throw NumericalError("invariant_states: traceless invariant functional");
    rho = rho * Complex{1.0 / tr, 0.0};
    rho = (rho + rho.adjoint()) * Complex{0.5, 0.0};
    std::vector<Matrix> blocks;
    for (std::size_t b = 0; b < rho.block_count(); ++b)
      blocks.push_back(rho.block(b));
    out.state = State(shape, std::move(blocks), 1e-7);

    // With a unique invariant state the projection collapses to phi(.)1.
    const Vector one = AlgebraElement::identity(shape).vectorize();
    const Matrix expected = one * rho.vectorize().adjoint();
    if ((f.super() - expected).norm() > 1e-7 * static_cast<double>(d)) {
      throw DiagnosticError(
          "invariant_states: unique invariant state found but the Markov "
          "projection is not phi(.)1");
    }
  }

  // Image of the maximally mixed state under the adjoint projection has
  // maximal support among invariant states.
  {
    const Vector mixed =
        State::maximally_mixed(shape).vectorized_density();
    AlgebraElement bar =
        AlgebraElement::from_vector(shape, f.super().adjoint() * mixed);
    bar = (bar + bar.adjoint()) * Complex{0.5, 0.0};
    const double tr = bar.trace().real();
    if (tr > 1e-12) {
      bar = bar * Complex{1.0 / tr, 0.0};
      std::vector<Matrix> blocks;
      for (std::size_t b = 0; b < bar.block_count(); ++b)
        blocks.push_back(bar.block(b));
      State candidate(shape, std::move(blocks), 1e-7);
      out.has_faithful = candidate.faithful(1e-10);
      out.maximal_support_state = std::move(candidate);
    }
  }

  return out;
}

bool fixed_point_algebra_check(const MarkovOperator& t, double tol) {
  const InvariantStates inv = invariant_states(t);
  if (!inv.has_faithful)
    throw PreconditionError(
        "fixed_point_algebra_check: no faithful invariant state; check skipped");

  const std::vector<AlgebraElement> basis = fixed_point_space(t);
  if (basis.empty()) return true;
  Matrix q(t.super().rows(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j)
    q.col(static_cast<Eigen::Index>(j)) = basis[j].vectorize();

  auto in_span = [&](const AlgebraElement& candidate) {
    const Vector w = candidate.vectorize();
    const Vector resid = w - q * (q.adjoint() * w);
    return resid.norm() <= tol * std::max(1.0, w.norm());
  };

  for (const auto& b : basis)
    if (!in_span(b.adjoint())) return false;
  for (const auto& b1 : basis)
    for (const auto& b2 : basis)
      if (!in_span(b1 * b2)) return false;
  return true;
}

}  // namespace freemix
