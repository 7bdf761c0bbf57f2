#include "freemix/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "freemix/rng.hpp"

namespace freemix {

namespace {

double euclidean(const Vector& v) { return v.norm(); }

// Grid size per free phase so the exhaustive stage stays within a fixed
// pattern budget (~2^22); never coarser than 4 points, never finer than 64
// (resolution pi/32).
int grid_points(long n) {
  const double budget = 4.2e6;
  if (n <= 1) return 1;
  int best = 4;
  for (int p : {64, 32, 16, 8, 4}) {
    if (std::pow(static_cast<double>(p), static_cast<double>(n - 1)) <= budget) {
      best = p;
      break;
    }
  }
  return best;
}

struct PhaseSearch {
  const VectorSequence& seq;
  long n;
  std::vector<Vector> x;  // x_1..x_n

  explicit PhaseSearch(const VectorSequence& s, long count) : seq(s), n(count) {
    x.reserve(count);
    for (long k = 1; k <= count; ++k) x.push_back(s.at(k));
  }

  double norm_of_sum(const std::vector<double>& theta) const {
    Vector sum = Vector::Zero(x[0].size());
    for (long k = 0; k < n; ++k)
      sum += std::polar(1.0, theta[k]) * x[k];
    return seq.norm(sum);
  }

  // Gauge: theta[0] = 0 throughout (a global phase does not move the norm).
  double exhaustive_grid(std::vector<double>& best_theta) const {
    const int p = grid_points(n);
    const double step = 2.0 * M_PI / p;
    std::vector<int> digits(n, 0);
    std::vector<Vector> prefix(n + 1, Vector::Zero(x[0].size()));
    for (long k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + x[k];

    best_theta.assign(n, 0.0);
    double best = seq.norm(prefix[n]);
    if (n == 1) return best;

    while (true) {
      // Odometer over digits 1..n-1, fastest digit last.
      long j = n - 1;
      while (j >= 1 && digits[j] == p - 1) {
        digits[j] = 0;
        --j;
      }
      if (j < 1) break;
      ++digits[j];
      for (long k = j; k < n; ++k)
        prefix[k + 1] =
            prefix[k] + std::polar(1.0, step * digits[k]) * x[k];
      const double value = seq.norm(prefix[n]);
      if (value > best) {
        best = value;
        for (long k = 0; k < n; ++k) best_theta[k] = step * digits[k];
      }
    }
    return best;
  }

  // Monotone coordinate ascent from a starting pattern: each free phase is
  // scanned on a pi/32 grid and then polished by golden-section search.
  double refine(std::vector<double>& theta) const {
    Vector total = Vector::Zero(x[0].size());
    for (long k = 0; k < n; ++k)
      total += std::polar(1.0, theta[k]) * x[k];
    double best = seq.norm(total);

    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    const int max_rounds = n <= 32 ? 64 : 6;
    for (int round = 0; round < max_rounds; ++round) {
      double round_start = best;
      for (long k = 1; k < n; ++k) {
        const Vector rest = total - std::polar(1.0, theta[k]) * x[k];
        auto value_at = [&](double th) {
          return seq.norm(rest + std::polar(1.0, th) * x[k]);
        };
        double local_best = best;
        double local_theta = theta[k];
        for (int t = 0; t < 64; ++t) {
          const double th = 2.0 * M_PI * t / 64.0;
          const double v = value_at(th);
          if (v > local_best) {
            local_best = v;
            local_theta = th;
          }
        }
        double lo = local_theta - M_PI / 32.0, hi = local_theta + M_PI / 32.0;
        double m1 = hi - golden * (hi - lo), m2 = lo + golden * (hi - lo);
        double v1 = value_at(m1), v2 = value_at(m2);
        for (int it = 0; it < 48; ++it) {
          if (v1 < v2) {
            lo = m1;
            m1 = m2;
            v1 = v2;
            m2 = lo + golden * (hi - lo);
            v2 = value_at(m2);
          } else {
            hi = m2;
            m2 = m1;
            v2 = v1;
            m1 = hi - golden * (hi - lo);
            v1 = value_at(m1);
          }
        }
        const double mid = 0.5 * (lo + hi);
        const double vm = value_at(mid);
        if (vm > local_best) {
          local_best = vm;
          local_theta = mid;
        }
        if (local_best > best) {
          best = local_best;
          theta[k] = local_theta;
          total = rest + std::polar(1.0, theta[k]) * x[k];
        }
      }
      if (best - round_start <= 1e-15 * std::max(1.0, best)) break;
    }
    return best;
  }
};

}  // namespace

VectorSequence::VectorSequence(std::string name, Generator gen, double norm_cap,
                               Norm norm)
    : name_(std::move(name)), gen_(std::move(gen)), norm_cap_(norm_cap),
      norm_(norm ? std::move(norm) : Norm(euclidean)) {}

Vector VectorSequence::at(long k) const {
  if (k < 1) throw DomainError("sequence index must be >= 1");
  Vector v = gen_(k);
  const double nv = norm_(v);
  if (nv > norm_cap_ + 1e-12) {
    std::ostringstream msg;
    msg << "sequence '" << name_ << "' violates its norm cap at k=" << k
        << " (|x_k| = " << nv << ", cap = " << norm_cap_ << ")";
    throw DomainError(msg.str());
  }
  return v;
}

VectorSequence VectorSequence::eigen_sequence(Complex z, const Vector& v) {
  if (std::abs(std::abs(z) - 1.0) > 1e-12)
    throw DomainError("eigen_sequence: |z| must be 1");
  return VectorSequence(
      "eigen", [z, v](long k) -> Vector { return std::pow(z, k) * v; },
      v.norm());
}

VectorSequence VectorSequence::alternating(const Vector& v) {
  return VectorSequence(
      "alternating",
      [v](long k) -> Vector { return (k % 2 == 0 ? 1.0 : -1.0) * v; },
      v.norm());
}

VectorSequence VectorSequence::inverse_sqrt(const Vector& v) {
  return VectorSequence(
      "inverse-sqrt",
      [v](long k) -> Vector { return v / std::sqrt(static_cast<double>(k)); },
      v.norm());
}

VectorSequence VectorSequence::zero(Eigen::Index dim) {
  return VectorSequence(
      "zero", [dim](long) -> Vector { return Vector::Zero(dim); }, 0.0);
}

VectorSequence VectorSequence::markov_orbit(const MarkovOperator& t,
                                            const AlgebraElement& x) {
  const ProjectionMap f = markov_projection(t);
  const Vector fx = f.apply(x).vectorize();
  auto cache = std::make_shared<std::vector<Vector>>();
  cache->push_back(x.vectorize());  // T^0(x)
  const Matrix super = t.super();
  const BlockShape shape = t.shape();

  auto gen = [cache, super, fx](long k) -> Vector {
    while (static_cast<long>(cache->size()) <= k)
      cache->push_back(super * cache->back());
    return (*cache)[k] - fx;
  };
  auto norm = [shape](const Vector& v) {
    return operator_norm(AlgebraElement::from_vector(shape, v));
  };
  // |T^k(x) - F(x)| <= 2|x| for a unital CP contraction.
  return VectorSequence("markov-orbit", std::move(gen),
                        2.0 * operator_norm(x) + 1e-9, std::move(norm));
}

IndexSequence::IndexSequence(std::string name, std::vector<long> indices)
    : name_(std::move(name)), indices_(std::move(indices)) {
  long prev = 0;
  for (long v : indices_) {
    if (v <= prev)
      throw DomainError("index sequence must be strictly increasing and positive");
    prev = v;
  }
}

IndexSequence IndexSequence::all(long count) {
  std::vector<long> idx(count);
  for (long i = 0; i < count; ++i) idx[i] = i + 1;
  return IndexSequence("all", std::move(idx));
}

IndexSequence IndexSequence::evens(long horizon) {
  std::vector<long> idx;
  for (long v = 2; v <= horizon; v += 2) idx.push_back(v);
  return IndexSequence("even", std::move(idx));
}

IndexSequence IndexSequence::odds(long horizon) {
  std::vector<long> idx;
  for (long v = 1; v <= horizon; v += 2) idx.push_back(v);
  return IndexSequence("odd", std::move(idx));
}

IndexSequence IndexSequence::squares(long horizon) {
  std::vector<long> idx;
  for (long v = 1; v * v <= horizon; ++v) idx.push_back(v * v);
  return IndexSequence("squares", std::move(idx));
}

IndexSequence IndexSequence::arithmetic(long start, long step, long horizon) {
  if (start < 1 || step < 1)
    throw DomainError("arithmetic index sequence needs start, step >= 1");
  std::vector<long> idx;
  for (long v = start; v <= horizon; v += step) idx.push_back(v);
  std::ostringstream name;
  name << "arith(" << start << "," << step << ")";
  return IndexSequence(name.str(), std::move(idx));
}

WmzResult wmz_quantity(const VectorSequence& seq, long n) {
  if (n < 1) throw DomainError("wmz_quantity: n must be >= 1");
  if (n > kWmzExactMaxN) {
    std::ostringstream msg;
    msg << "wmz_quantity: exact mode supports n <= " << kWmzExactMaxN
        << " (got " << n << "); use sampled mode";
    throw CapacityError(msg.str());
  }
  PhaseSearch search(seq, n);
  std::vector<double> theta;
  double best = search.exhaustive_grid(theta);
  best = std::max(best, search.refine(theta));
  return WmzResult{best / static_cast<double>(n), WmzCertificate::kExact};
}

WmzResult wmz_quantity(const VectorSequence& seq, long n,
                       const WmzSampling& sampling) {
  if (n < 1) throw DomainError("wmz_quantity: n must be >= 1");
  if (sampling.trials < 1) throw DomainError("wmz_quantity: trials must be >= 1");
  PhaseSearch search(seq, n);
  Rng rng(sampling.seed);

  std::vector<double> best_theta(n, 0.0);
  double best = search.norm_of_sum(best_theta);
  // Aligned-phase start: exact for sequences spanning a single direction.
  {
    std::vector<double> theta(n, 0.0);
    double v = search.refine(theta);
    if (v > best) {
      best = v;
      best_theta = theta;
    }
  }
  for (long trial = 0; trial < sampling.trials; ++trial) {
    std::vector<double> theta(n, 0.0);
    for (long k = 1; k < n; ++k) theta[k] = rng.uniform(0.0, 2.0 * M_PI);
    const double v = search.norm_of_sum(theta);
    if (v > best) {
      best = v;
      best_theta = theta;
    }
  }
  best = std::max(best, search.refine(best_theta));
  return WmzResult{best / static_cast<double>(n), WmzCertificate::kLowerBound};
}

double subsequence_cesaro_norm(const VectorSequence& seq,
                               const IndexSequence& idx, long n) {
  if (n < 1) throw DomainError("subsequence_cesaro_norm: n must be >= 1");
  if (idx.size() < n) {
    std::ostringstream msg;
    msg << "subsequence '" << idx.name() << "' supplies only " << idx.size()
        << " indices, need " << n;
    throw CapacityError(msg.str());
  }
  Vector sum = seq.at(idx.indices()[0]);
  for (long j = 1; j < n; ++j) sum += seq.at(idx.indices()[j]);
  return seq.norm(sum / static_cast<double>(n));
}

double lower_density(const IndexSequence& idx, long horizon) {
  if (horizon < 1) throw DomainError("lower_density: horizon must be >= 1");
  const auto ind = idx.indices();
  const long window_start = std::max<long>(1, (7 * horizon) / 8);
  double lowest = 1.0;
  std::size_t pos = 0;
  long count = 0;
  for (long m = 1; m <= horizon; ++m) {
    while (pos < ind.size() && ind[pos] <= m) {
      ++pos;
      ++count;
    }
    if (m >= window_start)
      lowest = std::min(lowest,
                        static_cast<double>(count) / static_cast<double>(m));
  }
  return lowest;
}

RelativeDensity relatively_dense(const IndexSequence& idx, long horizon) {
  if (horizon < 1) throw DomainError("relatively_dense: horizon must be >= 1");
  RelativeDensity out;
  long prev = 0;
  long max_gap = 0, first_half_gap = 0, second_half_gap = 0;
  const long mid = horizon / 2;
  long last = 0;
  for (long v : idx.indices()) {
    if (v > horizon) break;
    const long gap = v - prev;
    max_gap = std::max(max_gap, gap);
    if (v <= mid)
      first_half_gap = std::max(first_half_gap, gap);
    else
      second_half_gap = std::max(second_half_gap, gap);
    prev = v;
    last = v;
  }
  if (last == 0) {
    out.max_gap = horizon;
    out.relatively_dense = false;
    return out;
  }
  const long tail_gap = horizon - last;
  out.max_gap = std::max(max_gap, tail_gap);
  const bool reaches = tail_gap <= max_gap;
  const bool gaps_bounded = second_half_gap <= first_half_gap;
  out.relatively_dense = reaches && gaps_bounded;
  return out;
}

}  // namespace freemix
