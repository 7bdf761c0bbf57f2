#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "freemix/algebra.hpp"
#include "freemix/rng.hpp"
#include "oracles.hpp"

using namespace freemix;

namespace {
const BlockShape kM2{{2}};
const BlockShape kM2plusM3{{2, 3}};
}  // namespace

TEST_CASE("operator norm on canonical inputs") {
  CHECK(operator_norm(AlgebraElement::identity(kM2)) == doctest::Approx(1.0));

  Matrix b = Matrix::Zero(2, 2);
  b(0, 1) = 2.0;
  CHECK(operator_norm(AlgebraElement({b})) == doctest::Approx(2.0));

  // Across blocks the norm is the max of the block norms.
  AlgebraElement x = AlgebraElement::zero(kM2plusM3);
  x = x + AlgebraElement::matrix_unit(kM2plusM3, 1, 0, 2) * Complex{3.0, 0.0};
  CHECK(operator_norm(x) == doctest::Approx(3.0));
}

TEST_CASE("operator norm agrees with a power-iteration oracle") {
  Rng rng(101);
  for (int trial = 0; trial < 25; ++trial) {
    const Matrix m = rng.gaussian_matrix(4, 4);
    const double lib = operator_norm(AlgebraElement({m}));
    const double ref = oracles::power_iteration_norm(m);
    CHECK(std::abs(lib - ref) <= 1e-10 * std::max(1.0, ref));
  }
}

TEST_CASE("is_psd basics") {
  CHECK(is_psd(AlgebraElement::identity(kM2)));

  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 1.0;
  diag(1, 1) = -1.0;
  CHECK_FALSE(is_psd(AlgebraElement({diag})));

  // Gram constructions are PSD by design.
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const AlgebraElement y = oracles::random_element(kM2plusM3, rng);
    CHECK(is_psd(y.adjoint() * y, 1e-8));
  }

  Matrix skew = Matrix::Zero(2, 2);
  skew(0, 1) = 1.0;
  CHECK_THROWS_AS((void)is_psd(AlgebraElement({skew})), DomainError);
}

TEST_CASE("eig handles diagonal, nilpotent and random inputs") {
  SUBCASE("diagonal unitary") {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = std::polar(1.0, 0.7);
    auto pairs = eig(AlgebraElement({d}));
    REQUIRE(pairs.size() == 2);
    std::vector<Complex> values{pairs[0].value, pairs[1].value};
    CHECK(oracles::multiset_distance(
              values, {Complex{1.0, 0.0}, std::polar(1.0, 0.7)}) < 1e-12);
  }

  SUBCASE("nilpotent block has eigenvalue 0 with multiplicity 2") {
    Matrix nil = Matrix::Zero(2, 2);
    nil(0, 1) = 1.0;
    auto pairs = eig(AlgebraElement({nil}));
    REQUIRE(pairs.size() == 2);
    for (const auto& p : pairs) CHECK(std::abs(p.value) < 1e-12);
  }

  SUBCASE("random 3x3 matches companion-polynomial roots") {
    Rng rng(2024);
    for (int trial = 0; trial < 15; ++trial) {
      const Matrix m = rng.gaussian_matrix(3, 3);
      auto pairs = eig(AlgebraElement({m}));
      std::vector<Complex> values;
      for (const auto& p : pairs) values.push_back(p.value);
      const auto roots = oracles::polynomial_roots(oracles::char_poly(m));
      CHECK(oracles::multiset_distance(values, roots) < 1e-8);
    }
  }
}

TEST_CASE("C*-identity and submultiplicativity on random elements") {
  Rng rng(303);
  for (int trial = 0; trial < 40; ++trial) {
    const BlockShape& shape = trial % 2 == 0 ? kM2 : kM2plusM3;
    const AlgebraElement x = oracles::random_element(shape, rng);
    const AlgebraElement y = oracles::random_element(shape, rng);
    const double nx = operator_norm(x);
    CHECK(std::abs(operator_norm(x.adjoint() * x) - nx * nx) <=
          1e-9 * std::max(1.0, nx * nx));
    CHECK(operator_norm(x * y) <= nx * operator_norm(y) + 1e-9);
    // Involution.
    CHECK(operator_norm(x.adjoint().adjoint() - x) == doctest::Approx(0.0));
  }
}

TEST_CASE("states: construction validation and positivity of the pairing") {
  CHECK_THROWS_AS(State(kM2, {Matrix::Identity(2, 2)}), DomainError);  // trace 2

  const State mixed = State::maximally_mixed(kM2plusM3);
  CHECK(std::abs(mixed(AlgebraElement::identity(kM2plusM3)) - 1.0) < 1e-12);

  Rng rng(55);
  const State pure = State::pure(kM2plusM3, rng.unit_vector(5));
  CHECK(std::abs(pure(AlgebraElement::identity(kM2plusM3)) - 1.0) < 1e-10);

  for (int trial = 0; trial < 30; ++trial) {
    const AlgebraElement x = oracles::random_element(kM2plusM3, rng);
    for (const State* psi : {&mixed, &pure}) {
      const Complex v = (*psi)(x.adjoint() * x);
      CHECK(v.real() >= -1e-9);
      CHECK(std::abs(v.imag()) <= 1e-9);
    }
  }
}

TEST_CASE("vectorize round trip and shape errors") {
  Rng rng(9);
  const AlgebraElement x = oracles::random_element(kM2plusM3, rng);
  const AlgebraElement back =
      AlgebraElement::from_vector(kM2plusM3, x.vectorize());
  CHECK(frobenius_norm(back - x) < 1e-14);

  const AlgebraElement other = AlgebraElement::identity(kM2);
  CHECK_THROWS_AS(x + other, StructuralError);
  CHECK_THROWS_AS(x * other, StructuralError);
}
