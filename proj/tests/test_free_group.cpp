#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "freemix/free_group.hpp"
#include "freemix/rng.hpp"
#include "oracles.hpp"

using namespace freemix;

namespace {

std::vector<Letter> random_letters(Rng& rng, int count, long index_range = 3) {
  std::vector<Letter> letters;
  for (int i = 0; i < count; ++i) {
    const long index =
        static_cast<long>(rng.uniform(0.0, 2.0 * index_range)) - index_range;
    const int sign = rng.uniform() < 0.5 ? 1 : -1;
    letters.push_back(Letter{index, sign});
  }
  return letters;
}

GroupWord random_word(Rng& rng, int count) {
  return GroupWord::from_letters(random_letters(rng, count));
}

RationalComplex random_coeff(Rng& rng) {
  const long a = static_cast<long>(rng.uniform(-6.0, 7.0));
  const long b = static_cast<long>(rng.uniform(1.0, 7.0));
  const long c = static_cast<long>(rng.uniform(-6.0, 7.0));
  const long d = static_cast<long>(rng.uniform(1.0, 7.0));
  return RationalComplex{Rational(a, b), Rational(c, d)};
}

}  // namespace

TEST_CASE("word reduction") {
  const GroupWord w = GroupWord::from_letters(
      {Letter{1, 1}, Letter{1, -1}, Letter{2, 1}});
  CHECK(w == GroupWord::generator(2));
  CHECK(GroupWord::from_letters({}).is_identity());

  SUBCASE("random strings agree with the repeated-scan oracle") {
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
      const auto letters = random_letters(rng, 50);
      const GroupWord fast = GroupWord::from_letters(letters);
      const auto slow = oracles::scan_reduce(letters);
      CHECK(fast.letters() == slow);
    }
  }

  SUBCASE("reduction is idempotent and kills w w^{-1}") {
    Rng rng(32);
    for (int trial = 0; trial < 50; ++trial) {
      const GroupWord w2 = random_word(rng, 30);
      CHECK(GroupWord::from_letters(w2.letters()) == w2);
      CHECK((w2 * w2.inverse()).is_identity());
      CHECK(w2.inverse().length() == w2.length());
    }
  }
}

TEST_CASE("word parsing and printing") {
  const GroupWord w = GroupWord::parse("g0 g3^-1 g0");
  REQUIRE(w.length() == 3);
  CHECK(w.str() == "g0 g3^-1 g0");
  CHECK(GroupWord::parse("").is_identity());
  CHECK(GroupWord::parse("e").is_identity());
  CHECK(GroupWord::parse("g-2").letters()[0].index == -2);
  CHECK(GroupWord::parse("g1 g1^-1").is_identity());
  CHECK_THROWS_AS(GroupWord::parse("h1"), DomainError);
  CHECK_THROWS_AS(GroupWord::parse("g1^2"), DomainError);
}

TEST_CASE("generator shift") {
  CHECK(shift(GroupWord::parse("g0 g3^-1"), 2) == GroupWord::parse("g2 g5^-1"));
  CHECK(shift(GroupWord(), 7).is_identity());

  Rng rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    const GroupWord w = random_word(rng, 20);
    const long a = static_cast<long>(rng.uniform(-5.0, 6.0));
    const long b = static_cast<long>(rng.uniform(-5.0, 6.0));
    CHECK(shift(shift(w, a), b) == shift(w, a + b));
    CHECK(shift(w, a).length() == w.length());
    // Homomorphism.
    const GroupWord v = random_word(rng, 10);
    CHECK(shift(w * v, a) == shift(w, a) * shift(v, a));
  }
}

TEST_CASE("orbit types under the shift") {
  CHECK(orbit_type(GroupWord()) == OrbitType::kFixed);
  CHECK(orbit_type(GroupWord::generator(0)) == OrbitType::kInfinite);
  Rng rng(34);
  for (int trial = 0; trial < 50; ++trial) {
    const GroupWord w = random_word(rng, 12);
    if (!w.is_identity()) CHECK(orbit_type(w) == OrbitType::kInfinite);
  }
}

TEST_CASE("Cesaro averages of shift translates") {
  SUBCASE("four translates of g0") {
    const GroupAlgebraElement f =
        cesaro_shift_average(GroupWord::generator(0), 4);
    CHECK(f.support_size() == 4);
    for (long k = 1; k <= 4; ++k)
      CHECK(f.coefficient(GroupWord::generator(k)) ==
            RationalComplex{Rational(1, 4)});
  }

  SUBCASE("identity word averages to itself") {
    const GroupAlgebraElement f = cesaro_shift_average(GroupWord(), 9);
    CHECK(f.support_size() == 1);
    CHECK(f.coefficient(GroupWord()) == RationalComplex{Rational(1)});
  }

  SUBCASE("support size equals n for nonempty words") {
    Rng rng(35);
    for (long n : {2L, 17L, 128L, 1024L}) {
      GroupWord w = random_word(rng, 6);
      while (w.is_identity()) w = random_word(rng, 7);
      CHECK(cesaro_shift_average(w, n).support_size() ==
            static_cast<std::size_t>(n));
    }
  }
}

TEST_CASE("exact ell^2 norms") {
  CHECK(l2_norm(GroupAlgebraElement::delta(GroupWord::parse("g1 g2"))).square ==
        Rational(1));

  SUBCASE("averages have exact square 1/n") {
    const GroupWord g = GroupWord::parse("g0 g1 g0^-1");
    for (long n : {1L, 2L, 3L, 64L, 256L, 1024L, 4096L}) {
      const L2Norm norm = l2_norm(cesaro_shift_average(g, n));
      CHECK(norm.square == Rational(1, n));  // exact, zero tolerance
      CHECK(norm.value ==
            doctest::Approx(1.0 / std::sqrt(static_cast<double>(n))));
    }
  }

  SUBCASE("Pythagoras for orthogonal deltas") {
    GroupAlgebraElement f;
    f.add_term(GroupWord::parse("g1"), RationalComplex{Rational(3)});
    f.add_term(GroupWord::parse("g2"), RationalComplex{Rational(4)});
    const L2Norm norm = l2_norm(f);
    CHECK(norm.square == Rational(25));
    CHECK(norm.value == doctest::Approx(5.0));
  }

  SUBCASE("cancelling coefficients prune the support") {
    GroupAlgebraElement f;
    f.add_term(GroupWord::parse("g1"), RationalComplex{Rational(2, 3)});
    f.add_term(GroupWord::parse("g1"), RationalComplex{Rational(-2, 3)});
    CHECK(f.support_size() == 0);
    CHECK(l2_norm(f).square == Rational(0));
  }
}

TEST_CASE("Haagerup bounds") {
  const HaagerupConstants sharp = FreeGroupSharp{};

  SUBCASE("length-one average: (1+1)/sqrt(n)") {
    for (long n : {1L, 4L, 9L}) {
      const GroupAlgebraElement f =
          cesaro_shift_average(GroupWord::generator(0), n);
      CHECK(haagerup_bound(f, sharp) ==
            doctest::Approx(2.0 / std::sqrt(static_cast<double>(n)))
                .epsilon(1e-14));
    }
  }

  CHECK(haagerup_bound(GroupAlgebraElement::delta(GroupWord()), sharp) ==
        doctest::Approx(1.0));
  CHECK(haagerup_bound(
            GroupAlgebraElement::delta(GroupWord::parse("g0 g1 g2")), sharp) ==
        doctest::Approx(4.0));

  SUBCASE("rapid-decay mode uses C (1 + L_max)^s") {
    const RDConstants rd{2.0, 1.0};
    CHECK(haagerup_bound(
              GroupAlgebraElement::delta(GroupWord::parse("g0 g1 g2")),
              HaagerupConstants{rd}) == doctest::Approx(8.0));
    CHECK_THROWS_AS(
        (void)haagerup_bound(GroupAlgebraElement::delta(GroupWord()),
                             HaagerupConstants{RDConstants{0.5, 1.0}}),
        DomainError);
  }

  SUBCASE("sandwich: the ell^2 norm never exceeds the bound") {
    Rng rng(36);
    for (int trial = 0; trial < 1000; ++trial) {
      GroupAlgebraElement f;
      const int terms = 1 + static_cast<int>(rng.uniform(0.0, 6.0));
      for (int t = 0; t < terms; ++t)
        f.add_term(random_word(rng, 1 + static_cast<int>(rng.uniform(0.0, 5.0))),
                   random_coeff(rng));
      const double l2 = l2_norm(f).value;
      CHECK(l2 <= haagerup_bound(f, sharp) + 1e-12);
      CHECK(l2 <= haagerup_bound(f, HaagerupConstants{RDConstants{1.0, 2.0}}) +
                      1e-12);
    }
  }
}

TEST_CASE("projection onto a subgroup's words") {
  GroupAlgebraElement f;
  f.add_term(GroupWord(), RationalComplex{Rational(2)});
  f.add_term(GroupWord::generator(1), RationalComplex{Rational(3)});
  const auto is_identity = [](const GroupWord& w) { return w.is_identity(); };
  const GroupAlgebraElement p = fixed_subgroup_projection(f, is_identity);
  CHECK(p.support_size() == 1);
  CHECK(p.coefficient(GroupWord()) == RationalComplex{Rational(2)});

  SUBCASE("idempotent and ell^2 contractive") {
    Rng rng(37);
    for (int trial = 0; trial < 50; ++trial) {
      GroupAlgebraElement g;
      for (int t = 0; t < 5; ++t)
        g.add_term(random_word(rng, static_cast<int>(rng.uniform(0.0, 4.0))),
                   random_coeff(rng));
      const GroupAlgebraElement once = fixed_subgroup_projection(g, is_identity);
      const GroupAlgebraElement twice =
          fixed_subgroup_projection(once, is_identity);
      CHECK(once.terms() == twice.terms());
      CHECK(l2_norm(once).square <= l2_norm(g).square);
    }
  }
}

TEST_CASE("shift translates have disjoint singleton supports") {
  Rng rng(38);
  for (int trial = 0; trial < 10; ++trial) {
    GroupWord g = random_word(rng, 4);
    while (g.is_identity()) g = random_word(rng, 5);
    for (long k = 1; k <= 64; ++k)
      CHECK(shift(g, 0) != shift(g, k));
  }
}

TEST_CASE("subsequence averages keep the exact 1/sqrt(n) norm") {
  // Any n distinct shift exponents give n orthonormal deltas.
  const GroupWord g = GroupWord::parse("g0 g2^-1");
  std::vector<long> squares;
  for (long j = 1; j * j <= 4096; ++j) squares.push_back(j * j);
  const long n = static_cast<long>(squares.size());
  GroupAlgebraElement f;
  for (long k : squares)
    f.add_term(shift(g, k), RationalComplex{Rational(1, n)});
  CHECK(l2_norm(f).square == Rational(1, n));
}

TEST_CASE("decay experiment rows") {
  SUBCASE("generator word: the canonical 1/sqrt(n), 2/sqrt(n) pair") {
    const std::vector<long> grid{1, 4, 16};
    const auto records =
        decay_experiment(GroupWord::generator(0), grid, FreeGroupSharp{});
    REQUIRE(records.size() == 3);
    const double lowers[] = {1.0, 0.5, 0.25};
    const double uppers[] = {2.0, 1.0, 0.5};
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(records[i].lower_square == Rational(1, grid[i]));
      CHECK(records[i].lower_float == doctest::Approx(lowers[i]));
      CHECK(records[i].upper_float == doctest::Approx(uppers[i]));
      CHECK(records[i].lower_float <= records[i].upper_float + 1e-12);
    }
  }

  SUBCASE("length-3 word keeps ratio 4") {
    const std::vector<long> grid{1, 9, 100};
    const auto records = decay_experiment(GroupWord::parse("g0 g1 g0"), grid,
                                          FreeGroupSharp{});
    for (const auto& rec : records)
      CHECK(rec.upper_float / rec.lower_float == doctest::Approx(4.0));
    CHECK(records[0].lower_float == doctest::Approx(1.0));
  }

  CHECK_THROWS_AS(
      (void)decay_experiment(GroupWord(), std::vector<long>{1}, FreeGroupSharp{}),
      DomainError);
}
