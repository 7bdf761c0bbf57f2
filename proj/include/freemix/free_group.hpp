#pragma once

#include <compare>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "freemix/decay.hpp"
#include "freemix/errors.hpp"

namespace freemix {

using Rational = boost::multiprecision::cpp_rational;

/// Exact complex number with rational real and imaginary parts.
struct RationalComplex {
  Rational re{0};
  Rational im{0};

  RationalComplex() = default;
  RationalComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  explicit RationalComplex(Rational r) : re(std::move(r)) {}

  bool is_zero() const { return re == 0 && im == 0; }
  RationalComplex conjugate() const { return {re, -im}; }
  Rational norm_square() const { return re * re + im * im; }

  RationalComplex operator+(const RationalComplex& o) const {
    return {re + o.re, im + o.im};
  }
  RationalComplex operator-(const RationalComplex& o) const {
    return {re - o.re, im - o.im};
  }
  RationalComplex operator*(const RationalComplex& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  bool operator==(const RationalComplex&) const = default;
};

/// One letter of a free-group word: generator index (any integer) and the
/// exponent sign.
struct Letter {
  long index = 0;
  int sign = +1;  // +1 or -1

  bool operator==(const Letter&) const = default;
  auto operator<=>(const Letter&) const = default;
  bool cancels(const Letter& o) const {
    return index == o.index && sign == -o.sign;
  }
};

/// Reduced word of the free group with integer-indexed generators. Always
/// stored in reduced form; the default word is the identity.
class GroupWord {
public:
  GroupWord() = default;

  /// Reduces the given letter string.
  static GroupWord from_letters(std::vector<Letter> letters);
  static GroupWord generator(long index, int sign = +1);
  /// Compact syntax: whitespace-separated `g<index>` tokens, `^-1` for
  /// inverses; the empty string and "e" denote the identity.
  static GroupWord parse(std::string_view text);

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool is_identity() const { return letters_.empty(); }

  GroupWord inverse() const;
  GroupWord operator*(const GroupWord& rhs) const;  // concatenate and reduce

  std::string str() const;

  bool operator==(const GroupWord&) const = default;
  /// Orders by length, then lexicographically; gives deterministic term maps.
  auto operator<=>(const GroupWord& rhs) const {
    if (auto c = letters_.size() <=> rhs.letters_.size(); c != 0) return c;
    return letters_ <=> rhs.letters_;
  }

private:
  std::vector<Letter> letters_;  // invariant: reduced
};

/// Free-group normal form (stack reduction).
GroupWord reduce(std::vector<Letter> letters);

/// Generator index translation g_i -> g_{i+k}; length-preserving group
/// homomorphism.
GroupWord shift(const GroupWord& w, long k);

enum class OrbitType { kFixed, kInfinite };

/// The index shift fixes only the identity; every other orbit is infinite.
OrbitType orbit_type(const GroupWord& w);

/// Finitely supported function on reduced words with exact complex-rational
/// coefficients; zero coefficients are pruned.
class GroupAlgebraElement {
public:
  GroupAlgebraElement() = default;

  static GroupAlgebraElement delta(const GroupWord& w);

  const std::map<GroupWord, RationalComplex>& terms() const { return terms_; }
  std::size_t support_size() const { return terms_.size(); }
  RationalComplex coefficient(const GroupWord& w) const;

  void add_term(const GroupWord& w, const RationalComplex& c);

  GroupAlgebraElement operator+(const GroupAlgebraElement& rhs) const;
  GroupAlgebraElement operator-(const GroupAlgebraElement& rhs) const;
  GroupAlgebraElement scaled(const RationalComplex& c) const;

private:
  std::map<GroupWord, RationalComplex> terms_;
};

/// (1/n) sum_{k=1}^n delta_{shift(g,k)}; for nonempty g the translates are n
/// distinct words with exact coefficient 1/n each.
GroupAlgebraElement cesaro_shift_average(const GroupWord& g, long n);

struct L2Norm {
  Rational square;  // exact sum of |coefficient|^2
  double value;     // floating square root
};

/// Exact ell^2 norm of the coefficient function.
L2Norm l2_norm(const GroupAlgebraElement& f);

/// Rapid-decay constants: |lambda(f)| <= C (1 + L)^s |f|_2 on length-L balls.
struct RDConstants {
  double c = 1.0;
  double s = 0.0;
};

/// Sharp free-group mode: length-homogeneous bound sum_p (p+1) |f_p|_2.
struct FreeGroupSharp {};

using HaagerupConstants = std::variant<FreeGroupSharp, RDConstants>;

/// Upper bound for the reduced C*-norm of lambda(f). The C*-norm itself is
/// never computed; together with l2_norm this brackets it from both sides.
double haagerup_bound(const GroupAlgebraElement& f,
                      const HaagerupConstants& constants);

/// Conditional expectation onto the span of words in the subgroup described
/// by `member` (coefficient restriction). Caller guarantees `member` defines
/// a subgroup; for the index shift the fixed subgroup is just the identity.
GroupAlgebraElement fixed_subgroup_projection(
    const GroupAlgebraElement& f,
    const std::function<bool(const GroupWord&)>& member);

/// Per n: exact ell^2 lower bound of the Cesaro average of shift translates
/// and the Haagerup upper bound; both scale as 1/sqrt(n).
std::vector<DecayRecord> decay_experiment(const GroupWord& g,
                                          std::span<const long> n_values,
                                          const HaagerupConstants& constants);

}  // namespace freemix
