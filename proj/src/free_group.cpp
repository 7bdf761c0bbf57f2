#include "freemix/free_group.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace freemix {

GroupWord GroupWord::from_letters(std::vector<Letter> letters) {
  GroupWord w;
  for (const Letter& l : letters) {
    if (l.sign != 1 && l.sign != -1)
      throw DomainError("letter sign must be +1 or -1");
    if (!w.letters_.empty() && w.letters_.back().cancels(l))
      w.letters_.pop_back();
    else
      w.letters_.push_back(l);
  }
  return w;
}

GroupWord GroupWord::generator(long index, int sign) {
  return from_letters({Letter{index, sign}});
}

GroupWord GroupWord::parse(std::string_view text) {
  std::vector<Letter> letters;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    if (token == "e") continue;
    int sign = +1;
    if (auto caret = token.find('^'); caret != std::string::npos) {
      const std::string exp = token.substr(caret + 1);
      if (exp == "-1")
        sign = -1;
      else if (exp != "1" && exp != "+1")
        throw DomainError("word syntax: only exponents 1 and -1 are supported");
      token = token.substr(0, caret);
    }
    if (token.size() < 2 || token[0] != 'g')
      throw DomainError("word syntax: expected g<index>, got '" + token + "'");
    char* end = nullptr;
    const long index = std::strtol(token.c_str() + 1, &end, 10);
    if (end == nullptr || *end != '\0')
      throw DomainError("word syntax: bad generator index in '" + token + "'");
    letters.push_back(Letter{index, sign});
  }
  return from_letters(std::move(letters));
}

GroupWord GroupWord::inverse() const {
  std::vector<Letter> rev;
  rev.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
    rev.push_back(Letter{it->index, -it->sign});
  return from_letters(std::move(rev));
}

GroupWord GroupWord::operator*(const GroupWord& rhs) const {
  std::vector<Letter> cat = letters_;
  cat.insert(cat.end(), rhs.letters_.begin(), rhs.letters_.end());
  return from_letters(std::move(cat));
}

std::string GroupWord::str() const {
  if (letters_.empty()) return "e";
  std::ostringstream out;
  bool first = true;
  for (const Letter& l : letters_) {
    if (!first) out << ' ';
    first = false;
    out << 'g' << l.index;
    if (l.sign < 0) out << "^-1";
  }
  return out.str();
}

GroupWord reduce(std::vector<Letter> letters) {
  return GroupWord::from_letters(std::move(letters));
}

GroupWord shift(const GroupWord& w, long k) {
  std::vector<Letter> shifted;
  shifted.reserve(w.length());
  for (const Letter& l : w.letters())
    shifted.push_back(Letter{l.index + k, l.sign});
  // Translation keeps adjacent cancellations impossible, so this is already
  // reduced; from_letters is a no-op re-check.
  return GroupWord::from_letters(std::move(shifted));
}

OrbitType orbit_type(const GroupWord& w) {
  return shift(w, 1) == w ? OrbitType::kFixed : OrbitType::kInfinite;
}

GroupAlgebraElement GroupAlgebraElement::delta(const GroupWord& w) {
  GroupAlgebraElement f;
  f.add_term(w, RationalComplex{Rational(1)});
  return f;
}

RationalComplex GroupAlgebraElement::coefficient(const GroupWord& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? RationalComplex{} : it->second;
}

void GroupAlgebraElement::add_term(const GroupWord& w,
                                   const RationalComplex& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(w, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

GroupAlgebraElement GroupAlgebraElement::operator+(
    const GroupAlgebraElement& rhs) const {
  GroupAlgebraElement out = *this;
  for (const auto& [w, c] : rhs.terms_) out.add_term(w, c);
  return out;
}

GroupAlgebraElement GroupAlgebraElement::operator-(
    const GroupAlgebraElement& rhs) const {
  GroupAlgebraElement out = *this;
  for (const auto& [w, c] : rhs.terms_)
    out.add_term(w, RationalComplex{} - c);
  return out;
}

GroupAlgebraElement GroupAlgebraElement::scaled(const RationalComplex& c) const {
  GroupAlgebraElement out;
  if (c.is_zero()) return out;
  for (const auto& [w, coeff] : terms_) out.add_term(w, coeff * c);
  return out;
}

GroupAlgebraElement cesaro_shift_average(const GroupWord& g, long n) {
  if (n < 1) throw DomainError("cesaro_shift_average: n must be >= 1");
  GroupAlgebraElement f;
  const RationalComplex weight{Rational(1, n)};
  for (long k = 1; k <= n; ++k) f.add_term(shift(g, k), weight);
  return f;
}

L2Norm l2_norm(const GroupAlgebraElement& f) {
  Rational square{0};
  for (const auto& [w, c] : f.terms()) square += c.norm_square();
  return L2Norm{square, std::sqrt(square.convert_to<double>())};
}

double haagerup_bound(const GroupAlgebraElement& f,
                      const HaagerupConstants& constants) {
  if (const auto* rd = std::get_if<RDConstants>(&constants)) {
    if (rd->c < 1.0)
      throw DomainError("rapid-decay constant C must be >= 1");
    if (rd->s < 0.0) throw DomainError("rapid-decay exponent s must be >= 0");
    std::size_t max_len = 0;
    for (const auto& [w, c] : f.terms()) max_len = std::max(max_len, w.length());
    return rd->c * std::pow(1.0 + static_cast<double>(max_len), rd->s) *
           l2_norm(f).value;
  }
  // Sharp free-group mode: split by word length and sum (p+1) |f_p|_2.
  std::map<std::size_t, Rational> squares;
  for (const auto& [w, c] : f.terms()) squares[w.length()] += c.norm_square();
  double bound = 0.0;
  for (const auto& [p, sq] : squares)
    bound += (static_cast<double>(p) + 1.0) * std::sqrt(sq.convert_to<double>());
  return bound;
}

GroupAlgebraElement fixed_subgroup_projection(
    const GroupAlgebraElement& f,
    const std::function<bool(const GroupWord&)>& member) {
  GroupAlgebraElement out;
  for (const auto& [w, c] : f.terms())
    if (member(w)) out.add_term(w, c);
  return out;
}

std::vector<DecayRecord> decay_experiment(const GroupWord& g,
                                          std::span<const long> n_values,
                                          const HaagerupConstants& constants) {
  if (g.is_identity())
    throw DomainError("decay_experiment: the identity word does not decay");
  std::vector<DecayRecord> records;
  records.reserve(n_values.size());
  const std::string mode =
      std::holds_alternative<FreeGroupSharp>(constants) ? "free-group-sharp"
                                                        : "rd";
  for (long n : n_values) {
    const GroupAlgebraElement avg = cesaro_shift_average(g, n);
    const L2Norm lower = l2_norm(avg);
    DecayRecord rec;
    rec.label = g.str();
    rec.n = n;
    rec.lower_square = lower.square;
    rec.lower_square_is_full = true;
    rec.lower_float = lower.value;
    rec.upper_float = haagerup_bound(avg, constants);
    rec.constants_mode = mode;
    rec.word_length = static_cast<int>(g.length());
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace freemix
