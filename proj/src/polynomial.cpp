#include "logsparse/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

#include "logsparse/error.hpp"

namespace logsparse {

unsigned Monomial::degree() const noexcept {
  unsigned d = 0;
  for (auto v : e) d += v;
  return d;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial out;
  if (!simd::kernels().mono_mul(e.data(), o.e.data(), out.e.data()))
    throw Error(ErrorKind::CapExceeded, "monomial exponent exceeds 255");
  return out;
}

bool Monomial::divides(const Monomial& o) const noexcept { return simd::kernels().mono_divides(e.data(), o.e.data()); }

Monomial Monomial::quotient_of(const Monomial& o) const noexcept {
  Monomial out;
  for (std::size_t i = 0; i < kMaxVars; ++i) out.e[i] = static_cast<std::uint8_t>(o.e[i] - e[i]);
  return out;
}

Monomial Monomial::lcm(const Monomial& a, const Monomial& b) noexcept {
  Monomial out;
  simd::kernels().mono_lcm(a.e.data(), b.e.data(), out.e.data());
  return out;
}

bool Monomial::coprime(const Monomial& o) const noexcept {
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (e[i] && o.e[i]) return false;
  return true;
}

int graded_lex_compare(const Monomial& a, const Monomial& b) noexcept {
  const unsigned da = a.degree(), db = b.degree();
  if (da != db) return da < db ? -1 : 1;
  for (std::size_t i = 0; i < kMaxVars; ++i)
    if (a.e[i] != b.e[i]) return a.e[i] < b.e[i] ? -1 : 1;
  return 0;
}

VarTable::VarTable(std::vector<std::vector<std::string>> blocks) {
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    block_vars_.emplace_back();
    for (auto& name : blocks[b]) {
      if (index(name) != names_.size()) throw Error(ErrorKind::InvalidInput, "duplicate variable name " + name);
      block_vars_.back().push_back(names_.size());
      block_.push_back(b);
      names_.push_back(std::move(name));
    }
  }
  if (names_.size() > kMaxVars) throw Error(ErrorKind::CapExceeded, "more than 32 variables");
}

std::size_t VarTable::index(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  return static_cast<std::size_t>(it - names_.begin());
}

namespace {

bool term_greater(const RatPoly::Term& a, const RatPoly::Term& b) { return graded_lex_compare(a.mono, b.mono) > 0; }

}  // namespace

RatPoly::RatPoly(std::size_t nvars) : nvars_(nvars) {
  if (nvars > kMaxVars) throw Error(ErrorKind::CapExceeded, "more than 32 variables");
}

RatPoly RatPoly::constant(std::size_t nvars, const Rational& c) { return monomial(nvars, Monomial{}, c); }

RatPoly RatPoly::variable(std::size_t nvars, std::size_t index) {
  if (index >= nvars) throw Error(ErrorKind::InvalidInput, "variable index out of range");
  Monomial m;
  m.e[index] = 1;
  return monomial(nvars, m, Rational(1));
}

RatPoly RatPoly::monomial(std::size_t nvars, const Monomial& m, const Rational& c) {
  RatPoly p(nvars);
  if (c != 0) p.terms_.push_back({m, c});
  return p;
}

RatPoly RatPoly::from_terms(std::size_t nvars, std::vector<Term> terms) {
  RatPoly p(nvars);
  p.terms_ = std::move(terms);
  p.normalize();
  return p;
}

void RatPoly::normalize() {
  std::sort(terms_.begin(), terms_.end(), term_greater);
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!out.empty() && out.back().mono == t.mono) out.back().coeff += t.coeff;
    else out.push_back(std::move(t));
  }
  std::erase_if(out, [](const Term& t) { return t.coeff == 0; });
  terms_ = std::move(out);
}

bool RatPoly::is_constant() const noexcept { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.degree() == 0); }

int RatPoly::degree() const noexcept { return terms_.empty() ? -1 : static_cast<int>(terms_.front().mono.degree()); }

bool RatPoly::is_homogeneous() const noexcept {
  return std::all_of(terms_.begin(), terms_.end(),
                     [&](const Term& t) { return static_cast<int>(t.mono.degree()) == degree(); });
}

bool RatPoly::uses_only(std::span<const std::size_t> vars) const noexcept {
  Monomial allowed;
  for (auto v : vars) allowed.e[v] = 255;
  return std::all_of(terms_.begin(), terms_.end(), [&](const Term& t) { return t.mono.divides(allowed); });
}

Rational RatPoly::coefficient(const Monomial& m) const {
  for (const auto& t : terms_)
    if (t.mono == m) return t.coeff;
  return Rational(0);
}

namespace {

void check_same_ring(const RatPoly& a, const RatPoly& b) {
  if (a.nvars() != b.nvars()) throw Error(ErrorKind::InvalidInput, "polynomials live in different rings");
}

std::vector<RatPoly::Term> merge(const std::vector<RatPoly::Term>& a, const std::vector<RatPoly::Term>& b, int sign) {
  std::vector<RatPoly::Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    const int c = i == a.size() ? -1 : j == b.size() ? 1 : graded_lex_compare(a[i].mono, b[j].mono);
    if (c > 0) {
      out.push_back(a[i++]);
    } else if (c < 0) {
      out.push_back({b[j].mono, sign > 0 ? b[j].coeff : Rational(-b[j].coeff)});
      ++j;
    } else {
      Rational s = sign > 0 ? Rational(a[i].coeff + b[j].coeff) : Rational(a[i].coeff - b[j].coeff);
      if (s != 0) out.push_back({a[i].mono, std::move(s)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

RatPoly& RatPoly::operator+=(const RatPoly& o) {
  check_same_ring(*this, o);
  terms_ = merge(terms_, o.terms_, 1);
  return *this;
}

RatPoly& RatPoly::operator-=(const RatPoly& o) {
  check_same_ring(*this, o);
  terms_ = merge(terms_, o.terms_, -1);
  return *this;
}

RatPoly& RatPoly::operator*=(const Rational& c) {
  if (c == 0) terms_.clear();
  else
    for (auto& t : terms_) t.coeff *= c;
  return *this;
}

RatPoly operator*(const RatPoly& a, const RatPoly& b) {
  check_same_ring(a, b);
  std::vector<RatPoly::Term> prod;
  prod.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_) prod.push_back({s.mono * t.mono, s.coeff * t.coeff});
  return RatPoly::from_terms(a.nvars_, std::move(prod));
}

bool operator==(const RatPoly& a, const RatPoly& b) {
  if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  return true;
}

RatPoly RatPoly::pow(unsigned k) const {
  RatPoly result = constant(nvars_, Rational(1));
  RatPoly base = *this;
  while (k) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

RatPoly RatPoly::substitute(std::span<const RatPoly> images) const {
  if (images.size() != nvars_) throw Error(ErrorKind::InvalidInput, "substitute: need one image per variable");
  const std::size_t target = images.empty() ? 0 : images.front().nvars();
  // Cache powers per variable; exponents are small.
  std::vector<std::vector<RatPoly>> powers(nvars_);
  auto power = [&](std::size_t v, unsigned k) -> const RatPoly& {
    auto& pv = powers[v];
    if (pv.empty()) pv.push_back(constant(target, Rational(1)));
    while (pv.size() <= k) pv.push_back(pv.back() * images[v]);
    return pv[k];
  };
  RatPoly out(target);
  for (const auto& t : terms_) {
    RatPoly term = constant(target, t.coeff);
    for (std::size_t v = 0; v < nvars_; ++v)
      if (t.mono.e[v]) term = term * power(v, t.mono.e[v]);
    out += term;
  }
  return out;
}

RatPoly RatPoly::substitute(std::size_t var, const RatPoly& value) const {
  std::vector<RatPoly> images;
  images.reserve(nvars_);
  for (std::size_t v = 0; v < nvars_; ++v) images.push_back(v == var ? value : variable(nvars_, v));
  return substitute(images);
}

RatPoly RatPoly::remap(std::span<const std::size_t> map, std::size_t new_nvars) const {
  if (map.size() != nvars_) throw Error(ErrorKind::InvalidInput, "remap: need one target per variable");
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    Monomial m;
    for (std::size_t v = 0; v < nvars_; ++v)
      if (t.mono.e[v]) {
        if (map[v] >= new_nvars) throw Error(ErrorKind::InvalidInput, "remap: target out of range");
        m.e[map[v]] = t.mono.e[v];
      }
    out.push_back({m, t.coeff});
  }
  return from_terms(new_nvars, std::move(out));
}

double RatPoly::evaluate(std::span<const double> point) const {
  if (point.size() != nvars_) throw Error(ErrorKind::InvalidInput, "evaluate: wrong point dimension");
  long double s = 0;
  for (const auto& t : terms_) {
    long double v = t.coeff.get_d();
    for (std::size_t i = 0; i < nvars_; ++i)
      for (unsigned k = 0; k < t.mono.e[i]; ++k) v *= point[i];
    s += v;
  }
  return static_cast<double>(s);
}

Rational RatPoly::evaluate(std::span<const Rational> point) const {
  if (point.size() != nvars_) throw Error(ErrorKind::InvalidInput, "evaluate: wrong point dimension");
  Rational s = 0;
  for (const auto& t : terms_) {
    Rational v = t.coeff;
    for (std::size_t i = 0; i < nvars_; ++i)
      for (unsigned k = 0; k < t.mono.e[i]; ++k) v *= point[i];
    s += v;
  }
  return s;
}

double RatPoly::l1_norm() const {
  double s = 0;
  for (const auto& t : terms_) s += std::abs(t.coeff.get_d());
  return s;
}

RatPoly RatPoly::primitive() const {
  if (terms_.empty()) return *this;
  Integer l = 1, g = 0;
  for (const auto& t : terms_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coeff.get_den_mpz_t());
  std::vector<Integer> ints;
  ints.reserve(terms_.size());
  for (const auto& t : terms_) {
    Rational scaled = t.coeff * l;
    ints.push_back(scaled.get_num());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ints.back().get_mpz_t());
  }
  if (ints.front() < 0) g = -g;
  RatPoly out(nvars_);
  for (std::size_t i = 0; i < terms_.size(); ++i) out.terms_.push_back({terms_[i].mono, Rational(ints[i] / g)});
  return out;
}

std::string RatPoly::to_string(std::span<const std::string> names) const {
  if (names.size() < nvars_) throw Error(ErrorKind::InvalidInput, "to_string: too few variable names");
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    Rational c = t.coeff;
    if (first) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    c = abs(c);
    const bool unit = c == 1;
    bool wrote = false;
    if (!unit || t.mono.degree() == 0) {
      os << c.get_str();
      wrote = true;
    }
    for (std::size_t v = 0; v < nvars_; ++v) {
      if (!t.mono.e[v]) continue;
      if (wrote) os << '*';
      os << names[v];
      if (t.mono.e[v] > 1) os << '^' << unsigned(t.mono.e[v]);
      wrote = true;
    }
    first = false;
  }
  return os.str();
}

namespace {

class Parser {
 public:
  Parser(std::string_view s, std::span<const std::string> names) : s_(s), names_(names) {}

  RatPoly parse() {
    RatPoly p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::InvalidInput, "polynomial parse error at offset " + std::to_string(pos_) + ": " + why);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RatPoly expr() {
    RatPoly acc(names_.size());
    bool neg = eat('-');
    if (!neg) eat('+');
    for (;;) {
      RatPoly t = term();
      if (neg) acc -= t;
      else acc += t;
      if (eat('+')) neg = false;
      else if (eat('-')) neg = true;
      else return acc;
    }
  }
  RatPoly term() {
    RatPoly acc = factor();
    for (;;) {
      if (eat('*')) {
        acc = acc * factor();
      } else if (eat('/')) {
        const RatPoly d = factor();
        if (!d.is_constant() || d.is_zero()) fail("division by a non-constant or zero");
        acc *= Rational(1) / d.terms().front().coeff;
      } else {
        return acc;
      }
    }
  }
  RatPoly factor() {
    RatPoly base = atom();
    if (eat('^')) {
      skip();
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      base = base.pow(static_cast<unsigned>(std::stoul(std::string(s_.substr(start, pos_ - start)))));
    }
    return base;
  }
  RatPoly atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      RatPoly p = expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (c == '-') {
      ++pos_;
      return -atom();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return RatPoly::constant(names_.size(), Rational(Integer(std::string(s_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name(s_.substr(start, pos_ - start));
      const auto it = std::find(names_.begin(), names_.end(), name);
      if (it == names_.end()) fail("unknown variable " + name);
      return RatPoly::variable(names_.size(), static_cast<std::size_t>(it - names_.begin()));
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view s_;
  std::span<const std::string> names_;
  std::size_t pos_ = 0;
};

}  // namespace

RatPoly parse_polynomial(std::string_view text, std::span<const std::string> names) {
  return Parser(text, names).parse();
}

std::vector<std::string> matrix_variable_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i; j <= n; ++j)
      out.push_back(n < 10 ? "x" + std::to_string(i) + std::to_string(j)
                           : "x" + std::to_string(i) + "_" + std::to_string(j));
  return out;
}

}  // namespace logsparse
