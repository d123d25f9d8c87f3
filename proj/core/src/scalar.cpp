#include "dirmix/scalar.hpp"

#include <cctype>
#include <cmath>
#include <ostream>
#include <sstream>

#include "dirmix/errors.hpp"

namespace dirmix {
namespace {

int rational_sign(const Rational& q) { return sgn(q); }

// Largest s with s*s | d; returns d / s^2 and writes s.
std::int64_t square_free_part(std::int64_t d, std::int64_t& root) {
  root = 1;
  for (std::int64_t f = 2; f * f <= d; ++f) {
    while (d % (f * f) == 0) {
      d /= f * f;
      root *= f;
    }
  }
  return d;
}

}  // namespace

Scalar::Scalar(Rational p, Rational r, std::int64_t d)
    : p_(std::move(p)), r_(std::move(r)), d_(d) {
  if (d_ < 0) throw InvalidArgument("negative radicand " + std::to_string(d_));
  p_.canonicalize();
  r_.canonicalize();
  normalize();
}

void Scalar::normalize() {
  if (d_ > 1) {
    std::int64_t root = 1;
    d_ = square_free_part(d_, root);
    r_ *= root;
  }
  if (d_ == 1) {
    p_ += r_;
    r_ = 0;
    d_ = 0;
  }
  if (d_ == 0 || r_ == 0) {
    r_ = 0;
    d_ = 0;
  }
}

const Rational& Scalar::as_rational() const {
  if (!is_rational()) throw InvalidArgument("expected a rational scalar, got " + to_string());
  return p_;
}

std::int64_t Scalar::common_radicand(const Scalar& o) const {
  if (d_ == 0) return o.d_;
  if (o.d_ == 0 || o.d_ == d_) return d_;
  throw InvalidArgument("incompatible radicands in " + to_string() + " and " + o.to_string());
}

int Scalar::sign() const {
  const int sp = rational_sign(p_);
  if (d_ == 0) return sp;
  const int sr = rational_sign(r_);
  if (sp >= 0 && sr >= 0) return (sp > 0 || sr > 0) ? 1 : 0;
  if (sp <= 0 && sr <= 0) return -1;
  // Opposite signs: compare p^2 against r^2 d.
  const Rational lhs = p_ * p_;
  const Rational rhs = r_ * r_ * d_;
  const int c = cmp(lhs, rhs);
  return sp > 0 ? c : -c;
}

double Scalar::to_double() const { return static_cast<double>(to_long_double()); }

long double Scalar::to_long_double() const {
  long double v = p_.get_d();
  if (d_ != 0) v += static_cast<long double>(r_.get_d()) * std::sqrt(static_cast<long double>(d_));
  return v;
}

Integer Scalar::floor() const {
  if (d_ == 0) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), p_.get_num_mpz_t(), p_.get_den_mpz_t());
    return q;
  }
  Integer candidate(std::floor(to_double()));
  while (*this < Scalar(Rational(candidate))) candidate -= 1;
  while (*this >= Scalar(Rational(candidate + 1))) candidate += 1;
  return candidate;
}

Integer Scalar::ceil() const { return -(-*this).floor(); }

Scalar Scalar::frac() const { return *this - Scalar(Rational(floor())); }

Scalar Scalar::operator-() const {
  Scalar out = *this;
  out.p_ = -out.p_;
  out.r_ = -out.r_;
  return out;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  d_ = common_radicand(o);
  p_ += o.p_;
  r_ += o.r_;
  normalize();
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
  const std::int64_t d = common_radicand(o);
  Rational p = p_ * o.p_ + r_ * o.r_ * d;
  Rational r = p_ * o.r_ + r_ * o.p_;
  p_ = std::move(p);
  r_ = std::move(r);
  d_ = d;
  normalize();
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.is_zero()) throw InvalidArgument("division by zero");
  const std::int64_t d = common_radicand(o);
  // (p + r s)/(p' + r' s) = (p + r s)(p' - r' s) / (p'^2 - r'^2 d)
  const Rational denom = o.p_ * o.p_ - o.r_ * o.r_ * d;
  Scalar conj(o.p_, -o.r_, o.d_);
  *this *= conj;
  p_ /= denom;
  r_ /= denom;
  normalize();
  return *this;
}

bool Scalar::structural_less(const Scalar& a, const Scalar& b) {
  if (a.d_ != b.d_) return a.d_ < b.d_;
  if (a.p_ != b.p_) return a.p_ < b.p_;
  return a.r_ < b.r_;
}

std::string Scalar::to_string() const {
  std::string out = p_.get_str();
  if (d_ == 0) return out;
  const bool negative = r_ < 0;
  const Rational mag = negative ? Rational(-r_) : r_;
  out += negative ? " - " : " + ";
  out += mag.get_str();
  out += "*sqrt(" + std::to_string(d_) + ")";
  return out;
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

namespace {

class ScalarParser {
 public:
  explicit ScalarParser(std::string_view text) : text_(text) {}

  Scalar parse() {
    Scalar total;
    skip_ws();
    bool first = true;
    while (pos_ < text_.size()) {
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
        skip_ws();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      Scalar term = parse_term();
      total += sign > 0 ? term : -term;
      first = false;
      skip_ws();
    }
    if (first) fail("empty scalar");
    return total;
  }

 private:
  Scalar parse_term() {
    if (starts_with("sqrt")) return parse_sqrt();
    Rational coef = parse_number();
    skip_ws();
    if (peek() == '*') {
      ++pos_;
      skip_ws();
      if (!starts_with("sqrt")) fail("expected sqrt after '*'");
      return Scalar(coef) * parse_sqrt();
    }
    return Scalar(coef);
  }

  Scalar parse_sqrt() {
    pos_ += 4;
    skip_ws();
    expect('(');
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected radicand");
    const std::int64_t d = std::stoll(std::string(text_.substr(start, pos_ - start)));
    skip_ws();
    expect(')');
    return Scalar::sqrt(d);
  }

  Rational parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      ++pos_;
    }
    if (start == pos_) fail("expected number");
    Rational value = parse_decimal(text_.substr(start, pos_ - start));
    skip_ws();
    if (peek() == '/') {
      ++pos_;
      skip_ws();
      const std::size_t dstart = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (dstart == pos_) fail("expected denominator");
      Integer den(std::string(text_.substr(dstart, pos_ - dstart)));
      if (den == 0) fail("zero denominator");
      value /= Rational(den);
    }
    value.canonicalize();
    return value;
  }

  Rational parse_decimal(std::string_view digits) {
    const auto dot = digits.find('.');
    if (dot == std::string_view::npos) return Rational(Integer(std::string(digits)));
    if (digits.find('.', dot + 1) != std::string_view::npos) fail("malformed decimal");
    std::string whole(digits.substr(0, dot));
    std::string fraction(digits.substr(dot + 1));
    if (whole.empty()) whole = "0";
    if (fraction.empty()) return Rational(Integer(whole));
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, fraction.size());
    Rational out(Integer(whole + fraction), scale);
    out.canonicalize();
    return out;
  }

  bool starts_with(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw InvalidArgument("cannot parse scalar \"" + std::string(text_) + "\": " + why);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Scalar Scalar::parse(std::string_view text) { return ScalarParser(text).parse(); }

}  // namespace dirmix
