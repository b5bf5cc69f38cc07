#include "mfe/exact.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace mfe {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("rational overflow");
  return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("rational overflow");
  return r;
}

struct Q {
  std::int64_t n, d;
};

Q normalize(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::domain_error("division by zero");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  std::int64_t g = std::gcd(n, d);
  if (g == 0) return {0, 1};
  return {n / g, d / g};
}

Q add(Q a, Q b) {
  std::int64_t g = std::gcd(a.d, b.d);
  return normalize(checked_add(checked_mul(a.n, b.d / g), checked_mul(b.n, a.d / g)),
                   checked_mul(a.d / g, b.d));
}

Q mul(Q a, Q b) {
  Q x = normalize(a.n, b.d), y = normalize(b.n, a.d);
  return normalize(checked_mul(x.n, y.n), checked_mul(x.d, y.d));
}

Q neg(Q a) { return {-a.n, a.d}; }

}  // namespace

Turn::Turn(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw Error(Errc::InvalidParams, "turn denominator must be positive");
  num %= den;
  if (num < 0) num += den;
  std::int64_t g = std::gcd(num, den);
  if (g == 0) g = den;
  num_ = num / g;
  den_ = den / g;
}

Turn Turn::operator+(const Turn &o) const {
  std::int64_t l = std::lcm(den_, o.den_);
  return Turn(num_ * (l / den_) + o.num_ * (l / o.den_), l);
}

Turn Turn::operator-() const { return Turn(den_ - num_, den_); }

Complex Turn::to_complex() const {
  // Quarter turns are produced exactly so that 0/1/i values stay exact.
  if (4 % den_ == 0) {
    switch ((num_ * (4 / den_)) % 4) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(num_) /
                             static_cast<double>(den_));
}

std::string Turn::str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

ExactValue ExactValue::inverse() const {
  if (zero_) throw Error(Errc::InvalidParams, "inverse of zero");
  return root(-turn_);
}

GaussianRational::GaussianRational(std::int64_t re_num, std::int64_t re_den,
                                   std::int64_t im_num, std::int64_t im_den) {
  Q r = normalize(re_num, re_den), i = normalize(im_num, im_den);
  re_num_ = r.n;
  re_den_ = r.d;
  im_num_ = i.n;
  im_den_ = i.d;
}

bool GaussianRational::from_quarter_turn(const ExactValue &v, GaussianRational &out) {
  if (v.is_zero()) {
    out = GaussianRational();
    return true;
  }
  const Turn &t = v.turn();
  if (4 % t.den() != 0) return false;
  switch ((t.num() * (4 / t.den())) % 4) {
    case 0: out = GaussianRational(1, 1, 0, 1); break;
    case 1: out = GaussianRational(0, 1, 1, 1); break;
    case 2: out = GaussianRational(-1, 1, 0, 1); break;
    default: out = GaussianRational(0, 1, -1, 1); break;
  }
  return true;
}

Complex GaussianRational::to_complex() const {
  return {static_cast<double>(re_num_) / static_cast<double>(re_den_),
          static_cast<double>(im_num_) / static_cast<double>(im_den_)};
}

GaussianRational GaussianRational::operator+(const GaussianRational &o) const {
  Q r = add({re_num_, re_den_}, {o.re_num_, o.re_den_});
  Q i = add({im_num_, im_den_}, {o.im_num_, o.im_den_});
  return GaussianRational(r.n, r.d, i.n, i.d);
}

GaussianRational GaussianRational::operator-() const {
  return GaussianRational(-re_num_, re_den_, -im_num_, im_den_);
}

GaussianRational GaussianRational::operator-(const GaussianRational &o) const {
  return *this + (-o);
}

GaussianRational GaussianRational::operator*(const GaussianRational &o) const {
  Q a{re_num_, re_den_}, b{im_num_, im_den_}, c{o.re_num_, o.re_den_},
      d{o.im_num_, o.im_den_};
  Q r = add(mul(a, c), neg(mul(b, d)));
  Q i = add(mul(a, d), mul(b, c));
  return GaussianRational(r.n, r.d, i.n, i.d);
}

GaussianRational GaussianRational::operator/(const GaussianRational &o) const {
  if (o.is_zero()) throw std::domain_error("division by zero");
  Q c{o.re_num_, o.re_den_}, d{o.im_num_, o.im_den_};
  Q norm = add(mul(c, c), mul(d, d));
  GaussianRational conj(c.n, c.d, -d.n, d.d);
  GaussianRational num = *this * conj;
  Q inv = normalize(norm.d, norm.n);
  Q r = mul({num.re_num_, num.re_den_}, inv);
  Q i = mul({num.im_num_, num.im_den_}, inv);
  return GaussianRational(r.n, r.d, i.n, i.d);
}

}  // namespace mfe
