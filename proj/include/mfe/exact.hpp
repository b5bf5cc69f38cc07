#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "mfe/types.hpp"

namespace mfe {

/// A rotation number p/q in [0, 1), i.e. the root of unity exp(2 pi i p/q).
class Turn {
 public:
  Turn() = default;
  Turn(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  Turn operator+(const Turn &o) const;
  Turn operator-() const;

  Complex to_complex() const;
  std::string str() const;

  friend bool operator==(const Turn &, const Turn &) = default;
  friend std::strong_ordering operator<=>(const Turn &a, const Turn &b) {
    return static_cast<__int128>(a.num_) * b.den_ <=>
           static_cast<__int128>(b.num_) * a.den_;
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Value of a multiplicative function on a finite carrier: zero, or a root
/// of unity. Products are exact.
class ExactValue {
 public:
  ExactValue() = default;  // 1
  static ExactValue zero() {
    ExactValue v;
    v.zero_ = true;
    return v;
  }
  static ExactValue root(Turn t) {
    ExactValue v;
    v.turn_ = t;
    return v;
  }

  bool is_zero() const { return zero_; }
  const Turn &turn() const { return turn_; }

  ExactValue operator*(const ExactValue &o) const {
    if (zero_ || o.zero_) return zero();
    return root(turn_ + o.turn_);
  }
  /// Inverse of a nonzero value.
  ExactValue inverse() const;

  Complex to_complex() const { return zero_ ? Complex{} : turn_.to_complex(); }
  std::string str() const { return zero_ ? "0" : turn_.str(); }

  friend bool operator==(const ExactValue &a, const ExactValue &b) {
    return a.zero_ == b.zero_ && (a.zero_ || a.turn_ == b.turn_);
  }
  // Roots of unity order by rotation; zero sorts last.
  friend std::strong_ordering operator<=>(const ExactValue &a, const ExactValue &b) {
    if (a.zero_ != b.zero_) return a.zero_ <=> b.zero_;
    if (a.zero_) return std::strong_ordering::equal;
    return a.turn_ <=> b.turn_;
  }

 private:
  bool zero_ = false;
  Turn turn_;
};

/// a + b i with rational a, b over 64-bit integers. Arithmetic throws
/// std::overflow_error instead of wrapping.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(std::int64_t re) : re_num_(re) {}  // NOLINT
  GaussianRational(std::int64_t re_num, std::int64_t re_den, std::int64_t im_num,
                   std::int64_t im_den);

  /// Exact value of a root of unity whose order divides 4.
  static bool from_quarter_turn(const ExactValue &v, GaussianRational &out);

  bool is_zero() const { return re_num_ == 0 && im_num_ == 0; }
  Complex to_complex() const;

  GaussianRational operator+(const GaussianRational &o) const;
  GaussianRational operator-(const GaussianRational &o) const;
  GaussianRational operator*(const GaussianRational &o) const;
  GaussianRational operator/(const GaussianRational &o) const;
  GaussianRational operator-() const;

  friend bool operator==(const GaussianRational &, const GaussianRational &) = default;

 private:
  std::int64_t re_num_ = 0, re_den_ = 1, im_num_ = 0, im_den_ = 1;
};

}  // namespace mfe
