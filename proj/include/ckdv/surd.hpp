#pragma once
#include <optional>
#include <stdexcept>
#include <string>

#include "ckdv/interval.hpp"
#include "ckdv/rat.hpp"

namespace ckdv {

// d = s^2 * f with f squarefree; returns (s, f). Factors via trial division
// plus Pollard rho, so it stays fast for the ~128-bit inputs that arise here.
std::pair<Int, Int> square_part(const Int& d);

struct FieldMismatch : std::domain_error {
  FieldMismatch() : std::domain_error("quadratic surds from different fields") {}
};

// Exact element a + b*sqrt(d) of the real quadratic field Q(sqrt(d)),
// d squarefree > 1. b == 0 embeds the rationals (d kept for field identity,
// d == 0 marks a pure rational with no field attached).
class Quad {
 public:
  Quad() : a_(0), b_(0), d_(0) {}
  explicit Quad(const Rat& a) : a_(a), b_(0), d_(0) {}
  Quad(const Rat& a, const Rat& b, const Int& d);

  // sqrt(x) for rational x >= 0, normalized to squarefree d (rational if x is
  // a rational square).
  static Quad sqrt_of(const Rat& x);

  const Rat& a() const { return a_; }
  const Rat& b() const { return b_; }
  const Int& d() const { return d_; }
  bool is_rational() const { return b_ == 0; }
  Rat rational_value() const;

  Quad operator+(const Quad& o) const;
  Quad operator-(const Quad& o) const;
  Quad operator*(const Quad& o) const;
  Quad operator/(const Quad& o) const;
  Quad operator-() const { return Quad::raw(-a_, -b_, d_); }
  bool operator==(const Quad& o) const;

  Quad conj() const { return Quad::raw(a_, -b_, d_); }
  Rat norm() const { return a_ * a_ - b_ * b_ * Rat(d_); }  // x * conj(x)
  int sign() const;
  Quad abs() const { return sign() >= 0 ? *this : -*this; }
  int cmp(const Quad& o) const { return (*this - o).sign(); }
  int cmp(const Rat& r) const { return (*this - Quad(r)).sign(); }
  Int floor() const;
  Quad square() const { return *this * *this; }
  Quad pow(unsigned long e) const;

  RInterval enclose() const;
  double to_double() const { return enclose().mid_d(); }
  std::string str() const;

 private:
  static Quad raw(const Rat& a, const Rat& b, const Int& d) {
    Quad q;
    q.a_ = a;
    q.b_ = b;
    q.d_ = b == 0 ? Int(0) : d;
    return q;
  }
  Int common_field(const Quad& o) const;
  Rat a_, b_;
  Int d_;
};

inline Quad operator*(const Rat& r, const Quad& q) { return Quad(r) * q; }
inline Quad operator+(const Rat& r, const Quad& q) { return Quad(r) + q; }
inline Quad operator-(const Rat& r, const Quad& q) { return Quad(r) - q; }

// sqrt of x staying within a quadratic field: defined when x is rational
// (result may open a new field) or a perfect square inside its own Q(sqrt(d));
// nullopt when the root would need a degree-4 extension or x < 0.
std::optional<Quad> quad_sqrt(const Quad& x);

}  // namespace ckdv
