#pragma once
#include <mpfr.h>

#include <string>

#include "ckdv/rat.hpp"

namespace ckdv {

// Closed interval [lo, hi] with MPFR endpoints rounded outward (RNDD/RNDU).
// Default working precision 256 bits; every operation keeps the true value
// enclosed, so "certainly_*" comparisons can never misclassify.
class RInterval {
 public:
  static constexpr mpfr_prec_t kPrec = 256;

  RInterval();
  RInterval(const RInterval& o);
  RInterval(RInterval&& o) noexcept;
  RInterval& operator=(RInterval o);
  ~RInterval();

  explicit RInterval(long v);
  explicit RInterval(const Int& v);
  explicit RInterval(const Rat& v);
  RInterval(const Rat& lo, const Rat& hi);

  static RInterval sqrt_of(const Rat& v);  // requires v >= 0

  RInterval operator+(const RInterval& o) const;
  RInterval operator-(const RInterval& o) const;
  RInterval operator*(const RInterval& o) const;
  RInterval operator/(const RInterval& o) const;  // requires 0 not in o
  RInterval neg() const;
  RInterval abs() const;

  // base^e for an enclosed positive base and exact rational exponent.
  static RInterval pow(const RInterval& base, const Rat& e);
  static RInterval log(const RInterval& x);  // natural log, requires x > 0

  bool contains_zero() const;
  bool certainly_less(const RInterval& o) const;      // hi <  o.lo
  bool certainly_greater(const RInterval& o) const;   // lo >  o.hi
  bool certainly_le(const Rat& r) const;
  bool certainly_ge(const Rat& r) const;

  double lo_d() const;
  double hi_d() const;
  double mid_d() const { return 0.5 * (lo_d() + hi_d()); }
  double width_d() const;  // hi - lo evaluated in full precision, rounded up
  // Outward rational hull (dyadic endpoints).
  Rat lo_rat() const;
  Rat hi_rat() const;

  std::string str() const;

 private:
  mpfr_t lo_, hi_;
  friend void swap(RInterval& a, RInterval& b) noexcept;
};

}  // namespace ckdv
