#include "ckdv/interval.hpp"

#include <algorithm>
#include <stdexcept>

namespace ckdv {

namespace {

// cpp_int -> mpfr with directed rounding, via hex string (exact digits).
void set_from_int(mpfr_t x, const Int& v, mpfr_rnd_t rnd) {
  mpfr_set_str(x, v.str().c_str(), 10, rnd);
}

void set_from_rat(mpfr_t x, const Rat& v, mpfr_rnd_t rnd) {
  mpfr_t n, d;
  mpfr_init2(n, mpfr_get_prec(x) + 64);
  mpfr_init2(d, mpfr_get_prec(x) + 64);
  set_from_int(n, num(v), rnd);
  set_from_int(d, den(v), rnd == MPFR_RNDD ? MPFR_RNDU : MPFR_RNDD);
  mpfr_div(x, n, d, rnd);
  mpfr_clear(n);
  mpfr_clear(d);
}

}  // namespace

void swap(RInterval& a, RInterval& b) noexcept {
  mpfr_swap(a.lo_, b.lo_);
  mpfr_swap(a.hi_, b.hi_);
}

RInterval::RInterval() {
  mpfr_init2(lo_, kPrec);
  mpfr_init2(hi_, kPrec);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

RInterval::RInterval(const RInterval& o) {
  mpfr_init2(lo_, kPrec);
  mpfr_init2(hi_, kPrec);
  mpfr_set(lo_, o.lo_, MPFR_RNDD);
  mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

RInterval::RInterval(RInterval&& o) noexcept {
  mpfr_init2(lo_, kPrec);
  mpfr_init2(hi_, kPrec);
  mpfr_swap(lo_, o.lo_);
  mpfr_swap(hi_, o.hi_);
}

RInterval& RInterval::operator=(RInterval o) {
  swap(*this, o);
  return *this;
}

RInterval::~RInterval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

RInterval::RInterval(long v) : RInterval() {
  mpfr_set_si(lo_, v, MPFR_RNDD);
  mpfr_set_si(hi_, v, MPFR_RNDU);
}

RInterval::RInterval(const Int& v) : RInterval() {
  set_from_int(lo_, v, MPFR_RNDD);
  set_from_int(hi_, v, MPFR_RNDU);
}

RInterval::RInterval(const Rat& v) : RInterval() {
  set_from_rat(lo_, v, MPFR_RNDD);
  set_from_rat(hi_, v, MPFR_RNDU);
}

RInterval::RInterval(const Rat& lo, const Rat& hi) : RInterval() {
  if (lo > hi) throw std::invalid_argument("RInterval: lo > hi");
  set_from_rat(lo_, lo, MPFR_RNDD);
  set_from_rat(hi_, hi, MPFR_RNDU);
}

RInterval RInterval::sqrt_of(const Rat& v) {
  if (v < 0) throw std::domain_error("sqrt of negative");
  RInterval x(v), r;
  mpfr_sqrt(r.lo_, x.lo_, MPFR_RNDD);
  mpfr_sqrt(r.hi_, x.hi_, MPFR_RNDU);
  return r;
}

RInterval RInterval::operator+(const RInterval& o) const {
  RInterval r;
  mpfr_add(r.lo_, lo_, o.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, hi_, o.hi_, MPFR_RNDU);
  return r;
}

RInterval RInterval::operator-(const RInterval& o) const {
  RInterval r;
  mpfr_sub(r.lo_, lo_, o.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, hi_, o.lo_, MPFR_RNDU);
  return r;
}

RInterval RInterval::operator*(const RInterval& o) const {
  RInterval r;
  mpfr_t t;
  mpfr_init2(t, kPrec);
  const mpfr_srcptr xs[2] = {lo_, hi_};
  const mpfr_srcptr ys[2] = {o.lo_, o.hi_};
  bool first = true;
  for (auto x : xs)
    for (auto y : ys) {
      mpfr_mul(t, x, y, MPFR_RNDD);
      if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
      mpfr_mul(t, x, y, MPFR_RNDU);
      if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
      first = false;
    }
  mpfr_clear(t);
  return r;
}

RInterval RInterval::operator/(const RInterval& o) const {
  if (o.contains_zero()) throw std::domain_error("interval division by zero-containing interval");
  RInterval r;
  mpfr_t t;
  mpfr_init2(t, kPrec);
  const mpfr_srcptr xs[2] = {lo_, hi_};
  const mpfr_srcptr ys[2] = {o.lo_, o.hi_};
  bool first = true;
  for (auto x : xs)
    for (auto y : ys) {
      mpfr_div(t, x, y, MPFR_RNDD);
      if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
      mpfr_div(t, x, y, MPFR_RNDU);
      if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
      first = false;
    }
  mpfr_clear(t);
  return r;
}

RInterval RInterval::neg() const {
  RInterval r;
  mpfr_neg(r.lo_, hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  return r;
}

RInterval RInterval::abs() const {
  if (mpfr_sgn(lo_) >= 0) return *this;
  if (mpfr_sgn(hi_) <= 0) return neg();
  RInterval r;
  mpfr_set_zero(r.lo_, 1);
  mpfr_t t;
  mpfr_init2(t, kPrec);
  mpfr_neg(t, lo_, MPFR_RNDU);
  if (mpfr_cmp(t, hi_) > 0)
    mpfr_set(r.hi_, t, MPFR_RNDU);
  else
    mpfr_set(r.hi_, hi_, MPFR_RNDU);
  mpfr_clear(t);
  return r;
}

RInterval RInterval::pow(const RInterval& base, const Rat& e) {
  if (mpfr_sgn(base.lo_) <= 0) throw std::domain_error("interval pow: base must be > 0");
  if (e == 0) return RInterval(1L);
  RInterval exp_iv(e), r;
  // x^e = exp(e * ln x); monotone in each of ln x and e once signs are fixed,
  // so bound via the four corner combinations with directed rounding.
  mpfr_t lnl, lnh, prod, t;
  mpfr_init2(lnl, kPrec);
  mpfr_init2(lnh, kPrec);
  mpfr_init2(prod, kPrec);
  mpfr_init2(t, kPrec);
  mpfr_log(lnl, base.lo_, MPFR_RNDD);
  mpfr_log(lnh, base.hi_, MPFR_RNDU);
  const mpfr_srcptr ls[2] = {lnl, lnh};
  const mpfr_srcptr es[2] = {exp_iv.lo_, exp_iv.hi_};
  bool first = true;
  for (auto l : ls)
    for (auto ee : es) {
      mpfr_mul(prod, l, ee, MPFR_RNDD);
      mpfr_exp(t, prod, MPFR_RNDD);
      if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
      mpfr_mul(prod, l, ee, MPFR_RNDU);
      mpfr_exp(t, prod, MPFR_RNDU);
      if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
      first = false;
    }
  mpfr_clear(lnl);
  mpfr_clear(lnh);
  mpfr_clear(prod);
  mpfr_clear(t);
  return r;
}

RInterval RInterval::log(const RInterval& x) {
  if (mpfr_sgn(x.lo_) <= 0) throw std::domain_error("interval log: requires x > 0");
  RInterval r;
  mpfr_log(r.lo_, x.lo_, MPFR_RNDD);
  mpfr_log(r.hi_, x.hi_, MPFR_RNDU);
  return r;
}

bool RInterval::contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }

bool RInterval::certainly_less(const RInterval& o) const { return mpfr_cmp(hi_, o.lo_) < 0; }

bool RInterval::certainly_greater(const RInterval& o) const { return mpfr_cmp(lo_, o.hi_) > 0; }

bool RInterval::certainly_le(const Rat& r) const { return !(RInterval(r).certainly_less(*this)); }

bool RInterval::certainly_ge(const Rat& r) const { return !(certainly_less(RInterval(r))); }

double RInterval::lo_d() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double RInterval::hi_d() const { return mpfr_get_d(hi_, MPFR_RNDU); }

double RInterval::width_d() const {
  mpfr_t w;
  mpfr_init2(w, kPrec);
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  double out = mpfr_get_d(w, MPFR_RNDU);
  mpfr_clear(w);
  return out;
}

namespace {
Rat mpfr_to_rat(mpfr_srcptr x) {
  if (mpfr_zero_p(x)) return Rat(0);
  mpfr_exp_t e;
  char* s = mpfr_get_str(nullptr, &e, 2, 0, x, MPFR_RNDN);  // exact binary digits
  std::string digits(s);
  mpfr_free_str(s);
  bool neg = !digits.empty() && digits[0] == '-';
  if (neg) digits.erase(0, 1);
  Int mant(0);
  for (char c : digits) mant = (mant << 1) + (c - '0');
  long shift = static_cast<long>(e) - static_cast<long>(digits.size());
  Rat v;
  if (shift >= 0)
    v = Rat(mant << shift);
  else
    v = Rat(mant, Int(1) << (-shift));
  return neg ? -v : v;
}
}  // namespace

Rat RInterval::lo_rat() const { return mpfr_to_rat(lo_); }
Rat RInterval::hi_rat() const { return mpfr_to_rat(hi_); }

std::string RInterval::str() const {
  char buf[128];
  mpfr_snprintf(buf, sizeof buf, "[%.20Rg, %.20Rg]", lo_, hi_);
  return buf;
}

}  // namespace ckdv
