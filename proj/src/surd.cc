#include "ckdv/surd.hpp"

#include <boost/multiprecision/miller_rabin.hpp>
#include <map>
#include <random>

namespace ckdv {

namespace {

Int pollard_rho(const Int& n) {
  if (n % 2 == 0) return 2;
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ static_cast<uint64_t>(n % 1000000007));
  while (true) {
    Int c = Int(rng() % 1000003) + 1;
    Int x = Int(rng() % 1000003) + 2, y = x, d = 1;
    auto f = [&](const Int& v) { return (v * v + c) % n; };
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = boost::multiprecision::gcd(boost::multiprecision::abs(x - y), n);
    }
    if (d != n) return d;
  }
}

void factor_into(const Int& n, std::map<Int, int>& out) {
  if (n == 1) return;
  if (boost::multiprecision::miller_rabin_test(n, 32)) {
    out[n]++;
    return;
  }
  Int d = pollard_rho(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

std::pair<Int, Int> square_part(const Int& d) {
  if (d <= 0) throw std::domain_error("square_part: need positive integer");
  static thread_local std::map<Int, std::pair<Int, Int>> memo;
  if (auto it = memo.find(d); it != memo.end()) return it->second;
  std::map<Int, int> fac;
  Int rest = d;
  for (long p = 2; p <= 997 && rest > 1; p = (p == 2 ? 3 : p + 2)) {
    if (Int(p) * p > rest) break;
    while (rest % p == 0) {
      rest /= p;
      fac[Int(p)]++;
    }
  }
  if (rest > 1) factor_into(rest, fac);
  Int sq = 1, free_part = 1;
  for (auto& [p, e] : fac) {
    for (int i = 0; i + 1 < e; i += 2) sq *= p;
    if (e % 2) free_part *= p;
  }
  if (memo.size() < 4096) memo[d] = {sq, free_part};
  return {sq, free_part};
}

Quad::Quad(const Rat& a, const Rat& b, const Int& d) : a_(a), b_(b), d_(d) {
  if (b_ == 0) {
    d_ = 0;
    return;
  }
  if (d_ <= 1) throw std::domain_error("Quad: d must exceed 1 for irrational part");
  auto [s, f] = square_part(d_);
  if (s != 1) {
    b_ *= Rat(s);
    d_ = f;
  }
  if (d_ == 1) {  // d was a perfect square: value is rational
    a_ += b_;
    b_ = 0;
    d_ = 0;
  }
}

Quad Quad::sqrt_of(const Rat& x) {
  if (x < 0) throw std::domain_error("sqrt of negative rational");
  if (x == 0) return Quad(Rat(0));
  // sqrt(p/q) = sqrt(p*q)/q
  Int pq = num(x) * den(x);
  auto [s, f] = square_part(pq);
  if (f == 1) return Quad(Rat(s, den(x)));
  return Quad(Rat(0), Rat(s, den(x)), f);
}

Rat Quad::rational_value() const {
  if (!is_rational()) throw std::domain_error("not a rational value");
  return a_;
}

Int Quad::common_field(const Quad& o) const {
  if (d_ == 0) return o.d_;
  if (o.d_ == 0 || o.d_ == d_) return d_;
  throw FieldMismatch();
}

Quad Quad::operator+(const Quad& o) const {
  Int d = common_field(o);
  return Quad(a_ + o.a_, b_ + o.b_, d == 0 ? Int(2) : d);
}

Quad Quad::operator-(const Quad& o) const { return *this + (-o); }

Quad Quad::operator*(const Quad& o) const {
  Int d = common_field(o);
  Rat dd = d == 0 ? Rat(0) : Rat(d);
  return Quad(a_ * o.a_ + b_ * o.b_ * dd, a_ * o.b_ + b_ * o.a_, d == 0 ? Int(2) : d);
}

Quad Quad::operator/(const Quad& o) const {
  if (o.sign() == 0) throw std::domain_error("division by zero surd");
  Int d = common_field(o);
  Rat n = o.norm();
  Quad numq = *this * o.conj();
  return Quad(numq.a_ / n, numq.b_ / n, d == 0 ? Int(2) : d);
}

bool Quad::operator==(const Quad& o) const {
  if (b_ == 0 && o.b_ == 0) return a_ == o.a_;
  return a_ == o.a_ && b_ == o.b_ && d_ == o.d_;
}

int Quad::sign() const {
  int sa = a_ == 0 ? 0 : (a_ > 0 ? 1 : -1);
  if (b_ == 0) return sa;
  int sb = b_ > 0 ? 1 : -1;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // Opposite signs: the larger of |a| and |b|sqrt(d) decides, so compare
  // a^2 against b^2 d exactly.
  Rat lhs = a_ * a_, rhs = b_ * b_ * Rat(d_);
  if (lhs == rhs) return 0;  // cannot happen for irrational sqrt(d), kept for safety
  return lhs > rhs ? sa : sb;
}

Int Quad::floor() const {
  if (b_ == 0) return floor_rat(a_);
  // Bracket sqrt(d) by rationals l <= sqrt(d) <= u with u - l = 2^-k and
  // tighten until the floor is pinned (x is irrational, so this terminates).
  for (unsigned k = 32;; k *= 2) {
    Int scale = Int(1) << k;
    Int r = isqrt(d_ * scale * scale);
    Rat l(r, scale), u(r + 1, scale);
    Rat xl = b_ > 0 ? a_ + b_ * l : a_ + b_ * u;
    Rat xu = b_ > 0 ? a_ + b_ * u : a_ + b_ * l;
    Int fl = floor_rat(xl), fu = floor_rat(xu);
    if (fl == fu) return fl;
    if (k > 1u << 20) throw std::runtime_error("Quad::floor failed to converge");
  }
}

Quad Quad::pow(unsigned long e) const {
  Quad acc(Rat(1)), base = *this;
  while (e) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

RInterval Quad::enclose() const {
  RInterval av(a_);
  if (b_ == 0) return av;
  return av + RInterval(b_) * RInterval::sqrt_of(Rat(d_));
}

std::string Quad::str() const {
  if (b_ == 0) return rat_str(a_);
  std::string s;
  if (a_ != 0) s += rat_str(a_) + (b_ > 0 ? " + " : " - ");
  else if (b_ < 0) s += "-";
  Rat ab = b_ < 0 ? -b_ : b_;
  if (ab != 1) s += rat_str(ab) + "*";
  s += "sqrt(" + d_.str() + ")";
  return s;
}


std::optional<Quad> quad_sqrt(const Quad& x) {
  int sg = x.sign();
  if (sg < 0) return std::nullopt;
  if (sg == 0) return Quad(Rat(0));
  if (x.is_rational()) return Quad::sqrt_of(x.rational_value());
  // (p + q sqrt(d))^2 = a + b sqrt(d)  =>  p^2 + q^2 d = a, 2pq = b;
  // eliminating q gives p^2 = (a +- sqrt(a^2 - b^2 d)) / 2.
  Rat a = x.a(), b = x.b();
  Rat nrm = a * a - b * b * Rat(x.d());
  Rat t;
  if (!is_rational_square(nrm, &t)) return std::nullopt;
  for (int branch = 0; branch < 2; ++branch) {
    Rat p2 = (branch ? Rat(a - t) : Rat(a + t)) / 2;
    Rat p;
    if (p2 > 0 && is_rational_square(p2, &p) && p != 0) {
      Quad cand(p, b / (2 * p), x.d());
      if (cand.square() == x) return cand.sign() >= 0 ? cand : -cand;
    }
  }
  return std::nullopt;
}

}  // namespace ckdv
