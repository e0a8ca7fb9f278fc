#pragma once
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace ckdv {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b, r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

inline Int floor_rat(const Rat& r) { return floor_div(num(r), den(r)); }
inline Int ceil_rat(const Rat& r) { return -floor_div(-num(r), den(r)); }

inline Int isqrt(const Int& n) {
  if (n < 0) throw std::domain_error("isqrt of negative");
  return boost::multiprecision::sqrt(n);
}

inline Int pow_int(Int base, unsigned long e) {
  Int acc(1);
  while (e) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

// floor(x^(1/k)) by Newton iteration.
inline Int iroot(const Int& x, unsigned k) {
  if (x < 0) throw std::domain_error("iroot of negative");
  if (x == 0 || k == 1) return x;
  using boost::multiprecision::msb;
  Int r = Int(1) << (msb(x) / k + 1);
  while (true) {
    Int rk1 = pow_int(r, k - 1);
    Int next = ((k - 1) * r + x / rk1) / k;
    if (next >= r) break;
    r = next;
  }
  while (pow_int(r, k) > x) --r;
  while (pow_int(r + 1, k) <= x) ++r;
  return r;
}

inline bool is_perfect_square(const Int& n, Int* root = nullptr) {
  if (n < 0) return false;
  Int s = isqrt(n);
  if (s * s == n) {
    if (root) *root = s;
    return true;
  }
  return false;
}

// x = p/q is a square of a rational iff p*q is a perfect square (p/q reduced).
inline bool is_rational_square(const Rat& x, Rat* root = nullptr) {
  if (x < 0) return false;
  Int sp, sq;
  if (!is_perfect_square(num(x), &sp) || !is_perfect_square(den(x), &sq)) return false;
  if (root) *root = Rat(sp, sq);
  return true;
}

inline Rat pow_rat(const Rat& base, long e) {
  if (e == 0) return Rat(1);
  Rat b = e > 0 ? base : Rat(1) / base;
  unsigned long n = e > 0 ? e : -e;
  Rat acc(1);
  while (n) {
    if (n & 1) acc *= b;
    b *= b;
    n >>= 1;
  }
  return acc;
}

// Parses "p/q", integers, and plain decimals ("-0.25") into exact rationals.
inline Rat parse_rat(const std::string& s) {
  auto bad = [&] { throw std::invalid_argument("not a rational: " + s); };
  if (s.empty()) bad();
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Int p(s.substr(0, slash)), q(s.substr(slash + 1));
    if (q == 0) bad();
    return Rat(p, q);
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) return Rat(Int(s));
  std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
  if (tail.find_first_not_of("0123456789") != std::string::npos) bad();
  bool neg = !head.empty() && head[0] == '-';
  Int ip = head.empty() || head == "-" || head == "+" ? Int(0) : boost::multiprecision::abs(Int(head));
  Int scale = pow_int(Int(10), tail.size());
  Rat v = Rat(ip) + (tail.empty() ? Rat(0) : Rat(Int(tail), scale));
  return neg ? -v : v;
}

inline std::string rat_str(const Rat& r) {
  std::string s = num(r).str();
  if (den(r) != 1) s += "/" + den(r).str();
  return s;
}

inline double rat_d(const Rat& r) { return static_cast<double>(r); }

// log2 with ~60 bits of mantissa accuracy, safe for huge integers.
inline double log2_int(const Int& n) {
  using boost::multiprecision::msb;
  if (n <= 0) throw std::domain_error("log2 of non-positive");
  if (n == 1) return 0.0;
  unsigned long bits = msb(n);  // floor(log2 n)
  if (bits <= 62) return std::log2(static_cast<double>(static_cast<unsigned long long>(n)));
  Int top = n >> (bits - 62);
  return std::log2(static_cast<double>(static_cast<unsigned long long>(top))) +
         static_cast<double>(bits - 62);
}

inline double log2_rat(const Rat& r) {
  if (r <= 0) throw std::domain_error("log2 of non-positive");
  return log2_int(num(r)) - log2_int(den(r));
}

}  // namespace ckdv
