#pragma once
#include <optional>
#include <utility>
#include <vector>

#include "ckdv/realspec.hpp"

namespace ckdv {

struct SigmaOutOfRange : std::domain_error {
  SigmaOutOfRange() : std::domain_error("jarnik_construct: sigma must be >= 2 (or infinite)") {}
};
struct ExhaustedDepth : std::runtime_error {
  ExhaustedDepth() : std::runtime_error("approx_sequence: depth budget exhausted") {}
};

struct CFExpansion {
  std::vector<Int> a;  // partial quotients a_0..a_n
  bool terminated = false;
  std::optional<size_t> preperiod, period;  // for eventually periodic expansions
};

struct Convergent {
  size_t n;
  Int p, q;
};

struct IrrationalityExponent {
  double value = 2.0;  // in {1} ∪ [2, ∞]
  bool exact = false;
  size_t depth = 0;      // estimation depth actually used
  double residual = 0.0;  // spread of tail slope estimates
};

CFExpansion continued_fraction(const RealSpec& x, size_t n);
std::vector<Convergent> convergents(const RealSpec& x, size_t n);

IrrationalityExponent mu(const RealSpec& x, size_t depth = 25);

// Continued fractions with prescribed irrationality exponent sigma >= 2:
// partial-quotient growth a_{n+1} = max(1, floor(q_n^{sigma-2})).
RealSpec jarnik_construct(const Rat& sigma);
// sigma = infinity: a_{n+1} = q_n^n (Liouville-type).
RealSpec jarnik_liouville();

// Pairs (m_j, n_j), n_j increasing, with 0 < |x - m/n| < n^{-mu_target},
// drawn from convergents and their mediants (trivial denominators n=1 skipped).
std::vector<std::pair<Int, Int>> approx_sequence(const RealSpec& x, const Rat& mu_target, size_t J);

struct TypeBoundResult {
  bool holds = false;
  std::optional<std::pair<Int, Int>> witness;  // violating (m, n) when !holds
};

// Checks |x - m/n| >= K / n^{mu+eps} for all 1 <= n <= n_max with m among the
// two integers nearest n*x.
TypeBoundResult verify_type_bound(const RealSpec& x, const Rat& eps, const Rat& K, long n_max);

// rational -> infinity; irrational -> mu - 2.
double minimal_type_index(const RealSpec& x, size_t depth = 25);

}  // namespace ckdv
