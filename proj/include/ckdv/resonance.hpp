#pragma once
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ckdv/rat.hpp"
#include "ckdv/realspec.hpp"

namespace ckdv {

struct ZeroK2 : std::domain_error {
  ZeroK2() : std::domain_error("compact form divides by k2") {}
};

// Dispersion phase alpha*k^3 - beta*k of one linearized flow.
struct Phase {
  Rat alpha, beta;
  Phase(Rat a, Rat b) : alpha(std::move(a)), beta(std::move(b)) {
    if (alpha == 0) throw std::invalid_argument("phase needs a nonzero cubic coefficient");
  }
};

Rat phi(const Phase& p, const Rat& k);

// Phases attached to the three legs of the convolution constraint
// k1 + k2 + k3 = 0. The resonance function is the sum of the leg phases.
struct Triple {
  Phase p1, p2, p3;
  Triple(Phase a, Phase b, Phase c)
      : p1(std::move(a)), p2(std::move(b)), p3(std::move(c)) {}

  // Legs ((a1,b1),(a1,b1),(a2,b2)): the odd phase rides k3.
  static Triple h1_form(const Phase& repeated, const Phase& odd);
  // Legs ((a1,b1),(a2,b2),(a1,b1)): the odd phase rides k2.
  static Triple h2_form(const Phase& repeated, const Phase& odd);
  // All legs (1,0); resonance function collapses to 3*k1*k2*k3.
  static Triple classical();

  // Ratio odd-slope / repeated-slope when two legs share a slope.
  std::optional<Rat> slope_ratio() const;
};

Rat resonance_H(const Triple& t, const Rat& k1, const Rat& k2);

// h_r(x) = x^2 + x + (1-r)/3; its roots carry the resonance lines k1/k2.
Rat h_val(const Rat& r, const Rat& x);

enum class RootCase { NoRealRoots, DoubleRoot, TwoRoots };

struct RootsReport {
  Rat r;
  RootCase kind = RootCase::NoRealRoots;
  std::vector<RealSpec> roots;  // ascending: {} / {-1/2} / {x1r, x2r}
};

RootsReport h_roots(const Rat& r);

struct H2Pair {
  Rat direct, compact;
};

// Evaluates the leg-sum and the factored form -3*a1*k2^3*h_r(k1/k2) +
// (b1-b2)*k2 side by side; they must agree whenever k2 != 0.
H2Pair h2_compact_check(const Rat& r, const Rat& alpha1, const Rat& beta1,
                        const Rat& beta2, const Rat& k1, const Rat& k2);

// Frequencies n/lambda for integer 1 <= |n| <= floor(K*lambda).
struct LatticeWindow {
  Rat lambda;  // >= 1
  Rat K;       // cutoff, >= 1/lambda so the window is nonempty
  LatticeWindow(Rat lam, Rat cutoff);
  long long max_index() const;  // floor(K*lambda)
  Rat freq(long long n) const { return Rat(Int(n)) / lambda; }
  std::vector<Rat> frequencies() const;  // nonzero, ascending
};

struct FreqTriple {
  Rat k1, k2, k3;
};

struct SignificanceReport {
  Rat delta_min;      // min over the window of (1+|H|) / |k1*k2*k3|
  FreqTriple argmin;
  Rat h_at_argmin;
  std::optional<Rat> requested;
  bool pass = true;   // delta_min >= requested (true when none given)
  long long pairs_scanned = 0;
  std::string csv_row() const;  // "k1,k2,k3,H,ratio" for the argmin
};

// Exhaustive scan over zero-sum triples of nonzero window frequencies.
// Throws std::invalid_argument when the window admits no such triple
// (fewer than two usable indices).
SignificanceReport significance_scan(const Triple& t, const LatticeWindow& w,
                                     std::optional<Rat> requested_delta = std::nullopt);

struct NearResonance {
  Rat k1, k2;  // window frequencies, k2 != 0
  int root;    // 1-based index into h_roots(r).roots
  Quad dist;   // |k1/k2 - x_root|, exact in the root's quadratic field
};

// All window pairs whose ratio k1/k2 lies within tol of a real root of h_r,
// sorted by exact distance. Empty when h_r has no real roots.
std::vector<NearResonance> near_resonances(const Rat& r, const LatticeWindow& w,
                                           const Rat& tol);

struct OmegaReport {
  double measure = 0.0;     // total length of the admissible eta-set
  long long intervals = 0;  // clipped interval pieces before merging
  long long pairs = 0;      // (k1,k2) combinations inspected
  double bound = 0.0;       // C * lambda^(3/2) * M^(2/3)
  bool within_bound = true;
};

// Measures {eta : M/2 <= |eta| <= 2M, exists window (k1,k2), k1+k2+k3 = 0,
// 1+|eta+H| <= delta*(1+|H|)^eps} as an exact union of intervals (no
// sampling), and compares it against C * lambda^(3/2) * M^(2/3). k3 must be
// a nonzero lattice point; zero k1/k2 are admitted, matching the eta-set's
// definition. eps defaults to 1/100; scans at laboratory scale use a larger
// exponent (still <= 1/6, where the M^(2/3) growth bound is unchanged) so
// that the intervals are nonempty for reachable |H|.
OmegaReport omega_count(const Triple& t, const Rat& delta, double M, const Rat& k3,
                        const LatticeWindow& w, double C = 1.0,
                        const Rat& eps = Rat(1, 100));

// Full-grid dump, one row per admissible triple: k1,k2,k3,H,ratio.
void write_scan_csv(const Triple& t, const LatticeWindow& w, std::ostream& os);

}  // namespace ckdv
