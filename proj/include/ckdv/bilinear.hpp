#pragma once
#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ckdv/errors.hpp"
#include "ckdv/rat.hpp"
#include "ckdv/resonance.hpp"

namespace ckdv {

struct IncompatibleBoxes : std::runtime_error {
  explicit IncompatibleBoxes(const std::string& why) : std::runtime_error(why) {}
};
struct UnknownCase : std::invalid_argument {
  explicit UnknownCase(const std::string& id)
      : std::invalid_argument("no such counterexample family: " + id) {}
};

// One slab of a characteristic-function counterexample: the frequency is
// pinned to a single lattice point and tau fills a closed interval.
struct Box {
  Rat k;
  Rat tau_center;
  Rat tau_halfwidth;  // >= 0; zero width degenerates to tau-measure zero
  Box(Rat freq, Rat center, Rat halfwidth);
  Rat measure() const { return Rat(Rat(2) * tau_halfwidth); }
};
bool operator==(const Box& a, const Box& b);

// Which bilinear estimate a functional or family probes. The numerator
// weight rides the leg the x-derivative hits: k3 for the two divergence
// forms, k1 / k2 when the derivative falls on one factor. LinearTerm is
// the first-order estimate whose failure family lives on a diagonal slab
// rather than on the convolution set.
enum class EstimateKind { Div1, Div2, Nondiv1, Nondiv2, LinearTerm };
enum class WeightPosition { K1, K2, K3 };

WeightPosition canonical_weight(EstimateKind kind);

// Phase layout of the three legs. Div1 repeats the first dispersion on legs
// 1,2 and puts the second on leg 3; the other coupled kinds put it on leg 2.
Triple estimate_triple(EstimateKind kind, const Rat& alpha1, const Rat& alpha2);

struct WeightedFunctional {
  Rat s, b;
  Triple triple;
  WeightPosition weight;
};

WeightedFunctional make_functional(EstimateKind kind, const Rat& alpha1,
                                   const Rat& alpha2, const Rat& s, const Rat& b);
// Diagonal variant for the first-order term: legs carry (alpha,beta1) and
// (alpha,beta2); s plays no role there.
WeightedFunctional make_linear_term_functional(const Rat& alpha, const Rat& beta1,
                                               const Rat& beta2, const Rat& b);

// An N-indexed (or convergent-indexed) generator of box triples, together
// with the bookkeeping the failure argument needs: the sign each indicator
// carries, which inputs the estimate forces to vanish at frequency zero,
// and in which order the convolution inclusion is read.
struct BoxFamily {
  std::string case_id;
  EstimateKind kind = EstimateKind::Div2;
  std::array<int, 3> signs{-1, -1, -1};
  std::array<bool, 3> zero_mean{false, false, false};
  // inclusion B_{roles[0]} + B_{roles[1]} subset of -B_{roles[2]}
  std::array<int, 3> roles{0, 1, 2};
  bool convergent_indexed = false;  // boxes_at takes a convergent rank
  bool diagonal = false;            // one slab used twice (first-order term)
  long long min_index = 1;
  long long max_index = 1LL << 40;
  std::function<std::array<Box, 3>(long long)> boxes_at;
  std::function<long long(long long)> scale_at;  // abscissa for exponent fits
};

bool inclusion_holds(const std::array<Box, 3>& boxes, const std::array<int, 3>& roles);

struct ConvolutionResult {
  Rat value;      // |B1||B2| when B1 + B2 is contained in -B3
  double oracle;  // same integral by tau-quadrature
};
ConvolutionResult box_convolution(const Box& b1, const Box& b2, const Box& b3);

// All known family ids. Case letters follow the four failure catalogs;
// "-swap" marks the companion family with the large modulation moved to the
// other leg, "d-bpin" the pair that pins b, "d-rational"/"d-convergent" the
// resonant-root families (exact rational root vs. approximation by
// convergents of the quadratic surd).
std::vector<std::string> family_catalog();

// Builds the family, checking the case's dispersion-ratio precondition.
// beta1/beta2 only matter for the lin-fail variants.
BoxFamily counterexample_family(const std::string& case_id, const Rat& alpha1,
                                const Rat& alpha2, const Rat& beta1 = Rat(0),
                                const Rat& beta2 = Rat(0));

// R(N) is reported as an interval: frequency weights are exact, centered
// slabs contribute the exact range of max(1,|L|) over the slab, and an
// off-center slab contributes max(1,|L-center|) as a point weight (its
// center is the resonance value at the family's frequencies). This makes
// R(N) an exact monomial for every non-convergent catalog family, so fitted
// slopes are sharp rather than asymptotic.
struct RatioInterval {
  double lo = 0.0, hi = 0.0;
};
RatioInterval functional_ratio(const WeightedFunctional& f, const BoxFamily& fam,
                               long long n);

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;  // worst log-space deviation from the fit line
};

struct SharpnessSample {
  long long index = 0;  // N, or convergent rank
  long long scale = 0;  // fit abscissa (N, or the convergent denominator)
  RatioInterval ratio;
};

struct SharpnessReport {
  std::string case_id;
  Rat s, b;
  Rat predicted;  // exponent the failure argument forces
  ExponentFit fit;
  bool fails = false;  // slope positive beyond the residual tolerance
  std::vector<SharpnessSample> samples;
};

std::vector<long long> default_n_grid();  // {2^4, ..., 2^20}

// Constraint slope of the case at (s, b): the estimate can only hold when
// this is <= 0. Convergent cases use the surd decay rate zeta = 1.
Rat predicted_exponent(const std::string& case_id, const Rat& s, const Rat& b);

// Evaluates R over the grid (indices for convergent families; defaults to
// the full cached range there and to default_n_grid() otherwise), fits
// log R against log scale, and attaches the predicted exponent.
SharpnessReport fit_exponent(const std::string& case_id, const Rat& alpha1,
                             const Rat& alpha2, const Rat& s, const Rat& b,
                             std::vector<long long> grid = {},
                             const Rat& beta1 = Rat(0), const Rat& beta2 = Rat(0));

// <H2> along the best rational approximations of the resonance root x1r,
// with alpha1 normalized to 1. For surd roots the gauge grows like
// n^zeta with zeta = 3 - sigma = 1 (quadratic surds have exponent 2);
// rational roots sit exactly on the resonance line, so the gauge is 1.
struct HDecayEntry {
  long long j = 0;
  Int m, n;
  Rat gauge;           // 1 + |H2(m, n, -(m+n))|
  double exponent = 0; // log gauge / log n
};
struct HDecayReport {
  Rat r;
  double zeta = 0.0;
  bool rational_root = false;
  std::vector<HDecayEntry> entries;
  ExponentFit fit;  // log gauge against log n; slope approaches zeta
};
HDecayReport resonant_H_decay(const Rat& r, int depth);

// Exhaustive check of |k| / sqrt(<L1><L2>) over 1 <= k <= K at the optimal
// tau, where the product's minimum is exactly <phi2(k) - phi1(k)>. For
// distinct dispersions it also verifies <L1><L2> >= |a2-a1|/2 |k|^3 per k.
// For equal dispersions it evaluates the failure slab instead and fits the
// certified minorant N / (2^b max(1, ((2+|db|)N)^(1-b))), whose slope is
// exactly min{1,b} (the b < 1/2 variant swaps the roles of the betas).
struct LinearMultiplierReport {
  double sup_multiplier = 0.0;
  Int argmax = 0;
  bool per_k_bound_holds = true;
  Int first_violation = 0;  // 0 when none
  bool alphas_equal = false;
  double failure_slope = 0.0;
  std::vector<std::pair<long long, double>> failure_values;
};
LinearMultiplierReport linear_multiplier_scan(const Rat& alpha1, const Rat& alpha2,
                                              const Rat& beta1, const Rat& beta2,
                                              long long K, const Rat& b = Rat(1, 2));

}  // namespace ckdv
