#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "ckdv/bilinear.hpp"

using namespace ckdv;

namespace {

std::pair<Rat, Rat> alphas_for(const std::string& id) {
  static const std::set<std::string> r_one = {
      "div2-b", "div2-b-swap", "div2-c",      "nondiv2-b", "nondiv2-c",
      "div1-b", "div1-b-swap", "div1-c",      "nondiv1-b"};
  static const std::set<std::string> r_low = {
      "div2-a", "div2-a-swap", "nondiv2-a", "nondiv2-a-swap",
      "div1-a", "div1-a-swap", "nondiv1-a", "nondiv1-a-swap"};
  static const std::set<std::string> bpin = {
      "div2-d-bpin", "div2-d-bpin-swap", "nondiv2-d-bpin", "nondiv2-d-bpin-swap"};
  static const std::set<std::string> rational = {
      "div2-d-rational", "nondiv2-d-rational", "div1-d-rational", "nondiv1-c-rational"};
  if (id.rfind("lin-fail", 0) == 0) return {Rat(1), Rat(1)};
  if (r_one.count(id)) return {Rat(3, 2), Rat(3, 2)};
  if (r_low.count(id)) return {Rat(1), Rat(-1)};
  if (bpin.count(id)) return {Rat(1), Rat(3)};
  if (rational.count(id)) return {Rat(3), Rat(1)};
  if (id.find("convergent") != std::string::npos) return {Rat(2), Rat(1)};
  return {Rat(1), Rat(5)};  // mean-breaking families work at any ratio
}

double mid(const RatioInterval& r) { return std::sqrt(r.lo * r.hi); }

}  // namespace

TEST_CASE("boxes validate their halfwidth and expose their measure") {
  Box b(Rat(2), Rat(8), Rat(1));
  CHECK(b.measure() == Rat(2));
  Box degenerate(Rat(1), Rat(0), Rat(0));
  CHECK(degenerate.measure() == Rat(0));
  CHECK_THROWS_AS(Box(Rat(1), Rat(0), Rat(-1)), std::invalid_argument);
  CHECK(Box(Rat(1), Rat(2), Rat(3)) == Box(Rat(1), Rat(2), Rat(3)));
  CHECK_FALSE(Box(Rat(1), Rat(2), Rat(3)) == Box(Rat(1), Rat(2), Rat(4)));
}

TEST_CASE("box convolution equals the measure product when inclusion holds") {
  // halfwidths (1,1,2) with zero tau offset: the integral is exactly 4
  Box b1(Rat(1), Rat(5), Rat(1)), b2(Rat(2), Rat(-3), Rat(1)), b3(Rat(-3), Rat(-2), Rat(2));
  ConvolutionResult res = box_convolution(b1, b2, b3);
  CHECK(res.value == Rat(4));
  CHECK(res.oracle == doctest::Approx(4.0).epsilon(1e-10));

  // a degenerate slab kills the integral
  ConvolutionResult zero = box_convolution(b1, Box(Rat(2), Rat(-3), Rat(0)),
                                           Box(Rat(-3), Rat(-2), Rat(1)));
  CHECK(zero.value == Rat(0));
  CHECK(zero.oracle == 0.0);

  // frequency mismatch and tau offsets beyond the slack both throw
  CHECK_THROWS_AS(box_convolution(b1, b2, Box(Rat(-4), Rat(-2), Rat(2))),
                  IncompatibleBoxes);
  CHECK_THROWS_AS(box_convolution(b1, b2, Box(Rat(-3), Rat(-1), Rat(2))),
                  IncompatibleBoxes);
  CHECK_THROWS_AS(box_convolution(b1, b2, Box(Rat(-3), Rat(-2), Rat(1))),
                  IncompatibleBoxes);
}

TEST_CASE("random compatible triples agree with the quadrature oracle") {
  std::mt19937 gen(811);
  std::uniform_int_distribution<int> num(-40, 40), hw(0, 12), off(-100, 100);
  for (int trial = 0; trial < 100; ++trial) {
    Rat h1(hw(gen), 4), h2(hw(gen), 4);
    Rat c1(num(gen), 3), c2(num(gen), 3);
    Rat slack(hw(gen), 4);
    Rat o = Rat(Rat(off(gen), 100) * slack);
    Rat h3 = Rat(h1 + h2 + slack);
    Rat c3 = Rat(-(c1 + c2) + o);
    Box b1(Rat(3), c1, h1), b2(Rat(-5), c2, h2), b3(Rat(2), c3, h3);
    ConvolutionResult res = box_convolution(b1, b2, b3);
    CHECK(res.value == Rat(4 * h1 * h2));
    CHECK(res.oracle == doctest::Approx(rat_d(res.value)).epsilon(1e-8));
  }
}

TEST_CASE("catalog families satisfy inclusion and respect their vanishing flags") {
  for (const std::string& id : family_catalog()) {
    auto [a1, a2] = alphas_for(id);
    BoxFamily fam = counterexample_family(id, a1, a2, Rat(0), Rat(1, 10));
    CAPTURE(id);
    std::vector<long long> idxs;
    if (fam.convergent_indexed) {
      CHECK(fam.max_index >= 5);
      for (long long j = fam.min_index; j <= fam.max_index; ++j) idxs.push_back(j);
    } else {
      idxs = {1, 2, 3, 16, 1024, 123456};
    }
    for (long long n : idxs) {
      auto boxes = fam.boxes_at(n);
      if (fam.diagonal) {
        CHECK(boxes[0] == boxes[1]);
      } else {
        CHECK(inclusion_holds(boxes, fam.roles));
        // inclusion must also survive the convolution call in role order
        ConvolutionResult res = box_convolution(boxes[fam.roles[0]], boxes[fam.roles[1]],
                                                boxes[fam.roles[2]]);
        CHECK(res.value ==
              Rat(boxes[fam.roles[0]].measure() * boxes[fam.roles[1]].measure()));
      }
      for (int i = 0; i < 3; ++i) {
        CHECK((fam.signs[i] == 1 || fam.signs[i] == -1));
        if (fam.zero_mean[i]) CHECK(boxes[i].k != 0);
      }
    }
  }
  CHECK_THROWS_AS(counterexample_family("div3-z", Rat(1), Rat(1)), UnknownCase);
  CHECK_THROWS_AS(predicted_exponent("div3-z", Rat(0), Rat(1, 2)), UnknownCase);
}

TEST_CASE("family preconditions reject the wrong dispersion ratio") {
  CHECK_THROWS_AS(counterexample_family("div2-a", Rat(2), Rat(1)), std::invalid_argument);
  CHECK_THROWS_AS(counterexample_family("div2-b", Rat(1), Rat(-1)), std::invalid_argument);
  CHECK_THROWS_AS(counterexample_family("div2-c", Rat(1), Rat(2)), std::invalid_argument);
  // rational-root family on a surd ratio, and vice versa
  CHECK_THROWS_AS(counterexample_family("div2-d-rational", Rat(2), Rat(1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(counterexample_family("div2-d-convergent", Rat(3), Rat(1)),
                  std::invalid_argument);
  // resonant families need the root to exist and the ratio away from 1
  CHECK_THROWS_AS(counterexample_family("div2-d-bpin", Rat(8), Rat(1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(counterexample_family("nondiv2-d-bpin", Rat(1), Rat(1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(counterexample_family("lin-fail-b-ge-half", Rat(1), Rat(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(counterexample_family("div2-a", Rat(0), Rat(1)), std::invalid_argument);
}

TEST_CASE("opposite-dispersion family produces the documented boxes at N=10") {
  BoxFamily fam = counterexample_family("div2-a", Rat(1), Rat(-1));
  auto boxes = fam.boxes_at(10);
  CHECK(boxes[0].k == Rat(10));
  CHECK(boxes[0].tau_center == Rat(1000));
  CHECK(boxes[0].tau_halfwidth == Rat(1));
  CHECK(boxes[1].k == Rat(10));
  CHECK(boxes[1].tau_center == Rat(-1000));
  CHECK(boxes[1].tau_halfwidth == Rat(1));
  CHECK(boxes[2].k == Rat(-20));
  CHECK(boxes[2].tau_center == Rat(0));
  CHECK(boxes[2].tau_halfwidth == Rat(2));
}

TEST_CASE("slab centers balance the resonance function exactly") {
  for (const std::string& id : family_catalog()) {
    if (id.rfind("lin-fail", 0) == 0) continue;
    auto [a1, a2] = alphas_for(id);
    BoxFamily fam = counterexample_family(id, a1, a2);
    Triple t = estimate_triple(fam.kind, a1, a2);
    CAPTURE(id);
    const Phase* legs[3] = {&t.p1, &t.p2, &t.p3};
    for (long long n : {2LL, 5LL}) {
      if (n > fam.max_index) continue;
      auto boxes = fam.boxes_at(n);
      Rat sum(0);
      for (int i = 0; i < 3; ++i)
        sum += Rat(boxes[i].tau_center - phi(*legs[i], boxes[i].k));
      Rat h = resonance_H(t, boxes[0].k, boxes[1].k);
      CHECK(sum == Rat(-h));
    }
  }
}

TEST_CASE("closed-form families scale as exact monomials with the predicted exponent") {
  const Rat s(-37, 100), b(11, 25);
  for (const std::string& id : family_catalog()) {
    if (id.find("convergent") != std::string::npos) continue;
    if (id == "div2-d-bpin" || id == "div2-d-bpin-swap") continue;  // N+1 frequency
    auto [a1, a2] = alphas_for(id);
    BoxFamily fam = counterexample_family(id, a1, a2, Rat(0), Rat(1, 10));
    WeightedFunctional f = fam.diagonal
                               ? make_linear_term_functional(a1, Rat(0), Rat(1, 10), b)
                               : make_functional(fam.kind, a1, a2, s, b);
    CAPTURE(id);
    double r1 = mid(functional_ratio(f, fam, 1 << 10));
    double r2 = mid(functional_ratio(f, fam, 1 << 11));
    double slope = std::log2(r2 / r1);
    CHECK(slope == doctest::Approx(rat_d(predicted_exponent(id, s, b))).epsilon(1e-9));
  }
}

TEST_CASE("fit detects failure above the critical index and stops at the boundary") {
  std::vector<long long> grid;
  for (int e = 4; e <= 16; ++e) grid.push_back(1LL << e);

  SharpnessReport low = fit_exponent("div2-a", Rat(1), Rat(-1), Rat(-3, 5), Rat(1, 2), grid);
  CHECK(low.fit.slope == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(low.fit.max_residual < 1e-9);
  CHECK(low.fails);
  CHECK(low.predicted == Rat(1, 10));
  CHECK(low.samples.size() == grid.size());

  // at (s,b) = (-1/2, 1/2) both opposite-dispersion constraint lines vanish
  SharpnessReport at1 = fit_exponent("div2-a", Rat(1), Rat(-1), Rat(-1, 2), Rat(1, 2));
  SharpnessReport at2 = fit_exponent("div2-a-swap", Rat(1), Rat(-1), Rat(-1, 2), Rat(1, 2));
  CHECK(std::fabs(at1.fit.slope) < 1e-9);
  CHECK(std::fabs(at2.fit.slope) < 1e-9);
  CHECK(at1.predicted == Rat(0));
  CHECK(at2.predicted == Rat(0));
  CHECK_FALSE(at1.fails);
  CHECK_FALSE(at2.fails);

  // matching-dispersion divergence family at the same point
  SharpnessReport b1 = fit_exponent("div2-b", Rat(3, 2), Rat(3, 2), Rat(-1, 2), Rat(1, 2));
  CHECK(std::fabs(b1.fit.slope) < 1e-9);
  CHECK_FALSE(b1.fails);

  // derivative-on-one-factor pair is critical at s = -1/4
  SharpnessReport nd = fit_exponent("nondiv2-a-swap", Rat(1), Rat(-1), Rat(-1, 4), Rat(1, 2));
  CHECK(std::fabs(nd.fit.slope) < 1e-9);
  CHECK_FALSE(nd.fails);
  SharpnessReport ndc = fit_exponent("nondiv2-a", Rat(1), Rat(-1), Rat(-3, 10), Rat(1, 2));
  CHECK(ndc.fit.slope == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(ndc.fails);
}

TEST_CASE("rational resonance roots put the large slab exactly on the characteristic") {
  BoxFamily fam = counterexample_family("div2-d-rational", Rat(3), Rat(1));
  auto boxes = fam.boxes_at(7);
  CHECK(boxes[0].k == Rat(-14));  // root -2/3 scaled by q*N
  CHECK(boxes[1].k == Rat(21));
  CHECK(boxes[2].k == Rat(-7));
  Triple t = estimate_triple(EstimateKind::Div2, Rat(3), Rat(1));
  CHECK(resonance_H(t, boxes[0].k, boxes[1].k) == Rat(0));

  SharpnessReport fail = fit_exponent("div2-d-rational", Rat(3), Rat(1), Rat(9, 10), Rat(1, 2));
  CHECK(fail.fit.slope == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(fail.fails);
  SharpnessReport hold = fit_exponent("div2-d-rational", Rat(3), Rat(1), Rat(1), Rat(1, 2));
  CHECK(std::fabs(hold.fit.slope) < 1e-9);
  CHECK_FALSE(hold.fails);

  // double root at ratio 1/4: line k1 = -k2/2
  BoxFamily dbl = counterexample_family("div2-d-rational", Rat(4), Rat(1));
  auto db = dbl.boxes_at(3);
  CHECK(db[0].k == Rat(-3));
  CHECK(db[1].k == Rat(6));
  CHECK(db[2].k == Rat(-3));
  Triple t2 = estimate_triple(EstimateKind::Div2, Rat(4), Rat(1));
  CHECK(resonance_H(t2, db[0].k, db[1].k) == Rat(0));
}

TEST_CASE("frequency-one slab pair pins the divergence-form b to one half") {
  std::vector<long long> big;
  for (int e = 26; e <= 34; ++e) big.push_back(1LL << e);

  SharpnessReport up = fit_exponent("div2-d-bpin", Rat(1), Rat(3), Rat(1), Rat(3, 5), big);
  CHECK(up.fit.slope == doctest::Approx(0.2).epsilon(1e-6));
  CHECK(up.fails);
  SharpnessReport flat = fit_exponent("div2-d-bpin", Rat(1), Rat(3), Rat(1), Rat(1, 2), big);
  CHECK(std::fabs(flat.fit.slope) < 1e-6);
  CHECK_FALSE(flat.fails);
  SharpnessReport down = fit_exponent("div2-d-bpin-swap", Rat(1), Rat(3), Rat(1), Rat(2, 5), big);
  CHECK(down.fit.slope == doctest::Approx(0.2).epsilon(1e-6));
  CHECK(down.fails);
  SharpnessReport flat2 = fit_exponent("div2-d-bpin-swap", Rat(1), Rat(3), Rat(1), Rat(1, 2), big);
  CHECK(std::fabs(flat2.fit.slope) < 1e-6);
  CHECK_FALSE(flat2.fails);
}

TEST_CASE("resonant slab pair confines the non-divergence b to the middle third") {
  auto fails_at = [](const std::string& id, const Rat& b) {
    return fit_exponent(id, Rat(1), Rat(3), Rat(1), b).fails;
  };
  CHECK(fails_at("nondiv2-d-bpin", Rat(7, 10)));
  CHECK_FALSE(fails_at("nondiv2-d-bpin", Rat(2, 3)));
  CHECK(fails_at("nondiv2-d-bpin-swap", Rat(3, 10)));
  CHECK_FALSE(fails_at("nondiv2-d-bpin-swap", Rat(1, 3)));
  for (Rat b : {Rat(1, 3), Rat(1, 2), Rat(2, 3)}) {
    CHECK_FALSE(fails_at("nondiv2-d-bpin", b));
    CHECK_FALSE(fails_at("nondiv2-d-bpin-swap", b));
  }
  CHECK(fails_at("nondiv2-d-bpin", Rat(3, 4)));
  CHECK(fails_at("nondiv2-d-bpin-swap", Rat(1, 4)));
}

TEST_CASE("mean-breaking families grow linearly at every regularity") {
  for (Rat s : {Rat(-2), Rat(0), Rat(3)}) {
    for (const char* id : {"div2-e", "nondiv1-d"}) {
      SharpnessReport rep = fit_exponent(id, Rat(1), Rat(5), s, Rat(1, 2));
      CHECK(rep.fit.slope == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(rep.fails);
    }
    for (const char* id : {"div2-c", "nondiv2-c", "div1-c"}) {
      SharpnessReport rep = fit_exponent(id, Rat(3, 2), Rat(3, 2), s, Rat(1, 2));
      CHECK(rep.fit.slope == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(rep.fails);
    }
  }
}

TEST_CASE("zero-sum slab family tracks one minus twice the regularity") {
  SharpnessReport rep = fit_exponent("nondiv2-b", Rat(2), Rat(2), Rat(1, 5), Rat(1, 2));
  CHECK(rep.fit.slope == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(rep.fails);
  SharpnessReport crit = fit_exponent("nondiv2-b", Rat(2), Rat(2), Rat(1, 2), Rat(1, 2));
  CHECK(std::fabs(crit.fit.slope) < 1e-9);
  CHECK_FALSE(crit.fails);
  SharpnessReport close = fit_exponent("nondiv2-b", Rat(2), Rat(2), Rat(9, 20), Rat(1, 2));
  CHECK(close.fit.slope == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(close.fails);
}

TEST_CASE("resonance gauge along surd convergents decays at the quadratic rate") {
  HDecayReport rep = resonant_H_decay(Rat(1, 2), 12);
  CHECK_FALSE(rep.rational_root);
  CHECK(rep.zeta == 1.0);
  REQUIRE(rep.entries.size() >= 10);
  // first four gauges, frozen from the exact arithmetic: the root is
  // -1/2 - sqrt(3)/6 with convergents -3/4, -4/5, -11/14, -15/19
  CHECK(rep.entries[0].n == 4);
  CHECK(rep.entries[0].gauge == Rat(5));
  CHECK(rep.entries[1].n == 5);
  CHECK(rep.entries[1].gauge == Rat(7, 2));
  CHECK(rep.entries[2].n == 14);
  CHECK(rep.entries[2].gauge == Rat(15));
  CHECK(rep.entries[3].n == 19);
  CHECK(rep.entries[3].gauge == Rat(21, 2));
  CHECK(std::fabs(rep.fit.slope - rep.zeta) < 0.15);
  for (const HDecayEntry& e : rep.entries) {
    CHECK(e.exponent > 0.5);
    CHECK(e.exponent < 1.3);
  }

  // rational root: the gauge never leaves 1
  HDecayReport flat = resonant_H_decay(Rat(1, 3), 6);
  CHECK(flat.rational_root);
  CHECK(flat.zeta == 0.0);
  for (const HDecayEntry& e : flat.entries) CHECK(e.gauge == Rat(1));

  CHECK_THROWS_AS(resonant_H_decay(Rat(1, 8), 5), ROutOfRange);
  CHECK_THROWS_AS(resonant_H_decay(Rat(1), 5), ROutOfRange);
  CHECK_THROWS_AS(resonant_H_decay(Rat(1, 2), 0), std::invalid_argument);
}

TEST_CASE("convergent-indexed sharpness fits stay near the decay-rate prediction") {
  for (const char* id : {"div2-d-convergent", "nondiv2-d-convergent-swap",
                         "div1-d-convergent", "nondiv1-c-convergent"}) {
    SharpnessReport rep = fit_exponent(id, Rat(2), Rat(1), Rat(2, 5), Rat(1, 2));
    CAPTURE(id);
    CHECK(rep.samples.size() >= 8);
    CHECK(std::fabs(rep.fit.slope - rat_d(rep.predicted)) < 0.15);
  }
  // below the critical index the drift is positive and visible
  SharpnessReport low = fit_exponent("div2-d-convergent", Rat(2), Rat(1), Rat(0), Rat(1, 2));
  CHECK(low.fit.slope > 0.3);  // prediction 1/2
}

TEST_CASE("separated dispersions keep the first-order multiplier bounded") {
  LinearMultiplierReport rep =
      linear_multiplier_scan(Rat(1), Rat(-1), Rat(0), Rat(0), 1000);
  CHECK_FALSE(rep.alphas_equal);
  CHECK(rep.per_k_bound_holds);
  CHECK(rep.first_violation == 0);
  CHECK(rep.argmax == 1);
  CHECK(rep.sup_multiplier == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(rep.sup_multiplier <= 1.0);

  LinearMultiplierReport small_betas =
      linear_multiplier_scan(Rat(1), Rat(-1), Rat(1, 3), Rat(-1, 5), 1000);
  CHECK(small_betas.per_k_bound_holds);

  // large first-order coefficients push a column below the cubic bound
  LinearMultiplierReport broken =
      linear_multiplier_scan(Rat(1), Rat(9, 8), Rat(0), Rat(10), 100);
  CHECK_FALSE(broken.per_k_bound_holds);
  CHECK(broken.first_violation == 8);
}

TEST_CASE("equal dispersions produce the min(1,b) failure slope") {
  for (auto [b, want] : {std::pair<Rat, double>{Rat(1, 2), 0.5},
                         {Rat(3, 4), 0.75},
                         {Rat(2), 1.0},
                         {Rat(3, 10), 0.7},
                         {Rat(-1), 1.0}}) {
    LinearMultiplierReport rep =
        linear_multiplier_scan(Rat(1), Rat(1), Rat(0), Rat(1, 10), 100, b);
    CAPTURE(rat_d(b));
    CHECK(rep.alphas_equal);
    CHECK(rep.failure_slope == doctest::Approx(want).epsilon(1e-6));
    CHECK(rep.failure_values.size() == default_n_grid().size());
    CHECK(rep.failure_values.back().second > rep.failure_values.front().second);
  }
  LinearMultiplierReport rep =
      linear_multiplier_scan(Rat(1), Rat(1), Rat(0), Rat(1, 10), 100);
  CHECK(rep.sup_multiplier > 5.0);  // no cubic gap to spend, sqrt growth

  SharpnessReport direct = fit_exponent("lin-fail-b-ge-half", Rat(1), Rat(1), Rat(0),
                                        Rat(3, 4), {}, Rat(0), Rat(1, 10));
  CHECK(direct.predicted == Rat(3, 4));
  CHECK(direct.fit.slope == doctest::Approx(0.75).epsilon(1e-6));
  CHECK(direct.fails);
}

TEST_CASE("functionals and families must agree on weight and phase layout") {
  BoxFamily nd2 = counterexample_family("nondiv2-a", Rat(1), Rat(-1));
  WeightedFunctional wrong_weight = make_functional(EstimateKind::Div2, Rat(1), Rat(-1),
                                                    Rat(0), Rat(1, 2));
  CHECK_THROWS_AS(functional_ratio(wrong_weight, nd2, 16), std::invalid_argument);

  BoxFamily d2 = counterexample_family("div2-a", Rat(1), Rat(-1));
  WeightedFunctional wrong_legs = make_functional(EstimateKind::Div1, Rat(1), Rat(-1),
                                                  Rat(0), Rat(1, 2));
  CHECK_THROWS_AS(functional_ratio(wrong_legs, d2, 16), std::invalid_argument);

  WeightedFunctional fine = make_functional(EstimateKind::Div2, Rat(1), Rat(-1),
                                            Rat(0), Rat(1, 2));
  CHECK_THROWS_AS(functional_ratio(fine, d2, 0), std::out_of_range);
  CHECK_THROWS_AS(make_functional(EstimateKind::LinearTerm, Rat(1), Rat(1), Rat(0), Rat(1, 2)),
                  std::invalid_argument);

  // phase layouts per estimate
  Triple d1 = estimate_triple(EstimateKind::Div1, Rat(2), Rat(5));
  CHECK(d1.p1.alpha == Rat(2));
  CHECK(d1.p2.alpha == Rat(2));
  CHECK(d1.p3.alpha == Rat(5));
  Triple nd = estimate_triple(EstimateKind::Nondiv2, Rat(2), Rat(5));
  CHECK(nd.p1.alpha == Rat(2));
  CHECK(nd.p2.alpha == Rat(5));
  CHECK(nd.p3.alpha == Rat(2));
  CHECK(canonical_weight(EstimateKind::Div1) == WeightPosition::K3);
  CHECK(canonical_weight(EstimateKind::Nondiv1) == WeightPosition::K1);
  CHECK(canonical_weight(EstimateKind::Nondiv2) == WeightPosition::K2);
}

TEST_CASE("exponent fits demand at least five grid points") {
  CHECK_THROWS_AS(
      fit_exponent("div2-a", Rat(1), Rat(-1), Rat(0), Rat(1, 2), {16, 32, 64}),
      std::invalid_argument);
}

TEST_CASE("predicted exponents stay exact rationals across the catalog") {
  const Rat s(-1, 3), b(2, 5);
  CHECK(predicted_exponent("div2-a", s, b) == Rat(Rat(3) * b - s - 2));
  CHECK(predicted_exponent("div2-a-swap", s, b) == Rat(Rat(1) - s - Rat(3) * b));
  CHECK(predicted_exponent("nondiv2-a", s, b) == Rat(Rat(3) * b - Rat(2) * s - 2));
  CHECK(predicted_exponent("nondiv2-b", s, b) == Rat(Rat(1) - Rat(2) * s));
  CHECK(predicted_exponent("div2-d-rational", s, b) == Rat(Rat(1) - s));
  CHECK(predicted_exponent("div2-d-convergent", s, b) == Rat(b - s));
  CHECK(predicted_exponent("nondiv2-d-convergent-swap", s, b) == Rat(Rat(1) - s - b));
  CHECK(predicted_exponent("div2-d-bpin", s, b) == Rat(Rat(2) * b - 1));
  CHECK(predicted_exponent("nondiv2-d-bpin", s, b) == Rat(Rat(3) * b - 2));
  CHECK(predicted_exponent("div2-e", s, b) == Rat(1));
  CHECK(predicted_exponent("lin-fail-b-ge-half", s, Rat(2)) == Rat(1));
  CHECK(predicted_exponent("lin-fail-b-ge-half", s, b) == b);
  CHECK(predicted_exponent("lin-fail-b-lt-half", s, b) == Rat(Rat(1) - b));
}

TEST_CASE("ratio bracket endpoints order correctly and bound the midpoint") {
  BoxFamily fam = counterexample_family("div2-a", Rat(1), Rat(-1));
  WeightedFunctional f = make_functional(EstimateKind::Div2, Rat(1), Rat(-1),
                                         Rat(-1, 2), Rat(1, 2));
  for (long long n : default_n_grid()) {
    RatioInterval r = functional_ratio(f, fam, n);
    CHECK(r.lo > 0.0);
    CHECK(r.lo <= r.hi);
    double m = mid(r);
    CHECK(m >= r.lo);
    CHECK(m <= r.hi);
  }
}
