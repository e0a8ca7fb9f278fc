#include "ckdv/bilinear.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <utility>

#include "ckdv/diophantine.hpp"
#include "ckdv/realspec.hpp"

namespace ckdv {

namespace {

using Boxes = std::array<Box, 3>;

Rat cube(const Rat& x) { return Rat(x * x * x); }
Rat rabs(const Rat& x) { return x < 0 ? Rat(-x) : x; }
Rat rmax1(const Rat& x) { return x > 1 ? x : Rat(1); }

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// First root of h_r in exact form. Rational and surd cases drive different
// counterexample families, so both representations are kept exact.
struct ResonanceRoot {
  bool rational = false;
  Rat x;
  Quad surd;
};

ResonanceRoot first_root(const Rat& r) {
  RootsReport rep = h_roots(r);
  require(rep.kind != RootCase::NoRealRoots,
          "h_r has no real roots: needs a2/a1 >= 1/4");
  ResonanceRoot out;
  const RealSpec& x = rep.roots.front();
  if (const Rat* p = std::get_if<Rat>(&x)) {
    out.rational = true;
    out.x = *p;
  } else if (const Quad* q = std::get_if<Quad>(&x)) {
    if (q->is_rational()) {
      out.rational = true;
      out.x = q->rational_value();
    } else {
      out.surd = *q;
    }
  } else {
    throw std::logic_error("resonance root came back as a CF stream");
  }
  return out;
}

// Convergents m/n of the surd root with the degenerate ones dropped: both
// frequencies and their sum must be nonzero lattice points. Denominators
// are capped so box data stays within the exact-arithmetic comfort zone.
struct ConvTable {
  std::vector<std::pair<Int, Int>> mn;
};

std::shared_ptr<ConvTable> convergent_table(const Quad& root) {
  auto tbl = std::make_shared<ConvTable>();
  const Int cap = Int(1) << 30;
  for (const Convergent& c : convergents(RealSpec(root), 64)) {
    if (c.q > cap) break;
    if (c.q < 2 || c.p == 0 || c.p + c.q == 0) continue;
    tbl->mn.emplace_back(c.p, c.q);
  }
  return tbl;
}

ExponentFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  ExponentFit fit;
  const size_t n = xs.size();
  if (n < 2) return fit;
  double sx = 0, sy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (size_t i = 0; i < n; ++i)
    fit.max_residual =
        std::max(fit.max_residual, std::fabs(ys[i] - (fit.intercept + fit.slope * xs[i])));
  return fit;
}

}  // namespace

Box::Box(Rat freq, Rat center, Rat halfwidth)
    : k(std::move(freq)), tau_center(std::move(center)), tau_halfwidth(std::move(halfwidth)) {
  if (tau_halfwidth < 0) throw std::invalid_argument("box halfwidth must be >= 0");
}

bool operator==(const Box& a, const Box& b) {
  return a.k == b.k && a.tau_center == b.tau_center && a.tau_halfwidth == b.tau_halfwidth;
}

WeightPosition canonical_weight(EstimateKind kind) {
  switch (kind) {
    case EstimateKind::Div1:
    case EstimateKind::Div2:
      return WeightPosition::K3;
    case EstimateKind::Nondiv1:
      return WeightPosition::K1;
    case EstimateKind::Nondiv2:
      return WeightPosition::K2;
    case EstimateKind::LinearTerm:
      return WeightPosition::K1;
  }
  throw std::logic_error("unreachable");
}

Triple estimate_triple(EstimateKind kind, const Rat& alpha1, const Rat& alpha2) {
  Phase rep(alpha1, Rat(0)), odd(alpha2, Rat(0));
  switch (kind) {
    case EstimateKind::Div1:
      return Triple::h1_form(rep, odd);
    case EstimateKind::Div2:
    case EstimateKind::Nondiv1:
    case EstimateKind::Nondiv2:
      return Triple::h2_form(rep, odd);
    case EstimateKind::LinearTerm:
      break;
  }
  throw std::invalid_argument(
      "the first-order term pairs two phases on one slab; use "
      "make_linear_term_functional");
}

WeightedFunctional make_functional(EstimateKind kind, const Rat& alpha1,
                                   const Rat& alpha2, const Rat& s, const Rat& b) {
  return WeightedFunctional{s, b, estimate_triple(kind, alpha1, alpha2),
                            canonical_weight(kind)};
}

WeightedFunctional make_linear_term_functional(const Rat& alpha, const Rat& beta1,
                                               const Rat& beta2, const Rat& b) {
  return WeightedFunctional{Rat(0), b,
                            Triple::h2_form(Phase(alpha, beta1), Phase(alpha, beta2)),
                            WeightPosition::K1};
}

bool inclusion_holds(const std::array<Box, 3>& boxes, const std::array<int, 3>& roles) {
  const Box& x = boxes[roles[0]];
  const Box& y = boxes[roles[1]];
  const Box& z = boxes[roles[2]];
  if (Rat(x.k + y.k + z.k) != 0) return false;
  Rat off = rabs(Rat(x.tau_center + y.tau_center + z.tau_center));
  Rat slack = Rat(z.tau_halfwidth - x.tau_halfwidth - y.tau_halfwidth);
  return slack >= 0 && off <= slack;
}

ConvolutionResult box_convolution(const Box& b1, const Box& b2, const Box& b3) {
  if (!inclusion_holds({b1, b2, b3}, {0, 1, 2})) {
    std::ostringstream os;
    os << "B1 + B2 is not contained in -B3: k-sum " << rat_str(Rat(b1.k + b2.k + b3.k))
       << ", tau offset " << rat_str(Rat(b1.tau_center + b2.tau_center + b3.tau_center))
       << ", slack " << rat_str(Rat(b3.tau_halfwidth - b1.tau_halfwidth - b2.tau_halfwidth));
    throw IncompatibleBoxes(os.str());
  }
  ConvolutionResult out{Rat(b1.measure() * b2.measure()), 0.0};

  // Quadrature oracle: the tau1-section length of the overlap is piecewise
  // linear, so integrating trapezoids between the exact breakpoints
  // reproduces the product of measures up to double rounding.
  if (b1.tau_halfwidth == 0 || b2.tau_halfwidth == 0) return out;
  const Rat lo = Rat(b1.tau_center - b1.tau_halfwidth);
  const Rat hi = Rat(b1.tau_center + b1.tau_halfwidth);
  std::vector<Rat> cuts{lo, hi};
  // Section edges cross where -tau1 - c3 +- h3 meets c2 -+ h2.
  for (int e2 : {-1, 1})
    for (int e3 : {-1, 1}) {
      Rat t = Rat(-b3.tau_center + Rat(e3) * b3.tau_halfwidth - b2.tau_center -
                  Rat(e2) * b2.tau_halfwidth);
      if (t > lo && t < hi) cuts.push_back(t);
    }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto section = [&](const Rat& t1) {
    double a = std::max(rat_d(Rat(b2.tau_center - b2.tau_halfwidth)),
                        rat_d(Rat(-t1 - b3.tau_center - b3.tau_halfwidth)));
    double b = std::min(rat_d(Rat(b2.tau_center + b2.tau_halfwidth)),
                        rat_d(Rat(-t1 - b3.tau_center + b3.tau_halfwidth)));
    return std::max(0.0, b - a);
  };
  double acc = 0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    double w = rat_d(Rat(cuts[i + 1] - cuts[i]));
    acc += 0.5 * (section(cuts[i]) + section(cuts[i + 1])) * w;
  }
  out.oracle = acc;
  return out;
}

std::vector<std::string> family_catalog() {
  return {
      "div2-a",          "div2-a-swap",        "div2-b",
      "div2-b-swap",     "div2-c",             "div2-d-bpin",
      "div2-d-bpin-swap", "div2-d-rational",   "div2-d-convergent",
      "div2-e",          "nondiv2-a",          "nondiv2-a-swap",
      "nondiv2-b",       "nondiv2-c",          "nondiv2-d-bpin",
      "nondiv2-d-bpin-swap", "nondiv2-d-rational", "nondiv2-d-convergent",
      "nondiv2-d-convergent-swap", "div1-a",   "div1-a-swap",
      "div1-b",          "div1-b-swap",        "div1-c",
      "div1-d-rational", "div1-d-convergent",  "div1-d-convergent-swap",
      "nondiv1-a",       "nondiv1-a-swap",     "nondiv1-b",
      "nondiv1-c-rational", "nondiv1-c-convergent", "nondiv1-c-convergent-swap",
      "nondiv1-d",       "lin-fail-b-ge-half", "lin-fail-b-lt-half",
  };
}

BoxFamily counterexample_family(const std::string& case_id, const Rat& alpha1,
                                const Rat& alpha2, const Rat& beta1, const Rat& beta2) {
  require(alpha1 != 0 && alpha2 != 0, "dispersion coefficients must be nonzero");
  const Rat a1 = alpha1, a2 = alpha2;
  const Rat r = Rat(a2 / a1);
  const Rat one(1), two(2);

  BoxFamily fam;
  fam.case_id = case_id;
  fam.scale_at = [](long long n) { return n; };

  auto need_r_below_quarter = [&] {
    require(r < Rat(1, 4), case_id + " needs a2/a1 < 1/4");
  };
  auto need_r_one = [&] { require(r == 1, case_id + " needs a2 = a1"); };
  auto need_r_upper = [&] {
    require(r >= Rat(1, 4) && r != 1, case_id + " needs a2/a1 in [1/4,oo) away from 1");
  };
  auto rational_root = [&]() {
    need_r_upper();
    ResonanceRoot root = first_root(r);
    require(root.rational, case_id + " needs 12r-3 to be a rational square");
    return root.x;
  };
  auto surd_root = [&]() {
    need_r_upper();
    ResonanceRoot root = first_root(r);
    require(!root.rational, case_id + " needs an irrational resonance root");
    return root.surd;
  };
  auto attach_convergents = [&](const Quad& root) {
    auto tbl = convergent_table(root);
    fam.convergent_indexed = true;
    fam.min_index = 1;
    fam.max_index = static_cast<long long>(tbl->mn.size());
    fam.scale_at = [tbl](long long j) {
      return static_cast<long long>(tbl->mn[static_cast<size_t>(j - 1)].second);
    };
    return tbl;
  };

  // --- families for the divergence-form estimate with the output weight on
  // the opposite dispersion (D-2) ---
  if (case_id == "div2-a" || case_id == "div2-b") {
    if (case_id == "div2-a")
      need_r_below_quarter();
    else
      need_r_one();
    fam.kind = EstimateKind::Div2;
    fam.zero_mean = case_id == "div2-b" ? std::array<bool, 3>{true, true, false}
                                        : std::array<bool, 3>{false, true, false};
    fam.boxes_at = [a1, a2, one, two](long long n) {
      Rat N{Int(n)};
      return Boxes{Box(N, Rat(a1 * cube(N)), one), Box(N, Rat(a2 * cube(N)), one),
                   Box(Rat(-2 * N), Rat(-(a1 + a2) * cube(N)), two)};
    };
    return fam;
  }
  if (case_id == "div2-a-swap" || case_id == "div2-b-swap") {
    if (case_id == "div2-a-swap")
      need_r_below_quarter();
    else
      need_r_one();
    fam.kind = EstimateKind::Div2;
    fam.signs = {1, 1, 1};
    fam.zero_mean = case_id == "div2-b-swap" ? std::array<bool, 3>{true, true, false}
                                             : std::array<bool, 3>{false, true, false};
    fam.roles = {0, 2, 1};
    fam.boxes_at = [a1, one, two](long long n) {
      Rat N{Int(n)};
      return Boxes{Box(N, Rat(a1 * cube(N)), one),
                   Box(Rat(-2 * N), Rat(-2 * a1 * cube(N)), two),
                   Box(N, Rat(a1 * cube(N)), one)};
    };
    return fam;
  }
  if (case_id == "div2-c") {
    need_r_one();
    fam.kind = EstimateKind::Div2;
    fam.zero_mean = {false, true, false};
    fam.boxes_at = [a1, a2, one, two](long long n) {
      Rat N{Int(n)};
      return Boxes{Box(Rat(0), Rat(0), one), Box(N, Rat(a2 * cube(N)), one),
                   Box(Rat(-N), Rat(-a1 * cube(N)), two)};
    };
    return fam;
  }
  if (case_id == "div2-d-bpin") {
    need_r_upper();
    fam.kind = EstimateKind::Div2;
    fam.zero_mean = {false, true, false};
    fam.boxes_at = [a1, a2, one, two](long long n) {
      Rat N{Int(n)};
      return Boxes{Box(N, Rat(a1 * cube(N)), one), Box(one, a2, one),
                   Box(Rat(-N - 1), Rat(-a1 * cube(N) - a2), two)};
    };
    return fam;
  }
  if (case_id == "div2-d-bpin-swap") {
    need_r_upper();
    fam.kind = EstimateKind::Div2;
    fam.zero_mean = {false, true, false};
    fam.roles = {0, 2, 1};
    fam.boxes_at = [a1, one, two](long long n) {
      Rat N{Int(n)};
      Rat N1 = Rat(N + 1);
      return Boxes{Box(N, Rat(a1 * cube(N)), one),
                   Box(one, Rat(a1 * (cube(N1) - cube(N))), two),
                   Box(Rat(-N1), Rat(-a1 * cube(N1)), one)};
    };
    return fam;
  }
  if (case_id == "div2-d-rational" || case_id == "nondiv2-d-rational" ||
      case_id == "nondiv1-c-rational") {
    Rat x = rational_root();
    Rat p{num(x)}, q{den(x)};
    fam.kind = case_id == "div2-d-rational"    ? EstimateKind::Div2
               : case_id == "nondiv2-d-rational" ? EstimateKind::Nondiv2
                                                 : EstimateKind::Nondiv1;
    if (fam.kind != EstimateKind::Nondiv2) fam.zero_mean = {false, true, false};
    fam.boxes_at = [a1, a2, p, q, one, two](long long n) {
      Rat N{Int(n)};
      Rat k1 = Rat(p * N), k2 = Rat(q * N);
      return Boxes{Box(k1, Rat(a1 * cube(k1)), one), Box(k2, Rat(a2 * cube(k2)), one),
                   Box(Rat(-(k1 + k2)), Rat(-(a1 * cube(k1) + a2 * cube(k2))), two)};
    };
    return fam;
  }
  if (case_id == "div2-d-convergent" || case_id == "nondiv2-d-convergent" ||
      case_id == "nondiv1-c-convergent") {
    Quad root = surd_root();
    auto tbl = attach_convergents(root);
    fam.kind = case_id == "div2-d-convergent"    ? EstimateKind::Div2
               : case_id == "nondiv2-d-convergent" ? EstimateKind::Nondiv2
                                                   : EstimateKind::Nondiv1;
    if (fam.kind == EstimateKind::Div2 || fam.kind == EstimateKind::Nondiv1)
      fam.zero_mean = {false, true, false};
    if (fam.kind != EstimateKind::Div2) fam.signs = {1, 1, 1};
    fam.boxes_at = [tbl, a1, a2, one, two](long long j) {
      const auto& mn = tbl->mn[static_cast<size_t>(j - 1)];
      Rat m{mn.first}, n{mn.second};
      return Boxes{Box(m, Rat(a1 * cube(m)), one), Box(n, Rat(a2 * cube(n)), one),
                   Box(Rat(-(m + n)), Rat(-(a1 * cube(m) + a2 * cube(n))), two)};
    };
    return fam;
  }
  if (case_id == "div2-e") {
    fam.kind = EstimateKind::Div2;
    fam.boxes_at = [a1, one, two](long long n) {
      Rat N{Int(n)};
      return Boxes{Box(N, Rat(a1 * cube(N)), one), Box(Rat(0), Rat(0), one),
                   Box(Rat(-N), Rat(-a1 * cube(N)), two)};
    };
    return fam;
  }

  // --- families for the non-divergence estimate with the derivative on the
  // second factor (ND-2) ---
  if (case_id == "nondiv2-a") {
    need_r_below_quarter();
    fam.kind = EstimateKind::Nondiv2;
    fam.boxes_at = [a1, a2, one, two](long long n) {
      Rat N{Int(n)};
      return Boxes{Box(N, Rat(a1 * cube(N)), one), Box(Rat(-N), Rat(-a2 * cube(N)), one),
                   Box(Rat(0), Rat(-(a1 - a2) * cube(N)), two)};
    };
    return fam;
  }
  if (case_id == "nondiv2-a-swap") {
    need_r_below_quarter();
    fam.kind = EstimateKind::Nondiv2;
    fam.roles = {0, 2, 1};
    fam.boxes_at = [a1, one, two](long long n) {
      Rat N{Int(n)};
      return Boxes{Box(N, Rat(a1 * cube(N)), one), Box(Rat(-N), Rat(-a1 * cube(N)), two),
                   Box(Rat(0), Rat(0), one)};
    };
    return fam;
  }
  if (case_id == "nondiv2-b" || case_id == "nondiv1-b") {
    need_r_one();
    fam.kind = case_id == "nondiv2-b" ? EstimateKind::Nondiv2 : EstimateKind::Nondiv1;
    fam.zero_mean = case_id == "nondiv2-b" ? std::array<bool, 3>{true, false, false}
                                           : std::array<bool, 3>{false, true, false};
    fam.boxes_at = [a1, a2, one, two](long long n) {
      Rat N{Int(n)};
      return Boxes{Box(N, Rat(a1 * cube(N)), one), Box(Rat(-N), Rat(-a2 * cube(N)), one),
                   Box(Rat(0), Rat(0), two)};
    };
    return fam;
  }
  if (case_id == "nondiv2-c") {
    need_r_one();
    fam.kind = EstimateKind::Nondiv2;
    fam.boxes_at = [a1, a2, one, two](long long n) {
      Rat N{Int(n)};
      return Boxes{Box(Rat(0), Rat(0), one), Box(N, Rat(a2 * cube(N)), one),
                   Box(Rat(-N), Rat(-a1 * cube(N)), two)};
    };
    return fam;
  }
  if (case_id == "nondiv2-d-bpin") {
    need_r_upper();
    fam.kind = EstimateKind::Nondiv2;
    fam.signs = {1, 1, 1};
    fam.boxes_at = [a1, a2, one, two](long long n) {
      Rat N{Int(n)};
      return Boxes{Box(Rat(0), Rat(0), one), Box(N, Rat(a2 * cube(N)), one),
                   Box(Rat(-N), Rat(-a2 * cube(N)), two)};
    };
    return fam;
  }
  if (case_id == "nondiv2-d-bpin-swap") {
    need_r_upper();
    fam.kind = EstimateKind::Nondiv2;
    fam.signs = {1, 1, 1};
    fam.roles = {0, 2, 1};
    fam.boxes_at = [a1, one, two](long long n) {
      Rat N{Int(n)};
      return Boxes{Box(Rat(0), Rat(0), one), Box(N, Rat(a1 * cube(N)), two),
                   Box(Rat(-N), Rat(-a1 * cube(N)), one)};
    };
    return fam;
  }
  if (case_id == "nondiv2-d-convergent-swap" || case_id == "nondiv1-c-convergent-swap") {
    Quad root = surd_root();
    auto tbl = attach_convergents(root);
    fam.kind = case_id == "nondiv2-d-convergent-swap" ? EstimateKind::Nondiv2
                                                      : EstimateKind::Nondiv1;
    if (fam.kind == EstimateKind::Nondiv1) fam.zero_mean = {false, true, false};
    fam.signs = {1, 1, 1};
    fam.roles = {0, 2, 1};
    fam.boxes_at = [tbl, a1, one, two](long long j) {
      const auto& mn = tbl->mn[static_cast<size_t>(j - 1)];
      Rat m{mn.first}, n{mn.second};
      Rat sum = Rat(m + n);
      return Boxes{Box(m, Rat(a1 * cube(m)), one),
                   Box(n, Rat(a1 * (cube(sum) - cube(m))), two),
                   Box(Rat(-sum), Rat(-a1 * cube(sum)), one)};
    };
    return fam;
  }

  // --- families for the divergence-form estimate back onto the first
  // dispersion (D-1): inputs ride different phases, output rides the first ---
  if (case_id == "div1-a" || case_id == "div1-b") {
    if (case_id == "div1-a")
      need_r_below_quarter();
    else
      need_r_one();
    fam.kind = EstimateKind::Div1;
    if (case_id == "div1-b") fam.zero_mean = {true, true, false};
    fam.boxes_at = [a1, one, two](long long n) {
      Rat N{Int(n)};
      return Boxes{Box(N, Rat(a1 * cube(N)), one), Box(N, Rat(a1 * cube(N)), one),
                   Box(Rat(-2 * N), Rat(-2 * a1 * cube(N)), two)};
    };
    return fam;
  }
  if (case_id == "div1-a-swap" || case_id == "div1-b-swap") {
    if (case_id == "div1-a-swap")
      need_r_below_quarter();
    else
      need_r_one();
    fam.kind = EstimateKind::Div1;
    fam.signs = {1, 1, 1};
    if (case_id == "div1-b-swap") fam.zero_mean = {true, true, false};
    fam.roles = {0, 2, 1};
    fam.boxes_at = [a1, a2, one, two](long long n) {
      Rat N{Int(n)};
      return Boxes{Box(N, Rat(a1 * cube(N)), one),
                   Box(Rat(-2 * N), Rat(-(a1 + a2) * cube(N)), two),
                   Box(N, Rat(a2 * cube(N)), one)};
    };
    return fam;
  }
  if (case_id == "div1-c") {
    need_r_one();
    fam.kind = EstimateKind::Div1;
    fam.boxes_at = [a1, a2, one, two](long long n) {
      Rat N{Int(n)};
      return Boxes{Box(Rat(0), Rat(0), one), Box(N, Rat(a1 * cube(N)), one),
                   Box(Rat(-N), Rat(-a2 * cube(N)), two)};
    };
    return fam;
  }
  if (case_id == "div1-d-rational") {
    Rat x = rational_root();
    Rat p{num(x)}, q{den(x)};
    fam.kind = EstimateKind::Div1;
    fam.roles = {0, 2, 1};
    fam.boxes_at = [a1, a2, p, q, one, two](long long n) {
      Rat N{Int(n)};
      Rat k1 = Rat(p * N), k3 = Rat(q * N);
      return Boxes{Box(k1, Rat(a1 * cube(k1)), one),
                   Box(Rat(-(k1 + k3)), Rat(-(a1 * cube(k1) + a2 * cube(k3))), two),
                   Box(k3, Rat(a2 * cube(k3)), one)};
    };
    return fam;
  }
  if (case_id == "div1-d-convergent") {
    Quad root = surd_root();
    auto tbl = attach_convergents(root);
    fam.kind = EstimateKind::Div1;
    fam.boxes_at = [tbl, a1, one, two](long long j) {
      const auto& mn = tbl->mn[static_cast<size_t>(j - 1)];
      Rat m{mn.first}, n{mn.second};
      Rat sum = Rat(m + n);
      return Boxes{Box(m, Rat(a1 * cube(m)), one),
                   Box(Rat(-sum), Rat(-a1 * cube(sum)), one),
                   Box(n, Rat(a1 * (cube(sum) - cube(m))), two)};
    };
    return fam;
  }
  if (case_id == "div1-d-convergent-swap") {
    Quad root = surd_root();
    auto tbl = attach_convergents(root);
    fam.kind = EstimateKind::Div1;
    fam.roles = {0, 2, 1};
    fam.boxes_at = [tbl, a1, a2, one, two](long long j) {
      const auto& mn = tbl->mn[static_cast<size_t>(j - 1)];
      Rat m{mn.first}, n{mn.second};
      return Boxes{Box(m, Rat(a1 * cube(m)), one),
                   Box(Rat(-(m + n)), Rat(-(a1 * cube(m) + a2 * cube(n))), two),
                   Box(n, Rat(a2 * cube(n)), one)};
    };
    return fam;
  }

  // --- families for the non-divergence estimate with the derivative on the
  // first factor (ND-1); boxes match the ND-2 ones, the weight moves to k1 ---
  if (case_id == "nondiv1-a") {
    need_r_below_quarter();
    fam.kind = EstimateKind::Nondiv1;
    fam.zero_mean = {false, true, false};
    fam.boxes_at = [a1, a2, one, two](long long n) {
      Rat N{Int(n)};
      return Boxes{Box(N, Rat(a1 * cube(N)), one), Box(Rat(-N), Rat(-a2 * cube(N)), one),
                   Box(Rat(0), Rat(-(a1 - a2) * cube(N)), two)};
    };
    return fam;
  }
  if (case_id == "nondiv1-a-swap") {
    need_r_below_quarter();
    fam.kind = EstimateKind::Nondiv1;
    fam.zero_mean = {false, true, false};
    fam.roles = {0, 2, 1};
    fam.boxes_at = [a1, one, two](long long n) {
      Rat N{Int(n)};
      return Boxes{Box(N, Rat(a1 * cube(N)), one), Box(Rat(-N), Rat(-a1 * cube(N)), two),
                   Box(Rat(0), Rat(0), one)};
    };
    return fam;
  }
  if (case_id == "nondiv1-d") {
    fam.kind = EstimateKind::Nondiv1;
    fam.boxes_at = [a1, one, two](long long n) {
      Rat N{Int(n)};
      return Boxes{Box(N, Rat(a1 * cube(N)), one), Box(Rat(0), Rat(0), one),
                   Box(Rat(-N), Rat(-a1 * cube(N)), two)};
    };
    return fam;
  }

  // --- diagonal slab for the first-order term with matching dispersions ---
  if (case_id == "lin-fail-b-ge-half" || case_id == "lin-fail-b-lt-half") {
    require(a1 == a2, case_id + " needs a1 = a2");
    fam.kind = EstimateKind::LinearTerm;
    fam.signs = {1, 1, 1};
    fam.diagonal = true;
    const Rat bc = case_id == "lin-fail-b-ge-half" ? beta1 : beta2;
    fam.boxes_at = [a1, bc, one](long long n) {
      Rat N{Int(n)};
      Box e(N, Rat(a1 * cube(N) - bc * N), one);
      return Boxes{e, e, e};
    };
    return fam;
  }

  throw UnknownCase(case_id);
}

RatioInterval functional_ratio(const WeightedFunctional& f, const BoxFamily& fam,
                               long long n) {
  if (n < fam.min_index || n > fam.max_index)
    throw std::out_of_range(fam.case_id + ": index out of range");

  const double bd = rat_d(f.b);

  if (fam.diagonal) {
    if (f.triple.p1.alpha != f.triple.p2.alpha)
      throw std::invalid_argument("diagonal family needs equal dispersion legs");
    Boxes boxes = fam.boxes_at(n);
    if (!(boxes[0] == boxes[1]))
      throw IncompatibleBoxes(fam.case_id + ": diagonal slabs differ");
    const Box& e = boxes[0];
    const Rat kabs = rabs(e.k);
    // Certified minorant: the on-characteristic leg costs at most 2^max(exp,0)
    // over a width-1 slab, the other leg at most ((2+|db|)|k|)^exp once
    // |k| >= 1; both caps keep the bound an exact monomial in |k|.
    double denom = 1.0;
    const Phase* legs[2] = {&f.triple.p1, &f.triple.p2};
    for (int i = 0; i < 2; ++i) {
      double expo = i == 0 ? bd : 1.0 - bd;
      Rat center = Rat(e.tau_center - phi(*legs[i], e.k));
      if (center == 0)
        denom *= std::pow(2.0, std::max(expo, 0.0));
      else
        denom *= std::max(1.0, std::pow(rat_d(Rat(2 * kabs + rabs(center))), expo));
    }
    double v = rat_d(kabs) / denom;
    return {v, v};
  }

  if (f.weight != canonical_weight(fam.kind))
    throw std::invalid_argument("functional weight position does not match the family");
  const bool legs12_equal =
      f.triple.p1.alpha == f.triple.p2.alpha && f.triple.p1.beta == f.triple.p2.beta;
  const bool legs13_equal =
      f.triple.p1.alpha == f.triple.p3.alpha && f.triple.p1.beta == f.triple.p3.beta;
  if (fam.kind == EstimateKind::Div1 ? !legs12_equal : !legs13_equal)
    throw std::invalid_argument("functional phase layout does not match the family");

  Boxes boxes = fam.boxes_at(n);
  if (!inclusion_holds(boxes, fam.roles)) {
    std::ostringstream os;
    os << fam.case_id << ": box inclusion fails at index " << n;
    throw IncompatibleBoxes(os.str());
  }

  // Normalized mass: |B_{r0}||B_{r1}| over the product of the three L2 norms.
  Rat conv = Rat(boxes[fam.roles[0]].measure() * boxes[fam.roles[1]].measure());
  Rat prod = Rat(boxes[0].measure() * boxes[1].measure() * boxes[2].measure());
  double mass = rat_d(conv) / std::sqrt(rat_d(prod));

  const double sd = rat_d(f.s);
  const Rat* kw = &boxes[0].k;
  if (f.weight == WeightPosition::K2) kw = &boxes[1].k;
  if (f.weight == WeightPosition::K3) kw = &boxes[2].k;
  double freq = rat_d(rabs(*kw)) * std::pow(rat_d(rmax1(rabs(boxes[2].k))), sd) /
                (std::pow(rat_d(rmax1(rabs(boxes[0].k))), sd) *
                 std::pow(rat_d(rmax1(rabs(boxes[1].k))), sd));

  // Modulation weights: a centered slab spans [1, max(1,h)] in max(1,|L|); an
  // off-center slab is taken at its center, the exact resonance offset.
  const Phase* legs[3] = {&f.triple.p1, &f.triple.p2, &f.triple.p3};
  double dmin = 1.0, dmax = 1.0;
  for (int i = 0; i < 3; ++i) {
    double expo = i == 2 ? 1.0 - bd : bd;
    Rat center = Rat(boxes[i].tau_center - phi(*legs[i], boxes[i].k));
    Rat wlo(1), whi(1);
    if (center == 0)
      whi = rmax1(boxes[i].tau_halfwidth);
    else
      wlo = whi = rmax1(rabs(center));
    double lo = std::pow(rat_d(wlo), expo), hi = std::pow(rat_d(whi), expo);
    if (lo > hi) std::swap(lo, hi);
    dmin *= lo;
    dmax *= hi;
  }
  return {freq * mass / dmax, freq * mass / dmin};
}

std::vector<long long> default_n_grid() {
  std::vector<long long> grid;
  for (int e = 4; e <= 20; ++e) grid.push_back(1LL << e);
  return grid;
}

Rat predicted_exponent(const std::string& id, const Rat& s, const Rat& b) {
  const Rat one(1), two(2), three(3);
  if (id == "div2-a" || id == "div2-b" || id == "div1-a" || id == "div1-b")
    return Rat(three * b - s - two);
  if (id == "div2-a-swap" || id == "div2-b-swap" || id == "div1-a-swap" ||
      id == "div1-b-swap")
    return Rat(one - s - three * b);
  if (id == "div2-c" || id == "div1-c" || id == "div2-e" || id == "nondiv2-c" ||
      id == "nondiv1-d")
    return one;
  if (id == "div2-d-bpin") return Rat(two * b - one);
  if (id == "div2-d-bpin-swap") return Rat(one - two * b);
  if (id == "div2-d-rational" || id == "nondiv2-d-rational" || id == "div1-d-rational" ||
      id == "nondiv1-c-rational")
    return Rat(one - s);
  if (id == "div2-d-convergent" || id == "nondiv2-d-convergent" ||
      id == "div1-d-convergent" || id == "nondiv1-c-convergent")
    return Rat(b - s);  // 1 - s - zeta*(1-b) at zeta = 1
  if (id == "nondiv2-d-convergent-swap" || id == "div1-d-convergent-swap" ||
      id == "nondiv1-c-convergent-swap")
    return Rat(one - s - b);
  if (id == "nondiv2-a" || id == "nondiv1-a") return Rat(three * b - two * s - two);
  if (id == "nondiv2-a-swap" || id == "nondiv1-a-swap")
    return Rat(one - two * s - three * b);
  if (id == "nondiv2-b" || id == "nondiv1-b") return Rat(one - two * s);
  if (id == "nondiv2-d-bpin") return Rat(three * b - two);
  if (id == "nondiv2-d-bpin-swap") return Rat(one - three * b);
  if (id == "lin-fail-b-ge-half") return b < one ? b : one;
  if (id == "lin-fail-b-lt-half") return b > 0 ? Rat(one - b) : one;
  throw UnknownCase(id);
}

SharpnessReport fit_exponent(const std::string& case_id, const Rat& alpha1,
                             const Rat& alpha2, const Rat& s, const Rat& b,
                             std::vector<long long> grid, const Rat& beta1,
                             const Rat& beta2) {
  BoxFamily fam = counterexample_family(case_id, alpha1, alpha2, beta1, beta2);
  WeightedFunctional f = fam.diagonal
                             ? make_linear_term_functional(alpha1, beta1, beta2, b)
                             : make_functional(fam.kind, alpha1, alpha2, s, b);
  if (grid.empty()) {
    if (fam.convergent_indexed)
      for (long long j = fam.min_index; j <= fam.max_index; ++j) grid.push_back(j);
    else
      grid = default_n_grid();
  }
  if (grid.size() < 5)
    throw std::invalid_argument("exponent fit needs at least 5 grid points");

  SharpnessReport rep;
  rep.case_id = case_id;
  rep.s = s;
  rep.b = b;
  rep.predicted = predicted_exponent(case_id, s, b);
  std::vector<double> xs, ys;
  for (long long idx : grid) {
    SharpnessSample smp;
    smp.index = idx;
    smp.scale = fam.scale_at(idx);
    smp.ratio = functional_ratio(f, fam, idx);
    rep.samples.push_back(smp);
    xs.push_back(std::log(static_cast<double>(smp.scale)));
    ys.push_back(0.5 * (std::log(smp.ratio.lo) + std::log(smp.ratio.hi)));
  }
  rep.fit = least_squares(xs, ys);
  rep.fails = rep.fit.slope > std::max(1e-7, 3 * rep.fit.max_residual);
  return rep;
}

HDecayReport resonant_H_decay(const Rat& r, int depth) {
  if (depth < 1) throw std::invalid_argument("depth must be positive");
  if (Rat(12 * r - 3) < 0)
    throw ROutOfRange("no real resonance roots for a2/a1 < 1/4");
  if (r == 1) throw ROutOfRange("a2 = a1 resonates on rational lines; no decay scale");

  HDecayReport rep;
  rep.r = r;
  ResonanceRoot root = first_root(r);
  std::vector<double> xs, ys;

  if (root.rational) {
    rep.rational_root = true;
    rep.zeta = 0.0;
    Int p = num(root.x), q = den(root.x);
    for (int j = 1; j <= depth; ++j) {
      HDecayEntry e;
      e.j = j;
      e.m = p * j;
      e.n = q * j;
      Rat h = h_val(r, Rat(Rat(e.m) / Rat(e.n)));
      e.gauge = Rat(1 + rabs(Rat(-3 * cube(Rat(e.n)) * h)));
      e.exponent = e.n > 1 ? std::log(rat_d(e.gauge)) / std::log(rat_d(Rat(e.n))) : 0.0;
      rep.entries.push_back(e);
      if (e.n > 1) {
        xs.push_back(std::log(rat_d(Rat(e.n))));
        ys.push_back(std::log(rat_d(e.gauge)));
      }
    }
  } else {
    rep.zeta = 1.0;  // quadratic surds have approximation exponent 2
    auto tbl = convergent_table(root.surd);
    long long count = std::min<long long>(depth, static_cast<long long>(tbl->mn.size()));
    for (long long j = 1; j <= count; ++j) {
      const auto& mn = tbl->mn[static_cast<size_t>(j - 1)];
      HDecayEntry e;
      e.j = j;
      e.m = mn.first;
      e.n = mn.second;
      Rat h = h_val(r, Rat(Rat(e.m) / Rat(e.n)));
      e.gauge = Rat(1 + rabs(Rat(-3 * cube(Rat(e.n)) * h)));
      e.exponent = std::log(rat_d(e.gauge)) / std::log(rat_d(Rat(e.n)));
      rep.entries.push_back(e);
      xs.push_back(std::log(rat_d(Rat(e.n))));
      ys.push_back(std::log(rat_d(e.gauge)));
    }
  }
  rep.fit = least_squares(xs, ys);
  return rep;
}

LinearMultiplierReport linear_multiplier_scan(const Rat& alpha1, const Rat& alpha2,
                                              const Rat& beta1, const Rat& beta2,
                                              long long K, const Rat& b) {
  require(alpha1 != 0 && alpha2 != 0, "dispersion coefficients must be nonzero");
  require(K >= 1, "scan window must contain k = 1");

  LinearMultiplierReport rep;
  rep.alphas_equal = alpha1 == alpha2;
  const Rat da = Rat(alpha2 - alpha1), db = Rat(beta2 - beta1);

  // min over tau of <L1><L2> equals <phase gap> exactly, so the sup of the
  // multiplier over each k-column is |k| / sqrt(1 + |gap(k)|).
  for (long long k = 1; k <= K; ++k) {
    Rat kk{Int(k)};
    Rat gap = Rat(1 + rabs(Rat(da * cube(kk) - db * kk)));
    double m = static_cast<double>(k) / std::sqrt(rat_d(gap));
    if (m > rep.sup_multiplier) {
      rep.sup_multiplier = m;
      rep.argmax = k;
    }
    if (!rep.alphas_equal && k > 1) {
      Rat rhs = Rat(rabs(da) * cube(kk) / 2);
      if (gap < rhs) {
        rep.per_k_bound_holds = false;
        if (rep.first_violation == 0) rep.first_violation = k;
      }
    }
  }

  if (rep.alphas_equal) {
    const std::string id = b >= Rat(1, 2) ? "lin-fail-b-ge-half" : "lin-fail-b-lt-half";
    SharpnessReport sharp =
        fit_exponent(id, alpha1, alpha2, Rat(0), b, {}, beta1, beta2);
    rep.failure_slope = sharp.fit.slope;
    for (const SharpnessSample& smp : sharp.samples)
      rep.failure_values.emplace_back(smp.scale, smp.ratio.lo);
  }
  return rep;
}

}  // namespace ckdv
