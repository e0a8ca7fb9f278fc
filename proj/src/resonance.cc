#include "ckdv/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

namespace ckdv {
namespace {

Rat abs_rat(Rat x) {
  if (x < 0) x = -x;
  return x;
}

long long to_ll(const Int& n) {
  if (n > Int(1) << 40 || n < -(Int(1) << 40))
    throw std::length_error("window too large to enumerate");
  return n.convert_to<long long>();
}

// Flattens {-N..-1, 1..N} onto [0, 2N).
long long nth_nonzero(long long i, long long N) { return i < N ? i - N : i - N + 1; }

}  // namespace

Rat phi(const Phase& p, const Rat& k) { return Rat(p.alpha * k * k * k - p.beta * k); }

Triple Triple::h1_form(const Phase& repeated, const Phase& odd) {
  return Triple(repeated, repeated, odd);
}

Triple Triple::h2_form(const Phase& repeated, const Phase& odd) {
  return Triple(repeated, odd, repeated);
}

Triple Triple::classical() {
  Phase p(Rat(1), Rat(0));
  return Triple(p, p, p);
}

std::optional<Rat> Triple::slope_ratio() const {
  if (p1.alpha == p3.alpha) return Rat(p2.alpha / p1.alpha);
  if (p1.alpha == p2.alpha) return Rat(p3.alpha / p1.alpha);
  if (p2.alpha == p3.alpha) return Rat(p1.alpha / p2.alpha);
  return std::nullopt;
}

Rat resonance_H(const Triple& t, const Rat& k1, const Rat& k2) {
  Rat k3 = Rat(-k1 - k2);
  return Rat(phi(t.p1, k1) + phi(t.p2, k2) + phi(t.p3, k3));
}

Rat h_val(const Rat& r, const Rat& x) { return Rat(x * x + x + (Rat(1) - r) / 3); }

RootsReport h_roots(const Rat& r) {
  RootsReport rep;
  rep.r = r;
  Rat d = Rat(12 * r - 3);  // discriminant of h_r, scaled by 36
  if (d < 0) {
    rep.kind = RootCase::NoRealRoots;
    return rep;
  }
  if (d == 0) {
    rep.kind = RootCase::DoubleRoot;
    rep.roots.emplace_back(Rat(-1, 2));
    return rep;
  }
  rep.kind = RootCase::TwoRoots;
  Quad s = Quad::sqrt_of(d);
  Quad x1 = Rat(-1, 2) - Rat(1, 6) * s;
  Quad x2 = Rat(-1, 2) + Rat(1, 6) * s;
  for (const Quad& x : {x1, x2}) {
    if (x.is_rational())
      rep.roots.emplace_back(x.rational_value());
    else
      rep.roots.emplace_back(x);
  }
  return rep;
}

H2Pair h2_compact_check(const Rat& r, const Rat& alpha1, const Rat& beta1,
                        const Rat& beta2, const Rat& k1, const Rat& k2) {
  if (k2 == 0) throw ZeroK2();
  Triple t = Triple::h2_form(Phase(alpha1, beta1), Phase(Rat(r * alpha1), beta2));
  H2Pair out;
  out.direct = resonance_H(t, k1, k2);
  Rat x = Rat(k1 / k2);
  out.compact = Rat(Rat(-3) * alpha1 * k2 * k2 * k2 * h_val(r, x) + (beta1 - beta2) * k2);
  return out;
}

LatticeWindow::LatticeWindow(Rat lam, Rat cutoff)
    : lambda(std::move(lam)), K(std::move(cutoff)) {
  if (lambda < 1) throw std::invalid_argument("lattice spacing parameter must be >= 1");
  if (K * lambda < 1) throw std::invalid_argument("cutoff admits no nonzero frequency");
}

long long LatticeWindow::max_index() const { return to_ll(floor_rat(Rat(K * lambda))); }

std::vector<Rat> LatticeWindow::frequencies() const {
  long long N = max_index();
  std::vector<Rat> out;
  out.reserve(2 * N);
  for (long long n = -N; n <= N; ++n)
    if (n != 0) out.push_back(freq(n));
  return out;
}

namespace {

struct ScanBest {
  bool has = false;
  Rat ratio, H;
  long long n1 = 0, n3 = 0;
  long long pairs = 0;
};

// Deterministic preference: smaller ratio, then lexicographic (n1, n3).
bool beats(const ScanBest& a, const ScanBest& b) {
  if (!a.has) return false;
  if (!b.has) return true;
  if (a.ratio != b.ratio) return a.ratio < b.ratio;
  if (a.n1 != b.n1) return a.n1 < b.n1;
  return a.n3 < b.n3;
}

}  // namespace

SignificanceReport significance_scan(const Triple& t, const LatticeWindow& w,
                                     std::optional<Rat> requested_delta) {
  const long long N = w.max_index();
  const Rat lam3 = pow_rat(w.lambda, 3);
  const Rat a1 = t.p1.alpha, a2 = t.p2.alpha, a3 = t.p3.alpha;
  const Rat b1 = t.p1.beta, b2 = t.p2.beta, b3 = t.p3.beta;

  auto scan_slice = [&](long long start, long long stride) {
    ScanBest best;
    for (long long i = start; i < 2 * N; i += stride) {
      const long long n1 = nth_nonzero(i, N);
      const Int c1 = pow_int(Int(n1), 3);
      for (long long n3 = -N; n3 <= N; ++n3) {
        if (n3 == 0) continue;
        const long long n2 = -n1 - n3;
        if (n2 == 0 || n2 < -N || n2 > N) continue;
        ++best.pairs;
        Rat H = Rat((a1 * c1 + a2 * pow_int(Int(n2), 3) + a3 * pow_int(Int(n3), 3)) / lam3 -
                    (b1 * n1 + b2 * n2 + b3 * n3) / w.lambda);
        Int prod = Int(n1) * Int(n2) * Int(n3);
        if (prod < 0) prod = -prod;
        Rat ratio = Rat((Rat(1) + abs_rat(H)) * lam3 / Rat(prod));
        ScanBest cand{true, ratio, H, n1, n3, 0};
        if (beats(cand, best)) {
          cand.pairs = best.pairs;
          best = cand;
        }
      }
    }
    return best;
  };

  unsigned threads = std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;
  if (2 * N < 256) threads = 1;
  threads = static_cast<unsigned>(std::min<long long>(threads, std::max<long long>(2 * N, 1)));

  std::vector<ScanBest> partial(threads);
  if (threads == 1) {
    partial[0] = scan_slice(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned tid = 0; tid < threads; ++tid)
      pool.emplace_back([&, tid] { partial[tid] = scan_slice(tid, threads); });
    for (auto& th : pool) th.join();
  }

  ScanBest best;
  long long pairs = 0;
  for (const ScanBest& p : partial) {
    pairs += p.pairs;
    if (beats(p, best)) {
      long long keep = best.pairs;
      best = p;
      best.pairs = keep;  // pairs are aggregated separately
    }
  }
  if (!best.has)
    throw std::invalid_argument("window admits no zero-sum triple of nonzero frequencies");

  SignificanceReport rep;
  rep.delta_min = best.ratio;
  rep.argmin = {w.freq(best.n1), w.freq(-best.n1 - best.n3), w.freq(best.n3)};
  rep.h_at_argmin = best.H;
  rep.requested = std::move(requested_delta);
  rep.pass = !rep.requested || rep.delta_min >= *rep.requested;
  rep.pairs_scanned = pairs;
  return rep;
}

std::string SignificanceReport::csv_row() const {
  std::ostringstream os;
  os << rat_str(argmin.k1) << ',' << rat_str(argmin.k2) << ',' << rat_str(argmin.k3)
     << ',' << rat_str(h_at_argmin) << ',' << rat_str(delta_min);
  return os.str();
}

std::vector<NearResonance> near_resonances(const Rat& r, const LatticeWindow& w,
                                           const Rat& tol) {
  std::vector<NearResonance> out;
  if (tol < 0) throw std::invalid_argument("tolerance must be nonnegative");
  Rat d = Rat(12 * r - 3);
  if (d < 0) return out;  // no real roots, nothing to approach
  Quad s = Quad::sqrt_of(d);
  std::vector<Quad> roots;
  if (d == 0)
    roots.emplace_back(Rat(-1, 2));
  else {
    roots.push_back(Rat(-1, 2) - Rat(1, 6) * s);
    roots.push_back(Rat(-1, 2) + Rat(1, 6) * s);
  }

  const long long N = w.max_index();
  // Keyed by (n1, n2); keeps the closer root when both are within tol.
  std::map<std::pair<long long, long long>, std::pair<int, Quad>> hits;
  for (long long n2 = -N; n2 <= N; ++n2) {
    if (n2 == 0) continue;
    for (size_t ri = 0; ri < roots.size(); ++ri) {
      const Quad& x = roots[ri];
      Quad lo_v = Rat(n2) * (n2 > 0 ? x - Quad(tol) : x + Quad(tol));
      Quad hi_v = Rat(n2) * (n2 > 0 ? x + Quad(tol) : x - Quad(tol));
      Int lo = -((-lo_v).floor());  // ceil
      Int hi = hi_v.floor();
      for (Int n1i = lo; n1i <= hi; ++n1i) {
        long long n1 = to_ll(n1i);
        if (n1 == 0 || n1 < -N || n1 > N) continue;
        Quad dist = (Quad(Rat(Rat(n1) / Rat(n2))) - x).abs();
        auto key = std::make_pair(n1, n2);
        auto it = hits.find(key);
        if (it == hits.end() || dist.cmp(it->second.second) < 0)
          hits[key] = {static_cast<int>(ri) + 1, dist};
      }
    }
  }

  out.reserve(hits.size());
  for (const auto& [key, val] : hits)
    out.push_back({w.freq(key.first), w.freq(key.second), val.first, val.second});
  std::sort(out.begin(), out.end(), [](const NearResonance& a, const NearResonance& b) {
    int c = a.dist.cmp(b.dist);
    if (c != 0) return c < 0;
    if (a.k2 != b.k2) return a.k2 < b.k2;
    return a.k1 < b.k1;
  });
  return out;
}

OmegaReport omega_count(const Triple& t, const Rat& delta, double M, const Rat& k3,
                        const LatticeWindow& w, double C, const Rat& eps) {
  if (M < 1) throw std::invalid_argument("dyadic level must be >= 1");
  if (delta <= 0) throw std::invalid_argument("delta must be positive");
  if (eps <= 0) throw std::invalid_argument("exponent must be positive");
  Rat n3r = Rat(k3 * w.lambda);
  if (k3 == 0 || den(n3r) != 1)
    throw std::invalid_argument("k3 must be a nonzero lattice frequency");

  const long long N = w.max_index();
  const double dd = rat_d(delta), ed = rat_d(eps);
  OmegaReport rep;
  rep.bound = C * std::pow(rat_d(w.lambda), 1.5) * std::pow(M, 2.0 / 3.0);

  std::vector<std::pair<double, double>> segs;
  for (long long n1 = -N; n1 <= N; ++n1) {  // zero legs are admissible here
    Rat k1 = w.freq(n1);
    Rat k2 = Rat(-k1 - k3);
    Rat n2r = Rat(k2 * w.lambda);
    if (num(n2r) < -N || num(n2r) > N) continue;
    ++rep.pairs;
    double Hd = rat_d(resonance_H(t, k1, k2));
    double width = dd * std::pow(1.0 + std::abs(Hd), ed) - 1.0;
    if (width <= 0) continue;
    double lo = -Hd - width, hi = -Hd + width;
    const std::pair<double, double> annulus[2] = {{M / 2, 2 * M}, {-2 * M, -M / 2}};
    for (const auto& [alo, ahi] : annulus) {
      double l = std::max(lo, alo), h = std::min(hi, ahi);
      if (l <= h) segs.emplace_back(l, h);
    }
  }

  rep.intervals = static_cast<long long>(segs.size());
  std::sort(segs.begin(), segs.end());
  double cur_lo = 0, cur_hi = 0;
  bool open = false;
  for (const auto& [l, h] : segs) {
    if (!open) {
      cur_lo = l, cur_hi = h, open = true;
    } else if (l <= cur_hi) {
      cur_hi = std::max(cur_hi, h);
    } else {
      rep.measure += cur_hi - cur_lo;
      cur_lo = l, cur_hi = h;
    }
  }
  if (open) rep.measure += cur_hi - cur_lo;
  rep.within_bound = rep.measure <= rep.bound;
  return rep;
}

void write_scan_csv(const Triple& t, const LatticeWindow& w, std::ostream& os) {
  const long long N = w.max_index();
  os << "k1,k2,k3,H,ratio\n";
  for (long long n1 = -N; n1 <= N; ++n1) {
    if (n1 == 0) continue;
    for (long long n3 = -N; n3 <= N; ++n3) {
      if (n3 == 0) continue;
      long long n2 = -n1 - n3;
      if (n2 == 0 || n2 < -N || n2 > N) continue;
      Rat k1 = w.freq(n1), k2 = w.freq(n2), k3 = w.freq(n3);
      Rat H = resonance_H(t, k1, k2);
      Rat ratio = Rat((Rat(1) + abs_rat(H)) / abs_rat(Rat(k1 * k2 * k3)));
      os << rat_str(k1) << ',' << rat_str(k2) << ',' << rat_str(k3) << ','
         << rat_str(H) << ',' << rat_str(ratio) << '\n';
    }
  }
}

}  // namespace ckdv
