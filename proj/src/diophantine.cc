#include "ckdv/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace ckdv {

// ---------------------------------------------------------------- CFStream

struct CFStream::Impl {
  std::string name;
  Rule rule;
  mutable std::vector<Int> a, p, q;
  std::optional<size_t> preperiod, period;

  void extend_to(size_t n) const {
    while (a.size() <= n) {
      size_t i = a.size();
      Int ai = rule(i, a, q);
      if (i >= 1 && ai < 1) throw std::logic_error("CF partial quotient < 1 at n >= 1");
      a.push_back(ai);
      Int pi = i == 0 ? ai : (i == 1 ? Int(a[1] * p[0] + 1) : Int(ai * p[i - 1] + p[i - 2]));
      Int qi = i == 0 ? Int(1) : (i == 1 ? a[1] : Int(ai * q[i - 1] + q[i - 2]));
      p.push_back(pi);
      q.push_back(qi);
    }
  }
};

CFStream::CFStream(std::string name, Rule rule) : impl_(std::make_shared<Impl>()) {
  impl_->name = std::move(name);
  impl_->rule = std::move(rule);
}

CFStream CFStream::periodic(std::vector<Int> head, std::vector<Int> cycle) {
  if (cycle.empty()) throw std::invalid_argument("periodic CFStream needs a cycle");
  std::ostringstream nm;
  nm << "periodic [";
  for (size_t i = 0; i < head.size(); ++i) nm << (i ? "," : "") << head[i];
  nm << "; (";
  for (size_t i = 0; i < cycle.size(); ++i) nm << (i ? "," : "") << cycle[i];
  nm << ")]";
  size_t hs = head.size(), cs = cycle.size();
  CFStream s(nm.str(), [head = std::move(head), cycle = std::move(cycle), hs, cs](
                           size_t n, const std::vector<Int>&, const std::vector<Int>&) {
    return n < hs ? head[n] : cycle[(n - hs) % cs];
  });
  s.impl_->preperiod = hs;
  s.impl_->period = cs;
  return s;
}

Int CFStream::at(size_t n) const {
  impl_->extend_to(n);
  return impl_->a[n];
}
Int CFStream::q_at(size_t n) const {
  impl_->extend_to(n);
  return impl_->q[n];
}
Int CFStream::p_at(size_t n) const {
  impl_->extend_to(n);
  return impl_->p[n];
}
const std::string& CFStream::rule_name() const { return impl_->name; }
bool CFStream::has_period() const { return impl_->period.has_value(); }
size_t CFStream::preperiod() const { return impl_->preperiod.value(); }
size_t CFStream::period() const { return impl_->period.value(); }

std::string CFStream::serialize(size_t prefix_len) const {
  std::ostringstream os;
  os << "{\"rule\":\"" << rule_name() << "\",\"prefix\":[";
  for (size_t i = 0; i < prefix_len; ++i) os << (i ? "," : "") << at(i);
  os << "]}";
  return os.str();
}

std::string realspec_str(const RealSpec& x) {
  if (auto* r = std::get_if<Rat>(&x)) return rat_str(*r);
  if (auto* s = std::get_if<Quad>(&x)) return s->str();
  return std::get<CFStream>(x).rule_name();
}

double realspec_d(const RealSpec& x) {
  if (auto* r = std::get_if<Rat>(&x)) return rat_d(*r);
  if (auto* s = std::get_if<Quad>(&x)) return s->to_double();
  const auto& st = std::get<CFStream>(x);
  return rat_d(Rat(st.p_at(12), st.q_at(12)));
}

// --------------------------------------------------- continued fractions

namespace {

constexpr unsigned long kBitBudget = 400000;  // cap on convergent size (bits)

inline unsigned long bits_of(const Int& v) {
  return v == 0 ? 0 : boost::multiprecision::msb(boost::multiprecision::abs(v)) + 1;
}

// Deepest level k such that q_0..q_k are computed and q_{k} is the first
// level allowed to exceed the per-step budget. Checking q_k before asking
// for q_{k+1} keeps doubly-exponential streams (Liouville-type rules) from
// exploding in memory.
size_t stream_depth_cap(const CFStream& st, size_t want) {
  size_t k = 0;
  while (k < want && bits_of(st.q_at(k)) <= kBitBudget / 4) ++k;
  return k;
}

std::vector<Int> cf_of_rational(Rat x, size_t n, bool* terminated) {
  std::vector<Int> a;
  for (size_t i = 0; i <= n; ++i) {
    Int fl = floor_rat(x);
    a.push_back(fl);
    Rat frac = x - Rat(fl);
    if (frac == 0) {
      *terminated = true;
      return a;
    }
    x = Rat(1) / frac;
  }
  *terminated = false;
  return a;
}

struct PQaState {
  Int P, Q;
  bool operator<(const PQaState& o) const { return std::tie(P, Q) < std::tie(o.P, o.Q); }
};

// x = (P + sqrt(D)) / Q with Q | (D - P^2); yields partial quotients and
// detects the period via repetition of (P, Q).
class SurdCF {
 public:
  explicit SurdCF(const Quad& x) {
    // a + b sqrt(d) = (A + B sqrt(d)) / C, arranged so B > 0
    Int A = num(x.a()) * den(x.b());
    Int B = num(x.b()) * den(x.a());
    Int C = den(x.a()) * den(x.b());
    if (B < 0) {
      A = -A;
      B = -B;
      C = -C;
    }
    P_ = A;
    D_ = B * B * x.d();
    Q_ = C;
    if ((D_ - P_ * P_) % Q_ != 0) {
      P_ *= boost::multiprecision::abs(Q_);
      D_ *= Q_ * Q_;
      Q_ *= boost::multiprecision::abs(Q_);
    }
    sqrtD_floor_ = isqrt(D_);
  }

  Int next() {
    // floor((P + sqrt(D))/Q): D is never a perfect square here (x is
    // irrational), so sqrt(D) lies strictly between sqrtD_floor_ and
    // sqrtD_floor_ + 1 and the floor is computable from the integer part.
    Int ai = Q_ > 0 ? floor_div(P_ + sqrtD_floor_, Q_) : floor_div(P_ + sqrtD_floor_ + 1, Q_);
    Int P2 = ai * Q_ - P_;
    Int Q2 = (D_ - P2 * P2) / Q_;
    P_ = P2;
    Q_ = Q2;
    return ai;
  }

  PQaState state() const { return {P_, Q_}; }

 private:
  Int P_, Q_, D_, sqrtD_floor_;
};

}  // namespace

CFExpansion continued_fraction(const RealSpec& x, size_t n) {
  CFExpansion out;
  if (auto* r = std::get_if<Rat>(&x)) {
    out.a = cf_of_rational(*r, n, &out.terminated);
    return out;
  }
  if (auto* s = std::get_if<Quad>(&x)) {
    if (s->is_rational()) {
      out.a = cf_of_rational(s->rational_value(), n, &out.terminated);
      return out;
    }
    SurdCF cf(*s);
    std::map<PQaState, size_t> seen;
    std::vector<Int> all;
    const size_t hard_cap = std::max<size_t>(4 * n + 64, 4096);
    for (size_t i = 0; i < hard_cap; ++i) {
      if (i >= 1) {  // the tail from index 1 on is eventually purely periodic
        PQaState st = cf.state();
        auto it = seen.find(st);
        if (it != seen.end()) {
          out.preperiod = it->second;
          out.period = i - it->second;
          break;
        }
        seen.emplace(st, i);
      }
      all.push_back(cf.next());
      if (out.preperiod && all.size() > n) break;
    }
    // Extend the prefix from the detected cycle if the caller wants more.
    if (out.preperiod) {
      size_t pre = *out.preperiod, per = *out.period;
      while (all.size() <= n) all.push_back(all[pre + (all.size() - pre) % per]);
    }
    if (all.size() > n + 1) all.resize(n + 1);
    out.a = std::move(all);
    return out;
  }
  const auto& st = std::get<CFStream>(x);
  for (size_t i = 0; i <= n; ++i) out.a.push_back(st.at(i));
  if (st.has_period()) {
    out.preperiod = st.preperiod();
    out.period = st.period();
  }
  return out;
}

std::vector<Convergent> convergents(const RealSpec& x, size_t n) {
  CFExpansion cf = continued_fraction(x, n);
  std::vector<Convergent> out;
  Int pm2 = 0, pm1 = 1, qm2 = 1, qm1 = 0;
  for (size_t i = 0; i < cf.a.size(); ++i) {
    Int p = cf.a[i] * pm1 + pm2;
    Int q = cf.a[i] * qm1 + qm2;
    out.push_back({i, p, q});
    pm2 = pm1;
    pm1 = p;
    qm2 = qm1;
    qm1 = q;
  }
  return out;
}

namespace {

// Convergents with the stream bit budget applied (rational / surd inputs
// delegate; their convergents grow at most exponentially).
std::vector<Convergent> convergents_capped(const RealSpec& x, size_t max_levels) {
  if (auto* st = std::get_if<CFStream>(&x)) {
    size_t cap = stream_depth_cap(*st, max_levels);
    std::vector<Convergent> out;
    for (size_t i = 0; i <= cap; ++i) out.push_back({i, st->p_at(i), st->q_at(i)});
    return out;
  }
  return convergents(x, max_levels);
}

}  // namespace

// --------------------------------------------------------------------- mu

IrrationalityExponent mu(const RealSpec& x, size_t depth) {
  IrrationalityExponent out;
  if (std::holds_alternative<Rat>(x)) {
    out.value = 1.0;
    out.exact = true;
    return out;
  }
  if (auto* s = std::get_if<Quad>(&x)) {
    out.value = s->is_rational() ? 1.0 : 2.0;
    out.exact = true;
    return out;
  }
  const auto& st = std::get<CFStream>(x);
  std::vector<double> logq;
  for (size_t i = 0; i <= depth; ++i) {
    Int qi = st.q_at(i);
    logq.push_back(log2_int(qi));
    if (bits_of(qi) > kBitBudget) break;
  }
  std::vector<double> slopes;
  for (size_t i = 0; i + 1 < logq.size(); ++i)
    if (logq[i] > 0.5) slopes.push_back(logq[i + 1] / logq[i]);
  out.exact = false;
  out.depth = logq.empty() ? 0 : logq.size() - 1;
  if (slopes.empty()) {
    out.value = 2.0;
    out.residual = 1.0;
    return out;
  }
  // A slope sequence still climbing by a fixed amount per level signals
  // super-polynomial approximability: report infinity.
  if (slopes.size() >= 4) {
    bool diverging = true;
    for (size_t i = slopes.size() - 3; i < slopes.size(); ++i)
      if (slopes[i] - slopes[i - 1] < 0.25) diverging = false;
    if (diverging) {
      out.value = std::numeric_limits<double>::infinity();
      out.residual = std::numeric_limits<double>::infinity();
      return out;
    }
  }
  size_t tail = std::min<size_t>(5, slopes.size());
  double mx = 0, mn = std::numeric_limits<double>::max();
  for (size_t i = slopes.size() - tail; i < slopes.size(); ++i) {
    mx = std::max(mx, slopes[i]);
    mn = std::min(mn, slopes[i]);
  }
  out.value = std::max(2.0, 1.0 + mx);
  out.residual = mx - mn;
  return out;
}

// ------------------------------------------------------------------ jarnik

RealSpec jarnik_construct(const Rat& sigma) {
  if (sigma < 2) throw SigmaOutOfRange();
  Int pe = num(sigma - 2), qe = den(sigma - 2);
  std::ostringstream nm;
  nm << "jarnik sigma=" << rat_str(sigma);
  return CFStream(nm.str(),
                  [pe, qe](size_t n, const std::vector<Int>&, const std::vector<Int>& q) {
                    if (n <= 1 || pe == 0) return Int(1);
                    const Int& qn = q[n - 1];
                    // floor(q^{pe/qe}) = iroot(q^pe, qe)
                    Int val = iroot(pow_int(qn, static_cast<unsigned long>(pe)),
                                    static_cast<unsigned>(qe));
                    return val < 1 ? Int(1) : val;
                  });
}

RealSpec jarnik_liouville() {
  return CFStream("jarnik sigma=inf",
                  [](size_t n, const std::vector<Int>&, const std::vector<Int>& q) {
                    if (n <= 1) return Int(1);
                    return pow_int(q[n - 1], static_cast<unsigned long>(n - 1));
                  });
}

// --------------------------------------------------------- approx machinery

namespace {

// Sign of |x - m/n| - n^{-mu_t}, decided exactly (rational / surd) or by
// shrinking rational brackets (stream). Returns -2 when x == m/n exactly.
int cmp_dist_vs_power(const RealSpec& x, const Int& m, const Int& n, const Rat& mu_t) {
  Int pt = num(mu_t), qt = den(mu_t);
  unsigned long qtu = static_cast<unsigned long>(qt);
  auto attach_n_power = [&](Rat l) {
    if (pt >= 0)
      l *= Rat(pow_int(n, static_cast<unsigned long>(pt)));
    else
      l /= Rat(pow_int(n, static_cast<unsigned long>(-pt)));
    return l;
  };
  // |x - m/n| ? n^{-pt/qt}   <=>   |x - m/n|^qt * n^pt ? 1
  if (auto* r = std::get_if<Rat>(&x)) {
    Rat v = *r - Rat(m, n);
    if (v < 0) v = -v;
    if (v == 0) return -2;
    Rat lhs = attach_n_power(pow_rat(v, static_cast<long>(qtu)));
    return lhs < 1 ? -1 : (lhs == 1 ? 0 : 1);
  }
  if (auto* s = std::get_if<Quad>(&x)) {
    Quad v = (*s - Quad(Rat(m, n))).abs();
    if (v.sign() == 0) return -2;
    Quad lhs = v.pow(qtu);
    if (pt >= 0) {
      lhs = lhs * Quad(Rat(pow_int(n, static_cast<unsigned long>(pt))));
      return lhs.cmp(Rat(1));
    }
    return lhs.cmp(Rat(1, pow_int(n, static_cast<unsigned long>(-pt))));
  }
  const auto& st = std::get<CFStream>(x);
  size_t cap = stream_depth_cap(st, 200);
  for (size_t k = 4; k + 1 <= cap; k += 4) {
    Rat lo(st.p_at(k), st.q_at(k)), hi(st.p_at(k + 1), st.q_at(k + 1));
    if (lo > hi) std::swap(lo, hi);
    Rat mn(m, n);
    if (mn >= lo && mn <= hi) continue;  // m/n inside bracket: deepen
    Rat vlo = mn < lo ? lo - mn : mn - hi;
    Rat vhi = mn < lo ? hi - mn : mn - lo;
    Rat plo = attach_n_power(pow_rat(vlo, static_cast<long>(qtu)));
    Rat phi = attach_n_power(pow_rat(vhi, static_cast<long>(qtu)));
    if (phi < 1) return -1;
    if (plo > 1) return 1;
  }
  throw std::runtime_error("stream bracket failed to separate within depth budget");
}

}  // namespace

std::vector<std::pair<Int, Int>> approx_sequence(const RealSpec& x, const Rat& mu_target,
                                                 size_t J) {
  std::vector<std::pair<Int, Int>> out;
  auto conv = convergents_capped(x, 300);
  for (const auto& c : conv) {
    if (out.size() >= J) break;
    if (c.q < 2) continue;  // trivial approximants carry no content
    if (cmp_dist_vs_power(x, c.p, c.q, mu_target) == -1) out.emplace_back(c.p, c.q);
  }
  // For weak targets (< 2) mediants can contribute pairs that convergents
  // alone do not supply (notably for rational x, whose expansion terminates).
  if (out.size() < J && mu_target < 2 && conv.size() >= 2) {
    for (size_t k = 0; k + 1 < conv.size() && out.size() < J; ++k) {
      for (Int t = 1; t < 64 && out.size() < J; ++t) {
        Int m = conv[k].p + t * conv[k + 1].p;
        Int n = conv[k].q + t * conv[k + 1].q;
        if (n < 2) continue;
        if (cmp_dist_vs_power(x, m, n, mu_target) == -1) out.emplace_back(m, n);
      }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      return std::tie(a.second, a.first) < std::tie(b.second, b.first);
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.size() > J) out.resize(J);
  }
  if (out.size() < J) throw ExhaustedDepth();
  return out;
}

TypeBoundResult verify_type_bound(const RealSpec& x, const Rat& eps, const Rat& K, long n_max) {
  if (is_rational(x)) throw std::domain_error("verify_type_bound: x must be irrational");
  TypeBoundResult res;
  IrrationalityExponent m = mu(x);
  if (std::isinf(m.value)) {
    // Super-polynomial approximability: no constant K works for any finite
    // exponent. Report the deepest convergent in range as the violating pair.
    auto conv = convergents_capped(x, 60);
    res.holds = false;
    for (auto it = conv.rbegin(); it != conv.rend(); ++it)
      if (it->q >= 2 && it->q <= n_max) {
        res.witness = {it->p, it->q};
        break;
      }
    return res;
  }
  // For streams the estimate is rounded to 1/20 so the exponents below stay
  // small; finer resolution would be spurious precision anyway.
  Rat mu_e = m.exact ? Rat(2) + eps : Rat(Int(std::llround(m.value * 20.0)), Int(20)) + eps;
  // |x - m/n| >= K / n^{mu_e}  <=>  |n x - m|^qe * n^{pe-qe} >= K^qe  (mu_e = pe/qe >= 2)
  Int pe = num(mu_e), qe = den(mu_e);
  unsigned long qeu = static_cast<unsigned long>(qe);
  Rat Kq = pow_rat(K, static_cast<long>(qeu));
  const Quad* s = std::get_if<Quad>(&x);
  const CFStream* st = std::get_if<CFStream>(&x);
  Rat slo, shi;  // fixed rational bracket for streams
  if (st) {
    // Deep enough that the bracket width 1/(q_{k-1} q_k) resolves every
    // comparison below, but no deeper: convergent denominators of fast
    // streams grow doubly exponentially and would swamp the rational powers.
    double need = (std::ceil(m.value) + 1.0) * std::log2(static_cast<double>(n_max) + 2) + 64;
    size_t cap = stream_depth_cap(*st, 40);
    if (cap < 1) throw std::runtime_error("stream too shallow to bracket");
    size_t k = 1;
    while (k < cap && log2_int(st->q_at(k)) < need) ++k;
    slo = Rat(st->p_at(k - 1), st->q_at(k - 1));
    shi = Rat(st->p_at(k), st->q_at(k));
    if (slo > shi) std::swap(slo, shi);
  }
  // n = 1 is excluded: with m free among the nearest integers the distance
  // there is at most 1/2 and says nothing about approximation quality.
  for (long n = 2; n <= n_max; ++n) {
    Int nn(n);
    Int mlo, mhi;
    Quad nx;
    if (s) {
      nx = Quad(Rat(nn)) * *s;
      mlo = nx.floor();
      mhi = mlo + 1;
    } else {
      mlo = floor_rat(slo * Rat(nn));
      mhi = ceil_rat(shi * Rat(nn));
    }
    for (Int mm = mlo; mm <= mhi; ++mm) {
      bool violated = false;
      if (s) {
        Quad w = (nx - Quad(Rat(mm))).abs();  // |n x - m|: near-integer coefficients
        if (w.sign() == 0) continue;
        Quad lhs = w.pow(qeu) * Quad(Rat(pow_int(nn, static_cast<unsigned long>(pe - qe))));
        violated = lhs.cmp(Kq) < 0;
      } else {
        Rat mn(mm, nn);
        if (mn >= slo && mn <= shi) continue;  // bracket too coarse to certify
        Rat vhi = mn < slo ? shi - mn : mn - slo;
        Rat np = Rat(pow_int(nn, static_cast<unsigned long>(pe)));
        // certain violation requires even the outward upper bound to fail
        violated = pow_rat(vhi, static_cast<long>(qeu)) * np < Kq;
      }
      if (violated) {
        res.holds = false;
        res.witness = {mm, nn};
        return res;
      }
    }
  }
  res.holds = true;
  return res;
}

double minimal_type_index(const RealSpec& x, size_t depth) {
  if (is_rational(x)) return std::numeric_limits<double>::infinity();
  IrrationalityExponent m = mu(x, depth);
  return std::max(0.0, m.value - 2.0);
}

}  // namespace ckdv
