#include "ckdv/critical_index.hpp"

#include <algorithm>
#include <sstream>

namespace ckdv {

bool Threshold::operator<(const Threshold& o) const {
  if (is_infinite()) return false;
  if (o.is_infinite()) return true;
  if (*value != *o.value) return *value < *o.value;
  return kind == BoundKind::Closed && o.kind == BoundKind::Open;
}

bool Threshold::operator==(const Threshold& o) const {
  if (is_infinite() || o.is_infinite()) return is_infinite() == o.is_infinite();
  return *value == *o.value && kind == o.kind;
}

std::string Threshold::str() const {
  if (is_infinite()) return "inf";
  std::string s = rat_str(*value);
  if (kind == BoundKind::Open) s += "+";
  return s;
}

SRecord sharp_index(const Rat& r) {
  if (r < Rat(1, 4)) throw ROutOfRange();
  Quad rho = Quad::sqrt_of(Rat(12 * r - 3));
  SRecord rec;
  rec.r = r;
  if (rho.is_rational())
    rec.rho_r = rho.rational_value();
  else
    rec.rho_r = rho;
  rec.sigma_r = mu(rec.rho_r);
  rec.s_r = rho.is_rational() ? Rat(1) : Rat(1, 2);
  rec.exact = true;
  return rec;
}

SEstimate sharp_index_stream(const RealSpec& rho) {
  SEstimate e;
  e.sigma = mu(rho);
  double sg = e.sigma.value;
  if (sg <= 1.0 || sg >= 3.0)
    e.s_r = 1.0;
  else
    e.s_r = (std::max(sg, 2.0) - 1.0) / 2.0;
  e.exact = e.sigma.exact;
  return e;
}

namespace {

// Sharp index of an exact dispersion ratio, rational or quadratic surd.
// sqrt(12r - 3) rational => approximation exponent 1 => index 1; otherwise
// the root is algebraic irrational, so the exponent is 2 and the index 1/2.
Rat sharp_index_value(const Coef& r) {
  Coef x = coef(12) * r - coef(3);
  if (x.sign() < 0) throw ROutOfRange();
  auto rho = quad_sqrt(x);
  return (rho && rho->is_rational()) ? Rat(1) : Rat(1, 2);
}

struct ClauseSink {
  int k;
  std::vector<Clause>* out;
  void add(const std::string& source, const std::string& condition, Threshold t) {
    out->push_back(Clause{k, source, condition, t});
  }
};

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string s;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) s += sep;
    s += parts[i];
  }
  return s;
}

// Structural zero/equality requirements on C and D for the space-k table.
std::vector<std::string> precondition_violations(const ReducedSystem& r, int k) {
  std::vector<std::string> v;
  const Matrix2& C = r.C;
  const Matrix2& D = r.D;
  auto need_zero = [&v](const Coef& c, const char* name) {
    if (!(c == coef(0))) v.push_back(std::string(name) + " != 0");
  };
  switch (k) {
    case 1:
      if (!(D(0, 0) == D(0, 1))) v.push_back("d11 != d12");
      if (!(D(1, 0) == D(1, 1))) v.push_back("d21 != d22");
      break;
    case 2:
      need_zero(C(1, 1), "c22");
      need_zero(D(0, 0), "d11");
      need_zero(D(0, 1), "d12");
      break;
    case 3:
      need_zero(C(0, 0), "c11");
      need_zero(D(1, 0), "d21");
      need_zero(D(1, 1), "d22");
      break;
    case 4:
      need_zero(C(0, 0), "c11");
      need_zero(C(1, 1), "c22");
      need_zero(D(0, 0), "d11");
      need_zero(D(1, 1), "d22");
      break;
    default:
      v.push_back("space index out of range");
  }
  return v;
}

}  // namespace

Classification classify(const ReducedSystem& sys, const SpaceType& sp) {
  if (sp.k < 1 || sp.k > 4) throw InvalidParams("classify: space index must be 1..4");
  Classification out;
  out.k = sp.k;

  // Mean conservation must hold for every component with a fixed mean.
  for (const SpaceApplicability& a : applicable_spaces(sys)) {
    if (a.space.k != sp.k) continue;
    if (!a.applicable) {
      out.applicable = false;
      out.reason = "space inapplicable: " + a.reason;
      out.s_star = Threshold::infinite();
      return out;
    }
  }

  // Structural requirements of the space-k case table. With zero means a
  // violation leaves the space usable but the bilinear estimate fails for
  // every s; with nonzero means the shifted system leaves the class entirely.
  std::vector<std::string> viol = precondition_violations(sys, sp.k);
  if (!viol.empty()) {
    bool zero_means = (!sp.m1 || *sp.m1 == 0) && (!sp.m2 || *sp.m2 == 0);
    std::string what = join(viol, ", ");
    if (zero_means) {
      out.applicable = true;
      out.reason = "bilinear estimate fails for all s (" + what + ")";
    } else {
      out.applicable = false;
      out.reason = "inapplicable: nonzero means with " + what;
    }
    out.s_star = Threshold::infinite();
    return out;
  }

  const Matrix2 Bt = scale(sys, sp, Rat(1)).B_lambda;
  const Coef theta = sys.theta();
  const Matrix2& C = sys.C;
  const Matrix2& D = sys.D;
  const Coef z = coef(0);

  const bool th_neg = theta.sign() < 0;
  const bool th_one = theta == coef(1);
  const bool th_pos_not_one = theta.sign() > 0 && !th_one;
  const bool th_below_quarter = theta.sign() > 0 && theta.cmp(Rat(1, 4)) < 0;
  const bool th_mid = theta.cmp(Rat(1, 4)) >= 0 && theta.cmp(Rat(4)) <= 0 && !th_one;
  const bool th_above_four = theta.cmp(Rat(4)) > 0;

  const bool bt_diag_eq = Bt(0, 0) == Bt(1, 1);
  const bool bt_off_zero = Bt(0, 1) == z && Bt(1, 0) == z;

  ClauseSink sink{sp.k, &out.clauses};
  auto s_of = [&](const Coef& ratio) { return sharp_index_value(ratio); };
  auto open_max = [&]() {
    return Threshold::open(std::max(s_of(theta), s_of(coef(1) / theta)));
  };
  const char* inv = "s_{1/theta}";
  const char* dir = "s_theta";

  switch (sp.k) {
    case 1: {
      const Coef d1 = D(0, 0), d2 = D(1, 0);
      const Coef c12 = C(0, 1), c21 = C(1, 0);
      const bool g1 = !(c21 == z) || !(d1 == z);  // drives s_theta resonances
      const bool g2 = !(c12 == z) || !(d2 == z);  // drives s_{1/theta} resonances
      if (th_neg) sink.add("k1(a)", "theta < 0", Threshold::closed(Rat(-1, 2)));
      if (th_one && bt_off_zero)
        sink.add("k1(b)", "theta = 1, b~12 = b~21 = 0", Threshold::closed(Rat(-1, 2)));
      if (th_pos_not_one) sink.add("k1(c)", "theta > 0, theta != 1", Threshold::closed(Rat(1)));
      if (th_below_quarter) {
        if (!g2) sink.add("k1(d).1", "c12 = d2 = 0", Threshold::closed(Rat(-1, 2)));
        if (g2 && bt_diag_eq)
          sink.add("k1(d).2", "c12^2 + d2^2 > 0, b~11 = b~22", Threshold::open(s_of(coef(1) / theta)));
      }
      if (th_mid && bt_diag_eq) {
        if (!g2 && g1)
          sink.add("k1(e).1", "c12 = d2 = 0, c21^2 + d1^2 > 0", Threshold::open(s_of(theta)));
        if (g2 && !g1)
          sink.add("k1(e).2", "c12^2 + d2^2 > 0, c21 = d1 = 0", Threshold::open(s_of(coef(1) / theta)));
        if (g2 && g1)
          sink.add("k1(e).3", std::string(dir) + " and " + inv + " both active", open_max());
      }
      if (th_above_four) {
        if (!g1) sink.add("k1(f).1", "c21 = d1 = 0", Threshold::closed(Rat(-1, 2)));
        if (g1 && bt_diag_eq)
          sink.add("k1(f).2", "c21^2 + d1^2 > 0, b~11 = b~22", Threshold::open(s_of(theta)));
      }
      if (th_pos_not_one && !g1 && !g2)
        sink.add("k1(u)", "no resonant coupling in either component", Threshold::closed(Rat(-1, 2)));
      break;
    }
    case 2: {
      const Coef c12 = C(0, 1), c21 = C(1, 0);
      const Coef d21 = D(1, 0), d22 = D(1, 1);
      const bool g2 = !(c12 == z) || !(d21 == z) || !(d22 == z);
      const bool g1 = !(c21 == z);
      if (th_neg) {
        if (d21 == d22) sink.add("k2(a).1", "theta < 0, d21 = d22", Threshold::closed(Rat(-1, 2)));
        else sink.add("k2(a).2", "theta < 0, d21 != d22", Threshold::closed(Rat(-1, 4)));
      }
      if (th_one && bt_off_zero && c12 == z && d21 == z) {
        if (d22 == z) sink.add("k2(b).1", "theta = 1, c12 = d21 = d22 = 0, b~ off-diagonal zero", Threshold::closed(Rat(-1, 2)));
        else sink.add("k2(b).2", "theta = 1, c12 = d21 = 0, d22 != 0, b~ off-diagonal zero", Threshold::closed(Rat(1, 2)));
      }
      if (th_pos_not_one) sink.add("k2(c)", "theta > 0, theta != 1", Threshold::closed(Rat(1)));
      if (th_below_quarter) {
        if (!g2) sink.add("k2(d).1", "c12 = d21 = d22 = 0", Threshold::closed(Rat(-1, 2)));
        if (g2 && bt_diag_eq)
          sink.add("k2(d).2", "c12^2 + d21^2 + d22^2 > 0, b~11 = b~22", Threshold::open(s_of(coef(1) / theta)));
      }
      if (th_mid && bt_diag_eq) {
        if (!g2 && g1) sink.add("k2(e).1", "c12 = d21 = d22 = 0, c21 != 0", Threshold::open(s_of(theta)));
        if (g2 && !g1) sink.add("k2(e).2", "coupling into u active, c21 = 0", Threshold::open(s_of(coef(1) / theta)));
        if (g2 && g1) sink.add("k2(e).3", std::string(dir) + " and " + inv + " both active", open_max());
      }
      if (th_above_four) {
        if (!g1 && d21 == d22) sink.add("k2(f).1", "c21 = 0, d21 = d22", Threshold::closed(Rat(-1, 2)));
        if (!g1 && !(d21 == d22)) sink.add("k2(f).2", "c21 = 0, d21 != d22", Threshold::closed(Rat(-1, 4)));
        if (g1 && bt_diag_eq) sink.add("k2(f).3", "c21 != 0, b~11 = b~22", Threshold::open(s_of(theta)));
      }
      if (th_pos_not_one && !g1 && !g2)
        sink.add("k2(u)", "no resonant coupling in either component", Threshold::closed(Rat(-1, 2)));
      break;
    }
    case 3: {
      const Coef c12 = C(0, 1), c21 = C(1, 0);
      const Coef d11 = D(0, 0), d12 = D(0, 1);
      const bool g1 = !(c21 == z) || !(d11 == z) || !(d12 == z);
      const bool g2 = !(c12 == z);
      if (th_neg) {
        if (d11 == d12) sink.add("k3(a).1", "theta < 0, d11 = d12", Threshold::closed(Rat(-1, 2)));
        else sink.add("k3(a).2", "theta < 0, d11 != d12", Threshold::closed(Rat(-1, 4)));
      }
      if (th_one && bt_off_zero && c21 == z && d12 == z) {
        if (d11 == z) sink.add("k3(b).1", "theta = 1, c21 = d11 = d12 = 0, b~ off-diagonal zero", Threshold::closed(Rat(-1, 2)));
        else sink.add("k3(b).2", "theta = 1, c21 = d12 = 0, d11 != 0, b~ off-diagonal zero", Threshold::closed(Rat(1, 2)));
      }
      if (th_pos_not_one) sink.add("k3(c)", "theta > 0, theta != 1", Threshold::closed(Rat(1)));
      if (th_below_quarter) {
        if (!g2 && d11 == d12) sink.add("k3(d).1", "c12 = 0, d11 = d12", Threshold::closed(Rat(-1, 2)));
        if (!g2 && !(d11 == d12)) sink.add("k3(d).2", "c12 = 0, d11 != d12", Threshold::closed(Rat(-1, 4)));
        if (g2 && bt_diag_eq) sink.add("k3(d).3", "c12 != 0, b~11 = b~22", Threshold::open(s_of(coef(1) / theta)));
      }
      if (th_mid && bt_diag_eq) {
        if (!g2 && g1) sink.add("k3(e).1", "c12 = 0, coupling into v active", Threshold::open(s_of(theta)));
        if (g2 && !g1) sink.add("k3(e).2", "c12 != 0, c21 = d11 = d12 = 0", Threshold::open(s_of(coef(1) / theta)));
        if (g2 && g1) sink.add("k3(e).3", std::string(dir) + " and " + inv + " both active", open_max());
      }
      if (th_above_four) {
        if (!g1) sink.add("k3(f).1", "c21 = d11 = d12 = 0", Threshold::closed(Rat(-1, 2)));
        if (g1 && bt_diag_eq) sink.add("k3(f).2", "coupling into v active, b~11 = b~22", Threshold::open(s_of(theta)));
      }
      if (th_pos_not_one && !g1 && !g2)
        sink.add("k3(u)", "no resonant coupling in either component", Threshold::closed(Rat(-1, 2)));
      break;
    }
    case 4: {
      const Coef c12 = C(0, 1), c21 = C(1, 0);
      const Coef d12 = D(0, 1), d21 = D(1, 0);
      const bool g1 = !(c21 == z) || !(d12 == z);
      const bool g2 = !(c12 == z) || !(d21 == z);
      if (th_neg) {
        if (d12 == z && d21 == z) sink.add("k4(a).1", "theta < 0, d12 = d21 = 0", Threshold::closed(Rat(-1, 2)));
        else sink.add("k4(a).2", "theta < 0, d12^2 + d21^2 > 0", Threshold::closed(Rat(-1, 4)));
      }
      if (th_pos_not_one) sink.add("k4(b)", "theta > 0, theta != 1", Threshold::closed(Rat(1)));
      if (th_below_quarter) {
        if (c12 == z && d12 == z && d21 == z)
          sink.add("k4(c).1", "c12 = d12 = d21 = 0", Threshold::closed(Rat(-1, 2)));
        if (c12 == z && d21 == z && !(d12 == z))
          sink.add("k4(c).2", "c12 = d21 = 0, d12 != 0", Threshold::closed(Rat(-1, 4)));
        if (g2 && bt_diag_eq)
          sink.add("k4(c).3", "c12^2 + d21^2 > 0, b11 = b22", Threshold::open(s_of(coef(1) / theta)));
      }
      if (th_mid && bt_diag_eq) {
        if (!g2 && g1) sink.add("k4(d).1", "c12 = d21 = 0, c21^2 + d12^2 > 0", Threshold::open(s_of(theta)));
        if (g2 && !g1) sink.add("k4(d).2", "c12^2 + d21^2 > 0, c21 = d12 = 0", Threshold::open(s_of(coef(1) / theta)));
        if (g2 && g1) sink.add("k4(d).3", std::string(dir) + " and " + inv + " both active", open_max());
      }
      if (th_above_four) {
        if (c21 == z && d12 == z && d21 == z)
          sink.add("k4(e).1", "c21 = d12 = d21 = 0", Threshold::closed(Rat(-1, 2)));
        if (c21 == z && d12 == z && !(d21 == z))
          sink.add("k4(e).2", "c21 = d12 = 0, d21 != 0", Threshold::closed(Rat(-1, 4)));
        if (g1 && bt_diag_eq)
          sink.add("k4(e).3", "c21^2 + d12^2 > 0, b11 = b22", Threshold::open(s_of(theta)));
      }
      if (th_pos_not_one && !g1 && !g2)
        sink.add("k4(u)", "no resonant coupling in either component", Threshold::closed(Rat(-1, 2)));
      break;
    }
  }

  if (out.clauses.empty()) {
    out.s_star = Threshold::infinite();
    out.reason = th_one ? "no clause holds (theta = 1 with obstructing coefficients)"
                        : "no well-posedness clause holds";
  } else {
    out.s_star = out.clauses.front().threshold;
    for (const Clause& c : out.clauses)
      if (c.threshold < out.s_star) out.s_star = c.threshold;
  }
  return out;
}

bool CriticalIndexSet::contains(const Threshold& t) const {
  if (t.is_infinite()) return includes_infinity;
  for (const Rat& v : isolated)
    if (*t.value == v) return true;
  return interval_lo <= *t.value && *t.value <= interval_hi;
}

std::string CriticalIndexSet::str() const {
  std::string s = "{";
  for (const Rat& v : isolated) s += rat_str(v) + ", ";
  s += "inf} U [" + rat_str(interval_lo) + ", " + rat_str(interval_hi) + "]";
  return s;
}

CriticalIndexSet critical_index_set(int k) {
  if (k < 1 || k > 4) throw InvalidParams("critical_index_set: space index must be 1..4");
  CriticalIndexSet s;
  s.k = k;
  s.isolated = {Rat(-1, 2)};
  if (k != 1) s.isolated.push_back(Rat(-1, 4));
  return s;
}

namespace {

Rat need_param(const std::map<std::string, Rat>& params, const std::string& key) {
  auto it = params.find(key);
  if (it == params.end()) throw InvalidParams("missing parameter: " + key);
  return it->second;
}

Rat opt_param(const std::map<std::string, Rat>& params, const std::string& key, Rat dflt) {
  auto it = params.find(key);
  return it == params.end() ? dflt : it->second;
}

void finish(Classification& c) {
  if (c.clauses.empty()) {
    c.s_star = Threshold::infinite();
    if (c.reason.empty()) c.reason = "no well-posedness clause holds";
  } else {
    c.s_star = c.clauses.front().threshold;
    for (const Clause& cl : c.clauses)
      if (cl.threshold < c.s_star) c.s_star = cl.threshold;
  }
}

Threshold min_t(Threshold a, Threshold b) { return b < a ? b : a; }

Classification majda_biello_row(const Rat& a2) {
  if (a2 == 0) throw InvalidParams("majda-biello: a2 must be nonzero");
  Classification c;
  c.k = (a2 == 1) ? 1 : 2;
  ClauseSink sink{c.k, &c.clauses};
  if (a2 < 0 || a2 > 4) {
    sink.add("MB-lwp(1)", "a2 < 0 or a2 > 4", Threshold::closed(Rat(-1, 2)));
    c.gwp = Threshold::closed(Rat(0));
  } else if (a2 == 1) {
    sink.add("MB-lwp(2)", "a2 = 1", Threshold::closed(Rat(-1, 2)));
    c.gwp = Threshold::closed(Rat(0));
  } else {
    Rat s = sharp_index(Rat(1) / a2).s_r;
    sink.add("MB-lwp(3)", "a2 in (0,4] \\ {1}",
             min_t(Threshold::closed(Rat(1)), Threshold::open(s)));
    c.gwp = Threshold::closed(Rat(1));
  }
  c.gwp_note = "global extension via the two conserved energies";
  finish(c);
  return c;
}

Classification hirota_satsuma_row(const Rat& a1, const Rat& c12) {
  if (a1 == 0) throw InvalidParams("hirota-satsuma: a1 must be nonzero");
  Classification c;
  c.k = 2;
  ClauseSink sink{c.k, &c.clauses};
  if (a1 < Rat(1, 4)) {
    sink.add("HS-lwp(1)", "a1 < 1/4, a1 != 0", Threshold::closed(Rat(-1, 4)));
  } else if (a1 == 1) {
    if (c12 == 0)
      sink.add("HS-lwp(2)", "a1 = 1, c12 = 0", Threshold::closed(Rat(1, 2)));
    else
      c.reason = "a1 = 1 with c12 != 0: no clause holds";
  } else {
    Rat s = sharp_index(a1).s_r;
    sink.add("HS-lwp(3)", "a1 >= 1/4, a1 != 1",
             min_t(Threshold::closed(Rat(1)), Threshold::open(s)));
  }
  if (c12 > 0) {
    if (a1 < Rat(1, 4)) {
      c.gwp = Threshold::closed(Rat(0));
      c.gwp_note = "energies coercive for a1 < 1/4";
    } else if (a1 < 1) {
      c.gwp = Threshold::closed(Rat(1));
      c.gwp_note = "energies coercive for 1/4 <= a1 < 1";
    } else {
      c.gwp_note = "no energy-based extension for a1 >= 1";
    }
  } else {
    c.gwp_note = "energy argument needs c12 > 0";
  }
  finish(c);
  return c;
}

Classification gg_plain_row(const Rat& rho1, const Rat& s1, const Rat& s2, const Rat& s4) {
  if (rho1 == 0) throw InvalidParams("gear-grimshaw: rho1 must be nonzero");
  Classification c;
  c.k = 1;
  ClauseSink sink{c.k, &c.clauses};
  if (rho1 < 0 || rho1 == 1) {
    sink.add("GG-lwp(1)", "rho1 < 0 or rho1 = 1", Threshold::closed(Rat(-1, 2)));
    c.gwp = Threshold::closed(Rat(0));
  }
  if (rho1 > 0 && rho1 != 1) {
    sink.add("GG-lwp(2)", "rho1 > 0, rho1 != 1", Threshold::closed(Rat(1)));
    c.gwp = Threshold::closed(Rat(1));
  }
  if (rho1 > 0 && rho1 < Rat(1, 4)) {
    if (s2 == 0) {
      sink.add("GG-lwp(3).1", "rho1 in (0,1/4), sigma2 = 0", Threshold::closed(Rat(-1, 2)));
      c.gwp = min_t(*c.gwp, Threshold::closed(Rat(0)));
    } else if (s4 == 0) {
      sink.add("GG-lwp(3).2", "rho1 in (0,1/4), sigma2 != 0, sigma4 = 0",
               Threshold::open(sharp_index(Rat(1) / rho1).s_r));
    }
  }
  if (rho1 >= Rat(1, 4) && rho1 <= 4 && rho1 != 1 && s4 == 0) {
    if (s1 == 0 && s2 != 0)
      sink.add("GG-lwp(4).1", "sigma1 = 0, sigma2 != 0", Threshold::open(sharp_index(Rat(1) / rho1).s_r));
    if (s1 != 0 && s2 == 0)
      sink.add("GG-lwp(4).2", "sigma1 != 0, sigma2 = 0", Threshold::open(sharp_index(rho1).s_r));
    if (s1 != 0 && s2 != 0)
      sink.add("GG-lwp(4).3", "sigma1, sigma2 both nonzero",
               Threshold::open(std::max(sharp_index(rho1).s_r, sharp_index(Rat(1) / rho1).s_r)));
  }
  if (rho1 > 4) {
    if (s1 == 0) {
      sink.add("GG-lwp(5).1", "rho1 > 4, sigma1 = 0", Threshold::closed(Rat(-1, 2)));
      c.gwp = min_t(*c.gwp, Threshold::closed(Rat(0)));
    } else if (s4 == 0) {
      sink.add("GG-lwp(5).2", "rho1 > 4, sigma1 != 0, sigma4 = 0",
               Threshold::open(sharp_index(rho1).s_r));
    }
  }
  c.gwp_note = "global extension via the two conserved energies";
  finish(c);
  return c;
}

Classification gg_mixed_row(const Rat& rho1, const Rat& rho2, const Rat& s3, const Rat& s4) {
  GGClassification reg = gg_regime(rho1, rho2, s3);
  Rat rs2 = rho2 * s3 * s3;
  Classification c;
  c.k = 1;
  ClauseSink sink{c.k, &c.clauses};
  if (rs2 > 1) {
    sink.add("GGx-lwp(1)", "rho2*sigma3^2 > 1 (theta < 0)", Threshold::closed(Rat(-1, 2)));
    c.gwp = Threshold::closed(Rat(0));
  } else {
    sink.add("GGx-lwp(2)", "0 < rho2*sigma3^2 < 1 (0 < theta < 1)", Threshold::closed(Rat(1)));
    c.gwp = Threshold::closed(Rat(1));
    if (s4 == 0) {
      if (reg.regime == GGRegime::lowpos)
        sink.add("GGx-lwp(3)", "0 < theta < 1/4, sigma4 = 0",
                 Threshold::open(sharp_index_value(coef(1) / reg.theta)));
      else
        sink.add("GGx-lwp(4)", "1/4 <= theta < 1, sigma4 = 0",
                 Threshold::open(std::max(sharp_index_value(reg.theta),
                                          sharp_index_value(coef(1) / reg.theta))));
    }
  }
  c.gwp_note = "global extension via the two conserved energies";
  finish(c);
  return c;
}

}  // namespace

std::vector<Classification> classify_application(const std::string& name,
                                                 const std::map<std::string, Rat>& params) {
  std::vector<Classification> rows;
  if (name == "majda-biello") {
    rows.push_back(majda_biello_row(need_param(params, "a2")));
  } else if (name == "hirota-satsuma") {
    rows.push_back(hirota_satsuma_row(need_param(params, "a1"), opt_param(params, "c12", Rat(1))));
  } else if (name == "gear-grimshaw") {
    Rat s3 = opt_param(params, "sigma3", Rat(0));
    Rat s4 = opt_param(params, "sigma4", Rat(0));
    if (s3 == 0)
      rows.push_back(gg_plain_row(need_param(params, "rho1"), opt_param(params, "sigma1", Rat(0)),
                                  opt_param(params, "sigma2", Rat(0)), s4));
    else
      rows.push_back(gg_mixed_row(need_param(params, "rho1"), need_param(params, "rho2"), s3, s4));
  } else {
    throw UnknownPreset(name);
  }
  return rows;
}

}  // namespace ckdv
