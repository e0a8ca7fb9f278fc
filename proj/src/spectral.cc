#include "ckdv/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <limits>
#include <mutex>
#include <ostream>

#include "ckdv/resonance.hpp"

namespace ckdv {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// All coefficients of one system as doubles; the skew parts of D feed the
// only nonlinear channel that can move a mean.
struct SysD {
  double a1, a2, b11, b12, b21, b22;
  double c11, c12, c21, c22;
  double dsym1, dskew1, dsym2, dskew2;
};

SysD sysd(const ReducedSystem& s) {
  auto d = [](const Coef& c) { return c.to_double(); };
  SysD o{};
  o.a1 = d(s.a1);
  o.a2 = d(s.a2);
  o.b11 = d(s.B(0, 0));
  o.b12 = d(s.B(0, 1));
  o.b21 = d(s.B(1, 0));
  o.b22 = d(s.B(1, 1));
  o.c11 = d(s.C(0, 0));
  o.c12 = d(s.C(0, 1));
  o.c21 = d(s.C(1, 0));
  o.c22 = d(s.C(1, 1));
  o.dsym1 = (d(s.D(0, 0)) + d(s.D(0, 1))) / 2;
  o.dskew1 = (d(s.D(0, 0)) - d(s.D(0, 1))) / 2;
  o.dsym2 = (d(s.D(1, 0)) + d(s.D(1, 1))) / 2;
  o.dskew2 = (d(s.D(1, 0)) - d(s.D(1, 1))) / 2;
  return o;
}

std::mutex& plan_mutex() {
  static std::mutex mu;
  return mu;
}

}  // namespace

Grid::Grid(Rat lam, int n) : lambda(std::move(lam)), N(n) {
  if (lambda < 1) throw std::invalid_argument("Grid: lambda must be >= 1");
  if (N < 8 || !power_of_two(N)) throw std::invalid_argument("Grid: N must be a power of two >= 8");
  lambda_d = rat_d(lambda);
}

double Grid::length() const { return kTwoPi * lambda_d; }
double Grid::cell() const { return length() / N; }
double Grid::x(int j) const { return cell() * j; }

State State::zero(const Grid& g) {
  State st{g, Spectrum(g.spectrum_size()), Spectrum(g.spectrum_size()), 0.0};
  return st;
}

void check_state(const State& st) {
  const int S = st.grid.spectrum_size();
  if ((int)st.u_hat.size() != S || (int)st.v_hat.size() != S)
    throw std::logic_error("state: spectrum size does not match the grid");
  const int cut = st.grid.dealias_cutoff();
  for (const Spectrum* sp : {&st.u_hat, &st.v_hat}) {
    if ((*sp)[0].imag() != 0.0) throw std::logic_error("state: zero mode is not real");
    for (int n = 0; n < S; ++n) {
      std::complex<double> c = (*sp)[n];
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw std::logic_error("state: non-finite coefficient");
      if (n > cut && c != std::complex<double>(0.0, 0.0))
        throw std::logic_error("state: dealias band is not zero at index " + std::to_string(n));
    }
  }
}

double data_mean(const InitialData& d) {
  double m = 0;
  for (const auto& t : d)
    if (t.mode == 0) m += t.amplitude * std::cos(t.phase);
  return m;
}

State make_state(const Grid& g, const InitialData& u0, const InitialData& v0, double t) {
  State st = State::zero(g);
  st.t = t;
  auto fill = [&](const InitialData& data, Spectrum& sp) {
    for (const auto& term : data) {
      int n = term.mode;
      if (std::abs(n) > g.dealias_cutoff())
        throw std::invalid_argument("initial data mode " + std::to_string(n) +
                                    " lies outside the dealias band");
      if (n == 0) {
        sp[0] += term.amplitude * std::cos(term.phase);
      } else if (n > 0) {
        sp[n] += std::polar(term.amplitude / 2, term.phase);
      } else {
        sp[-n] += std::polar(term.amplitude / 2, -term.phase);
      }
    }
    sp[0] = std::complex<double>(sp[0].real(), 0.0);
  };
  fill(u0, st.u_hat);
  fill(v0, st.v_hat);
  return st;
}

InitialData parse_initial_data(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace((unsigned char)c)) s += c;
  InitialData out;
  size_t i = 0;
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("initial data: " + why + " at offset " + std::to_string(i) +
                                " of \"" + text + "\"");
  };
  auto number = [&]() {
    size_t used = 0;
    double v;
    try {
      v = std::stod(s.substr(i), &used);
    } catch (const std::exception&) {
      fail("expected a number");
      return 0.0;
    }
    i += used;
    return v;
  };
  if (s.empty()) return out;
  while (i < s.size()) {
    double sign = 1;
    while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      if (s[i] == '-') sign = -sign;
      ++i;
    }
    if (i >= s.size()) fail("dangling sign");
    double amp = 1;
    bool have_amp = false;
    if (s.compare(i, 4, "cos(") != 0) {
      amp = number();
      have_amp = true;
      if (i < s.size() && s[i] == '*') ++i;
    }
    if (s.compare(i, 4, "cos(") == 0) {
      i += 4;
      long mode = 1;
      if (s[i] == 'x') {
        mode = 1;
      } else if (s.compare(i, 2, "-x") == 0) {
        mode = -1;
        ++i;
      } else {
        size_t used = 0;
        mode = std::stol(s.substr(i), &used, 10);
        if (used == 0) fail("expected a mode number");
        i += used;
        if (i < s.size() && s[i] == '*') ++i;
      }
      if (i >= s.size() || s[i] != 'x') fail("expected x in cos()");
      ++i;
      double phase = 0;
      if (i < s.size() && (s[i] == '+' || s[i] == '-')) phase = number();
      if (i >= s.size() || s[i] != ')') fail("expected )");
      ++i;
      out.push_back({sign * amp, (int)mode, phase});
    } else if (have_amp) {
      out.push_back({sign * amp, 0, 0.0});
    } else {
      fail("expected a constant or cos() term");
    }
  }
  return out;
}

struct Workspace::Impl {
  int N = 0;
  double* rbuf = nullptr;
  fftw_complex* cbuf = nullptr;
  fftw_plan fwd = nullptr, bwd = nullptr;

  explicit Impl(int n) : N(n) {
    rbuf = fftw_alloc_real(N);
    cbuf = fftw_alloc_complex(N / 2 + 1);
    std::lock_guard<std::mutex> lock(plan_mutex());
    fwd = fftw_plan_dft_r2c_1d(N, rbuf, cbuf, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_1d(N, cbuf, rbuf, FFTW_ESTIMATE);
  }
  ~Impl() {
    {
      std::lock_guard<std::mutex> lock(plan_mutex());
      if (fwd) fftw_destroy_plan(fwd);
      if (bwd) fftw_destroy_plan(bwd);
    }
    fftw_free(rbuf);
    fftw_free(cbuf);
  }
};

Workspace::Workspace(const Grid& g) : impl_(std::make_unique<Impl>(g.N)) {}
Workspace::~Workspace() = default;
Workspace::Workspace(Workspace&&) noexcept = default;
Workspace& Workspace::operator=(Workspace&&) noexcept = default;

int Workspace::size() const { return impl_->N; }

void Workspace::to_physical(const Spectrum& in, std::vector<double>& out) {
  const int S = impl_->N / 2 + 1;
  if ((int)in.size() != S) throw std::invalid_argument("to_physical: wrong spectrum size");
  std::memcpy(impl_->cbuf, in.data(), S * sizeof(fftw_complex));
  fftw_execute(impl_->bwd);
  out.assign(impl_->rbuf, impl_->rbuf + impl_->N);
}

void Workspace::to_spectral(const std::vector<double>& in, Spectrum& out) {
  if ((int)in.size() != impl_->N) throw std::invalid_argument("to_spectral: wrong field size");
  std::memcpy(impl_->rbuf, in.data(), impl_->N * sizeof(double));
  fftw_execute(impl_->fwd);
  const int S = impl_->N / 2 + 1;
  out.resize(S);
  const double inv = 1.0 / impl_->N;
  for (int n = 0; n < S; ++n)
    out[n] = std::complex<double>(impl_->cbuf[n][0] * inv, impl_->cbuf[n][1] * inv);
}

void linear_step(const ReducedSystem& sys, State& st, double dt) {
  if (!(dt > 0)) throw std::invalid_argument("linear_step: dt must be positive");
  SysD c = sysd(sys);
  const int S = st.grid.spectrum_size();
  for (int n = 0; n < S; ++n) {
    double k = st.grid.freq(n);
    double k3 = k * k * k;
    st.u_hat[n] *= std::polar(1.0, (c.a1 * k3 - c.b11 * k) * dt);
    st.v_hat[n] *= std::polar(1.0, (c.a2 * k3 - c.b22 * k) * dt);
  }
  st.t += dt;
}

namespace {

// Fourier-side right sides after the exact diagonal semigroup is factored
// out: off-diagonal transport plus the quadratic terms, products dealiased
// by the 2/3 rule. Divergence-form channels go through ik * F[product], so
// a fixed mean can only move through the skew D part.
struct NonlinearEval {
  const Grid& g;
  Workspace& ws;
  SysD c;
  bool need_deriv, need_t2, need_t4;
  std::vector<double> pu, pv, pux, pvx, t1, t2;
  Spectrum s1, s2, tmp;

  NonlinearEval(const Grid& grid, Workspace& w, const SysD& cc) : g(grid), ws(w), c(cc) {
    need_t2 = c.dskew1 != 0;
    need_t4 = c.dskew2 != 0;
    need_deriv = need_t2 || need_t4;
    tmp.resize(g.spectrum_size());
  }

  void derivative(const Spectrum& in, std::vector<double>& out) {
    const int cut = g.dealias_cutoff();
    for (int n = 0; n < (int)in.size(); ++n) {
      double k = g.freq(n);
      tmp[n] = n <= cut ? std::complex<double>(-k * in[n].imag(), k * in[n].real())
                        : std::complex<double>(0.0, 0.0);
    }
    ws.to_physical(tmp, out);
  }

  void operator()(const Spectrum& uh, const Spectrum& vh, Spectrum& Nu, Spectrum& Nv) {
    const int S = g.spectrum_size();
    const int cut = g.dealias_cutoff();
    ws.to_physical(uh, pu);
    ws.to_physical(vh, pv);
    if (need_deriv) {
      derivative(uh, pux);
      derivative(vh, pvx);
    }
    t1.resize(g.N);
    t2.resize(g.N);

    auto assemble = [&](double cs, double co, double dsym, double dskew, const Spectrum& other,
                        double b_off, Spectrum& out) {
      for (int j = 0; j < g.N; ++j)
        t1[j] = 0.5 * cs * pu[j] * pu[j] + 0.5 * co * pv[j] * pv[j] + dsym * pu[j] * pv[j];
      ws.to_spectral(t1, s1);
      if (dskew != 0) {
        for (int j = 0; j < g.N; ++j) t2[j] = dskew * (pux[j] * pv[j] - pu[j] * pvx[j]);
        ws.to_spectral(t2, s2);
      }
      out.resize(S);
      for (int n = 0; n < S; ++n) {
        if (n > cut) {
          out[n] = 0;
          continue;
        }
        double k = g.freq(n);
        std::complex<double> ik(0.0, k);
        std::complex<double> val = ik * s1[n];
        if (dskew != 0) val += s2[n];
        if (b_off != 0) val -= b_off * (ik * other[n]);
        out[n] = val;
      }
      out[0] = std::complex<double>(out[0].real(), 0.0);
    };
    // u-equation: c11 u u_x + c12 v v_x + d-terms - b12 v_x
    assemble(c.c11, c.c12, c.dsym1, c.dskew1, vh, c.b12, Nu);
    // v-equation: c21 u u_x + c22 v v_x + d-terms - b21 u_x
    assemble(c.c21, c.c22, c.dsym2, c.dskew2, uh, c.b21, Nv);
  }
};

}  // namespace

void step(const ReducedSystem& sys, Workspace& ws, State& st, double dt) {
  if (!(dt > 0)) throw std::invalid_argument("step: dt must be positive");
  if (ws.size() != st.grid.N) throw std::invalid_argument("step: workspace size != grid size");
  SysD c = sysd(sys);
  const int S = st.grid.spectrum_size();

  std::vector<std::complex<double>> Eu(S), Ev(S);
  for (int n = 0; n < S; ++n) {
    double k = st.grid.freq(n);
    double k3 = k * k * k;
    Eu[n] = std::polar(1.0, (c.a1 * k3 - c.b11 * k) * dt / 2);
    Ev[n] = std::polar(1.0, (c.a2 * k3 - c.b22 * k) * dt / 2);
  }

  NonlinearEval nl(st.grid, ws, c);
  Spectrum n1u(S), n1v(S), n2u(S), n2v(S), n3u(S), n3v(S), n4u(S), n4v(S);
  Spectrum au(S), av(S);

  nl(st.u_hat, st.v_hat, n1u, n1v);

  for (int n = 0; n < S; ++n) {
    au[n] = Eu[n] * (st.u_hat[n] + (dt / 2) * n1u[n]);
    av[n] = Ev[n] * (st.v_hat[n] + (dt / 2) * n1v[n]);
  }
  nl(au, av, n2u, n2v);

  for (int n = 0; n < S; ++n) {
    au[n] = Eu[n] * st.u_hat[n] + (dt / 2) * n2u[n];
    av[n] = Ev[n] * st.v_hat[n] + (dt / 2) * n2v[n];
  }
  nl(au, av, n3u, n3v);

  for (int n = 0; n < S; ++n) {
    au[n] = Eu[n] * (Eu[n] * st.u_hat[n]) + dt * (Eu[n] * n3u[n]);
    av[n] = Ev[n] * (Ev[n] * st.v_hat[n]) + dt * (Ev[n] * n3v[n]);
  }
  nl(au, av, n4u, n4v);

  for (int n = 0; n < S; ++n) {
    std::complex<double> e2u = Eu[n] * Eu[n], e2v = Ev[n] * Ev[n];
    st.u_hat[n] = e2u * st.u_hat[n] +
                  (dt / 6) * (e2u * n1u[n] + 2.0 * (Eu[n] * (n2u[n] + n3u[n])) + n4u[n]);
    st.v_hat[n] = e2v * st.v_hat[n] +
                  (dt / 6) * (e2v * n1v[n] + 2.0 * (Ev[n] * (n2v[n] + n3v[n])) + n4v[n]);
  }
  st.u_hat[0] = std::complex<double>(st.u_hat[0].real(), 0.0);
  st.v_hat[0] = std::complex<double>(st.v_hat[0].real(), 0.0);
  st.t += dt;

  for (const Spectrum* sp : {&st.u_hat, &st.v_hat})
    for (const auto& z : *sp)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw NonFinite(st.t);
#ifndef NDEBUG
  check_state(st);
#endif
}

double default_dt(const ReducedSystem& sys, const Grid& g, const State& st0) {
  SysD c = sysd(sys);
  auto linf = [](const Spectrum& sp) {
    double m = std::abs(sp[0].real());
    for (size_t n = 1; n < sp.size(); ++n) m += 2 * std::abs(sp[n]);
    return m;
  };
  double amp = std::max(linf(st0.u_hat), linf(st0.v_hat));
  double quad = std::max({std::abs(c.c11), std::abs(c.c12), std::abs(c.c21), std::abs(c.c22),
                          std::abs(c.dsym1) + std::abs(c.dskew1),
                          std::abs(c.dsym2) + std::abs(c.dskew2)});
  double speed = std::max(std::abs(c.b12), std::abs(c.b21)) + quad * amp;
  double kmax = g.freq(g.N / 2);
  double cap = speed * kmax > 1e-12 ? 1.0 / (speed * kmax) : 1e-3;
  return std::min(1e-3, cap);
}

State evolve(const ReducedSystem& sys, Workspace& ws, State st, double T, double dt) {
  if (T < 0) throw std::invalid_argument("evolve: negative horizon");
  if (T == 0) return st;
  if (!(dt > 0)) throw std::invalid_argument("evolve: dt must be positive");
  long long steps = (long long)std::floor(T / dt + 1e-9);
  for (long long k = 0; k < steps; ++k) step(sys, ws, st, dt);
  double rem = T - steps * dt;
  if (rem > 1e-9 * std::max(1.0, T)) step(sys, ws, st, rem);
  return st;
}

EnergyForm energy_form(const std::string& preset_id, const std::map<std::string, Rat>& params) {
  auto need = [&](const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) throw InvalidParams(preset_id + ": missing parameter " + key);
    return it->second;
  };
  auto opt = [&](const std::string& key, const Rat& dflt) {
    auto it = params.find(key);
    return it == params.end() ? dflt : it->second;
  };
  EnergyForm f;
  if (preset_id == "majda-biello") {
    Rat a2 = need("a2");
    f.w1_u = f.w1_v = 1;
    f.g_u = 1;
    f.g_v = rat_d(a2);
    f.c12 = -1;  // -u v^2
    return f;
  }
  if (preset_id == "hirota-satsuma") {
    Rat a1 = need("a1");
    Rat c12 = opt("c12", Rat(1));
    f.w1_u = 1;
    f.w1_v = rat_d(Rat(c12 / 3));
    f.g_u = rat_d(Rat(Rat(1) - a1));
    f.g_v = rat_d(c12);
    f.c30 = -2 * rat_d(Rat(Rat(1) - a1));
    f.c12 = -rat_d(c12);
    return f;
  }
  if (preset_id == "gear-grimshaw") {
    Rat r1 = need("rho1"), r2 = need("rho2");
    Rat s1 = opt("sigma1", Rat(0)), s2 = opt("sigma2", Rat(0));
    Rat s3 = opt("sigma3", Rat(0)), s4 = opt("sigma4", Rat(0));
    f.w1_u = rat_d(r2);
    f.w1_v = rat_d(r1);
    f.g_u = rat_d(r2);
    f.g_v = 1;
    f.g_uv = 2 * rat_d(Rat(r2 * s3));
    f.c30 = -rat_d(r2) / 3;
    f.c21 = rat_d(Rat(r2 * s2));
    f.c12 = rat_d(Rat(r2 * s1));
    f.c03 = -1.0 / 3;
    f.q_v = -rat_d(s4);
    return f;
  }
  if (preset_id == "triad-interaction") {
    Rat r = need("r");
    f.w1_u = f.w1_v = 1;
    f.g_u = 1;
    f.g_v = rat_d(r);
    f.c21 = -1;  // -u^2 v
    return f;
  }
  throw UnknownPreset(preset_id);
}

EnergyReadout energies(const EnergyForm& form, Workspace& ws, const State& st) {
  const Grid& g = st.grid;
  const int S = g.spectrum_size();
  double Pu = st.u_hat[0].real() * st.u_hat[0].real();
  double Pv = st.v_hat[0].real() * st.v_hat[0].real();
  double Ku = 0, Kv = 0, Kuv = 0;
  for (int n = 1; n < S; ++n) {
    double k2 = g.freq(n) * g.freq(n);
    double nu = std::norm(st.u_hat[n]), nv = std::norm(st.v_hat[n]);
    Pu += 2 * nu;
    Pv += 2 * nv;
    Ku += 2 * k2 * nu;
    Kv += 2 * k2 * nv;
    Kuv += 2 * k2 * (st.u_hat[n] * std::conj(st.v_hat[n])).real();
  }
  const double L = g.length();
  EnergyReadout out;
  out.mean_u = st.u_hat[0].real();
  out.mean_v = st.v_hat[0].real();
  out.E1 = L * (form.w1_u * Pu + form.w1_v * Pv);
  out.E2 = L * (form.g_u * Ku + form.g_v * Kv + form.g_uv * Kuv + form.q_v * Pv);
  if (form.c30 != 0 || form.c21 != 0 || form.c12 != 0 || form.c03 != 0) {
    std::vector<double> pu, pv;
    ws.to_physical(st.u_hat, pu);
    ws.to_physical(st.v_hat, pv);
    double acc = 0;
    for (int j = 0; j < g.N; ++j) {
      double u = pu[j], v = pv[j];
      acc += form.c30 * u * u * u + form.c21 * u * u * v + form.c12 * u * v * v +
             form.c03 * v * v * v;
    }
    out.E2 += g.cell() * acc;
  }
  return out;
}

EnergyReadout energies(const std::string& preset_id, const std::map<std::string, Rat>& params,
                       const ReducedSystem& sys, Workspace& ws, const State& st) {
  ReducedSystem expected;
  if (preset_id == "triad-interaction") {
    auto it = params.find("r");
    if (it == params.end()) throw InvalidParams("triad-interaction: missing parameter r");
    expected = triad_interaction_system(it->second);
  } else {
    expected = preset_reduced(preset_id, params);
  }
  if (!(expected.M == Matrix2::identity()))
    throw PresetMismatch(preset_id + ": reduction changed variables; the tracked functionals "
                                     "assume the original pair");
  bool same = expected.a1 == sys.a1 && expected.a2 == sys.a2 && expected.B == sys.B &&
              expected.C == sys.C && expected.D == sys.D;
  if (!same) throw PresetMismatch(preset_id + ": system coefficients differ from the preset");
  return energies(energy_form(preset_id, params), ws, st);
}

double EnergyLedger::max_drift_E1() const {
  if (rows.empty()) return 0;
  double e0 = rows[0].E1, m = 0;
  for (const auto& r : rows) m = std::max(m, std::abs(r.E1 - e0));
  return m / std::max(1.0, std::abs(e0));
}

double EnergyLedger::max_drift_E2() const {
  if (rows.empty()) return 0;
  double e0 = rows[0].E2, m = 0;
  for (const auto& r : rows) m = std::max(m, std::abs(r.E2 - e0));
  return m / std::max(1.0, std::abs(e0));
}

void EnergyLedger::write_csv(std::ostream& os) const {
  os << "t,E1,E2,mean_u,mean_v";
  if (has_triad)
    os << ",e_k" << tracked[0] << ",e_k" << tracked[1] << ",e_k" << tracked[2];
  os << "\n";
  os << std::setprecision(17);
  for (const auto& r : rows) {
    os << r.t << ',' << r.E1 << ',' << r.E2 << ',' << r.mean_u << ',' << r.mean_v;
    if (has_triad) os << ',' << r.triad[0] << ',' << r.triad[1] << ',' << r.triad[2];
    os << "\n";
  }
}

SimResult simulate(const ReducedSystem& sys, const EnergyForm& form, const Grid& g,
                   const InitialData& u0, const InitialData& v0, double T, double dt,
                   int record_every, const std::array<int, 3>* triad) {
  if (T < 0) throw std::invalid_argument("simulate: negative horizon");
  State st = make_state(g, u0, v0);
  Workspace ws(g);
  if (dt <= 0) dt = default_dt(sys, g, st);
  long long steps = (long long)std::floor(T / dt + 1e-9);
  double rem = T - steps * dt;
  bool tail = rem > 1e-9 * std::max(1.0, T);
  long long cadence = record_every > 0 ? record_every : std::max(1LL, steps / 200);

  EnergyLedger ledger;
  if (triad) {
    ledger.has_triad = true;
    for (int i = 0; i < 3; ++i) {
      int idx = (*triad)[i];
      if (idx < 0 || idx > g.N / 2) throw std::invalid_argument("simulate: tracked index range");
      ledger.tracked[i] = idx;
    }
  }
  auto record = [&]() {
    EnergyReadout e = energies(form, ws, st);
    LedgerRow row{st.t, e.E1, e.E2, e.mean_u, e.mean_v, {0, 0, 0}};
    if (triad) {
      row.triad[0] = std::norm(st.u_hat[ledger.tracked[0]]);
      row.triad[1] = std::norm(st.v_hat[ledger.tracked[1]]);
      row.triad[2] = std::norm(st.u_hat[ledger.tracked[2]]);
    }
    ledger.rows.push_back(row);
  };

  record();
  for (long long k = 1; k <= steps; ++k) {
    step(sys, ws, st, dt);
    if (k % cadence == 0 || (k == steps && !tail)) record();
  }
  if (tail) {
    step(sys, ws, st, rem);
    record();
  }
  return SimResult{std::move(st), std::move(ledger)};
}

ReducedSystem triad_interaction_system(const Rat& r) {
  if (r == 0) throw InvalidParams("triad system: r must be nonzero");
  ReducedSystem s;
  s.a1 = coef(1);
  s.a2 = coef(r);
  s.B = Matrix2::of_rat(0, 0, 0, 0);
  s.C = Matrix2::of_rat(0, 0, -1, 0);
  s.D = Matrix2::of_rat(-1, -1, 0, 0);
  return s;
}

namespace {

long long to_ll(const Int& v) { return v.convert_to<long long>(); }

int pow2_at_least(long long want) {
  int n = 8;
  while (n < want) n *= 2;
  return n;
}

TriadArm run_triad_arm(const ReducedSystem& sys, const EnergyForm& form, const Rat& r,
                       long long k1, long long k2, int N, double A1, double A2, double T,
                       double dt) {
  TriadArm arm;
  arm.k1 = k1;
  arm.k2 = k2;
  arm.k3 = -k1 - k2;
  arm.resonant = k2 != 0 && h_val(r, Rat(Int(k1)) / Rat(Int(k2))) == 0;
  Grid g(Rat(1), N);
  InitialData u0{{A1, (int)k1, 0.0}}, v0{{A2, (int)k2, 0.0}};
  std::array<int, 3> tracked{(int)std::llabs(k1), (int)std::llabs(k2), (int)std::llabs(arm.k3)};
  SimResult res = simulate(sys, form, g, u0, v0, T, dt, 0, &tracked);
  arm.ledger = std::move(res.ledger);
  double base = arm.ledger.rows.front().triad[2];
  for (const auto& row : arm.ledger.rows) arm.transfer = std::max(arm.transfer, row.triad[2] - base);
  return arm;
}

}  // namespace

TriadOutcome resonant_triad_experiment(const Rat& r, std::optional<long long> detune, double A1,
                                       double A2, std::optional<double> T_opt) {
  RootsReport rep = h_roots(r);
  long long k1, k2;
  if (rep.kind == RootCase::NoRealRoots) {
    k1 = -2;
    k2 = 3;
  } else {
    const RealSpec& root = rep.roots[0];
    if (!is_rational(root))
      throw InvalidRoots("resonance ray is irrational: " + realspec_str(root));
    Rat x1 = std::holds_alternative<Rat>(root) ? std::get<Rat>(root)
                                               : std::get<Quad>(root).rational_value();
    k1 = to_ll(num(x1));
    k2 = to_ll(den(x1));
  }
  long long d = detune.value_or(1);
  long long k1d = k1 + d;

  long long m = std::max({std::llabs(k1), std::llabs(k2), std::llabs(-k1 - k2), std::llabs(k1d),
                          std::llabs(-k1d - k2)});
  int N = std::max(32, pow2_at_least(6 * m + 4));

  ReducedSystem sys = triad_interaction_system(r);
  EnergyForm form = energy_form("triad-interaction", {{"r", r}});

  double disp = std::abs(rat_d(r)) * k2 * k2 * k2;
  double T = T_opt.value_or(20 * kTwoPi / disp);

  Grid g(Rat(1), N);
  State probe = make_state(g, {{A1, (int)k1, 0.0}}, {{A2, (int)k2, 0.0}});
  double dt = default_dt(sys, g, probe);

  TriadOutcome out;
  out.r = r;
  out.T = T;
  out.exact = run_triad_arm(sys, form, r, k1, k2, N, A1, A2, T, dt);
  out.detuned = run_triad_arm(sys, form, r, k1d, k2, N, A1, A2, T, dt);
  if (out.detuned.transfer > 0) {
    out.ratio = out.exact.transfer / out.detuned.transfer;
  } else {
    out.ratio = out.exact.transfer > 0 ? std::numeric_limits<double>::infinity() : 1.0;
  }
  return out;
}

double scaling_consistency(const ReducedSystem& sys, const SpaceType& sp, const Rat& lambda,
                           const InitialData& u0, const InitialData& v0, double T, int N,
                           double dt) {
  ScaledSystem scaled = scale(sys, sp, lambda);  // InapplicableSpace / InvalidParams

  double m1 = rat_d(scaled.transform.m1), m2 = rat_d(scaled.transform.m2);
  if (sp.k == 1 || sp.k == 2) {
    if (std::abs(data_mean(u0) - m1) > 1e-12)
      throw InapplicableSpace("scaling: mean of u0 does not equal the space's m1");
  }
  if (sp.k == 1 || sp.k == 3) {
    if (std::abs(data_mean(v0) - m2) > 1e-12)
      throw InapplicableSpace("scaling: mean of v0 does not equal the space's m2");
  }

  Grid gA(Rat(1), N), gB(lambda, N);
  Workspace wsA(gA), wsB(gB);
  State stA0 = make_state(gA, u0, v0);
  if (dt <= 0) dt = default_dt(sys, gA, stA0);

  State stA = evolve(sys, wsA, stA0, T, dt);

  double amp = rat_d(Rat(Rat(1) / (lambda * lambda)));
  State stB0 = State::zero(gB);
  for (int n = 0; n < gB.spectrum_size(); ++n) {
    double su = n == 0 ? m1 : 0.0, sv = n == 0 ? m2 : 0.0;
    stB0.u_hat[n] = amp * (stA0.u_hat[n] - su);
    stB0.v_hat[n] = amp * (stA0.v_hat[n] - sv);
  }
  ReducedSystem sysB{sys.a1, sys.a2, scaled.B_lambda, scaled.C, scaled.D, Matrix2::identity()};
  double cube = rat_d(Rat(lambda * lambda * lambda));
  State stB = evolve(sysB, wsB, stB0, cube * T, cube * dt);

  std::vector<double> pA, pB;
  double disc = 0;
  auto compare = [&](const Spectrum& a_end, const Spectrum& b_end, double shift) {
    wsA.to_physical(a_end, pA);
    wsB.to_physical(b_end, pB);
    for (int j = 0; j < N; ++j) disc = std::max(disc, std::abs(amp * (pA[j] - shift) - pB[j]));
  };
  compare(stA.u_hat, stB.u_hat, m1);
  compare(stA.v_hat, stB.v_hat, m2);
  return disc;
}

void write_state_csv(Workspace& ws, const State& st, std::ostream& os) {
  std::vector<double> pu, pv;
  ws.to_physical(st.u_hat, pu);
  ws.to_physical(st.v_hat, pv);
  os << "x,u,v\n" << std::setprecision(17);
  for (int j = 0; j < st.grid.N; ++j) os << st.grid.x(j) << ',' << pu[j] << ',' << pv[j] << "\n";
}

}  // namespace ckdv
