#pragma once
#include <array>
#include <complex>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ckdv/rat.hpp"
#include "ckdv/system_model.hpp"

namespace ckdv {

struct NonFinite : std::runtime_error {
  explicit NonFinite(double t)
      : std::runtime_error("state left the finite range near t = " + std::to_string(t)) {}
};
struct PresetMismatch : std::invalid_argument {
  explicit PresetMismatch(const std::string& why) : std::invalid_argument(why) {}
};
struct InvalidRoots : std::domain_error {
  explicit InvalidRoots(const std::string& why) : std::domain_error(why) {}
};

// Uniform collocation grid on the lambda-torus [0, 2*pi*lambda); mode index n
// carries the frequency n/lambda.
struct Grid {
  Rat lambda;
  int N;
  double lambda_d;

  Grid(Rat lam, int n);  // throws std::invalid_argument: lambda < 1, N < 8, N not a power of two

  int spectrum_size() const { return N / 2 + 1; }
  // Largest retained index: 3*cutoff <= N-1, so both quadratic products and
  // cubic quadratures are alias-free under the 2/3 rule.
  int dealias_cutoff() const { return (N - 1) / 3; }
  double length() const;           // 2*pi*lambda
  double cell() const;             // length()/N
  double x(int j) const;           // collocation point
  double freq(int n) const { return n / lambda_d; }
};

// Half-spectrum of a real field, indices 0..N/2 (Hermitian symmetry is
// structural). Entries above the dealias cutoff stay zero.
using Spectrum = std::vector<std::complex<double>>;

struct State {
  Grid grid;
  Spectrum u_hat, v_hat;
  double t = 0;

  static State zero(const Grid& g);
};

// Asserts the representation invariants (sizes, zeroed dealias band, real
// zero mode); throws std::logic_error with the failing detail.
void check_state(const State& st);

// One summand amplitude*cos(mode*x/lambda + phase).
struct CosTerm {
  double amplitude = 0;
  int mode = 0;
  double phase = 0;
};
using InitialData = std::vector<CosTerm>;

// "0.2*cos(x) + 0.1*cos(2x-0.5) - 0.05" style sums; a bare constant is a
// mode-0 term. Throws std::invalid_argument on anything else.
InitialData parse_initial_data(const std::string& text);
double data_mean(const InitialData& d);

// Throws std::invalid_argument when a term's mode lies outside the dealias
// band of the grid.
State make_state(const Grid& g, const InitialData& u0, const InitialData& v0, double t = 0);

// FFT plans and scratch buffers for one grid; independent instances may run
// concurrently (plan creation is internally serialized).
class Workspace {
 public:
  explicit Workspace(const Grid& g);
  ~Workspace();
  Workspace(Workspace&&) noexcept;
  Workspace& operator=(Workspace&&) noexcept;
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;

  int size() const;
  void to_physical(const Spectrum& in, std::vector<double>& out);
  void to_spectral(const std::vector<double>& in, Spectrum& out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Exact diagonal semigroup: every mode picks up e^{i(a_i k^3 - b_ii k) dt}.
// Off-diagonal transport rides the nonlinear stage of step().
void linear_step(const ReducedSystem& sys, State& st, double dt);

// Integrating-factor RK4 with 2/3-rule dealiasing; throws NonFinite when a
// coefficient leaves the finite range.
void step(const ReducedSystem& sys, Workspace& ws, State& st, double dt);

// min(1e-3, 1/(advection scale * k_max)) stability surrogate.
double default_dt(const ReducedSystem& sys, const Grid& g, const State& st0);

// Steps st forward to st.t + T (uniform dt plus one trailing fractional step
// when T is not a multiple).
State evolve(const ReducedSystem& sys, Workspace& ws, State st, double T, double dt);

// E1 = integral of w1_u u^2 + w1_v v^2; E2 adds gradient terms, a cubic
// polynomial and an optional v^2 correction.
struct EnergyForm {
  double w1_u = 0, w1_v = 0;
  double g_u = 0, g_v = 0, g_uv = 0;           // u_x^2, v_x^2, u_x v_x
  double c30 = 0, c21 = 0, c12 = 0, c03 = 0;   // u^3, u^2 v, u v^2, v^3
  double q_v = 0;                              // v^2 inside E2
};

// Conserved-pair functionals: "majda-biello" (a2), "hirota-satsuma"
// (a1, c12), "gear-grimshaw" (rho1, rho2, sigma1..sigma4), and the
// "triad-interaction" model (r) used by the resonance experiment.
EnergyForm energy_form(const std::string& preset_id, const std::map<std::string, Rat>& params);

struct EnergyReadout {
  double E1 = 0, E2 = 0, mean_u = 0, mean_v = 0;
};

// Quadratic terms by Parseval on the half-spectrum, cubic terms by dealiased
// collocation quadrature (exact: 3*cutoff <= N-1).
EnergyReadout energies(const EnergyForm& form, Workspace& ws, const State& st);

// Same, but first verifies sys equals the named preset's coefficients;
// throws PresetMismatch otherwise.
EnergyReadout energies(const std::string& preset_id, const std::map<std::string, Rat>& params,
                       const ReducedSystem& sys, Workspace& ws, const State& st);

struct LedgerRow {
  double t = 0;
  double E1 = 0, E2 = 0, mean_u = 0, mean_v = 0;
  // Leg energies |u_hat(k1)|^2, |v_hat(k2)|^2, |u_hat(k3)|^2: the triangle
  // lives on u, v, u, so each tracked index watches its own field.
  std::array<double, 3> triad{0, 0, 0};
};

struct EnergyLedger {
  bool has_triad = false;
  std::array<int, 3> tracked{-1, -1, -1};
  std::vector<LedgerRow> rows;

  double max_drift_E1() const;  // max |E1(t)-E1(0)| / max(1, |E1(0)|)
  double max_drift_E2() const;
  void write_csv(std::ostream& os) const;
};

struct SimResult {
  State final_state;
  EnergyLedger ledger;
};

// dt = 0 picks default_dt; record_every = 0 targets ~200 ledger rows.
SimResult simulate(const ReducedSystem& sys, const EnergyForm& form, const Grid& g,
                   const InitialData& u0, const InitialData& v0, double T, double dt = 0,
                   int record_every = 0, const std::array<int, 3>* triad = nullptr);

// u_t + u_xxx = -(uv)_x, v_t + r v_xxx = -u u_x: the divergence-form pair
// whose three-wave resonance function is -3 k2^3 h_r(k1/k2) on the legs
// u(k1), v(k2), u(k3).
ReducedSystem triad_interaction_system(const Rat& r);

struct TriadArm {
  long long k1 = 0, k2 = 0, k3 = 0;
  bool resonant = false;       // h_r(k1/k2) == 0 exactly
  double transfer = 0;         // max over [0,T] of the k3-mode energy gain
  EnergyLedger ledger;
};

struct TriadOutcome {
  Rat r;
  double T = 0;
  TriadArm exact, detuned;
  double ratio = 0;  // exact.transfer / detuned.transfer (inf when detuned <= 0)
};

// Seeds u at k1 = x1r*k2 and v at k2 (amplitudes A1, A2) and watches
// k3 = -k1-k2; the detuned arm shifts k1 by detune/lambda (default one lattice
// step, which lands on the mirror root x2r when one exists). Rational roots
// pick (k1,k2) from x1r in lowest terms; a rootless r falls back to the
// (-2,3) control geometry; surd roots throw InvalidRoots.
TriadOutcome resonant_triad_experiment(const Rat& r, std::optional<long long> detune, double A1,
                                       double A2, std::optional<double> T = std::nullopt);

// Path A solves sys on the unit torus and transforms the endpoint; path B
// transforms data and coefficients via scale() and solves on the
// lambda-torus to lambda^3 T. Returns the max pointwise gap on the shared
// collocation points. Throws InapplicableSpace when the space does not fit
// sys or the data means disagree with it.
double scaling_consistency(const ReducedSystem& sys, const SpaceType& sp, const Rat& lambda,
                           const InitialData& u0, const InitialData& v0, double T, int N,
                           double dt = 0);

// "x,u,v" rows over the collocation points.
void write_state_csv(Workspace& ws, const State& st, std::ostream& os);

}  // namespace ckdv
