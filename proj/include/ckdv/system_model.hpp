#pragma once
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ckdv/surd.hpp"

namespace ckdv {

// Exact coefficient scalar: rational, or quadratic surd when a
// diagonalization leaves the rationals.
using Coef = Quad;

inline Coef coef(long v) { return Quad(Rat(v)); }
inline Coef coef(const Rat& v) { return Quad(v); }

struct Matrix2 {
  Coef e[2][2];

  Matrix2() = default;
  static Matrix2 of(Coef a, Coef b, Coef c, Coef d) {
    Matrix2 m;
    m.e[0][0] = std::move(a);
    m.e[0][1] = std::move(b);
    m.e[1][0] = std::move(c);
    m.e[1][1] = std::move(d);
    return m;
  }
  static Matrix2 of_rat(const Rat& a, const Rat& b, const Rat& c, const Rat& d) {
    return of(coef(a), coef(b), coef(c), coef(d));
  }
  static Matrix2 identity() { return of_rat(1, 0, 0, 1); }
  static Matrix2 diag(const Coef& x, const Coef& y) { return of(x, coef(0), coef(0), y); }

  const Coef& operator()(int i, int j) const { return e[i][j]; }
  Coef& operator()(int i, int j) { return e[i][j]; }

  Matrix2 operator+(const Matrix2& o) const;
  Matrix2 operator-(const Matrix2& o) const;
  Matrix2 operator*(const Matrix2& o) const;
  Matrix2 scaled(const Coef& s) const;
  Coef det() const;
  Coef trace() const;
  Matrix2 inverse() const;  // throws std::domain_error when singular
  bool operator==(const Matrix2& o) const;
  bool is_zero() const;
};

// (u,v)_t + A1 (u,v)_xxx + A2 (u,v)_x = A3 (u u_x, v v_x) + A4 (u_x v, u v_x)
struct GeneralSystem {
  Matrix2 A1, A2, A3, A4;
};

// u_t + a1 u_xxx + b11 u_x + b12 v_x = c11 u u_x + c12 v v_x + d11 u_x v + d12 u v_x
// v_t + a2 v_xxx + b21 u_x + b22 v_x = c21 u u_x + c22 v v_x + d21 u_x v + d22 u v_x
struct ReducedSystem {
  Coef a1, a2;  // nonzero dispersion coefficients
  Matrix2 B, C, D;
  Matrix2 M = Matrix2::identity();  // recorded change of variables (u,v) = M(u~,v~)
  Coef theta() const { return a2 / a1; }
};

enum class DivergenceForm { Full, UOnly, VOnly, None };

// The four data spaces: k=1 fixes both means, k=2 the mean of u, k=3 the
// mean of v, k=4 neither.
struct SpaceType {
  int k = 4;
  std::optional<Rat> m1, m2;
  static SpaceType both_means(const Rat& m1, const Rat& m2) { return {1, m1, m2}; }
  static SpaceType u_mean(const Rat& m1) { return {2, m1, std::nullopt}; }
  static SpaceType v_mean(const Rat& m2) { return {3, std::nullopt, m2}; }
  static SpaceType no_mean() { return {4, std::nullopt, std::nullopt}; }
};

struct SpaceApplicability {
  SpaceType space;
  bool applicable;
  std::string reason;  // empty when applicable
};

struct DataTransform {
  Rat m1 = 0, m2 = 0;      // means subtracted from u, v
  int amplitude_pow = -2;  // u^lam(x,t) = lam^{amplitude_pow} [u(lam^{space_pow} x, ...) - m1]
  int space_pow = -1;
  int time_pow = -3;
  Rat decay_s_neg_half = Rat(-1);   // data-norm decay exponent valid for s >= -1/2
  Rat decay_s_zero = Rat(-3, 2);    // sharper exponent valid for s >= 0
};

struct ScaledSystem {
  Rat lambda = 1;
  Matrix2 B_lambda, C, D;
  DataTransform transform;
};

struct NotDiagonalizable : std::domain_error {
  NotDiagonalizable() : std::domain_error("A1 is not real-diagonalizable over a quadratic field") {}
};
struct ZeroEigenvalue : std::domain_error {
  ZeroEigenvalue() : std::domain_error("A1 has a zero eigenvalue") {}
};
struct InapplicableSpace : std::domain_error {
  explicit InapplicableSpace(const std::string& why) : std::domain_error(why) {}
};
struct UnknownPreset : std::domain_error {
  explicit UnknownPreset(const std::string& name) : std::domain_error("unknown preset: " + name) {}
};
struct InvalidParams : std::domain_error {
  explicit InvalidParams(const std::string& why) : std::domain_error(why) {}
};
struct DegenerateA1 : std::domain_error {
  DegenerateA1() : std::domain_error("rho2 sigma3^2 = 1: A1 is singular") {}
};

// Diagonalizes A1 (eigenvalues in descending order, eigenvectors scaled so
// the first nonzero entry is 1) and rewrites the system in the eigenbasis.
ReducedSystem reduce(const GeneralSystem& g);

DivergenceForm divergence_form(const ReducedSystem& sys);

std::vector<SpaceApplicability> applicable_spaces(const ReducedSystem& sys);

// Mean shift + parabolic rescaling to the lambda-torus; B_lambda carries the
// entire coefficient change, C and D are untouched.
ScaledSystem scale(const ReducedSystem& sys, const SpaceType& sp, const Rat& lambda);

using AnySystem = std::variant<GeneralSystem, ReducedSystem>;

// Named systems: "majda-biello" (a2), "hirota-satsuma" (a1, c12),
// "gear-grimshaw" (rho1, rho2, sigma1..sigma4), "abcd-coupled".
AnySystem preset(const std::string& name, const std::map<std::string, Rat>& params = {});
// Convenience: reduce() applied when the preset is a GeneralSystem.
ReducedSystem preset_reduced(const std::string& name,
                             const std::map<std::string, Rat>& params = {});

enum class GGRegime { neg, lowpos, midpos };

struct GGClassification {
  Coef lambda1, lambda2, theta;  // lambda1 > lambda2, theta = lambda2/lambda1 < 1
  GGRegime regime;
};

GGClassification gg_regime(const Rat& rho1, const Rat& rho2, const Rat& sigma3);

// Key-value text format: sections [dispersion], [B], [C], [D]; entries are
// "p/q", or surd(a,b,d) for elements of a quadratic field.
std::string to_text(const ReducedSystem& sys);
ReducedSystem system_from_text(const std::string& text);

}  // namespace ckdv
