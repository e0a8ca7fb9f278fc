#include "ckdv/system_model.hpp"

#include <sstream>

namespace ckdv {

Matrix2 Matrix2::operator+(const Matrix2& o) const {
  Matrix2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.e[i][j] = e[i][j] + o.e[i][j];
  return r;
}

Matrix2 Matrix2::operator-(const Matrix2& o) const {
  Matrix2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.e[i][j] = e[i][j] - o.e[i][j];
  return r;
}

Matrix2 Matrix2::operator*(const Matrix2& o) const {
  Matrix2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.e[i][j] = e[i][0] * o.e[0][j] + e[i][1] * o.e[1][j];
  return r;
}

Matrix2 Matrix2::scaled(const Coef& s) const {
  Matrix2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.e[i][j] = e[i][j] * s;
  return r;
}

Coef Matrix2::det() const { return e[0][0] * e[1][1] - e[0][1] * e[1][0]; }

Coef Matrix2::trace() const { return e[0][0] + e[1][1]; }

Matrix2 Matrix2::inverse() const {
  Coef d = det();
  if (d.sign() == 0) throw std::domain_error("Matrix2::inverse: singular matrix");
  return Matrix2::of(e[1][1] / d, -(e[0][1] / d), -(e[1][0] / d), e[0][0] / d);
}

bool Matrix2::operator==(const Matrix2& o) const {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (!(e[i][j] == o.e[i][j])) return false;
  return true;
}

bool Matrix2::is_zero() const {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (e[i][j].sign() != 0) return false;
  return true;
}

namespace {

// Eigenvector of A for eigenvalue lam, first nonzero entry normalized to 1.
// Valid because (A - lam I) has rank 1 for a simple eigenvalue.
std::pair<Coef, Coef> eigenvector(const Matrix2& A, const Coef& lam) {
  Coef w0 = A(0, 1), w1 = lam - A(0, 0);
  if (w0.sign() == 0 && w1.sign() == 0) {
    w0 = lam - A(1, 1);
    w1 = A(1, 0);
  }
  if (w0.sign() != 0) return {coef(1), w1 / w0};
  return {coef(0), coef(1)};
}

}  // namespace

ReducedSystem reduce(const GeneralSystem& g) {
  const Matrix2& A = g.A1;
  if (A.det().sign() == 0) throw ZeroEigenvalue();
  Coef tr = A.trace();
  Coef disc = tr * tr - coef(4) * A.det();
  auto root = quad_sqrt(disc);
  if (!root) throw NotDiagonalizable();

  Coef lam1, lam2;
  Matrix2 M;
  if (root->sign() == 0) {
    // Repeated eigenvalue: diagonalizable only when A is already scalar.
    if (A(0, 1).sign() != 0 || A(1, 0).sign() != 0) throw NotDiagonalizable();
    lam1 = lam2 = tr / coef(2);
    M = Matrix2::identity();
  } else {
    lam1 = (tr + *root) / coef(2);
    lam2 = (tr - *root) / coef(2);  // lam1 > lam2: eigenvalues in descending order
    auto [p0, p1] = eigenvector(A, lam1);
    auto [q0, q1] = eigenvector(A, lam2);
    M = Matrix2::of(p0, q0, p1, q1);
  }

  Matrix2 Minv = M.inverse();
  // With (u,v) = M (un,vn) the quadratic monomials expand over the basis
  // (un un_x, vn vn_x, un_x vn, un vn_x); E3*/E4* are the expansion rows of
  // (u u_x, v v_x) and (u_x v, u v_x) split into (first two | last two) columns.
  const Coef &m11 = M(0, 0), &m12 = M(0, 1), &m21 = M(1, 0), &m22 = M(1, 1);
  Matrix2 E3L = Matrix2::of(m11 * m11, m12 * m12, m21 * m21, m22 * m22);
  Matrix2 E3R = Matrix2::of(m11 * m12, m11 * m12, m21 * m22, m21 * m22);
  Matrix2 E4L = Matrix2::of(m11 * m21, m12 * m22, m11 * m21, m12 * m22);
  Matrix2 E4R = Matrix2::of(m11 * m22, m12 * m21, m12 * m21, m11 * m22);

  ReducedSystem r;
  r.a1 = lam1;
  r.a2 = lam2;
  r.B = Minv * (g.A2 * M);
  r.C = Minv * (g.A3 * E3L + g.A4 * E4L);
  r.D = Minv * (g.A3 * E3R + g.A4 * E4R);
  r.M = M;
  return r;
}

DivergenceForm divergence_form(const ReducedSystem& sys) {
  bool u_ok = sys.D(0, 0) == sys.D(0, 1);
  bool v_ok = sys.D(1, 0) == sys.D(1, 1);
  if (u_ok && v_ok) return DivergenceForm::Full;
  if (u_ok) return DivergenceForm::UOnly;
  if (v_ok) return DivergenceForm::VOnly;
  return DivergenceForm::None;
}

std::vector<SpaceApplicability> applicable_spaces(const ReducedSystem& sys) {
  bool u_ok = sys.D(0, 0) == sys.D(0, 1);
  bool v_ok = sys.D(1, 0) == sys.D(1, 1);
  auto reason = [&](bool need_u, bool need_v) {
    std::string r;
    if (need_u && !u_ok) r = "mean of u not preserved (d11 != d12)";
    if (need_v && !v_ok) {
      if (!r.empty()) r += "; ";
      r += "mean of v not preserved (d21 != d22)";
    }
    return r;
  };
  std::vector<SpaceApplicability> out;
  out.push_back({SpaceType{1, std::nullopt, std::nullopt}, u_ok && v_ok, reason(true, true)});
  out.push_back({SpaceType{2, std::nullopt, std::nullopt}, u_ok, reason(true, false)});
  out.push_back({SpaceType{3, std::nullopt, std::nullopt}, v_ok, reason(false, true)});
  out.push_back({SpaceType{4, std::nullopt, std::nullopt}, true, ""});
  return out;
}

ScaledSystem scale(const ReducedSystem& sys, const SpaceType& sp, const Rat& lambda) {
  if (lambda < 1) throw InvalidParams("scale: lambda must be >= 1");
  if (sp.k < 1 || sp.k > 4) throw InvalidParams("scale: space k must be in 1..4");
  for (const auto& entry : applicable_spaces(sys))
    if (entry.space.k == sp.k && !entry.applicable) throw InapplicableSpace(entry.reason);

  Rat m1 = sp.m1.value_or(Rat(0)), m2 = sp.m2.value_or(Rat(0));
  // Mean shifts enter the u_x/v_x coefficients through C and D; the diagonal
  // factors depend on which means the space fixes.
  Rat c1 = 0, c2 = 0, d1 = 0, d2 = 0;
  switch (sp.k) {
    case 1: c1 = m1, c2 = m2, d1 = m2, d2 = m1; break;
    case 2: c1 = m1, d2 = m1; break;
    case 3: c2 = m2, d1 = m2; break;
    case 4: break;
  }
  Matrix2 shifted =
      sys.B - sys.C * Matrix2::of_rat(c1, 0, 0, c2) - sys.D * Matrix2::of_rat(d1, 0, 0, d2);

  ScaledSystem out;
  out.lambda = lambda;
  out.B_lambda = shifted.scaled(coef(Rat(1) / (lambda * lambda)));
  out.C = sys.C;
  out.D = sys.D;
  out.transform.m1 = m1;
  out.transform.m2 = m2;
  return out;
}

namespace {

Rat need_param(const std::map<std::string, Rat>& p, const std::string& key,
               const std::string& preset_name) {
  auto it = p.find(key);
  if (it == p.end()) throw InvalidParams(preset_name + ": missing parameter " + key);
  return it->second;
}

Rat opt_param(const std::map<std::string, Rat>& p, const std::string& key, const Rat& dflt) {
  auto it = p.find(key);
  return it == p.end() ? dflt : it->second;
}

}  // namespace

AnySystem preset(const std::string& name, const std::map<std::string, Rat>& params) {
  if (name == "majda-biello") {
    Rat a2 = need_param(params, "a2", name);
    if (a2 == 0) throw InvalidParams("majda-biello: a2 must be nonzero");
    ReducedSystem s;
    s.a1 = coef(1);
    s.a2 = coef(a2);
    s.B = Matrix2::of_rat(0, 0, 0, 0);
    s.C = Matrix2::of_rat(0, -1, 0, 0);
    s.D = Matrix2::of_rat(0, 0, -1, -1);
    return s;
  }
  if (name == "hirota-satsuma") {
    Rat a1 = need_param(params, "a1", name);
    if (a1 == 0) throw InvalidParams("hirota-satsuma: a1 must be nonzero");
    Rat c12 = opt_param(params, "c12", Rat(1));
    ReducedSystem s;
    s.a1 = coef(a1);
    s.a2 = coef(1);
    s.B = Matrix2::of_rat(0, 0, 0, 0);
    s.C = Matrix2::of_rat(Rat(-6) * a1, c12, 0, 0);
    s.D = Matrix2::of_rat(0, 0, 0, -3);
    return s;
  }
  if (name == "gear-grimshaw") {
    Rat r1 = need_param(params, "rho1", name);
    Rat r2 = need_param(params, "rho2", name);
    if (r1 <= 0 || r2 <= 0) throw InvalidParams("gear-grimshaw: rho1 and rho2 must be positive");
    Rat s1 = opt_param(params, "sigma1", Rat(0));
    Rat s2 = opt_param(params, "sigma2", Rat(0));
    Rat s3 = opt_param(params, "sigma3", Rat(0));
    Rat s4 = opt_param(params, "sigma4", Rat(0));
    GeneralSystem g;
    g.A1 = Matrix2::of_rat(1, s3, r2 * s3 / r1, Rat(1) / r1);
    g.A2 = Matrix2::of_rat(0, 0, 0, s4 / r1);
    g.A3 = Matrix2::of_rat(-1, s1, r2 * s2 / r1, Rat(-1) / r1);
    g.A4 = Matrix2::of_rat(s2, s2, r2 * s1 / r1, r2 * s1 / r1);
    return g;
  }
  if (name == "abcd-coupled") {
    GeneralSystem g;
    g.A1 = Matrix2::of_rat(0, Rat(1, 6), Rat(1, 6), 0);
    g.A2 = Matrix2::of_rat(0, 1, 1, 0);
    g.A3 = Matrix2::of_rat(0, 0, 0, -1);
    g.A4 = Matrix2::of_rat(-1, -1, 0, 0);
    return g;
  }
  throw UnknownPreset(name);
}

ReducedSystem preset_reduced(const std::string& name, const std::map<std::string, Rat>& params) {
  AnySystem s = preset(name, params);
  if (auto* r = std::get_if<ReducedSystem>(&s)) return *r;
  return reduce(std::get<GeneralSystem>(s));
}

GGClassification gg_regime(const Rat& rho1, const Rat& rho2, const Rat& sigma3) {
  if (rho1 <= 0 || rho2 <= 0) throw InvalidParams("gg_regime: rho1 and rho2 must be positive");
  if (sigma3 == 0)
    throw InvalidParams("gg_regime: sigma3 must be nonzero (A1 is already diagonal otherwise)");
  Rat rs2 = rho2 * sigma3 * sigma3;
  if (rs2 == 1) throw DegenerateA1();

  Rat disc = (rho1 - 1) * (rho1 - 1) + 4 * rho1 * rs2;
  Quad root = Quad::sqrt_of(disc);
  Coef denom = coef(2 * rho1);
  GGClassification out;
  out.lambda1 = (coef(rho1 + 1) + root) / denom;
  out.lambda2 = (coef(rho1 + 1) - root) / denom;
  out.theta = out.lambda2 / out.lambda1;
  if (rs2 > 1) {
    out.regime = GGRegime::neg;
  } else {
    Rat qd = rho1 * rho1 + (25 * rs2 - 17) / 4 * rho1 + 1;
    out.regime = qd > 0 ? GGRegime::lowpos : GGRegime::midpos;
  }
  return out;
}

namespace {

std::string coef_str(const Coef& c) {
  if (c.is_rational()) return rat_str(c.rational_value());
  std::ostringstream os;
  os << "surd(" << rat_str(c.a()) << "," << rat_str(c.b()) << "," << c.d() << ")";
  return os.str();
}

Coef coef_parse(const std::string& tok) {
  if (tok.rfind("surd(", 0) == 0 && tok.back() == ')') {
    std::string inner = tok.substr(5, tok.size() - 6);
    auto c1 = inner.find(',');
    auto c2 = inner.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw std::invalid_argument("bad surd entry: " + tok);
    return Quad(parse_rat(inner.substr(0, c1)), parse_rat(inner.substr(c1 + 1, c2 - c1 - 1)),
                Int(inner.substr(c2 + 1)));
  }
  return coef(parse_rat(tok));
}

void print_matrix(std::ostringstream& os, const char* name, const Matrix2& m) {
  os << "[" << name << "]\n";
  for (int i = 0; i < 2; ++i) os << coef_str(m(i, 0)) << " " << coef_str(m(i, 1)) << "\n";
}

}  // namespace

std::string to_text(const ReducedSystem& sys) {
  std::ostringstream os;
  os << "[dispersion]\n" << coef_str(sys.a1) << " " << coef_str(sys.a2) << "\n";
  print_matrix(os, "B", sys.B);
  print_matrix(os, "C", sys.C);
  print_matrix(os, "D", sys.D);
  return os.str();
}

ReducedSystem system_from_text(const std::string& text) {
  ReducedSystem sys;
  std::istringstream in(text);
  std::string line, section;
  int row = 0;
  bool have_dispersion = false;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    if (line.front() == '[') {
      section = line;
      row = 0;
      continue;
    }
    std::istringstream ls(line);
    std::string t1, t2;
    if (!(ls >> t1 >> t2)) throw std::invalid_argument("expected two entries per line: " + line);
    Coef x = coef_parse(t1), y = coef_parse(t2);
    if (section == "[dispersion]") {
      sys.a1 = x;
      sys.a2 = y;
      have_dispersion = true;
    } else if (section == "[B]" || section == "[C]" || section == "[D]") {
      if (row > 1) throw std::invalid_argument("too many rows in section " + section);
      Matrix2& m = section == "[B]" ? sys.B : section == "[C]" ? sys.C : sys.D;
      m(row, 0) = x;
      m(row, 1) = y;
      ++row;
    } else {
      throw std::invalid_argument("unknown section: " + section);
    }
  }
  if (!have_dispersion) throw std::invalid_argument("missing [dispersion] section");
  if (sys.a1.sign() == 0 || sys.a2.sign() == 0)
    throw std::invalid_argument("dispersion coefficients must be nonzero");
  return sys;
}

}  // namespace ckdv
