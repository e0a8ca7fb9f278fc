// kdvlab: command-line laboratory for coupled KdV-KdV systems on the torus.
// Every subcommand prints one JSON document to stdout; CSV artifacts land in
// --out. Outputs are deterministic: identical invocations produce identical
// bytes.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ckdv/bilinear.hpp"
#include "ckdv/critical_index.hpp"
#include "ckdv/diophantine.hpp"
#include "ckdv/resonance.hpp"
#include "ckdv/spectral.hpp"
#include "ckdv/system_model.hpp"

using json = nlohmann::ordered_json;
using namespace ckdv;

namespace {

struct ParseFailure : std::runtime_error {
  explicit ParseFailure(const std::string& why) : std::runtime_error(why) {}
};

// Exact rational input: "p", "p/q", or a terminating decimal like "-0.125".
Rat parse_rat(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace((unsigned char)c)) s += c;
  if (s.empty()) throw ParseFailure("empty rational");
  try {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
      Int p(s.substr(0, slash)), q(s.substr(slash + 1));
      if (q == 0) throw ParseFailure("zero denominator in \"" + raw + "\"");
      return Rat(p) / Rat(q);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      Int scale = 1;
      for (size_t i = dot + 1; i < s.size(); ++i) scale *= 10;
      return Rat(Int(digits)) / Rat(scale);
    }
    return Rat(Int(s));
  } catch (const ParseFailure&) {
    throw;
  } catch (const std::exception&) {
    throw ParseFailure("not a rational: \"" + raw + "\"");
  }
}

std::string rstr(const Rat& r) {
  Int p = num(r), q = den(r);
  return q == 1 ? p.str() : p.str() + "/" + q.str();
}

// Threshold value and openness split into the record's two fields.
std::string threshold_value(const Threshold& t) {
  return t.is_infinite() ? "inf" : rstr(*t.value);
}

json number_or_integer(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15)
    return json((long long)v);
  return json(v);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseFailure("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const json& doc) { std::cout << doc.dump(2) << "\n"; }

std::ofstream open_artifact(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream out(std::filesystem::path(dir) / name);
  if (!out) throw std::runtime_error("cannot write " + name + " under " + dir);
  return out;
}

// ---------------------------------------------------------------- systems

struct SystemFlags {
  std::string preset, file;
  std::map<std::string, std::string> raw;  // provided preset parameters

  void attach(CLI::App* cmd, bool with_file = true) {
    cmd->add_option("--preset", preset,
                    "named system: majda-biello, hirota-satsuma, gear-grimshaw, abcd-coupled");
    if (with_file)
      cmd->add_option("--file", file, "coefficient file (format written by the classify docs)");
    for (const char* p : {"a1", "a2", "b12", "c12", "rho1", "rho2", "sigma1", "sigma2", "sigma3",
                          "sigma4"}) {
      raw[p] = {};
      cmd->add_option("--" + std::string(p), raw[p], "preset parameter " + std::string(p));
    }
  }

  std::map<std::string, Rat> params() const {
    std::map<std::string, Rat> out;
    for (const auto& [k, v] : raw)
      if (!v.empty()) out[k] = parse_rat(v);
    return out;
  }

  ReducedSystem build() const {
    if (!preset.empty() && !file.empty())
      throw ParseFailure("--preset and --file are mutually exclusive");
    if (!preset.empty()) return preset_reduced(preset, params());
    if (!file.empty()) {
      std::string text = slurp(file);
      try {
        return system_from_text(text);
      } catch (const std::exception& e) {
        throw ParseFailure(file + ": " + e.what());
      }
    }
    throw ParseFailure("one of --preset or --file is required");
  }
};

SpaceType make_space(int k, const std::string& m1raw, const std::string& m2raw) {
  auto mean = [](const std::string& raw) { return raw.empty() ? Rat(0) : parse_rat(raw); };
  switch (k) {
    case 1: return SpaceType{1, mean(m1raw), mean(m2raw)};
    case 2: return SpaceType{2, mean(m1raw), std::nullopt};
    case 3: return SpaceType{3, std::nullopt, mean(m2raw)};
    default: return SpaceType{4, std::nullopt, std::nullopt};
  }
}

// --------------------------------------------------------------- classify

json classification_record(const Classification& c) {
  json rec;
  rec["space"] = c.k;
  rec["applicable"] = c.applicable;
  if (!c.reason.empty()) rec["reason"] = c.reason;
  rec["s_star"] = threshold_value(c.s_star);
  rec["kind"] = c.s_star.kind == BoundKind::Open ? "Open" : "Closed";
  json clauses = json::array();
  for (const Clause& cl : c.clauses) {
    json j;
    j["source"] = cl.source;
    j["condition"] = cl.condition;
    j["threshold"] = cl.threshold.str();
    clauses.push_back(j);
  }
  rec["clauses"] = clauses;
  if (c.gwp) {
    rec["gwp"] = c.gwp->str();
    if (!c.gwp_note.empty()) rec["gwp_note"] = c.gwp_note;
  }
  return rec;
}

int cmd_classify(const SystemFlags& sf, std::vector<int> spaces, const std::string& m1,
                 const std::string& m2) {
  ReducedSystem sys = sf.build();
  if (spaces.empty()) spaces = {1, 2, 3, 4};
  json out = json::array();
  for (int k : spaces) out.push_back(classification_record(classify(sys, make_space(k, m1, m2))));
  emit(out);
  return 0;
}

// ---------------------------------------------------------------- srindex

int cmd_srindex(const std::string& r_raw, const std::string& sigma_raw, int depth) {
  if (!r_raw.empty() && !sigma_raw.empty())
    throw ParseFailure("--r and --jarnik-sigma are mutually exclusive");
  json out;
  if (!r_raw.empty()) {
    SRecord rec = sharp_index(parse_rat(r_raw));
    out["r"] = rstr(rec.r);
    out["rho"] = realspec_str(rec.rho_r);
    out["sigma"] = number_or_integer(rec.sigma_r.value);
    out["sigma_exact"] = rec.sigma_r.exact;
    out["s_r"] = rstr(rec.s_r);
    out["exact"] = rec.exact;
  } else if (!sigma_raw.empty()) {
    RealSpec rho = sigma_raw == "inf" ? jarnik_liouville() : jarnik_construct(parse_rat(sigma_raw));
    (void)depth;
    SEstimate est = sharp_index_stream(rho);
    out["sigma"] = sigma_raw == "inf" ? json("inf") : json(rstr(parse_rat(sigma_raw)));
    out["sigma_estimate"] = est.sigma.value;
    out["sigma_depth"] = (long long)est.sigma.depth;
    out["s_r"] = est.s_r;
    out["exact"] = est.exact;
  } else {
    throw ParseFailure("one of --r or --jarnik-sigma is required");
  }
  emit(out);
  return 0;
}

// ------------------------------------------------------------------ dioph

int cmd_dioph(const std::string& rat_raw, const std::string& surd_raw,
              const std::string& sigma_raw, bool liouville, int depth, int n_convergents) {
  int sources = !rat_raw.empty() + !surd_raw.empty() + !sigma_raw.empty() + (int)liouville;
  if (sources != 1)
    throw ParseFailure("exactly one of --rat, --surd, --jarnik-sigma, --liouville is required");

  RealSpec x = Rat(0);
  if (!rat_raw.empty()) {
    x = parse_rat(rat_raw);
  } else if (!surd_raw.empty()) {
    std::istringstream ss(surd_raw);
    std::string a, b, d;
    if (!(ss >> a >> b >> d)) throw ParseFailure("--surd wants \"a b d\" for a + b*sqrt(d)");
    try {
      x = Quad(parse_rat(a), parse_rat(b), Int(d));
    } catch (const ParseFailure&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseFailure(std::string("--surd: ") + e.what());
    }
  } else if (!sigma_raw.empty()) {
    x = jarnik_construct(parse_rat(sigma_raw));
  } else {
    x = jarnik_liouville();
  }

  IrrationalityExponent m = mu(x, depth);
  json out;
  out["x"] = realspec_str(x);
  out["mu"] = number_or_integer(m.value);
  out["mu_exact"] = m.exact;
  out["mu_depth"] = (long long)m.depth;
  if (!m.exact) out["mu_residual"] = m.residual;
  out["nu"] = number_or_integer(minimal_type_index(x, depth));
  json convs = json::array();
  for (const Convergent& c : convergents(x, n_convergents)) {
    json j;
    j["n"] = (long long)c.n;
    j["p"] = c.p.str();
    j["q"] = c.q.str();
    convs.push_back(j);
  }
  out["convergents"] = convs;
  emit(out);
  return 0;
}

// -------------------------------------------------------------- resonance

int cmd_resonance(const std::string& r_raw, const std::string& a1_raw, const std::string& b1_raw,
                  const std::string& b2_raw, const std::string& lambda_raw,
                  const std::string& k_raw, const std::string& delta_raw,
                  const std::string& tol_raw, int near_max, const std::string& csv_path,
                  const std::string& out_dir) {
  Rat r = parse_rat(r_raw);
  Rat a1 = a1_raw.empty() ? Rat(1) : parse_rat(a1_raw);
  Rat b1 = b1_raw.empty() ? Rat(0) : parse_rat(b1_raw);
  Rat b2 = b2_raw.empty() ? Rat(0) : parse_rat(b2_raw);
  Triple t = Triple::h2_form(Phase(a1, b1), Phase(Rat(r * a1), b2));
  LatticeWindow w(lambda_raw.empty() ? Rat(1) : parse_rat(lambda_raw),
                  k_raw.empty() ? Rat(60) : parse_rat(k_raw));

  json out;
  out["r"] = rstr(r);
  RootsReport roots = h_roots(r);
  json jr;
  jr["kind"] = roots.kind == RootCase::NoRealRoots ? "none"
               : roots.kind == RootCase::DoubleRoot ? "double"
                                                    : "two";
  json vals = json::array();
  for (const RealSpec& root : roots.roots) vals.push_back(realspec_str(root));
  jr["values"] = vals;
  out["roots"] = jr;

  std::optional<Rat> delta;
  if (!delta_raw.empty()) delta = parse_rat(delta_raw);
  SignificanceReport rep = significance_scan(t, w, delta);
  json js;
  js["delta_min"] = rstr(rep.delta_min);
  js["argmin"] = {{"k1", rstr(rep.argmin.k1)}, {"k2", rstr(rep.argmin.k2)},
                  {"k3", rstr(rep.argmin.k3)}};
  js["H_at_argmin"] = rstr(rep.h_at_argmin);
  if (rep.requested) js["requested"] = rstr(*rep.requested);
  js["pass"] = rep.pass;
  js["pairs_scanned"] = rep.pairs_scanned;
  out["scan"] = js;

  if (!tol_raw.empty()) {
    json near = json::array();
    auto hits = near_resonances(r, w, parse_rat(tol_raw));
    for (size_t i = 0; i < hits.size() && (int)i < near_max; ++i) {
      json j;
      j["k1"] = rstr(hits[i].k1);
      j["k2"] = rstr(hits[i].k2);
      j["root"] = hits[i].root;
      j["distance"] = hits[i].dist.str();
      near.push_back(j);
    }
    out["near"] = near;
  }

  if (!csv_path.empty()) {
    std::ofstream csv = open_artifact(out_dir, csv_path);
    write_scan_csv(t, w, csv);
    out["csv"] = (std::filesystem::path(out_dir) / csv_path).string();
  }
  emit(out);
  return 0;
}

// -------------------------------------------------------------- sharpness

int cmd_sharpness(bool list, const std::string& case_id, const std::string& s_raw,
                  const std::string& b_raw, const std::string& r_raw, const std::string& beta1_raw,
                  const std::string& beta2_raw, const std::string& grid_raw,
                  const std::string& out_dir) {
  if (list) {
    json out = json::array();
    for (const std::string& id : family_catalog()) out.push_back(id);
    emit(out);
    return 0;
  }
  if (case_id.empty() || s_raw.empty() || b_raw.empty())
    throw ParseFailure("--case, --s and --b are required (or use --list)");
  Rat s = parse_rat(s_raw), b = parse_rat(b_raw);
  Rat beta1 = beta1_raw.empty() ? Rat(0) : parse_rat(beta1_raw);
  Rat beta2 = beta2_raw.empty() ? Rat(0) : parse_rat(beta2_raw);

  std::vector<long long> grid;
  if (!grid_raw.empty()) {
    auto colon = grid_raw.find(':');
    if (colon == std::string::npos) throw ParseFailure("--grid-log2 wants lo:hi");
    int lo = std::stoi(grid_raw.substr(0, colon)), hi = std::stoi(grid_raw.substr(colon + 1));
    if (lo < 1 || hi < lo || hi > 60) throw ParseFailure("--grid-log2 out of range");
    for (int e = lo; e <= hi; ++e) grid.push_back(1LL << e);
  }

  SharpnessReport rep = [&] {
    if (!r_raw.empty())
      return fit_exponent(case_id, Rat(1), parse_rat(r_raw), s, b, grid, beta1, beta2);
    // no ratio given: probe the case's admissible range deterministically
    const Rat candidates[] = {Rat(1, 8), Rat(1), Rat(1, 2), Rat(2)};
    for (size_t i = 0; i + 1 < std::size(candidates); ++i) {
      try {
        return fit_exponent(case_id, Rat(1), candidates[i], s, b, grid, beta1, beta2);
      } catch (const ROutOfRange&) {
      }
    }
    return fit_exponent(case_id, Rat(1), candidates[3], s, b, grid, beta1, beta2);
  }();

  std::string csv_name = "sharpness_" + rep.case_id + ".csv";
  {
    std::ofstream csv = open_artifact(out_dir, csv_name);
    csv << "N,R_low,R_high\n" << std::setprecision(17);
    for (const SharpnessSample& smp : rep.samples)
      csv << smp.scale << "," << smp.ratio.lo << "," << smp.ratio.hi << "\n";
  }

  json out;
  out["case"] = rep.case_id;
  out["s"] = rstr(rep.s);
  out["b"] = rstr(rep.b);
  out["predicted_exponent"] = rstr(rep.predicted);
  out["fitted_slope"] = rep.fit.slope;
  out["max_residual"] = rep.fit.max_residual;
  out["fails"] = rep.fails;
  out["samples"] = (long long)rep.samples.size();
  out["csv"] = (std::filesystem::path(out_dir) / csv_name).string();
  emit(out);
  return 0;
}

// --------------------------------------------------------------- simulate

json ledger_summary(const EnergyLedger& led) {
  json out;
  out["rows"] = (long long)led.rows.size();
  if (!led.rows.empty()) {
    out["E1_initial"] = led.rows.front().E1;
    out["E2_initial"] = led.rows.front().E2;
    out["E1_drift"] = led.max_drift_E1();
    out["E2_drift"] = led.max_drift_E2();
    out["mean_u_initial"] = led.rows.front().mean_u;
    out["mean_v_initial"] = led.rows.front().mean_v;
    out["mean_u_final"] = led.rows.back().mean_u;
    out["mean_v_final"] = led.rows.back().mean_v;
  }
  return out;
}

int cmd_simulate_evolve(const SystemFlags& sf, const std::string& u0_raw,
                        const std::string& v0_raw, double T, double dt, int N,
                        const std::string& lambda_raw, int record_every,
                        const std::string& out_dir, bool write_artifacts) {
  ReducedSystem sys = sf.build();
  // only the named systems carry a conserved pair; plain coefficient files
  // get the diagnostic quadratic readout
  EnergyForm form;
  if (!sf.preset.empty()) {
    form = energy_form(sf.preset, sf.params());
  } else {
    form.w1_u = form.w1_v = 1;
    form.g_u = form.g_v = 1;
  }
  Grid g(lambda_raw.empty() ? Rat(1) : parse_rat(lambda_raw), N);
  InitialData u0 = parse_initial_data(u0_raw), v0 = parse_initial_data(v0_raw);
  SimResult res = simulate(sys, form, g, u0, v0, T, dt, record_every);

  json out;
  out["system"] = !sf.preset.empty() ? sf.preset : sf.file;
  out["conserved_pair"] = !sf.preset.empty();
  out["N"] = N;
  out["lambda"] = rstr(g.lambda);
  out["T"] = T;
  out["dt"] = dt > 0 ? dt : default_dt(sys, g, make_state(g, u0, v0));
  out["ledger"] = ledger_summary(res.ledger);
  if (write_artifacts) {
    std::ofstream led = open_artifact(out_dir, "ledger.csv");
    res.ledger.write_csv(led);
    Workspace ws(g);
    std::ofstream st = open_artifact(out_dir, "final_state.csv");
    write_state_csv(ws, res.final_state, st);
    out["artifacts"] = {(std::filesystem::path(out_dir) / "ledger.csv").string(),
                        (std::filesystem::path(out_dir) / "final_state.csv").string()};
  }
  emit(out);
  return 0;
}

json triad_arm_record(const TriadArm& arm) {
  json j;
  j["k1"] = arm.k1;
  j["k2"] = arm.k2;
  j["k3"] = arm.k3;
  j["resonant"] = arm.resonant;
  j["transfer"] = arm.transfer;
  j["E1_drift"] = arm.ledger.max_drift_E1();
  return j;
}

int cmd_simulate_triad(const std::string& r_raw, const std::string& detune_raw, double A1,
                       double A2, double T, const std::string& out_dir, bool write_artifacts) {
  std::optional<long long> detune;
  if (!detune_raw.empty()) detune = std::stoll(detune_raw);
  std::optional<double> horizon;
  if (T > 0) horizon = T;
  TriadOutcome outcome = resonant_triad_experiment(parse_rat(r_raw), detune, A1, A2, horizon);

  json out;
  out["r"] = rstr(outcome.r);
  out["T"] = outcome.T;
  out["exact"] = triad_arm_record(outcome.exact);
  out["detuned"] = triad_arm_record(outcome.detuned);
  out["ratio"] = std::isinf(outcome.ratio) ? json("inf") : json(outcome.ratio);
  if (write_artifacts) {
    std::ofstream a = open_artifact(out_dir, "triad_exact.csv");
    outcome.exact.ledger.write_csv(a);
    std::ofstream b = open_artifact(out_dir, "triad_detuned.csv");
    outcome.detuned.ledger.write_csv(b);
    out["artifacts"] = {(std::filesystem::path(out_dir) / "triad_exact.csv").string(),
                        (std::filesystem::path(out_dir) / "triad_detuned.csv").string()};
  }
  emit(out);
  return 0;
}

int cmd_simulate_scaling(const SystemFlags& sf, int space, const std::string& m1,
                         const std::string& m2, const std::string& lambda_raw,
                         const std::string& u0_raw, const std::string& v0_raw, double T, double dt,
                         int N) {
  ReducedSystem sys = sf.build();
  Rat lambda = lambda_raw.empty() ? Rat(2) : parse_rat(lambda_raw);
  double gap = scaling_consistency(sys, make_space(space, m1, m2), lambda,
                                   parse_initial_data(u0_raw), parse_initial_data(v0_raw), T, N,
                                   dt);
  json out;
  out["system"] = !sf.preset.empty() ? sf.preset : sf.file;
  out["space"] = space;
  out["lambda"] = rstr(lambda);
  out["T"] = T;
  out["N"] = N;
  out["discrepancy"] = gap;
  emit(out);
  return 0;
}

int dispatch_mapped(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseFailure& e) {
    std::cerr << "kdvlab: " << e.what() << "\n";
    return 2;
  } catch (const UnknownCase& e) {
    std::cerr << "kdvlab: " << e.what() << "\n";
    return 3;
  } catch (const UnknownPreset& e) {
    std::cerr << "kdvlab: " << e.what() << "\n";
    return 3;
  } catch (const InvalidParams& e) {
    std::cerr << "kdvlab: " << e.what() << "\n";
    return 3;
  } catch (const SigmaOutOfRange& e) {
    std::cerr << "kdvlab: " << e.what() << "\n";
    return 3;
  } catch (const ROutOfRange& e) {
    std::cerr << "kdvlab: " << e.what() << "\n";
    return 3;
  } catch (const InapplicableSpace& e) {
    std::cerr << "kdvlab: " << e.what() << "\n";
    return 4;
  } catch (const InvalidRoots& e) {
    std::cerr << "kdvlab: " << e.what() << "\n";
    return 4;
  } catch (const NotDiagonalizable& e) {
    std::cerr << "kdvlab: " << e.what() << "\n";
    return 4;
  } catch (const ZeroEigenvalue& e) {
    std::cerr << "kdvlab: " << e.what() << "\n";
    return 4;
  } catch (const DegenerateA1& e) {
    std::cerr << "kdvlab: " << e.what() << "\n";
    return 4;
  } catch (const PresetMismatch& e) {
    std::cerr << "kdvlab: " << e.what() << "\n";
    return 4;
  } catch (const NonFinite& e) {
    std::cerr << "kdvlab: " << e.what() << "\n";
    return 5;
  } catch (const IncompatibleBoxes& e) {
    std::cerr << "kdvlab: " << e.what() << "\n";
    return 5;
  } catch (const ExhaustedDepth& e) {
    std::cerr << "kdvlab: " << e.what() << "\n";
    return 6;
  } catch (const std::invalid_argument& e) {
    std::cerr << "kdvlab: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "kdvlab: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "kdvlab: internal: " << e.what() << "\n";
    return 7;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "laboratory for coupled KdV-KdV systems on the torus: critical index\n"
      "classification, Diophantine approximation, resonance scans, bilinear\n"
      "sharpness fits and conservative spectral simulation"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read flags from an INI file ([subcommand] sections)");

  // classify ---------------------------------------------------------------
  auto* classify_cmd = app.add_subcommand(
      "classify", "well-posedness thresholds of a system across the four scaling spaces");
  SystemFlags classify_sys;
  classify_sys.attach(classify_cmd);
  std::vector<int> spaces;
  classify_cmd->add_option("--space", spaces, "space index 1..4 (repeatable; default: all)")
      ->check(CLI::Range(1, 4));
  std::string cl_m1, cl_m2;
  classify_cmd->add_option("--m1", cl_m1, "u mean for spaces 1 and 2 (default 0)");
  classify_cmd->add_option("--m2", cl_m2, "v mean for spaces 1 and 3 (default 0)");

  // srindex ----------------------------------------------------------------
  auto* srindex_cmd = app.add_subcommand(
      "srindex", "sharp index s_r of a dispersion ratio via sqrt(12r-3) and its "
                 "irrationality exponent");
  std::string sr_r, sr_sigma;
  int sr_depth = 25;
  srindex_cmd->add_option("--r", sr_r, "dispersion ratio (rational, >= 1/4)");
  srindex_cmd->add_option("--jarnik-sigma", sr_sigma,
                          "estimate the index for a constructed number of this exponent "
                          "(rational >= 2 or inf)");
  srindex_cmd->add_option("--depth", sr_depth, "estimation depth");

  // dioph ------------------------------------------------------------------
  auto* dioph_cmd = app.add_subcommand(
      "dioph", "continued fractions, irrationality exponent and minimal type index");
  std::string di_rat, di_surd, di_sigma;
  bool di_liouville = false;
  int di_depth = 25, di_conv = 8;
  dioph_cmd->add_option("--rat", di_rat, "rational input p/q");
  dioph_cmd->add_option("--surd", di_surd, "quadratic surd \"a b d\" meaning a + b*sqrt(d)");
  dioph_cmd->add_option("--jarnik-sigma", di_sigma,
                        "constructed number with prescribed exponent (rational >= 2)");
  dioph_cmd->add_flag("--liouville", di_liouville, "constructed number of infinite exponent");
  dioph_cmd->add_option("--depth", di_depth, "expansion depth");
  dioph_cmd->add_option("--convergents", di_conv, "how many convergents to list");

  // resonance --------------------------------------------------------------
  auto* resonance_cmd = app.add_subcommand(
      "resonance", "roots of h_r, exhaustive significance scan and near-resonance search");
  std::string re_r, re_a1, re_b1, re_b2, re_lambda, re_k, re_delta, re_tol, re_csv,
      re_out = ".";
  int re_near_max = 10;
  resonance_cmd->add_option("--r", re_r, "dispersion ratio (rational)")->required();
  resonance_cmd->add_option("--a1", re_a1, "repeated-leg cubic coefficient (default 1)");
  resonance_cmd->add_option("--b1", re_b1, "repeated-leg transport coefficient (default 0)");
  resonance_cmd->add_option("--b2", re_b2, "odd-leg transport coefficient (default 0)");
  resonance_cmd->add_option("--lambda", re_lambda, "torus scale (default 1)");
  resonance_cmd->add_option("--K", re_k, "frequency cutoff (default 60)");
  resonance_cmd->add_option("--delta", re_delta, "required significance constant");
  resonance_cmd->add_option("--tol", re_tol, "near-resonance distance tolerance");
  resonance_cmd->add_option("--near-max", re_near_max, "cap on listed near-resonances");
  resonance_cmd->add_option("--csv", re_csv, "write the full scan grid to this CSV file");
  resonance_cmd->add_option("--out", re_out, "artifact directory (default .)");

  // sharpness --------------------------------------------------------------
  auto* sharpness_cmd = app.add_subcommand(
      "sharpness", "log-log slope of a counterexample family's functional ratio");
  std::string sh_case, sh_s, sh_b, sh_r, sh_beta1, sh_beta2, sh_grid, sh_out = ".";
  bool sh_list = false;
  sharpness_cmd->add_flag("--list", sh_list, "print the family catalog and exit");
  sharpness_cmd->add_option("--case", sh_case, "family id (see --list)");
  sharpness_cmd->add_option("--s", sh_s, "regularity parameter (rational)");
  sharpness_cmd->add_option("--b", sh_b, "auxiliary exponent (rational)");
  sharpness_cmd->add_option("--r", sh_r, "dispersion ratio (default: probed per family)");
  sharpness_cmd->add_option("--beta1", sh_beta1, "first transport coefficient");
  sharpness_cmd->add_option("--beta2", sh_beta2, "second transport coefficient");
  sharpness_cmd->add_option("--grid-log2", sh_grid, "scale grid as lo:hi powers of two");
  sharpness_cmd->add_option("--out", sh_out, "artifact directory (default .)");

  // simulate ---------------------------------------------------------------
  auto* simulate_cmd = app.add_subcommand(
      "simulate", "spectral evolution with energy ledger; triad and scaling experiments");
  SystemFlags sim_sys;
  sim_sys.attach(simulate_cmd);
  std::string sim_exp = "evolve";
  simulate_cmd->add_option("--experiment", sim_exp, "evolve | triad | scaling")
      ->check(CLI::IsMember({"evolve", "triad", "scaling"}));
  std::string sim_u0 = "0.2*cos(x) + 0.1*cos(2x)", sim_v0 = "0.15*cos(x+0.5)";
  simulate_cmd->add_option("--u0", sim_u0, "first component data, a sum of A*cos(kx+phi)");
  simulate_cmd->add_option("--v0", sim_v0, "second component data");
  double sim_T = 1.0, sim_dt = 0.0, sim_A1 = 0.1, sim_A2 = 0.1;
  int sim_N = 256, sim_record = 0, sim_space = 1;
  std::string sim_lambda, sim_out = ".", sim_triad_r, sim_detune, sim_m1, sim_m2;
  bool sim_write = false;
  simulate_cmd->add_option("--T", sim_T, "time horizon");
  simulate_cmd->add_option("--dt", sim_dt, "timestep (0 = automatic)");
  simulate_cmd->add_option("--N", sim_N, "collocation points (power of two)");
  simulate_cmd->add_option("--lambda", sim_lambda, "torus scale (default 1; 2 for scaling)");
  simulate_cmd->add_option("--record-every", sim_record, "ledger cadence in steps");
  simulate_cmd->add_option("--triad-r", sim_triad_r, "dispersion ratio for --experiment triad");
  simulate_cmd->add_option("--detune", sim_detune, "lattice detune of the comparison arm");
  simulate_cmd->add_option("--A1", sim_A1, "triad seed amplitude on k1");
  simulate_cmd->add_option("--A2", sim_A2, "triad seed amplitude on k2");
  simulate_cmd->add_option("--space", sim_space, "scaling space index 1..4")
      ->check(CLI::Range(1, 4));
  simulate_cmd->add_option("--m1", sim_m1, "u mean of the scaling space (default 0)");
  simulate_cmd->add_option("--m2", sim_m2, "v mean of the scaling space (default 0)");
  simulate_cmd->add_option("--out", sim_out, "artifact directory (default .)");
  simulate_cmd->add_flag("--write", sim_write, "write ledger/state CSV artifacts to --out");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (classify_cmd->parsed())
    return dispatch_mapped([&] { return cmd_classify(classify_sys, spaces, cl_m1, cl_m2); });
  if (srindex_cmd->parsed())
    return dispatch_mapped([&] { return cmd_srindex(sr_r, sr_sigma, sr_depth); });
  if (dioph_cmd->parsed())
    return dispatch_mapped(
        [&] { return cmd_dioph(di_rat, di_surd, di_sigma, di_liouville, di_depth, di_conv); });
  if (resonance_cmd->parsed())
    return dispatch_mapped([&] {
      return cmd_resonance(re_r, re_a1, re_b1, re_b2, re_lambda, re_k, re_delta, re_tol,
                           re_near_max, re_csv, re_out);
    });
  if (sharpness_cmd->parsed())
    return dispatch_mapped([&] {
      return cmd_sharpness(sh_list, sh_case, sh_s, sh_b, sh_r, sh_beta1, sh_beta2, sh_grid,
                           sh_out);
    });
  if (simulate_cmd->parsed())
    return dispatch_mapped([&] {
      if (sim_exp == "triad")
        return cmd_simulate_triad(sim_triad_r, sim_detune, sim_A1, sim_A2,
                                  simulate_cmd->count("--T") ? sim_T : 0.0, sim_out, sim_write);
      if (sim_exp == "scaling")
        return cmd_simulate_scaling(sim_sys, sim_space, sim_m1, sim_m2, sim_lambda, sim_u0,
                                    sim_v0, simulate_cmd->count("--T") ? sim_T : 0.5, sim_dt,
                                    simulate_cmd->count("--N") ? sim_N : 64);
      return cmd_simulate_evolve(sim_sys, sim_u0, sim_v0, sim_T, sim_dt, sim_N, sim_lambda,
                                 sim_record, sim_out, sim_write);
    });
  return 7;
}
