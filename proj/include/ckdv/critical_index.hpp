#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ckdv/diophantine.hpp"
#include "ckdv/errors.hpp"
#include "ckdv/system_model.hpp"

namespace ckdv {

enum class BoundKind { Closed, Open };  // s >= t vs s > t (rendered "t+")

// Extended-real well-posedness threshold. Ordering is by value with
// Closed < Open at equal value; the infinite threshold is greatest.
struct Threshold {
  std::optional<Rat> value;  // nullopt = +infinity
  BoundKind kind = BoundKind::Closed;

  static Threshold closed(const Rat& v) { return {v, BoundKind::Closed}; }
  static Threshold open(const Rat& v) { return {v, BoundKind::Open}; }
  static Threshold infinite() { return {std::nullopt, BoundKind::Open}; }

  bool is_infinite() const { return !value.has_value(); }
  bool operator<(const Threshold& o) const;
  bool operator==(const Threshold& o) const;
  std::string str() const;  // "-1/2", "1/2+", "inf"
};

// Sharp-index record for a dispersion ratio r >= 1/4: rho = sqrt(12r - 3),
// sigma its irrationality exponent, and the index derived from sigma.
struct SRecord {
  Rat r;
  RealSpec rho_r;
  IrrationalityExponent sigma_r;
  Rat s_r;  // in {1/2, 1} for rational r
  bool exact = true;
};

SRecord sharp_index(const Rat& r);

// Sharp index driven by an approximate rho (typically a CFStream): the
// estimated sigma selects the same branches, yielding an estimated index.
struct SEstimate {
  IrrationalityExponent sigma;
  double s_r = 1.0;
  bool exact = false;
};

SEstimate sharp_index_stream(const RealSpec& rho);

// One satisfied well-posedness clause.
struct Clause {
  int k = 4;              // space index
  std::string source;     // case id, e.g. "main-1(d).2"
  std::string condition;  // the condition that held, human-readable
  Threshold threshold;
};

struct Classification {
  int k = 4;
  bool applicable = true;
  std::string reason;  // set when inapplicable or when s_star is infinite
  std::vector<Clause> clauses;  // satisfied clauses
  Threshold s_star = Threshold::infinite();
  std::optional<Threshold> gwp;  // global threshold when an energy argument applies
  std::string gwp_note;
};

// Evaluates the space-k well-posedness case table against the system;
// s_star is the minimum over satisfied clauses, infinite when the space is
// unusable or no clause holds.
Classification classify(const ReducedSystem& sys, const SpaceType& sp);

struct CriticalIndexSet {
  int k = 4;
  std::vector<Rat> isolated;                   // {-1/2} or {-1/2, -1/4}
  Rat interval_lo = Rat(1, 2), interval_hi = 1;
  bool includes_infinity = true;

  bool contains(const Threshold& t) const;
  std::string str() const;
};

CriticalIndexSet critical_index_set(int k);

// Published case tables for the named systems, with global extensions
// attached where the conserved energies apply. Names: "majda-biello" (a2),
// "hirota-satsuma" (a1, c12), "gear-grimshaw" (rho1, rho2, sigma1..sigma4).
std::vector<Classification> classify_application(const std::string& name,
                                                 const std::map<std::string, Rat>& params = {});

}  // namespace ckdv
