#pragma once
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "ckdv/rat.hpp"
#include "ckdv/surd.hpp"

namespace ckdv {

// Infinite continued fraction [a0; a1, a2, ...] given by a replayable rule.
// Partial quotients and convergent denominators are cached; at(n) for the
// same n always returns the same value, so streams serialize as a prefix
// plus the rule name.
class CFStream {
 public:
  // rule(n, a, q) -> a_n, given all earlier partial quotients a[0..n-1] and
  // convergent denominators q[i] = denom of i-th convergent, i < n.
  using Rule = std::function<Int(size_t, const std::vector<Int>&, const std::vector<Int>&)>;

  CFStream(std::string name, Rule rule);
  static CFStream periodic(std::vector<Int> head, std::vector<Int> cycle);

  Int at(size_t n) const;
  Int q_at(size_t n) const;  // denominator of n-th convergent
  Int p_at(size_t n) const;
  const std::string& rule_name() const;
  // Period info when the stream was built from an explicit periodic rule.
  bool has_period() const;
  size_t preperiod() const;
  size_t period() const;

  std::string serialize(size_t prefix_len) const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

// A real number given exactly (rational / quadratic surd) or as a CF stream.
using RealSpec = std::variant<Rat, Quad, CFStream>;

inline bool is_rational(const RealSpec& x) {
  if (std::holds_alternative<Rat>(x)) return true;
  if (auto* q = std::get_if<Quad>(&x)) return q->is_rational();
  return false;
}

std::string realspec_str(const RealSpec& x);
double realspec_d(const RealSpec& x);

}  // namespace ckdv
