#pragma once
#include <stdexcept>
#include <string>

namespace ckdv {

// Dispersion ratio outside the range a construction admits; the message
// names the violated bound.
struct ROutOfRange : std::domain_error {
  ROutOfRange() : std::domain_error("sharp index requires r >= 1/4") {}
  explicit ROutOfRange(const std::string& why) : std::domain_error(why) {}
};

}  // namespace ckdv
