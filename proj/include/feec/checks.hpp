#pragma once

#include "feec/mms.hpp"

#include <string>
#include <vector>

namespace feec {

struct PropertyResult {
  std::string name;
  bool pass = false;
  double measure = 0.0;  // worst observed value (meaning depends on the property)
  std::string detail;
};

// Structure-preservation suite: d.d = 0, SPD/PSD matrices, discrete
// adjointness, energy decay, harmonic space dimensions, Hodge decomposition,
// elliptic projection residuals and rates. Deterministic; a few seconds.
std::vector<PropertyResult> property_suite();

}  // namespace feec
