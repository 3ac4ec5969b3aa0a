#pragma once

// End-to-end acceptance checks over the bundled fixtures. Each check returns
// one named result; randomized checks are driven by an explicit seed.

#include <cstdint>
#include <string>
#include <vector>

namespace eqps {

struct CriterionResult {
  std::string id;
  std::string title;
  bool passed = false;
  std::string detail;
};

std::vector<CriterionResult> run_acceptance(const std::string& fixture_dir, std::uint64_t seed);

}  // namespace eqps
