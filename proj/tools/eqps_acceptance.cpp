#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "eqps/acceptance.hpp"
#include "eqps/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks over the bundled fixtures", "eqps_acceptance"};
  std::string fixtures = eqps::default_fixture_dir();
  std::uint64_t seed = eqps::kDefaultSeed;
  app.add_option("--fixtures", fixtures, "fixture directory");
  app.add_option("--seed", seed, "seed for randomized checks");
  CLI11_PARSE(app, argc, argv);

  int failed = 0;
  for (const auto& r : eqps::run_acceptance(fixtures, seed)) {
    std::cout << (r.passed ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.title;
    if (!r.passed) {
      std::cout << " -- " << r.detail;
      ++failed;
    }
    std::cout << '\n';
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criterion(s) failed") << '\n';
  return failed == 0 ? 0 : 1;
}
