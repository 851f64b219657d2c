#pragma once

#include "padickg/kleingordon.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace padickg {

struct SuiteConfig {
  std::uint64_t seed = 0;
  std::vector<int> primes{3, 7, 11, 19};
  int precision = kDefaultPrecision;
  double eps = 1e-9;
  PiConvention convention = PiConvention::unit_tau;
  int refinement_cap = 8;
  std::size_t budget = 200000;
};

struct Record {
  std::string suite;
  std::string check;
  double value = 0.0;      // residual or measured quantity
  double tolerance = 0.0;  // pass iff value <= tolerance (or >= for lower bounds)
  bool lower_bound = false;
  bool pass = false;
  std::string note;
  std::size_t samples = 0;
};

// Names of the property suites, in execution order.
const std::vector<std::string>& suite_names();
// Runs one suite; throws std::invalid_argument for unknown names.
std::vector<Record> run_suite(const std::string& name, const SuiteConfig& cfg);

}  // namespace padickg
