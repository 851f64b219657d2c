#pragma once

#include "padickg/cell_function.hpp"

#include <cstdint>
#include <random>

namespace padickg {

// Deterministic source for randomized suites; identical seeds give identical streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  long integer(long lo, long hi);  // inclusive
  double real(double lo, double hi);
  bool coin() { return integer(0, 1) == 1; }
  Complex coefficient();  // real and imaginary parts in [-1, 1], bounded away from 0
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// sum_{j = low}^{high - 1} d_j p^j with random digits.
PadicScalar random_expansion(Rng& rng, int p, long low, long high, int precision = kDefaultPrecision);
// Point with digits at positions low..high-1 in every coordinate.
PadicVector random_point(Rng& rng, int p, std::size_t n, long low, long high);

struct FunctionShape {
  std::size_t dimension = 1;
  int min_terms = 1;
  int max_terms = 4;
  long min_level = -1;
  long max_level = 1;
  long center_low = -2;      // lowest digit position used in centers
  long modulation_low = -1;  // lowest digit position used in modulations
  long modulation_high = 1;  // modulations have digits below this position
  bool modulate = true;
  bool allow_nested = false;
};

CellFunction random_function(Rng& rng, int p, const FunctionShape& shape);

}  // namespace padickg
