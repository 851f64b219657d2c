#include "padickg/random.hpp"

#include <algorithm>

namespace padickg {

long Rng::integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(engine_); }

double Rng::real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

Complex Rng::coefficient() {
  double re = real(0.25, 1.0) * (coin() ? 1.0 : -1.0);
  double im = real(-1.0, 1.0);
  return {re, im};
}

PadicScalar random_expansion(Rng& rng, int p, long low, long high, int precision) {
  mpz_class n = 0;
  for (long j = high - 1; j >= low; --j) n = n * p + rng.integer(0, p - 1);
  if (n == 0) return PadicScalar::zero(p);
  return PadicScalar::from_mpz(p, n, precision) * PadicScalar::power_of_p(p, low, precision);
}

PadicVector random_point(Rng& rng, int p, std::size_t n, long low, long high) {
  PadicVector x;
  x.reserve(n);
  for (std::size_t i = 0; i < n; ++i) x.push_back(random_expansion(rng, p, low, high));
  return x;
}

CellFunction random_function(Rng& rng, int p, const FunctionShape& shape) {
  const int count = static_cast<int>(rng.integer(shape.min_terms, shape.max_terms));
  std::vector<CellTerm> terms;
  for (int attempt = 0; static_cast<int>(terms.size()) < count && attempt < 8 * count; ++attempt) {
    CellTerm t;
    t.coeff = rng.coefficient();
    t.level = rng.integer(shape.min_level, shape.max_level);
    // Digits at positions >= -level do not move the ball.
    t.center = random_point(rng, p, shape.dimension, shape.center_low, std::max(shape.center_low, -t.level));
    t.modulation = shape.modulate ? random_point(rng, p, shape.dimension, shape.modulation_low, shape.modulation_high)
                                  : zero_vector(p, shape.dimension);
    // Strictly nested balls would be split into p^n pieces per level by canonicalization.
    const bool nested = std::any_of(terms.begin(), terms.end(), [&](const CellTerm& o) {
      return o.level != t.level && intersect({o.center, o.level}, {t.center, t.level}).has_value();
    });
    if (!nested || shape.allow_nested) terms.push_back(std::move(t));
  }
  return CellFunction::make(p, shape.dimension, std::move(terms));
}

}  // namespace padickg
