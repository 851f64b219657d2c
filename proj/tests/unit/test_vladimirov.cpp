#include "doctest.h"
#include "padickg/random.hpp"
#include "padickg/vladimirov.hpp"
#include "unit/oracles.hpp"

#include <cmath>
#include <numbers>

using namespace padickg;
using oracle::rat;

namespace {

// Quadratic residue table by squaring.
std::vector<int> residue_signs(int p) {
  std::vector<int> s(static_cast<std::size_t>(p), -1);
  s[0] = 0;
  for (int a = 1; a < p; ++a) s[static_cast<std::size_t>(a * a % p)] = 1;
  return s;
}

Complex tau_of(PiConvention c) { return c == PiConvention::unit_tau ? Complex(1.0, 0.0) : Complex(0.0, 1.0); }

// pi1 on a nonzero scalar, from the leading digit and the residue table.
Complex pi1_oracle(const PadicScalar& x, PiConvention c) {
  auto s = residue_signs(x.prime());
  return tau_of(c) * static_cast<double>(s[static_cast<std::size_t>(x.leading_digit())]);
}

Complex direct_gauss(int p, PiConvention c, int sign = 1) {
  auto s = residue_signs(p);
  Complex sum{0.0, 0.0};
  for (int t = 1; t < p; ++t)
    sum += tau_of(c) * static_cast<double>(s[static_cast<std::size_t>(t)]) *
           std::polar(1.0, sign * 2.0 * std::numbers::pi * t / p);
  return sum / static_cast<double>(p);
}

FunctionShape line_shape() {
  FunctionShape s;
  s.dimension = 1;
  s.max_terms = 3;
  s.min_level = -1;
  s.max_level = 1;
  s.center_low = -1;
  s.modulation_low = -1;
  s.modulation_high = 1;
  return s;
}

// Spectral oracle: sum over nonzero frequency cosets of p^hi Z_p; the ball around 0 contributes
// nothing because pi1 integrates to zero over each unit shell.
Complex dtilde_oracle(const CellFunction& f, double alpha, const PadicScalar& x, PiConvention c, long lo, long hi) {
  const auto ff = f.fourier();
  return oracle::riemann(f.prime(), 1, lo, hi, [&](const PadicVector& k) -> Complex {
    if (k[0].is_zero()) return {0.0, 0.0};
    return std::pow(k[0].norm(), alpha) / pi1_oracle(k[0], c) * (-(k[0] * x)).chi() * ff.evaluate(k);
  });
}

}  // namespace

TEST_CASE("Gauss sums") {
  const double r7 = 1.0 / std::sqrt(7.0);
  CHECK(std::abs(gauss_sum(7) - Complex(0.0, r7)) < 1e-12);
  CHECK(std::abs(direct_gauss(7, PiConvention::unit_tau) - Complex(0.0, r7)) < 1e-12);
  CHECK(std::abs(gauss_sum(7, PiConvention::imaginary_tau) - Complex(-r7, 0.0)) < 1e-12);
  for (int p : {3, 7, 11, 19})
    for (auto c : {PiConvention::unit_tau, PiConvention::imaginary_tau}) {
      CHECK(std::abs(std::abs(gauss_sum(p, c)) - 1.0 / std::sqrt(static_cast<double>(p))) < 1e-12);
      CHECK(std::abs(gauss_sum(p, c) - direct_gauss(p, c)) < 1e-12);
    }
  auto g = gamma_factor(7, Complex(0.5, 0.0));
  CHECK(std::abs(g.value - std::pow(7.0, 0.5) * g.gauss) < 1e-12);
}

TEST_CASE("character tables") {
  for (int p : {3, 7, 11, 19}) {
    TwistedCharacter unit(p), imag(p, PiConvention::imaginary_tau);
    Complex sum{0.0, 0.0};
    for (long d = 1; d < p; ++d) {
      sum += unit.value(d);
      CHECK(unit.value(d) * unit.inverse_value(d) == Complex(1.0, 0.0));
      CHECK(imag.value(d) * imag.inverse_value(d) == Complex(1.0, 0.0));
      for (long e = 1; e < p; ++e) CHECK(unit.value(d * e % p) == unit.value(d) * unit.value(e));
    }
    CHECK(std::abs(sum) < 1e-15);
    CHECK(imag.value(1) == Complex(0.0, 1.0));
  }
}

TEST_CASE("regularized pairing examples") {
  const int p = 7;
  TwistedCharacter pi(p);
  const Complex s{0.5, 0.0};
  CHECK(std::abs(pair_pi_s(s, CellFunction::indicator(p, {zero_vector(p, 1), 0}), pi)) < 1e-15);
  CHECK(std::abs(pair_pi_s(s, CellFunction::indicator(p, {{rat(p, 1)}, -1}), pi) - Complex(1.0 / 7.0, 0.0)) < 1e-15);
  CHECK(std::abs(pair_pi_s(s, CellFunction::indicator(p, {zero_vector(p, 1), 1}), pi)) < 1e-15);
  CHECK(std::abs(pair_pi_s(Complex(-0.7, 0.2), CellFunction::indicator(p, {zero_vector(p, 1), 1}), pi)) < 1e-15);
}

TEST_CASE("pairing agrees with the direct integral for Re s > 0") {
  Rng rng(1);
  for (int p : {3, 7}) {
    TwistedCharacter pi(p);
    for (int i = 0; i < 10; ++i) {
      auto f = random_function(rng, p, line_shape());
      const Complex s{rng.real(0.2, 1.5), rng.real(-1.0, 1.0)};
      Complex brute = oracle::riemann(p, 1, -2, 3, [&](const PadicVector& x) -> Complex {
        if (x[0].is_zero()) return {0.0, 0.0};
        return pi1_oracle(x[0], PiConvention::unit_tau) * std::pow(x[0].norm(), s - 1.0) * f.evaluate(x);
      });
      CHECK(std::abs(pair_pi_s(s, f, pi) - brute) < 1e-9);
    }
  }
}

TEST_CASE("Gamma identity holds for the multiplicative character") {
  Rng rng(2);
  for (int p : {3, 7, 11, 19}) {
    TwistedCharacter pi(p);
    for (int i = 0; i < 5; ++i) {
      auto f = random_function(rng, p, line_shape());
      for (double sr : {0.25, 0.5, 0.75}) {
        const Complex s{sr, 0.0};
        Complex lhs = pair_pi_s(s, f.fourier(), pi);
        Complex rhs = gamma_factor(p, s).value * pair_quasicharacter(f, -s, pi, true);
        CHECK(std::abs(lhs - rhs) < 1e-9);
      }
    }
  }
}

TEST_CASE("worked values of the twisted operator") {
  const int p = 7;
  TwistedCharacter pi(p);
  auto one = CellFunction::indicator(p, {zero_vector(p, 1), 0});
  const Complex expected = direct_gauss(p, PiConvention::unit_tau, -1);
  CHECK(std::abs(expected - Complex(0.0, -1.0 / std::sqrt(7.0))) < 1e-12);
  for (double alpha : {0.5, 1.0, 2.0})
    for (auto route : {DtildeRoute::spectral, DtildeRoute::integral}) {
      CHECK(std::abs(apply_dtilde(one, alpha, route, PadicScalar::zero(p), pi)) < 1e-12);
      CHECK(std::abs(apply_dtilde(one, alpha, route, rat(p, 1, 7), pi) - expected) < 1e-9);
      CHECK(apply_dtilde(CellFunction(p, 1), alpha, route, rat(p, 1, 7), pi) == Complex(0.0, 0.0));
    }
}

TEST_CASE("spectral route agrees with a frequency sum") {
  Rng rng(3);
  const int p = 3;
  for (auto c : {PiConvention::unit_tau, PiConvention::imaginary_tau}) {
    TwistedCharacter pi(p, c);
    for (int i = 0; i < 8; ++i) {
      auto f = random_function(rng, p, line_shape());
      const double alpha = i % 2 ? 0.5 : 2.0;
      for (int k = 0; k < 4; ++k) {
        auto x = random_expansion(rng, p, -1, 2);
        Complex brute = dtilde_oracle(f, alpha, x, c, -2, 3);
        CHECK(std::abs(apply_dtilde(f, alpha, DtildeRoute::spectral, x, pi) - brute) < 1e-9);
      }
    }
  }
}

TEST_CASE("routes agree under the multiplicative convention") {
  Rng rng(4);
  for (int p : {3, 7, 11}) {
    TwistedCharacter pi(p);
    for (int i = 0; i < 6; ++i) {
      auto f = random_function(rng, p, line_shape());
      for (double alpha : {0.5, 1.0, 2.0})
        for (int k = 0; k < 5; ++k) {
          auto x = random_expansion(rng, p, -2, 2);
          auto a = apply_dtilde(f, alpha, DtildeRoute::spectral, x, pi);
          auto b = apply_dtilde(f, alpha, DtildeRoute::integral, x, pi);
          CHECK(std::abs(a - b) < 1e-9);
        }
    }
  }
}

TEST_CASE("routes differ under the imaginary convention") {
  const int p = 7;
  TwistedCharacter pi(p, PiConvention::imaginary_tau);
  auto one = CellFunction::indicator(p, {zero_vector(p, 1), 0});
  auto a = apply_dtilde(one, 1.0, DtildeRoute::spectral, rat(p, 1, 7), pi);
  auto b = apply_dtilde(one, 1.0, DtildeRoute::integral, rat(p, 1, 7), pi);
  CHECK(std::abs(a - b) > 1e-3);
  // Moduli still agree.
  CHECK(std::abs(std::abs(a) - std::abs(b)) < 1e-9);
}

TEST_CASE("plane-wave multiplier") {
  const int p = 7;
  TwistedCharacter pi(p);
  CHECK(std::abs(dtilde_on_wave(rat(p, 1), 1.0, pi) - Complex(-1.0, 0.0)) < 1e-15);
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    auto a = random_expansion(rng, p, -2, 2);
    if (a.is_zero()) continue;
    const double alpha = rng.real(0.2, 2.5);
    auto l = dtilde_on_wave(a, alpha, pi);
    CHECK(std::abs(std::abs(l) - std::pow(a.norm(), alpha)) < 1e-12);
    CHECK(std::abs(l / dtilde_on_wave(-a, alpha, pi) - pi.value(p - 1)) < 1e-12);
  }
  CHECK_THROWS(dtilde_on_wave(PadicScalar::zero(p), 1.0, pi));
}

TEST_CASE("plane-wave multiplier matches the operator on truncated waves") {
  // chi(t a) restricted to a large ball is a test function; away from the ball edge D acts by lambda(a).
  const int p = 7;
  TwistedCharacter pi(p);
  for (long num : {1L, 3L, 5L}) {
    auto a = rat(p, num, 7);
    auto wave = CellFunction::make(p, 1, {{{1.0, 0.0}, {a}, zero_vector(p, 1), 3}});
    for (double alpha : {0.5, 1.0, 2.0}) {
      auto t = rat(p, 2);
      auto d = apply_dtilde(wave, alpha, DtildeRoute::spectral, t, pi);
      CHECK(std::abs(d - dtilde_on_wave(a, alpha, pi) * (t * a).chi()) < 1e-9);
    }
  }
}
