#include "doctest.h"
#include "padickg/cell_function.hpp"
#include "padickg/random.hpp"
#include "unit/oracles.hpp"

#include <cmath>

using namespace padickg;
using oracle::rat;

namespace {

FunctionShape small_shape(std::size_t n) {
  FunctionShape s;
  s.dimension = n;
  s.min_terms = 1;
  s.max_terms = 4;
  s.min_level = -1;
  s.max_level = 1;
  s.center_low = -2;
  s.modulation_low = -1;
  s.modulation_high = 1;
  return s;
}

PadicVector point(int p, std::initializer_list<long> xs) {
  PadicVector v;
  for (long x : xs) v.push_back(x == 0 ? PadicScalar::zero(p) : rat(p, x));
  return v;
}

Ball unit_ball(int p, std::size_t n) { return {zero_vector(p, n), 0}; }

}  // namespace

TEST_CASE("canonical form examples") {
  const int p = 7;
  CellTerm a{{1.0, 0.0}, zero_vector(p, 1), zero_vector(p, 1), 0};
  CellTerm b{{-1.0, 0.0}, zero_vector(p, 1), zero_vector(p, 1), 0};
  CHECK(CellFunction::make(p, 1, {a, b}).empty());

  CellTerm small{{1.0, 0.0}, zero_vector(p, 1), zero_vector(p, 1), -1};
  auto nested = CellFunction::make(p, 1, {a, small});
  CHECK(nested.size() == 7);
  int twos = 0, ones = 0;
  for (const auto& t : nested.terms()) {
    CHECK(t.level == -1);
    if (std::abs(t.coeff - Complex(2.0, 0.0)) < 1e-15) ++twos;
    if (std::abs(t.coeff - Complex(1.0, 0.0)) < 1e-15) ++ones;
  }
  CHECK(twos == 1);
  CHECK(ones == 6);

  auto single = CellFunction::make(p, 1, {a});
  CHECK(single.size() == 1);
  CHECK(single.terms()[0].level == 0);
}

TEST_CASE("mixed dimensions and primes are rejected") {
  CellTerm t{{1.0, 0.0}, zero_vector(7, 2), zero_vector(7, 1), 0};
  CHECK_THROWS(CellFunction::make(7, 1, {t}));
  auto f = CellFunction::indicator(7, unit_ball(7, 1));
  auto g = CellFunction::indicator(5, unit_ball(5, 1));
  CHECK_THROWS(f + g);
}

TEST_CASE("canonicalization preserves values") {
  Rng rng(1);
  for (int p : {3, 7}) {
    for (int i = 0; i < 20; ++i) {
      std::vector<CellTerm> raw;
      const int count = static_cast<int>(rng.integer(1, 5));
      for (int j = 0; j < count; ++j) {
        CellTerm t;
        t.coeff = rng.coefficient();
        t.level = rng.integer(-1, 1);
        t.center = random_point(rng, p, 2, -2, 2);
        t.modulation = random_point(rng, p, 2, -1, 2);
        raw.push_back(t);
      }
      auto f = CellFunction::make(p, 2, raw);
      for (const auto& t : f.terms()) {
        // Centers carry no digits at or above position -level.
        for (const auto& c : t.center)
          if (!c.is_zero()) CHECK(c.valuation() < -t.level);
      }
      for (int k = 0; k < 100; ++k) {
        auto x = random_point(rng, p, 2, -2, 3);
        CHECK(std::abs(f.evaluate(x) - oracle::raw_sum(raw, x)) < 1e-12);
      }
    }
  }
}

TEST_CASE("Haar integration") {
  CHECK(std::abs(CellFunction::indicator(7, unit_ball(7, 4)).integrate() - Complex(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(CellFunction::indicator(7, {zero_vector(7, 1), 1}).integrate() - Complex(7.0, 0.0)) < 1e-13);

  auto wave = CellFunction::make(7, 1, {{{1.0, 0.0}, {rat(7, 1, 7)}, zero_vector(7, 1), 0}});
  Complex brute = oracle::riemann(7, 1, 0, 1, [&](const PadicVector& x) { return (x[0] * rat(7, 1, 7)).chi(); });
  CHECK(std::abs(brute) < 1e-12);
  CHECK(std::abs(wave.integrate()) < 1e-15);
}

TEST_CASE("integration agrees with a Riemann sum") {
  Rng rng(2);
  const int p = 3;
  for (int i = 0; i < 30; ++i) {
    auto f = random_function(rng, p, small_shape(1));
    Complex brute = oracle::riemann(p, 1, -2, 2, [&](const PadicVector& x) { return f.evaluate(x); });
    CHECK(std::abs(f.integrate() - brute) < 1e-12);
  }
}

TEST_CASE("Fourier transform examples") {
  const int p = 7;
  auto one = CellFunction::indicator(p, unit_ball(p, 1));
  auto fone = one.fourier();
  REQUIRE(fone.size() == 1);
  CHECK(fone.terms()[0].level == 0);
  CHECK(std::abs(fone.terms()[0].coeff - Complex(1.0, 0.0)) < 1e-15);
  for (long xi : {0L, 1L, 3L}) {
    Complex brute = oracle::riemann(p, 1, 0, 1, [&](const PadicVector& x) {
      return xi == 0 ? Complex(1.0, 0.0) : (x[0] * rat(p, xi, 7)).chi();
    });
    CHECK(std::abs(fone.evaluate({rat(p, xi, 7)}) - brute) < 1e-12);
  }

  auto small = CellFunction::indicator(p, {zero_vector(p, 1), -1});
  auto fsmall = small.fourier();
  REQUIRE(fsmall.size() == 1);
  CHECK(fsmall.terms()[0].level == 1);
  CHECK(std::abs(fsmall.terms()[0].coeff - Complex(1.0 / 7.0, 0.0)) < 1e-15);
  // Support duality: volumes multiply to 1.
  CHECK(ball_volume(p, 1, -1) * ball_volume(p, 1, 1) == doctest::Approx(1.0));
}

TEST_CASE("Fourier transform agrees with a Riemann sum") {
  Rng rng(3);
  const int p = 3;
  for (int i = 0; i < 15; ++i) {
    auto f = random_function(rng, p, small_shape(1));
    auto ff = f.fourier();
    auto fi = f.fourier(FourierDirection::inverse);
    for (int k = 0; k < 5; ++k) {
      PadicVector xi = random_point(rng, p, 1, -2, 2);
      Complex fwd = oracle::riemann(p, 1, -2, 3, [&](const PadicVector& x) { return dot(xi, x).chi() * f.evaluate(x); });
      Complex inv = oracle::riemann(p, 1, -2, 3, [&](const PadicVector& x) { return (-dot(xi, x)).chi() * f.evaluate(x); });
      CHECK(std::abs(ff.evaluate(xi) - fwd) < 1e-10);
      CHECK(std::abs(fi.evaluate(xi) - inv) < 1e-10);
    }
  }
}

TEST_CASE("involution, round trip and Parseval") {
  Rng rng(4);
  for (int p : {3, 7, 11, 19}) {
    for (int i = 0; i < 10; ++i) {
      auto shape = small_shape(2);
      shape.max_terms = 6;
      auto f = random_function(rng, p, shape);
      auto g = random_function(rng, p, shape);
      auto twice = f.fourier().fourier();
      auto back = f.fourier().fourier(FourierDirection::inverse);
      CHECK((back - f).l2_norm() < 1e-12);
      for (int k = 0; k < 100; ++k) {
        auto x = random_point(rng, p, 2, -2, 3);
        CHECK(std::abs(twice.evaluate(x) - f.evaluate(negate(x))) < 1e-12);
      }
      CHECK(std::abs(f.inner_product(g) - f.fourier().inner_product(g.fourier())) < 1e-9);
    }
  }
}

TEST_CASE("products, inner products and convolution") {
  const int p = 7;
  auto zp = CellFunction::indicator(p, unit_ball(p, 1));
  auto pzp = CellFunction::indicator(p, {zero_vector(p, 1), -1});
  CHECK(std::abs(zp.inner_product(zp) - Complex(1.0, 0.0)) < 1e-15);
  auto prod = zp.product(pzp);
  CHECK((prod - pzp).empty());
  auto wave = CellFunction::make(p, 1, {{{1.0, 0.0}, {rat(p, 1, 7)}, zero_vector(p, 1), 0}});
  CHECK(std::abs(wave.inner_product(zp)) < 1e-15);

  Rng rng(5);
  const int q = 3;
  for (int i = 0; i < 10; ++i) {
    auto f = random_function(rng, q, small_shape(1));
    auto g = random_function(rng, q, small_shape(1));
    auto h = f.convolve(g);
    for (int k = 0; k < 5; ++k) {
      PadicVector x = random_point(rng, q, 1, -2, 2);
      Complex brute =
          oracle::riemann(q, 1, -3, 2, [&](const PadicVector& y) { return f.evaluate(y) * g.evaluate(sub(x, y)); });
      CHECK(std::abs(h.evaluate(x) - brute) < 1e-10);
    }
    for (int k = 0; k < 20; ++k) {
      PadicVector x = random_point(rng, q, 1, -2, 3);
      CHECK(std::abs(f.product(g).evaluate(x) - f.evaluate(x) * g.evaluate(x)) < 1e-12);
    }
    Complex ip = oracle::riemann(q, 1, -2, 2, [&](const PadicVector& y) { return f.evaluate(y) * std::conj(g.evaluate(y)); });
    CHECK(std::abs(f.inner_product(g) - ip) < 1e-12);
  }
}

TEST_CASE("local constancy") {
  Rng rng(6);
  const int p = 7;
  for (int i = 0; i < 20; ++i) {
    auto f = random_function(rng, p, small_shape(2));
    auto x = random_point(rng, p, 2, -2, 2);
    const long level = f.local_constancy_level(x);
    for (int k = 0; k < 20; ++k) {
      auto shift = random_point(rng, p, 2, -level, -level + 3);
      CHECK(std::abs(f.evaluate(add(x, shift)) - f.evaluate(x)) < 1e-12);
    }
  }
}

TEST_CASE("group operations on functions") {
  const int p = 7;
  auto f = CellFunction::make(p, 2, {{{1.0, 0.5}, point(p, {1, 2}), point(p, {3, 0}), -1}});
  auto x = point(p, {3, 7});
  auto t = point(p, {1, 1});
  CHECK(std::abs(f.translated(t).evaluate(add(x, t)) - f.evaluate(x)) < 1e-15);
  CHECK(std::abs(f.reflected().evaluate(negate(x)) - f.evaluate(x)) < 1e-15);
  CHECK(std::abs(f.conjugated().evaluate(x) - std::conj(f.evaluate(x))) < 1e-15);
  auto w = PadicVector{rat(p, 1, 7), rat(p, 2, 49)};
  CHECK(std::abs(f.modulated(w).evaluate(x) - dot(w, x).chi() * f.evaluate(x)) < 1e-15);
  CHECK(std::abs(f.with_signs({1, -1}).evaluate(x) - f.evaluate({x[0], -x[1]})) < 1e-15);
}
