#include "doctest.h"
#include "padickg/quantization.hpp"
#include "padickg/random.hpp"
#include "unit/oracles.hpp"

#include <cmath>
#include <numbers>

using namespace padickg;
using oracle::rat;

namespace {

PadicVector vec(int p, std::initializer_list<long> xs) {
  PadicVector v;
  for (long x : xs) v.push_back(x == 0 ? PadicScalar::zero(p) : rat(p, x));
  return v;
}

CellFunction lattice_data(Rng& rng, int p) {
  std::vector<CellTerm> terms;
  const int count = static_cast<int>(rng.integer(1, 3));
  for (int i = 0; i < count; ++i) {
    CellTerm t;
    t.coeff = rng.coefficient();
    t.level = -2;
    t.center = random_point(rng, p, 3, 1, 2);
    t.modulation = random_point(rng, p, 3, -1, 1);
    terms.push_back(t);
  }
  return CellFunction::make(p, 3, terms);
}

Complex brute_wave(const CellFunction& psi, const PadicScalar& t, const PadicVector& x) {
  const int p = psi.prime();
  return oracle::riemann(p, 3, 1, 2, [&](const PadicVector& k) {
    const PadicScalar w = omega(k, rat(p, 1));
    return (-(t * w) + dot(x, k)).chi() * psi.evaluate(k);
  });
}

}  // namespace

TEST_CASE("evolution examples") {
  const int p = 7;
  const auto m = rat(p, 1);
  SingleParticleVector psi(CellFunction::indicator(p, {zero_vector(p, 3), -1}), m);
  CHECK((evolve_U(PadicScalar::zero(p), psi).psi_hat() - psi.psi_hat()).empty());
  CHECK((evolve_U(rat(p, 1), psi).psi_hat() - psi.psi_hat()).l2_norm() < 1e-15);
  auto late = evolve_U(rat(p, 1, 49), psi);
  auto expected = psi.psi_hat().scaled(std::polar(1.0, 2.0 * std::numbers::pi * 48.0 / 49.0));
  CHECK((late.psi_hat() - expected).l2_norm() < 1e-15);
}

TEST_CASE("evolution multiplies by the dispersion phase") {
  const int p = 7;
  const auto m = rat(p, 1);
  Rng rng(1);
  for (int i = 0; i < 10; ++i) {
    SingleParticleVector psi(lattice_data(rng, p), m);
    auto t = random_expansion(rng, p, -3, 2);
    auto ut = evolve_U(t, psi);
    CHECK(std::abs(ut.norm() - psi.norm()) < 1e-12);
    for (int k = 0; k < 20; ++k) {
      auto q = random_point(rng, p, 3, 1, 4);
      CHECK(std::abs(ut.psi_hat().evaluate(q) - (-(t * omega(q, m))).chi() * psi.psi_hat().evaluate(q)) < 1e-12);
    }
  }
}

TEST_CASE("evolution group law and continuity") {
  const int p = 7;
  const auto m = rat(p, 1);
  Rng rng(2);
  std::vector<PadicScalar> grid{PadicScalar::zero(p), rat(p, 1), rat(p, -1), rat(p, 7), rat(p, -7),
                                rat(p, 1, 7), rat(p, -1, 7), rat(p, 1, 49), rat(p, -1, 49)};
  SingleParticleVector psi(lattice_data(rng, p), m);
  for (const auto& s : grid)
    for (const auto& t : grid) {
      auto lhs = evolve_U(s, evolve_U(t, psi)).psi_hat();
      auto rhs = evolve_U(s + t, psi).psi_hat();
      CHECK((lhs - rhs).l2_norm() < 1e-12);
    }
  for (long j = 0; j < 4; ++j)
    CHECK((evolve_U(PadicScalar::power_of_p(p, j), psi).psi_hat() - psi.psi_hat()).l2_norm() < 1e-12);
}

TEST_CASE("wave function agrees with a brute-force sum") {
  const int p = 7;
  const auto m = rat(p, 1);
  Rng rng(3);
  for (int i = 0; i < 5; ++i) {
    SingleParticleVector psi(lattice_data(rng, p), m);
    for (int k = 0; k < 4; ++k) {
      auto t = random_expansion(rng, p, -2, 2);
      auto x = random_point(rng, p, 3, -1, 2);
      CHECK(std::abs(psi.wave_function(t, x) - brute_wave(psi.psi_hat(), t, x)) < 1e-12);
    }
  }
}

TEST_CASE("representation examples") {
  const int p = 7;
  const auto m = rat(p, 1);
  SingleParticleVector psi(CellFunction::indicator(p, {zero_vector(p, 3), -1}), m);
  auto id = identity_matrix(p, 3);
  CHECK((rep_U0(zero_vector(p, 4), id, psi).psi_hat() - psi.psi_hat()).l2_norm() < 1e-15);
  CHECK((rep_U0(zero_vector(p, 4), permutation_matrix(p, {1, 2, 0}), psi).psi_hat() - psi.psi_hat()).l2_norm() < 1e-15);
  CHECK((rep_U0(vec(p, {1, 0, 0, 0}), id, psi).psi_hat() - psi.psi_hat()).l2_norm() < 1e-15);
  CHECK_THROWS(rep_U0(zero_vector(p, 4), permutation_matrix(p, {1, 0, 2}), psi));
}

TEST_CASE("representation is pointwise, unitary and covariant") {
  const int p = 7;
  const auto m = rat(p, 1);
  Rng rng(4);
  const std::vector<PadicMatrix> rots{identity_matrix(p, 3), permutation_matrix(p, {2, 0, 1}),
                                      rotation_from_parameter(p, 0, 1, rat(p, 1)), rotation_from_parameter(p, 1, 2, rat(p, 2))};
  for (int i = 0; i < 8; ++i) {
    SingleParticleVector psi(lattice_data(rng, p), m);
    const auto& r = rots[static_cast<std::size_t>(i) % rots.size()];
    auto a = random_point(rng, p, 4, -1, 2);
    auto moved = rep_U0(a, r, psi);
    CHECK(std::abs(moved.norm() - psi.norm()) < 1e-12);
    for (int k = 0; k < 10; ++k) {
      auto q = random_point(rng, p, 3, 1, 4);
      PadicScalar phase = a[0] * omega(q, m) - dot({a[1], a[2], a[3]}, q);
      Complex expected = phase.chi() * psi.psi_hat().evaluate(matvec(transpose(r), q));
      CHECK(std::abs(moved.psi_hat().evaluate(q) - expected) < 1e-12);

      auto t = random_expansion(rng, p, -1, 2);
      auto x = random_point(rng, p, 3, -2, 2);
      auto y = matvec(transpose(r), sub(x, {a[1], a[2], a[3]}));
      CHECK(std::abs(moved.wave_function(t, x) - psi.wave_function(t - a[0], y)) < 1e-9);
    }
    const auto& r2 = rots[static_cast<std::size_t>(i + 1) % rots.size()];
    auto b = random_point(rng, p, 4, -1, 2);
    auto rb = matvec(r, {b[1], b[2], b[3]});
    PadicVector combined{a[0] + b[0], a[1] + rb[0], a[2] + rb[1], a[3] + rb[2]};
    auto lhs = rep_U0(a, r, rep_U0(b, r2, psi)).psi_hat();
    auto rhs = rep_U0(combined, matmul(r, r2), psi).psi_hat();
    CHECK((lhs - rhs).l2_norm() < 1e-12);
  }
}

TEST_CASE("restriction to the shell and the J map") {
  const int p = 7;
  const auto m = rat(p, 1);
  auto cells = decompose_support(CellFunction::indicator(p, {zero_vector(p, 3), -1}), m);
  Rng rng(5);
  FunctionShape shape;
  shape.dimension = 4;
  shape.max_terms = 3;
  shape.min_level = -2;
  shape.max_level = -1;
  shape.center_low = 0;
  shape.modulation_low = -1;
  shape.modulation_high = 1;
  for (int i = 0; i < 10; ++i) {
    // Balls centred on the shell so the restriction is nonzero.
    std::vector<CellTerm> terms;
    for (int j = 0; j < 2; ++j) {
      auto k = random_point(rng, p, 3, 1, 2);
      CellTerm t;
      t.coeff = rng.coefficient();
      t.level = -2;
      t.center = {omega(k, m), k[0], k[1], k[2]};
      t.modulation = random_point(rng, p, 4, -1, 1);
      terms.push_back(t);
    }
    auto g = CellFunction::make(p, 4, terms);
    auto phi = fourier_minkowski(g, FourierDirection::inverse);
    auto r = map_R(phi, cells, m);
    CHECK(r.unresolved == 0);
    CHECK(r.values.l2_norm() > 0.0);
    for (int k = 0; k < 20; ++k) {
      auto q = random_point(rng, p, 3, 1, 4);
      PadicVector on{omega(q, m), q[0], q[1], q[2]};
      CHECK(std::abs(r.values.evaluate(q) - g.evaluate(on)) < 1e-12);
    }
    for (const auto& n : j_unitarity(r.values, r.cells)) CHECK(n.frequency_side == n.shell_side);
  }

  auto off = fourier_minkowski(CellFunction::indicator(p, {vec(p, {3, 0, 0, 0}), -1}), FourierDirection::inverse);
  CHECK(map_R(off, cells, m).values.empty());

  auto ones = CellFunction::indicator(p, {zero_vector(p, 3), -1});
  CHECK((map_J(ones, cells) - ones).l2_norm() < 1e-15);
}

TEST_CASE("J on a cell with small omega") {
  const int p = 7;
  const auto m = rat(p, 7);
  auto u = CellFunction::indicator(p, {vec(p, {7, 0, 0}), -2});
  auto cells = decompose_support(u, m);
  REQUIRE_FALSE(cells.empty());
  for (const auto& c : cells) CHECK(c.omega_exponent() == -1);
  auto ju = map_J(u, cells);
  CHECK(std::abs(ju.evaluate(vec(p, {7, 0, 0})) - Complex(std::sqrt(7.0), 0.0)) < 1e-12);
  // sqrt(7)^2 rounds in the last bit.
  for (const auto& n : j_unitarity(u, cells)) CHECK(n.frequency_side == doctest::Approx(n.shell_side).epsilon(1e-14));
}

TEST_CASE("box data restricts to zero") {
  const int p = 7;
  const auto m = rat(p, 1);
  auto cells = decompose_support(CellFunction::indicator(p, {zero_vector(p, 3), -1}), m);
  auto g = CellFunction::indicator(p, {{rat(p, 1), PadicScalar::zero(p), PadicScalar::zero(p), PadicScalar::zero(p)}, -1});
  auto phi = fourier_minkowski(g, FourierDirection::inverse);
  for (double alpha : {0.5, 1.0, 2.0}) {
    KGConfig cfg;
    cfg.alpha = alpha;
    cfg.m = m;
    auto r = map_R_box(phi, cells, cfg);
    CHECK(r.unresolved == 0);
    for (const auto& t : r.values.terms()) CHECK(t.coeff == Complex(0.0, 0.0));
  }
  CHECK(map_R(phi, cells, m).values.l2_norm() > 0.0);
}

TEST_CASE("support outside the shell domain is rejected") {
  const int p = 7;
  CHECK_THROWS_AS(SingleParticleVector(CellFunction::indicator(p, {vec(p, {2, 0, 0}), -1}), rat(p, 1)), SupportError);
}
