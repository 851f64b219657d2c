#include "doctest.h"
#include "padickg/minkowski.hpp"
#include "padickg/random.hpp"
#include "unit/oracles.hpp"

using namespace padickg;
using oracle::rat;

namespace {

PadicVector four(int p, long a, long b, long c, long d) {
  PadicVector v;
  for (long x : {a, b, c, d}) v.push_back(x == 0 ? PadicScalar::zero(p) : rat(p, x));
  return v;
}

std::vector<PadicMatrix> members(int p) {
  return {identity_matrix(p, 4),
          lambda0(p),
          embed_rotation(permutation_matrix(p, {1, 2, 0})),
          embed_rotation(rotation_from_parameter(p, 0, 1, rat(p, 1))),
          embed_rotation(rotation_from_parameter(p, 1, 2, rat(p, 2))),
          boost_from_parameter(p, 1, rat(p, p)),
          boost_from_parameter(p, 3, rat(p, 1, 2)),
          matmul(boost_from_parameter(p, 2, rat(p, 2 * p)), embed_rotation(rotation_from_parameter(p, 0, 2, rat(p, 3))))};
}

// Direct [x, y] = x0 y0 - x.y over rationals.
mpq_class minkowski_oracle(const PadicVector& x, const PadicVector& y) {
  mpq_class s = x[0].to_rational() * y[0].to_rational();
  for (int i = 1; i < 4; ++i) s -= x[static_cast<std::size_t>(i)].to_rational() * y[static_cast<std::size_t>(i)].to_rational();
  return s;
}

}  // namespace

TEST_CASE("bilinear form examples") {
  const int p = 7;
  CHECK(quadratic_q(four(p, 1, 0, 0, 0)) == rat(p, 1));
  CHECK(bilinear_q(four(p, 1, 1, 0, 0), four(p, 1, 1, 0, 0)).is_zero());
  CHECK(quadratic_q(four(p, 0, 1, 0, 0)) == rat(p, -1));
}

TEST_CASE("bilinear form is symmetric and bilinear") {
  Rng rng(1);
  const int p = 11;
  for (int i = 0; i < 200; ++i) {
    auto x = random_point(rng, p, 4, -2, 3), y = random_point(rng, p, 4, -2, 3), z = random_point(rng, p, 4, -2, 3);
    auto c = random_expansion(rng, p, -1, 2);
    CHECK(bilinear_q(x, y) == bilinear_q(y, x));
    PadicVector cx;
    for (const auto& e : x) cx.push_back(c * e);
    CHECK(bilinear_q(add(cx, z), y) == c * bilinear_q(x, y) + bilinear_q(z, y));
    CHECK(bilinear_q(x, y) == PadicScalar::from_rational(p, minkowski_oracle(x, y)));
  }
}

TEST_CASE("orthogonal group membership") {
  const int p = 7;
  auto id = check_orthogonal(identity_matrix(p, 4));
  CHECK(id.member);
  CHECK(id.special);
  CHECK(id.det == rat(p, 1));

  auto l0 = check_orthogonal(lambda0(p));
  CHECK(l0.member);
  CHECK_FALSE(l0.special);
  CHECK(l0.det == rat(p, -1));

  auto scaled = check_orthogonal(diagonal_matrix(four(p, 2, 1, 1, 1)));
  CHECK_FALSE(scaled.member);
  CHECK(scaled.det == rat(p, 2));
}

TEST_CASE("rotation generators") {
  const int p = 7;
  auto cyc = permutation_matrix(p, {1, 2, 0});
  CHECK(is_rotation(cyc));
  CHECK(check_orthogonal(embed_rotation(cyc)).special);

  auto quarter = rotation_from_parameter(p, 0, 1, rat(p, 1));
  CHECK(quarter[0][0].is_zero());
  CHECK(quarter[1][0] == rat(p, 1));

  auto r = rotation_from_parameter(p, 0, 1, rat(p, 2));
  auto c = r[0][0], s = r[1][0];
  CHECK(c == PadicScalar::from_rational(p, mpq_class(-3, 5)));
  CHECK(s == PadicScalar::from_rational(p, mpq_class(4, 5)));
  CHECK(c * c + s * s == rat(p, 1));
  CHECK(is_rotation(r));

  CHECK_FALSE(is_rotation(permutation_matrix(p, {1, 0, 2})));
  CHECK_THROWS(rotation_from_parameter(p, 0, 0, rat(p, 1)));
  auto i5 = sqrt_hensel(rat(5, -1));
  REQUIRE(i5.has_value());
  CHECK_THROWS(rotation_from_parameter(5, 0, 1, i5->positive));
}

TEST_CASE("constructed members preserve the form") {
  Rng rng(2);
  for (int p : {3, 7, 11}) {
    for (const auto& l : members(p)) {
      auto rep = check_orthogonal(l);
      CHECK(rep.member);
      CHECK(rep.det * rep.det == rat(p, 1));
      CHECK(same_matrix(matmul(l, lorentz_inverse(l)), identity_matrix(p, 4)));
      for (int i = 0; i < 1000; ++i) {
        auto x = random_point(rng, p, 4, -1, 2), y = random_point(rng, p, 4, -1, 2);
        CHECK(bilinear_q(matvec(l, x), matvec(l, y)) == bilinear_q(x, y));
      }
    }
  }
}

TEST_CASE("matrix algebra") {
  const int p = 7;
  auto r = rotation_from_parameter(p, 0, 2, rat(p, 3));
  CHECK(same_matrix(matmul(r, inverse(r)), identity_matrix(p, 3)));
  CHECK(same_matrix(inverse(r), transpose(r)));
  CHECK(determinant(r) == rat(p, 1));
  CHECK(determinant(diagonal_matrix({rat(p, 2), rat(p, 3), rat(p, 1, 7)})) == PadicScalar::from_rational(p, mpq_class(6, 7)));
}

TEST_CASE("actions on functions") {
  const int p = 7;
  auto cube = CellFunction::indicator(p, {zero_vector(p, 4), 0});
  CHECK((act(identity_matrix(p, 4), zero_vector(p, 4), cube) - cube).empty());
  auto ball = CellFunction::indicator(p, {zero_vector(p, 4), -1});
  CHECK((act(embed_rotation(permutation_matrix(p, {2, 0, 1})), zero_vector(p, 4), ball) - ball).empty());
  CHECK((act(identity_matrix(p, 4), four(p, 1, 0, 0, 0), cube) - cube).empty());

  auto shifted = CellFunction::indicator(p, {four(p, 1, 0, 0, 0), -1});
  auto moved = act(identity_matrix(p, 4), four(p, 1, 0, 0, 0), shifted);
  CHECK(std::abs(moved.evaluate(four(p, 2, 0, 0, 0)) - Complex(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(moved.evaluate(four(p, 1, 0, 0, 0))) < 1e-15);
}

TEST_CASE("actions match pointwise definition and compose") {
  Rng rng(3);
  const int p = 7;
  FunctionShape shape;
  shape.dimension = 4;
  shape.max_terms = 3;
  shape.min_level = -1;
  shape.max_level = 0;
  shape.center_low = -1;
  auto ms = members(p);
  for (int i = 0; i < 10; ++i) {
    auto f = random_function(rng, p, shape);
    const auto& l = ms[static_cast<std::size_t>(i) % ms.size()];
    const auto& l2 = ms[static_cast<std::size_t>(i + 3) % ms.size()];
    auto a = random_point(rng, p, 4, -1, 1), b = random_point(rng, p, 4, -1, 1);
    auto g = act(l, a, f);
    auto composed = act(l, a, act(l2, b, f));
    auto direct = act(matmul(l, l2), add(a, matvec(l, b)), f);
    for (int k = 0; k < 50; ++k) {
      auto x = random_point(rng, p, 4, -2, 2);
      CHECK(std::abs(g.evaluate(x) - f.evaluate(matvec(lorentz_inverse(l), sub(x, a)))) < 1e-12);
      CHECK(std::abs(composed.evaluate(x) - direct.evaluate(x)) < 1e-12);
    }
  }
}

TEST_CASE("Minkowski Fourier transform") {
  const int p = 3;
  Rng rng(4);
  FunctionShape shape;
  shape.dimension = 4;
  shape.max_terms = 2;
  shape.min_level = -1;
  shape.max_level = 0;
  shape.center_low = 0;
  shape.modulation_low = 0;
  for (int i = 0; i < 3; ++i) {
    auto f = random_function(rng, p, shape);
    auto ff = fourier_minkowski(f);
    for (int k = 0; k < 3; ++k) {
      auto xi = random_point(rng, p, 4, -1, 1);
      Complex brute =
          oracle::riemann(p, 4, 0, 2, [&](const PadicVector& x) { return bilinear_q(x, xi).chi() * f.evaluate(x); });
      CHECK(std::abs(ff.evaluate(xi) - brute) < 1e-10);
    }
  }

  const int q = 7;
  auto g = CellFunction::indicator(q, {four(q, 1, 0, 0, 0), -1});
  auto gg = fourier_minkowski(fourier_minkowski(g));
  CHECK(std::abs(gg.evaluate(four(q, -1, 0, 0, 0)) - Complex(1.0, 0.0)) < 1e-12);
  CHECK(std::abs(gg.evaluate(four(q, 1, 0, 0, 0))) < 1e-12);
  CHECK((fourier_minkowski(fourier_minkowski(g), FourierDirection::inverse) - g).l2_norm() < 1e-12);
}

TEST_CASE("Fourier transform commutes with members") {
  Rng rng(5);
  const int p = 7;
  FunctionShape shape;
  shape.dimension = 4;
  shape.max_terms = 3;
  shape.min_level = -1;
  shape.max_level = 0;
  shape.center_low = -1;
  for (const auto& l : members(p)) {
    auto f = random_function(rng, p, shape);
    // phi o L = act(L^{-1}, 0, phi)
    auto lhs = fourier_minkowski(act(lorentz_inverse(l), zero_vector(p, 4), f));
    auto rhs = fourier_minkowski(f);
    for (int k = 0; k < 30; ++k) {
      auto xi = random_point(rng, p, 4, -2, 2);
      CHECK(std::abs(lhs.evaluate(xi) - rhs.evaluate(matvec(l, xi))) < 1e-9);
    }
  }
}
