#include "doctest.h"
#include "padickg/random.hpp"
#include "padickg/shell.hpp"
#include "unit/oracles.hpp"

#include <cmath>

using namespace padickg;
using oracle::rat;

namespace {

PadicVector vec(int p, std::initializer_list<long> xs) {
  PadicVector v;
  for (long x : xs) v.push_back(x == 0 ? PadicScalar::zero(p) : rat(p, x));
  return v;
}

// A ball indicator near the mass shell: k0 close to +-1, spatial part in 7Z_7^3.
CellFunction near_shell(Rng& rng, int p) {
  std::vector<CellTerm> terms;
  const long level = rng.integer(-2, -1);
  const int count = static_cast<int>(rng.integer(1, 3));
  for (int i = 0; i < count; ++i) {
    CellTerm t;
    t.coeff = rng.coefficient();
    t.level = level;
    PadicScalar k0 = rat(p, rng.coin() ? 1 : -1);
    if (level == -2 && rng.coin()) k0 += rat(p, p * rng.integer(0, p - 1));
    t.center = {k0, rat(p, p * rng.integer(0, p - 1)), rat(p, p * rng.integer(0, p - 1)), PadicScalar::zero(p)};
    t.modulation = {random_expansion(rng, p, 0, 3), PadicScalar::zero(p), PadicScalar::zero(p), PadicScalar::zero(p)};
    terms.push_back(t);
  }
  return CellFunction::make(p, 4, terms);
}

// Brute-force branch integral over (pZ_p)^3 on cosets of p^2 Z_p^3, using only Hensel roots.
Complex brute_branch(const CellFunction& g, int p, int branch_sign) {
  const auto one = rat(p, 1);
  return oracle::riemann(p, 3, 1, 2, [&](const PadicVector& k) {
    auto root = sqrt_hensel(dot(k, k) + one);
    REQUIRE(root.has_value());
    const PadicScalar w = branch_sign > 0 ? root->positive : -root->negative;
    PadicVector point{branch_sign > 0 ? w : root->negative, k[0], k[1], k[2]};
    return g.evaluate(point) / w.norm();
  });
}

}  // namespace

TEST_CASE("cell classification examples") {
  const int p = 7;
  const auto m = rat(p, 1);
  auto a = classify_cell(vec(p, {0, 0, 0}), -1, m);
  CHECK(a.status == CellStatus::inside);
  CHECK(a.s == rat(p, 1));
  REQUIRE(a.omega.has_value());
  CHECK(*a.omega == rat(p, 1));

  CHECK(classify_cell(vec(p, {2, 0, 0}), -1, m).status == CellStatus::outside);
  CHECK(classify_cell(vec(p, {0, 0, 0}), 0, m).status == CellStatus::unresolved);
}

TEST_CASE("children of inside cells are inside") {
  Rng rng(1);
  const int p = 7;
  const auto m = rat(p, 1);
  int insides = 0;
  for (int i = 0; i < 200 && insides < 20; ++i) {
    auto c = random_point(rng, p, 3, 0, 2);
    auto cell = classify_cell(c, -1, m);
    if (cell.status != CellStatus::inside) continue;
    ++insides;
    for (const auto& ch : children(p, {c, -1})) {
      auto sub = classify_cell(ch.center, ch.level, m);
      CHECK(sub.status == CellStatus::inside);
      CHECK(sub.s_exponent == cell.s_exponent);
      CHECK(sign(*sub.omega) == Sign::positive);
      // Hensel root variation stays within the certificate.
      auto diff = *sub.omega - *cell.omega;
      if (!diff.is_zero()) CHECK(diff.norm_exponent() <= cell.omega_variation_exponent());
    }
  }
  CHECK(insides == 20);
}

TEST_CASE("omega examples and identities") {
  const int p = 7;
  const auto m = rat(p, 1);
  CHECK(omega(vec(p, {0, 0, 0}), m) == rat(p, 1));
  auto w = omega(vec(p, {1, 0, 0}), m);
  auto d = w.digits();
  CHECK(d[0] == 3);
  CHECK(d[1] == 1);
  CHECK(d[2] == 2);
  CHECK(w.norm() == 1.0);
  CHECK_THROWS_AS(omega(vec(p, {2, 0, 0}), m), NotInShellError);

  Rng rng(2);
  for (int p2 : {3, 7, 11, 19}) {
    const auto m2 = rat(p2, 1);
    int found = 0;
    for (int i = 0; i < 300; ++i) {
      auto k = random_point(rng, p2, 3, -1, 3);
      auto s = dot(k, k) + m2 * m2;
      if (s.is_zero() || !quadratic_data(s).is_square) continue;
      auto wk = omega(k, m2);
      CHECK(wk * wk == s);
      CHECK(sign(wk) == Sign::positive);
      PadicVector plus{wk, k[0], k[1], k[2]}, minus{-wk, k[0], k[1], k[2]};
      CHECK(quadratic_q(plus) == m2 * m2);
      CHECK(quadratic_q(minus) == m2 * m2);
      ++found;
    }
    CHECK(found > 20);
  }
}

TEST_CASE("Gel'fand-Leray weights") {
  const int p = 7;
  CHECK(gelfand_leray_weight(vec(p, {1, 0, 0, 0}), -1, 0) == 1.0);
  auto root2 = sqrt_hensel(rat(p, 2));
  REQUIRE(root2.has_value());
  CHECK(gelfand_leray_weight({root2->positive, rat(p, 1), PadicScalar::zero(p), PadicScalar::zero(p)}, -1, 0) == 1.0);
  CHECK(gelfand_leray_weight(vec(p, {1, 3, 0, 0}), -1, 1) == 1.0);
  CHECK(gelfand_leray_weight(vec(p, {7, 1, 0, 0}), -2, 0) == doctest::Approx(7.0));
  CHECK_THROWS_AS(gelfand_leray_weight(vec(p, {7, 1, 0, 0}), -1, 0), NotInShellError);
}

TEST_CASE("worked shell integral") {
  const int p = 7;
  const auto m = rat(p, 1);
  auto g = CellFunction::indicator(p, {vec(p, {1, 0, 0, 0}), -1});
  const double expected = std::pow(7.0, -3);
  auto both = shell_integrate(g, m, Branch::both);
  CHECK(std::abs(both.value - Complex(expected, 0.0)) < 1e-15);
  CHECK(both.error_bound == 0.0);
  CHECK(std::abs(brute_branch(g, p, 1) + brute_branch(g, p, -1) - Complex(expected, 0.0)) < 1e-15);
  CHECK(std::abs(brute_branch(g, p, -1)) < 1e-15);

  auto reflected = act(lambda0(p), zero_vector(p, 4), g);
  auto r = shell_integrate(reflected, m, Branch::both);
  CHECK(std::abs(r.value - Complex(expected, 0.0)) < 1e-15);

  auto zero = shell_integrate(CellFunction(p, 4), m, Branch::both);
  CHECK(zero.value == Complex(0.0, 0.0));
  CHECK(zero.error_bound == 0.0);
}

TEST_CASE("branch integrals agree with a brute-force sum") {
  Rng rng(3);
  const int p = 7;
  const auto m = rat(p, 1);
  for (int i = 0; i < 10; ++i) {
    auto g = near_shell(rng, p);
    auto plus = shell_integrate(g, m, Branch::plus);
    auto minus = shell_integrate(g, m, Branch::minus);
    CHECK(std::abs(plus.value - brute_branch(g, p, 1)) <= plus.error_bound + 1e-14);
    CHECK(std::abs(minus.value - brute_branch(g, p, -1)) <= minus.error_bound + 1e-14);
  }
}

TEST_CASE("branch additivity, reflection and refinement") {
  Rng rng(4);
  const int p = 7;
  const auto m = rat(p, 1);
  int nonzero = 0;
  for (int i = 0; i < 100; ++i) {
    auto g = near_shell(rng, p);
    ShellOptions opts;
    opts.refinement_cap = 2;
    auto plus = shell_integrate(g, m, Branch::plus, opts);
    auto minus = shell_integrate(g, m, Branch::minus, opts);
    auto both = shell_integrate(g, m, Branch::both, opts);
    CHECK(both.value == plus.value + minus.value);
    if (std::abs(both.value) > 0.0) ++nonzero;
    if (i % 5 != 0) continue;
    auto swapped = shell_integrate(act(lambda0(p), zero_vector(p, 4), g), m, Branch::plus, opts);
    CHECK(std::abs(swapped.value - minus.value) <= swapped.error_bound + minus.error_bound + 1e-14);
    ShellOptions deeper = opts;
    deeper.refinement_cap = 3;
    auto fine = shell_integrate(g, m, Branch::both, deeper);
    CHECK(fine.error_bound <= both.error_bound);
    CHECK(std::abs(fine.value - both.value) <= both.error_bound + 1e-14);
  }
  CHECK(nonzero >= 50);
}

TEST_CASE("a cube meeting the boundary carries a finite bound") {
  const int p = 7;
  ShellOptions opts;
  opts.refinement_cap = 1;
  auto r1 = shell_integrate(CellFunction::indicator(p, {zero_vector(p, 4), 0}), rat(p, 1), Branch::both, opts);
  opts.refinement_cap = 2;
  auto r2 = shell_integrate(CellFunction::indicator(p, {zero_vector(p, 4), 0}), rat(p, 1), Branch::both, opts);
  CHECK(std::isfinite(r1.error_bound));
  CHECK(r1.error_bound > 0.0);
  CHECK(r2.error_bound <= r1.error_bound);
  CHECK(std::abs(r2.value - r1.value) <= r1.error_bound + 1e-14);
  CHECK(r1.cells_unresolved > 0);
}

TEST_CASE("invariance under constructed members") {
  Rng rng(5);
  const int p = 7;
  const auto m = rat(p, 1);
  auto g = CellFunction::indicator(p, {vec(p, {1, 0, 0, 0}), -1});
  CHECK(invariance_residual(embed_rotation(permutation_matrix(p, {1, 2, 0})), g, m, Branch::plus).residual == 0.0);
  CHECK(invariance_residual(identity_matrix(p, 4), g, m, Branch::both).residual == 0.0);
  auto l0 = invariance_residual(lambda0(p), g, m, Branch::both);
  CHECK(l0.residual <= l0.bound + 1e-14);

  const std::vector<PadicMatrix> rotations{embed_rotation(rotation_from_parameter(p, 0, 1, rat(p, 1))),
                                           embed_rotation(rotation_from_parameter(p, 1, 2, rat(p, 2)))};
  const std::vector<PadicMatrix> boosts{boost_from_parameter(p, 1, rat(p, p)), boost_from_parameter(p, 2, rat(p, 2 * p))};
  for (int i = 0; i < 10; ++i) {
    auto f = near_shell(rng, p);
    for (const auto& r : rotations)
      for (Branch b : {Branch::plus, Branch::minus}) {
        auto res = invariance_residual(r, f, m, b);
        CHECK(res.residual <= res.bound + 1e-12);
      }
    for (const auto& l : boosts) {
      auto res = invariance_residual(l, f, m, Branch::both);
      CHECK(res.residual <= res.bound + 1e-12);
    }
  }
}

TEST_CASE("support decomposition") {
  const int p = 7;
  const auto m = rat(p, 1);
  auto inside = CellFunction::indicator(p, {zero_vector(p, 3), -1});
  auto cells = decompose_support(inside, m);
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].status == CellStatus::inside);
  CHECK(cells[0].volume() == doctest::Approx(std::pow(7.0, -3)));
  auto bad = CellFunction::indicator(p, {vec(p, {2, 0, 0}), -1});
  CHECK_THROWS_AS(decompose_support(bad, m), SupportError);
}

TEST_CASE("census counts are consistent") {
  const int p = 7;
  auto rows = shell_census({zero_vector(p, 3), 0}, rat(p, 1), 2);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].inside + rows[0].outside + rows[0].unresolved == 1);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].inside + rows[i].outside + rows[i].unresolved == rows[i - 1].unresolved * 343);
    CHECK(rows[i].mass >= rows[i - 1].mass);
    CHECK(rows[i].level == rows[i - 1].level - 1);
  }
  auto lattice = shell_census({zero_vector(p, 3), -1}, rat(p, 1), 3);
  REQUIRE(lattice.size() == 1);
  CHECK(lattice[0].inside == 1);
  CHECK(lattice[0].mass == doctest::Approx(std::pow(7.0, -3)));
}
