#pragma once

#include "padickg/cell_function.hpp"
#include "padickg/minkowski.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <optional>

namespace padickg {

enum class CellStatus { inside, outside, unresolved };
enum class Branch { plus, minus, both };

const char* to_string(CellStatus s);
const char* to_string(Branch b);

class NotInShellError : public PadicError {
 public:
  using PadicError::PadicError;
};

// s(y) = constant + sum_j signs[j] * y_j^2 on Q_p^3.
struct ShellChart {
  PadicScalar constant;
  PadicScalar t;  // value of Q on the shell
  std::array<int, 3> signs{1, 1, 1};
  // Dependent Minkowski coordinate and the three free ones.
  std::size_t dependent = 0;
  std::array<std::size_t, 3> free{1, 2, 3};

  // k_l^2 as a function of the free coordinates on Q(k) = t.
  static ShellChart for_coordinate(std::size_t l, const PadicScalar& t);
  static ShellChart mass_shell(const PadicScalar& m) { return for_coordinate(0, m * m); }
  PadicScalar value(const PadicVector& y) const;
};

struct ShellCell {
  PadicVector center;
  long level = 0;
  PadicScalar s;
  std::optional<long> s_exponent;       // |s(c)| = p^e
  std::optional<long> center_exponent;  // ||c|| = p^e
  long beta_exponent = 0;               // beta = max(||c|| p^level, p^{2 level})
  CellStatus status = CellStatus::unresolved;
  std::optional<PadicScalar> omega;     // positive root of s(c) on inside cells

  int prime() const { return s.prime(); }
  double s_norm() const { return s_exponent ? pow_p(prime(), *s_exponent) : 0.0; }
  double beta() const { return pow_p(prime(), beta_exponent); }
  double volume() const { return pow_p(prime(), 3 * level); }
  // |omega(k) - omega(c)| <= p^e on an inside cell.
  long omega_variation_exponent() const { return beta_exponent - omega->norm_exponent(); }
  long omega_exponent() const { return omega->norm_exponent(); }
  bool contains_origin() const { return !center_exponent || *center_exponent <= level; }
};

ShellCell classify_chart_cell(const ShellChart& chart, const PadicVector& center, long level);
ShellCell classify_cell(const PadicVector& center, long level, const PadicScalar& m);
PadicScalar omega(const PadicVector& k, const PadicScalar& m);
// 1 / |dQ/dk_l| at the center of a 4D cell; throws when the derivative is not constant on it.
double gelfand_leray_weight(const PadicVector& center4, long level, std::size_t l);

// Bound on the integral of |s|^{-1/2} over a cell that avoids the origin.
double tail_weight(const ShellCell& cell);

struct RefinementStats {
  std::size_t cells_visited = 0;
  std::size_t cells_used = 0;
  std::size_t cells_unresolved = 0;
  bool budget_exhausted = false;
};

struct RefinementLimits {
  long min_level = -8;
  std::size_t budget = 200000;
};

// Depth-first certified refinement over a chart. The integrand supplies:
//   State restrict(const State&, const Ball&)    drop parts not meeting the ball
//   bool empty(const State&)
//   double sup(const State&)                     bound on the summed |integrand| over the cell
//   State resolve(const ShellCell&, const State&) accumulate resolved parts of an inside cell, return the rest
// The returned bound covers the integral of |integrand| over every unresolved part.
template <class Integrand>
double refine_cell(const ShellChart& chart, const Ball& ball, const typename Integrand::State& state, Integrand& ig,
                   const RefinementLimits& lim, RefinementStats& st) {
  if (ig.empty(state)) return 0.0;
  ++st.cells_visited;
  ShellCell cell = classify_chart_cell(chart, ball.center, ball.level);
  if (cell.status == CellStatus::outside) return 0.0;
  typename Integrand::State rest = state;
  double own = std::numeric_limits<double>::infinity();
  if (cell.status == CellStatus::inside) {
    rest = ig.resolve(cell, state);
    if (ig.empty(rest)) {
      ++st.cells_used;
      return 0.0;
    }
    own = ig.sup(rest) * cell.volume() * pow_p(cell.prime(), -cell.omega_exponent());
  } else if (!cell.contains_origin()) {
    own = ig.sup(rest) * tail_weight(cell);
  }
  const bool capped = ball.level <= lim.min_level || st.cells_visited >= lim.budget;
  if (capped && std::isfinite(own)) {
    if (st.cells_visited >= lim.budget) st.budget_exhausted = true;
    ++st.cells_unresolved;
    return own;
  }
  double sum = 0.0;
  for (const auto& child : children(cell.prime(), ball)) {
    auto sub = ig.restrict(rest, child);
    sum += refine_cell(chart, child, sub, ig, lim, st);
  }
  return std::min(own, sum);
}

struct ShellMeasureResult {
  Complex value{0.0, 0.0};
  double error_bound = 0.0;
  std::size_t cells_used = 0;
  std::size_t cells_unresolved = 0;
  bool budget_exhausted = false;
};

struct ShellOptions {
  int refinement_cap = 8;
  std::size_t budget = 200000;
  // Multiply each resolved contribution by |Q(k) - m^2|^alpha at its shell point.
  std::optional<double> symbol_alpha;
};

// Integral of g against delta(Q(k) - m^2) restricted to the requested branches, in the chart
// solving for coordinate `dependent`; the main route uses dependent = 0.
ShellMeasureResult shell_integrate(const CellFunction& g, const PadicScalar& m, Branch branch,
                                   const ShellOptions& opts = {}, std::size_t dependent = 0);

struct InvarianceResult {
  double residual = 0.0;
  double bound = 0.0;
};
InvarianceResult invariance_residual(const PadicMatrix& l, const CellFunction& g, const PadicScalar& m, Branch branch,
                                     const ShellOptions& opts = {});

struct SupportOptions {
  int refinement_cap = 8;
  std::size_t budget = 200000;
  // Refine until the omega variation exponent is at most this value.
  std::optional<long> max_omega_variation_exponent;
};

class SupportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inside cells covering the union of term balls of f; throws SupportError if part of it is
// outside U_{Q,m} or cannot be certified within the cap.
std::vector<ShellCell> decompose_support(const CellFunction& f, const PadicScalar& m, const SupportOptions& opts = {});
std::vector<ShellCell> decompose_balls(const std::vector<Ball>& balls, const PadicScalar& m, long finest_level,
                                       const SupportOptions& opts = {});

struct CensusLevel {
  long level = 0;
  std::size_t inside = 0;
  std::size_t outside = 0;
  std::size_t unresolved = 0;
  double mass = 0.0;   // lambda-mass of inside cells found so far
  double bound = 0.0;  // tail bound of the unresolved cells at this level
};
std::vector<CensusLevel> shell_census(const Ball& root, const PadicScalar& m, int levels, std::size_t budget = 200000);

}  // namespace padickg
