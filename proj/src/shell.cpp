#include "padickg/shell.hpp"

#include <algorithm>
#include <cstdint>

namespace padickg {

const char* to_string(CellStatus s) {
  switch (s) {
    case CellStatus::inside: return "inside";
    case CellStatus::outside: return "outside";
    default: return "unresolved";
  }
}

const char* to_string(Branch b) {
  switch (b) {
    case Branch::plus: return "plus";
    case Branch::minus: return "minus";
    default: return "both";
  }
}

ShellChart ShellChart::for_coordinate(std::size_t l, const PadicScalar& t) {
  if (l > 3) throw std::invalid_argument("chart coordinate must be 0..3");
  const int eps[4] = {1, -1, -1, -1};
  ShellChart c;
  c.dependent = l;
  c.t = t;
  c.constant = eps[l] > 0 ? t : -t;
  std::size_t j = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (i == l) continue;
    c.free[j] = i;
    c.signs[j] = -eps[l] * eps[i];
    ++j;
  }
  return c;
}

PadicScalar ShellChart::value(const PadicVector& y) const {
  PadicScalar s = constant;
  for (std::size_t j = 0; j < 3; ++j) {
    if (y[j].is_exact_zero()) continue;
    PadicScalar sq = y[j] * y[j];
    s = signs[j] > 0 ? s + sq : s - sq;
  }
  return s;
}

ShellCell classify_chart_cell(const ShellChart& chart, const PadicVector& center, long level) {
  if (center.size() != 3) throw std::invalid_argument("shell cells live in Q_p^3");
  ShellCell c;
  c.center = center;
  c.level = level;
  c.s = chart.value(center);
  c.center_exponent = norm_exponent(center);
  c.beta_exponent = c.center_exponent ? std::max(*c.center_exponent + level, 2 * level) : 2 * level;
  if (!c.s.is_zero()) c.s_exponent = c.s.norm_exponent();
  if (c.s_exponent && c.beta_exponent <= *c.s_exponent - 1) {
    if (auto roots = sqrt_hensel(c.s)) {
      c.status = CellStatus::inside;
      c.omega = roots->positive;
    } else {
      c.status = CellStatus::outside;
    }
  }
  return c;
}

ShellCell classify_cell(const PadicVector& center, long level, const PadicScalar& m) {
  if (m.is_zero()) throw std::invalid_argument("mass must be nonzero");
  return classify_chart_cell(ShellChart::mass_shell(m), center, level);
}

PadicScalar omega(const PadicVector& k, const PadicScalar& m) {
  if (k.size() != 3) throw std::invalid_argument("omega expects a point of Q_p^3");
  PadicScalar s = m * m + dot(k, k);
  if (s.is_zero()) throw NotInShellError("k.k + m^2 vanishes at the tracked precision");
  auto roots = sqrt_hensel(s);
  if (!roots) throw NotInShellError("k.k + m^2 is not a square");
  return roots->positive;
}

double gelfand_leray_weight(const PadicVector& center4, long level, std::size_t l) {
  if (center4.size() != 4 || l > 3) throw std::invalid_argument("gelfand_leray_weight: bad arguments");
  const PadicScalar& c = center4[l];
  if (c.is_zero() || c.norm_exponent() <= level)
    throw NotInShellError("derivative of Q is not constant on the chart cell");
  return pow_p(c.prime(), -c.norm_exponent());
}

double tail_weight(const ShellCell& cell) {
  const int p = cell.prime();
  const double kappa = 1.0 + 1.0 / std::sqrt(static_cast<double>(p));
  return kappa * std::pow(static_cast<double>(p), 2.5 * static_cast<double>(cell.level) -
                                                      0.5 * static_cast<double>(*cell.center_exponent));
}

// ---------------------------------------------------------------- chart integrand

namespace {

struct TermGeometry {
  Complex coeff;
  Ball free_ball;
  PadicScalar dep_center;
  PadicScalar dep_modulation;
  PadicVector free_modulation;
  std::optional<long> free_mod_exponent;
  long level;
};

struct Entry {
  std::uint32_t term;
  std::uint8_t root;  // 0: +r, 1: -r
};

class ChartIntegrand {
 public:
  using State = std::vector<Entry>;

  ChartIntegrand(const CellFunction& g, const ShellChart& chart, Branch branch, std::optional<double> symbol_alpha)
      : chart_(chart), branch_(branch), symbol_alpha_(symbol_alpha) {
    for (const auto& t : g.terms()) {
      TermGeometry geo;
      geo.coeff = t.coeff;
      geo.level = t.level;
      PadicVector fc(3), fm(3);
      for (std::size_t j = 0; j < 3; ++j) {
        fc[j] = t.center[chart.free[j]];
        fm[j] = t.modulation[chart.free[j]];
      }
      geo.free_ball = {fc, t.level};
      geo.free_mod_exponent = norm_exponent(fm);
      geo.free_modulation = std::move(fm);
      geo.dep_center = t.center[chart.dependent];
      geo.dep_modulation = t.modulation[chart.dependent];
      terms_.push_back(std::move(geo));
    }
    for (std::size_t j = 0; j < 3; ++j)
      if (chart.free[j] == 0) time_index_ = j;
  }

  State root_state(const Ball& ball) const {
    State s;
    for (std::uint32_t i = 0; i < terms_.size(); ++i) {
      if (!intersect(terms_[i].free_ball, ball)) continue;
      if (chart_.dependent != 0 || branch_ != Branch::minus) s.push_back({i, 0});
      if (chart_.dependent != 0 || branch_ != Branch::plus) s.push_back({i, 1});
    }
    return s;
  }

  State restrict(const State& st, const Ball& ball) const {
    State out;
    for (const auto& e : st)
      if (intersect(terms_[e.term].free_ball, ball)) out.push_back(e);
    return out;
  }

  bool empty(const State& st) const { return st.empty(); }

  double sup(const State& st) const {
    double s = 0.0;
    for (const auto& e : st) s += std::abs(terms_[e.term].coeff);
    return s;
  }

  State resolve(const ShellCell& cell, const State& st) {
    State rest;
    const int p = cell.prime();
    const long dv = cell.omega_variation_exponent();
    const PadicScalar& r = *cell.omega;
    const PadicScalar neg_r = -r;
    const double weight = cell.volume() * pow_p(p, -cell.omega_exponent());

    // Branch is read from sign(k0) when k0 is a free coordinate.
    std::optional<Sign> k0_sign;
    if (chart_.dependent != 0 && branch_ != Branch::both) {
      const PadicScalar& c0 = cell.center[time_index_];
      if (!c0.is_zero() && c0.norm_exponent() > cell.level) k0_sign = sign(c0);
    }

    for (const auto& e : st) {
      const TermGeometry& t = terms_[e.term];
      if (chart_.dependent != 0 && branch_ != Branch::both) {
        if (!k0_sign) {
          rest.push_back(e);
          continue;
        }
        if ((*k0_sign == Sign::positive) != (branch_ == Branch::plus)) continue;
      }
      if (cell.level > t.level) {
        rest.push_back(e);
        continue;
      }
      const PadicScalar& k_dep = e.root == 0 ? r : neg_r;
      PadicScalar d = k_dep - t.dep_center;
      std::optional<long> dist;
      if (!d.is_zero()) dist = d.norm_exponent();
      bool in_ball;
      if (dv <= t.level) {
        in_ball = !dist || *dist <= t.level;
      } else if (dist && *dist > dv) {
        in_ball = false;
      } else {
        rest.push_back(e);
        continue;
      }
      if (!in_ball) continue;
      if (!t.dep_modulation.is_zero() && t.dep_modulation.norm_exponent() + dv > 0) {
        rest.push_back(e);
        continue;
      }
      if (t.free_mod_exponent && *t.free_mod_exponent + cell.level > 0) continue;
      RationalPhase ph = dot_phase(t.free_modulation, cell.center);
      if (!t.dep_modulation.is_zero()) ph += (t.dep_modulation * k_dep).fractional_part();
      Complex contribution = t.coeff * ph.chi() * weight;
      if (symbol_alpha_) contribution *= symbol_at(cell, k_dep);
      value += contribution;
    }
    return rest;
  }

  Complex value{0.0, 0.0};

 private:
  double symbol_at(const ShellCell& cell, const PadicScalar& k_dep) const {
    PadicVector k(4);
    k[chart_.dependent] = k_dep;
    for (std::size_t j = 0; j < 3; ++j) k[chart_.free[j]] = cell.center[j];
    PadicScalar q = quadratic_q(k) - chart_.t;
    if (q.is_zero()) return 0.0;
    return std::pow(q.norm(), *symbol_alpha_);
  }

  ShellChart chart_;
  Branch branch_;
  std::optional<double> symbol_alpha_;
  std::vector<TermGeometry> terms_;
  std::size_t time_index_ = 0;
};

}  // namespace

ShellMeasureResult shell_integrate(const CellFunction& g, const PadicScalar& m, Branch branch, const ShellOptions& opts,
                                   std::size_t dependent) {
  if (m.is_zero()) throw std::invalid_argument("mass must be nonzero");
  ShellMeasureResult res;
  if (g.empty()) return res;
  if (g.dimension() != 4) throw std::invalid_argument("shell_integrate expects a function on Q_p^4");
  if (branch == Branch::both && dependent == 0) {
    // Summing the two branch passes keeps both == plus + minus bit for bit.
    auto plus = shell_integrate(g, m, Branch::plus, opts, dependent);
    auto minus = shell_integrate(g, m, Branch::minus, opts, dependent);
    res.value = plus.value + minus.value;
    res.error_bound = plus.error_bound + minus.error_bound;
    res.cells_used = plus.cells_used + minus.cells_used;
    res.cells_unresolved = plus.cells_unresolved + minus.cells_unresolved;
    res.budget_exhausted = plus.budget_exhausted || minus.budget_exhausted;
    return res;
  }
  ShellChart chart = ShellChart::for_coordinate(dependent, m * m);
  ChartIntegrand ig(g, chart, branch, opts.symbol_alpha);
  std::vector<Ball> roots;
  for (const auto& t : g.terms()) {
    PadicVector fc(3);
    for (std::size_t j = 0; j < 3; ++j) fc[j] = t.center[chart.free[j]];
    roots.push_back({fc, t.level});
  }
  RefinementLimits lim{*g.finest_level() - opts.refinement_cap, opts.budget};
  RefinementStats st;
  for (const auto& ball : maximal_balls(std::move(roots)))
    res.error_bound += refine_cell(chart, ball, ig.root_state(ball), ig, lim, st);
  res.value = ig.value;
  res.cells_used = st.cells_used;
  res.cells_unresolved = st.cells_unresolved;
  res.budget_exhausted = st.budget_exhausted;
  return res;
}

InvarianceResult invariance_residual(const PadicMatrix& l, const CellFunction& g, const PadicScalar& m, Branch branch,
                                     const ShellOptions& opts) {
  CellFunction moved = act_linear(lorentz_inverse(l), l, zero_vector(g.prime(), 4), g);
  auto a = shell_integrate(g, m, branch, opts);
  auto b = shell_integrate(moved, m, branch, opts);
  return {std::abs(a.value - b.value), a.error_bound + b.error_bound};
}

std::vector<ShellCell> decompose_support(const CellFunction& f, const PadicScalar& m, const SupportOptions& opts) {
  if (f.dimension() != 3) throw std::invalid_argument("decompose_support expects a function on Q_p^3");
  if (f.empty()) return {};
  return decompose_balls(f.support_balls(), m, *f.finest_level(), opts);
}

std::vector<ShellCell> decompose_balls(const std::vector<Ball>& balls, const PadicScalar& m, long finest_level,
                                       const SupportOptions& opts) {
  std::vector<ShellCell> out;
  const ShellChart chart = ShellChart::mass_shell(m);
  const long min_level = finest_level - opts.refinement_cap;
  std::size_t visited = 0;
  std::function<void(const Ball&)> visit = [&](const Ball& b) {
    if (++visited > opts.budget) throw SupportError("support certification exceeded the cell budget");
    ShellCell c = classify_chart_cell(chart, b.center, b.level);
    if (c.status == CellStatus::outside) throw SupportError("support meets the complement of U_{Q,m}");
    if (c.status == CellStatus::inside &&
        (!opts.max_omega_variation_exponent || c.omega_variation_exponent() <= *opts.max_omega_variation_exponent)) {
      out.push_back(std::move(c));
      return;
    }
    if (b.level <= min_level) throw SupportError("support not certified within the refinement cap");
    for (const auto& child : children(m.prime(), b)) visit(child);
  };
  for (const auto& b : maximal_balls(balls)) visit(b);
  return out;
}

std::vector<CensusLevel> shell_census(const Ball& root, const PadicScalar& m, int levels, std::size_t budget) {
  const ShellChart chart = ShellChart::mass_shell(m);
  const int p = m.prime();
  std::vector<CensusLevel> out;
  std::vector<Ball> frontier{root};
  double mass = 0.0;
  std::size_t visited = 0;
  for (int k = 0; k <= levels && !frontier.empty(); ++k) {
    CensusLevel row;
    row.level = frontier.front().level;
    std::vector<Ball> next;
    for (const auto& b : frontier) {
      ++visited;
      ShellCell c = classify_chart_cell(chart, b.center, b.level);
      if (c.status == CellStatus::inside) {
        ++row.inside;
        mass += c.volume() * pow_p(p, -c.omega_exponent());
      } else if (c.status == CellStatus::outside) {
        ++row.outside;
      } else {
        ++row.unresolved;
        row.bound += c.contains_origin() ? std::numeric_limits<double>::infinity() : tail_weight(c);
        if (k < levels && visited < budget)
          for (auto& ch : children(p, b)) next.push_back(std::move(ch));
      }
    }
    row.mass = mass;
    out.push_back(row);
    frontier = std::move(next);
  }
  return out;
}

}  // namespace padickg
