#include "padickg/quantization.hpp"

#include <cmath>

namespace padickg {

SingleParticleVector::SingleParticleVector(CellFunction psi_hat, PadicScalar m, SupportOptions opts)
    : psi_hat_(std::move(psi_hat)), m_(std::move(m)), opts_(opts) {
  if (psi_hat_.dimension() != 3) throw std::invalid_argument("single-particle vectors live on Q_p^3");
  cells_ = decompose_support(psi_hat_, m_, opts_);
}

SingleParticleVector::SingleParticleVector(CellFunction psi_hat, PadicScalar m, std::vector<ShellCell> cells,
                                           SupportOptions opts)
    : psi_hat_(std::move(psi_hat)), m_(std::move(m)), opts_(opts), cells_(std::move(cells)) {
  if (psi_hat_.dimension() != 3) throw std::invalid_argument("single-particle vectors live on Q_p^3");
}

Complex SingleParticleVector::wave_function(const PadicScalar& t, const PadicVector& x) const {
  HomogeneousSolution sol(psi_hat_, CellFunction(psi_hat_.prime(), 3), m_, SpatialSign::standard, 0, opts_);
  return sol.evaluate(t, x).value;
}

std::vector<ShellCell> refine_for_time(const std::vector<ShellCell>& cells, const PadicScalar& t, const PadicScalar& m,
                                       std::size_t budget) {
  if (t.is_zero()) return cells;
  std::vector<ShellCell> out;
  std::size_t visited = 0;
  const long te = t.norm_exponent();
  std::function<void(const ShellCell&)> visit = [&](const ShellCell& c) {
    if (++visited > budget) throw RefinementCapError("time refinement exceeded the cell budget");
    if (c.status != CellStatus::inside) throw SupportError("time refinement met a non-inside cell");
    if (te + c.omega_variation_exponent() <= 0) {
      out.push_back(c);
      return;
    }
    for (const auto& child : children(m.prime(), {c.center, c.level})) visit(classify_cell(child.center, child.level, m));
  };
  for (const auto& c : cells) visit(c);
  return out;
}

SingleParticleVector evolve_U(const PadicScalar& t, const SingleParticleVector& psi) {
  if (t.is_zero() || psi.psi_hat().empty()) return psi;
  auto cells = refine_for_time(psi.cells(), t, psi.mass(), psi.options().budget);
  const PadicScalar minus_t = -t;
  CellFunction f =
      multiply_per_cell(psi.psi_hat(), cells, [&](const ShellCell& c) { return (minus_t * *c.omega).chi(); });
  return SingleParticleVector(std::move(f), psi.mass(), std::move(cells), psi.options());
}

SingleParticleVector rep_U0(const PadicVector& a, const PadicMatrix& r, const SingleParticleVector& psi) {
  if (a.size() != 4 || r.size() != 3) throw std::invalid_argument("rep_U0 expects a spacetime shift and a 3x3 rotation");
  if (!is_rotation(r)) throw std::invalid_argument("rep_U0 expects a rotation");
  const int p = psi.mass().prime();
  if (psi.psi_hat().empty()) return psi;
  CellFunction rotated = act_linear(r, transpose(r), zero_vector(p, 3), psi.psi_hat());
  PadicVector shift{-a[1], -a[2], -a[3]};
  SingleParticleVector moved(rotated.modulated(shift), psi.mass(), psi.options());
  return evolve_U(-a[0], moved);
}

namespace {

struct ShellRestrictor {
  const CellFunction& g;
  const PadicScalar& m;
  long min_level;
  std::optional<double> symbol_alpha;
  Restriction out;
  std::vector<CellTerm> terms;

  double symbol_at(const ShellCell& c) const {
    PadicVector k{*c.omega, c.center[0], c.center[1], c.center[2]};
    PadicScalar q = quadratic_q(k) - m * m;
    if (q.is_zero()) return 0.0;
    return std::pow(q.norm(), *symbol_alpha);
  }

  void visit(const ShellCell& cell, const std::vector<std::size_t>& active) {
    if (active.empty()) return;
    const long dv = cell.omega_variation_exponent();
    const PadicScalar& w = *cell.omega;
    std::vector<std::size_t> rest;
    std::vector<CellTerm> local;
    for (std::size_t i : active) {
      const CellTerm& t = g.terms()[i];
      if (t.level < cell.level || dv > t.level) {
        rest.push_back(i);
        continue;
      }
      PadicScalar gap = w - t.center[0];
      if (!gap.is_zero() && gap.norm_exponent() > t.level) continue;
      const PadicScalar& b0 = t.modulation[0];
      if (!b0.is_zero() && b0.norm_exponent() + dv > 0) {
        rest.push_back(i);
        continue;
      }
      Complex c = t.coeff;
      if (!b0.is_zero()) c *= (b0 * w).chi();
      if (symbol_alpha) c *= symbol_at(cell);
      local.push_back({c, {t.modulation[1], t.modulation[2], t.modulation[3]}, cell.center, cell.level});
    }
    if (rest.empty()) {
      out.cells.push_back(cell);
      for (auto& t : local) terms.push_back(std::move(t));
      return;
    }
    if (cell.level <= min_level) {
      ++out.unresolved;
      return;
    }
    for (const auto& child : children(m.prime(), {cell.center, cell.level})) {
      std::vector<std::size_t> sub;
      for (std::size_t i : active) {
        const CellTerm& t = g.terms()[i];
        Ball spatial{{t.center[1], t.center[2], t.center[3]}, t.level};
        if (intersect(spatial, child)) sub.push_back(i);
      }
      visit(classify_cell(child.center, child.level, m), sub);
    }
  }
};

}  // namespace

Restriction restrict_to_shell(const CellFunction& g, const std::vector<ShellCell>& cells, const PadicScalar& m,
                              int refinement_cap, std::optional<double> symbol_alpha) {
  if (g.dimension() != 4 && !g.empty()) throw std::invalid_argument("restrict_to_shell expects a function on Q_p^4");
  const int p = m.prime();
  long finest = g.empty() ? 0 : *g.finest_level();
  for (const auto& c : cells) finest = std::min(finest, c.level);
  ShellRestrictor r{g, m, finest - refinement_cap, symbol_alpha, {}, {}};
  for (const auto& c : cells) {
    if (c.status != CellStatus::inside) throw SupportError("restriction needs inside cells");
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const CellTerm& t = g.terms()[i];
      if (intersect({{t.center[1], t.center[2], t.center[3]}, t.level}, {c.center, c.level})) active.push_back(i);
    }
    if (active.empty()) {
      r.out.cells.push_back(c);
      continue;
    }
    r.visit(c, active);
  }
  r.out.values = CellFunction::make(p, 3, std::move(r.terms));
  return std::move(r.out);
}

Restriction map_R(const CellFunction& phi, const std::vector<ShellCell>& cells, const PadicScalar& m,
                  int refinement_cap) {
  if (phi.empty()) return {CellFunction(m.prime(), 3), cells, 0};
  return restrict_to_shell(fourier_minkowski(phi), cells, m, refinement_cap);
}

Restriction map_R_box(const CellFunction& phi, const std::vector<ShellCell>& cells, const KGConfig& cfg) {
  cfg.validate();
  if (phi.empty()) return {CellFunction(cfg.prime(), 3), cells, 0};
  return restrict_to_shell(fourier_minkowski(phi), cells, cfg.m, cfg.refinement_cap, cfg.alpha);
}

CellFunction map_J(const CellFunction& u, const std::vector<ShellCell>& cells) {
  return multiply_per_cell(u, cells, [](const ShellCell& c) {
    return Complex(1.0 / std::sqrt(pow_p(c.prime(), c.omega_exponent())), 0.0);
  });
}

std::vector<CellNorms> j_unitarity(const CellFunction& u, const std::vector<ShellCell>& cells) {
  std::vector<CellNorms> out;
  const CellFunction sq = u.product(u.conjugated());
  for (const auto& c : cells) {
    CellNorms n;
    const CellFunction ju = map_J(u, {c});
    n.frequency_side = ju.product(ju.conjugated()).integrate().real();
    n.shell_side = sq.integrate_over_ball({c.center, c.level}).real() * pow_p(c.prime(), -c.omega_exponent());
    out.push_back(n);
  }
  return out;
}

}  // namespace padickg
