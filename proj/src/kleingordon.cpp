#include "padickg/kleingordon.hpp"

#include <algorithm>
#include <cmath>

namespace padickg {

void KGConfig::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (m.prime() == 0 || m.is_zero()) throw std::invalid_argument("m must be a nonzero p-adic number");
}

double symbol(const PadicVector& k, const KGConfig& cfg) {
  PadicScalar q = quadratic_q(k) - cfg.m * cfg.m;
  if (q.is_zero()) return 0.0;
  return std::pow(q.norm(), cfg.alpha);
}

namespace {

class SymbolIntegrator {
 public:
  SymbolIntegrator(const KGConfig& cfg, long min_level) : cfg_(cfg), m2_(cfg.m * cfg.m), min_level_(min_level) {}

  double visit(const CellTerm& t, const Ball& ball) {
    ++result.cells;
    const int p = cfg_.prime();
    const PadicScalar q = quadratic_q(ball.center) - m2_;
    const auto cexp = norm_exponent(ball.center);
    const long beta = cexp ? std::max(*cexp + ball.level, 2 * ball.level) : 2 * ball.level;
    const double vol = ball_volume(p, 4, ball.level);
    if (!q.is_zero() && beta < q.norm_exponent()) {
      auto e = norm_exponent(t.modulation);
      if (e && *e + ball.level > 0) return 0.0;
      const double sym = std::pow(pow_p(p, q.norm_exponent()), cfg_.alpha);
      result.value += t.coeff * sym * vol * dot_phase(t.modulation, ball.center).chi();
      return 0.0;
    }
    const long sup_exp = q.is_zero() ? beta : std::max(q.norm_exponent(), beta);
    const double own = std::abs(t.coeff) * vol * std::pow(pow_p(p, sup_exp), cfg_.alpha);
    if (ball.level <= min_level_ || result.cells >= cfg_.budget) {
      if (result.cells >= cfg_.budget) result.budget_exhausted = true;
      ++result.unresolved;
      return own;
    }
    double sum = 0.0;
    for (const auto& child : children(p, ball)) sum += visit(t, child);
    return std::min(own, sum);
  }

  BoxResult result;

 private:
  const KGConfig& cfg_;
  PadicScalar m2_;
  long min_level_;
};

}  // namespace

BoxResult integrate_with_symbol(const CellFunction& f, const KGConfig& cfg, int refinement_cap) {
  cfg.validate();
  if (f.empty()) return {};
  if (f.dimension() != 4) throw std::invalid_argument("integrate_with_symbol expects a function on Q_p^4");
  SymbolIntegrator integ(cfg, *f.finest_level() - refinement_cap);
  double bound = 0.0;
  for (const auto& t : f.terms()) bound += integ.visit(t, {t.center, t.level});
  integ.result.bound = bound;
  return integ.result;
}

BoxResult apply_box(const CellFunction& phi, const PadicVector& x, const KGConfig& cfg, int refinement_cap) {
  if (phi.empty()) return {};
  if (x.size() != 4) throw std::invalid_argument("apply_box expects a spacetime point");
  PadicVector w = x;
  w[0] = -w[0];
  return integrate_with_symbol(fourier_minkowski(phi).modulated(w), cfg, refinement_cap);
}

BoxResult apply_box(const CellFunction& phi, const PadicVector& x, const KGConfig& cfg) {
  return apply_box(phi, x, cfg, cfg.refinement_cap);
}

Complex weak_pair_plane_wave(const PadicVector& k, const CellFunction& phi, const KGConfig& cfg) {
  cfg.validate();
  if (phi.empty()) return {0.0, 0.0};
  return symbol(k, cfg) * fourier_minkowski(phi).evaluate(k);
}

CellFunction multiply_spatial(const CellFunction& f4, const CellFunction& g3) {
  if (f4.dimension() != 4 || g3.dimension() != 3) throw std::invalid_argument("multiply_spatial: dimension mismatch");
  const int p = f4.prime();
  std::vector<CellTerm> out;
  for (const auto& a : f4.terms()) {
    Ball as{{a.center[1], a.center[2], a.center[3]}, a.level};
    for (const auto& b : g3.terms()) {
      if (!intersect(as, {b.center, b.level})) continue;
      PadicVector mod = a.modulation;
      for (std::size_t i = 0; i < 3; ++i) mod[i + 1] += b.modulation[i];
      const Complex c = a.coeff * b.coeff;
      if (a.level <= b.level) {
        out.push_back({c, mod, a.center, a.level});
        continue;
      }
      const long delta = a.level - b.level;
      std::size_t count = 1;
      for (long i = 0; i < delta; ++i) {
        count *= static_cast<std::size_t>(p);
        if (count > 100000) throw RefinementCapError("multiply_spatial: too many time slices");
      }
      for (std::size_t y = 0; y < count; ++y) {
        PadicScalar k0 = a.center[0];
        if (y) k0 += PadicScalar::from_integer(p, static_cast<long>(y)) * PadicScalar::power_of_p(p, -a.level);
        out.push_back({c, mod, {k0, b.center[0], b.center[1], b.center[2]}, b.level});
      }
    }
  }
  return CellFunction::make(p, 4, std::move(out));
}

ShellMeasureResult weak_pair_branch(const CellFunction& g_plus, const CellFunction& g_minus, const CellFunction& phi,
                                    const KGConfig& cfg) {
  cfg.validate();
  ShellMeasureResult total;
  if (phi.empty()) return total;
  const CellFunction f = fourier_minkowski(phi);
  ShellOptions opts{cfg.refinement_cap, cfg.budget, cfg.alpha};
  auto run = [&](const CellFunction& g, Branch br) {
    if (g.empty()) return;
    auto r = shell_integrate(multiply_spatial(f, g), cfg.m, br, opts);
    total.value += r.value;
    total.error_bound += r.error_bound;
    total.cells_used += r.cells_used;
    total.cells_unresolved += r.cells_unresolved;
    total.budget_exhausted = total.budget_exhausted || r.budget_exhausted;
  };
  run(g_plus, Branch::plus);
  run(g_minus, Branch::minus);
  return total;
}

BoxResult weak_pair_frequency(const CellFunction& g, const CellFunction& phi, const KGConfig& cfg) {
  if (g.empty() || phi.empty()) return {};
  return integrate_with_symbol(g.product(fourier_minkowski(phi)), cfg, cfg.refinement_cap);
}

// ---------------------------------------------------------------- homogeneous solutions

HomogeneousSolution::HomogeneousSolution(CellFunction plus, CellFunction minus, PadicScalar m, SpatialSign sign,
                                         int weight_power, SupportOptions opts)
    : plus_(std::move(plus)), minus_(std::move(minus)), m_(std::move(m)), sign_(sign), weight_power_(weight_power),
      opts_(opts) {
  if (m_.is_zero()) throw std::invalid_argument("m must be nonzero");
  if (!plus_.empty()) plus_cells_ = decompose_support(plus_, m_, opts_);
  if (!minus_.empty()) minus_cells_ = decompose_support(minus_, m_, opts_);
}

namespace {

struct SpectralSum {
  const CellFunction& f;
  PadicVector shift;       // added to every modulation
  PadicScalar time_factor;  // chi(time_factor * omega)
  int weight_power;
  std::size_t budget;
  std::size_t cells = 0;
  Complex value{0.0, 0.0};

  void visit(const Ball& ball, const std::vector<std::size_t>& active, const PadicScalar& m) {
    if (active.empty()) return;
    if (++cells > budget) throw RefinementCapError("spectral evaluation exceeded the cell budget");
    const int p = m.prime();
    ShellCell cell = classify_cell(ball.center, ball.level, m);
    if (cell.status != CellStatus::inside) throw SupportError("spectral cell lost its inside certificate");
    const long dv = cell.omega_variation_exponent();
    bool time_ok = time_factor.is_zero() || time_factor.norm_exponent() + dv <= 0;
    std::vector<std::size_t> rest;
    if (!time_ok) {
      rest = active;
    } else {
      const Complex phase = (time_factor * *cell.omega).chi();
      const double weight = cell.volume() * pow_p(p, -weight_power * cell.omega_exponent());
      for (std::size_t i : active) {
        const CellTerm& t = f.terms()[i];
        if (t.level < ball.level) {
          rest.push_back(i);
          continue;
        }
        PadicVector mod = add(t.modulation, shift);
        auto e = norm_exponent(mod);
        if (e && *e + ball.level > 0) continue;
        value += t.coeff * dot_phase(mod, ball.center).chi() * phase * weight;
      }
    }
    if (rest.empty()) return;
    for (const auto& child : children(p, ball)) {
      std::vector<std::size_t> sub;
      for (std::size_t i : rest)
        if (intersect({f.terms()[i].center, f.terms()[i].level}, child)) sub.push_back(i);
      visit(child, sub, m);
    }
  }
};

}  // namespace

EvaluationResult HomogeneousSolution::evaluate(const PadicScalar& t, const PadicVector& x) const {
  if (x.size() != 3) throw std::invalid_argument("evaluate expects a point of Q_p^3");
  EvaluationResult res;
  PadicVector shift = sign_ == SpatialSign::standard ? x : negate(x);
  auto run = [&](const CellFunction& f, const std::vector<ShellCell>& cells, const PadicScalar& tf) {
    if (f.empty()) return;
    SpectralSum sum{f, shift, tf, weight_power_, opts_.budget};
    for (const auto& c : cells) {
      Ball b{c.center, c.level};
      std::vector<std::size_t> active;
      for (std::size_t i = 0; i < f.size(); ++i)
        if (intersect({f.terms()[i].center, f.terms()[i].level}, b)) active.push_back(i);
      sum.visit(b, active, m_);
    }
    res.value += sum.value;
    res.cells += sum.cells;
  };
  run(plus_, plus_cells_, -t);
  run(minus_, minus_cells_, t);
  return res;
}

CellFunction multiply_per_cell(const CellFunction& f, const std::vector<ShellCell>& cells,
                               const std::function<Complex(const ShellCell&)>& factor) {
  std::vector<CellTerm> out;
  for (const auto& c : cells) {
    Ball b{c.center, c.level};
    const Complex k = factor(c);
    for (const auto& t : f.terms())
      if (auto meet = intersect({t.center, t.level}, b)) out.push_back({t.coeff * k, t.modulation, meet->center, meet->level});
  }
  return CellFunction::make(f.prime(), f.dimension(), std::move(out));
}

CauchySolution cauchy_solve(const CellFunction& psi0, const CellFunction& psi1, const KGConfig& cfg,
                            const SupportOptions& opts) {
  cfg.validate();
  const int p = cfg.prime();
  if (p % 4 != 3) throw ConditionError("the Cauchy solver requires p = 3 mod 4");
  const CellFunction h0 = psi0.empty() ? CellFunction(p, 3) : psi0.fourier(FourierDirection::inverse);
  const CellFunction h1 = psi1.empty() ? CellFunction(p, 3) : psi1.fourier(FourierDirection::inverse);
  std::vector<Ball> balls = h0.support_balls();
  for (auto& b : h1.support_balls()) balls.push_back(std::move(b));

  CauchySolution sol;
  sol.cfg = cfg;
  if (!balls.empty()) {
    long finest = std::min(h0.finest_level().value_or(balls.front().level), h1.finest_level().value_or(balls.front().level));
    sol.cells = decompose_balls(balls, cfg.m, finest, opts);
  }
  const TwistedCharacter pi(p, cfg.convention);
  const Complex half_i{0.0, 0.5};
  auto abs_omega = [&](const ShellCell& c) { return pow_p(p, c.omega_exponent()); };
  auto pi_part = [&](const ShellCell& c) { return pi(*c.omega) * std::pow(abs_omega(c), 1.0 - cfg.alpha); };
  CellFunction a0 = multiply_per_cell(h0, sol.cells, [&](const ShellCell& c) { return Complex(0.5 * abs_omega(c), 0.0); });
  CellFunction a1 = multiply_per_cell(h1, sol.cells, [&](const ShellCell& c) { return half_i * pi_part(c); });
  sol.u_plus = a0 - a1;
  sol.u_minus = a0 + a1;
  if (sol.u_plus.dimension() == 0) sol.u_plus = CellFunction(p, 3);
  if (sol.u_minus.dimension() == 0) sol.u_minus = CellFunction(p, 3);
  sol.evaluator = HomogeneousSolution(sol.u_plus, sol.u_minus, cfg.m, SpatialSign::standard, 1, opts);
  return sol;
}

InitialConditionReport check_initial_conditions(const CauchySolution& sol, const CellFunction& psi0,
                                                const CellFunction& psi1, const std::vector<PadicVector>& samples) {
  InitialConditionReport rep;
  const int p = sol.cfg.prime();
  const PadicScalar zero = PadicScalar::zero(p);
  const TwistedCharacter pi(p, sol.cfg.convention);
  const double alpha = sol.cfg.alpha;
  CellFunction w_plus = multiply_per_cell(sol.u_plus, sol.cells,
                                          [&](const ShellCell& c) { return dtilde_on_wave(-*c.omega, alpha, pi); });
  CellFunction w_minus = multiply_per_cell(sol.u_minus, sol.cells,
                                           [&](const ShellCell& c) { return dtilde_on_wave(*c.omega, alpha, pi); });
  HomogeneousSolution derivative(w_plus, w_minus, sol.cfg.m);

  std::vector<Complex> d(samples.size()), target(samples.size());
  std::size_t best = 0;
  double best_abs = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    Complex u0 = sol.evaluator.evaluate(zero, samples[i]).value;
    Complex expect = psi0.empty() ? Complex(0.0, 0.0) : psi0.evaluate(samples[i]);
    rep.ic_b_residual = std::max(rep.ic_b_residual, std::abs(u0 - expect));
    d[i] = derivative.evaluate(zero, samples[i]).value;
    target[i] = psi1.empty() ? Complex(0.0, 0.0) : psi1.evaluate(samples[i]);
    if (std::abs(target[i]) > best_abs) {
      best_abs = std::abs(target[i]);
      best = i;
    }
  }
  if (best_abs > 1e-12) rep.ic_c_constant = d[best] / target[best];
  for (std::size_t i = 0; i < samples.size(); ++i)
    rep.ic_c_residual = std::max(rep.ic_c_residual, std::abs(d[i] / rep.ic_c_constant - target[i]));
  return rep;
}

}  // namespace padickg
