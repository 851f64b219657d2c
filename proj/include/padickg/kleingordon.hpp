#pragma once

#include "padickg/cell_function.hpp"
#include "padickg/minkowski.hpp"
#include "padickg/shell.hpp"
#include "padickg/vladimirov.hpp"

namespace padickg {

struct KGConfig {
  double alpha = 1.0;
  PadicScalar m;
  double eps_target = 1e-9;
  int refinement_cap = 8;
  std::size_t budget = 200000;
  PiConvention convention = PiConvention::unit_tau;

  // Throws std::invalid_argument unless alpha > 0 and m != 0.
  void validate() const;
  int prime() const { return m.prime(); }
};

class ConditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// |Q(k) - m^2|^alpha
double symbol(const PadicVector& k, const KGConfig& cfg);

struct BoxResult {
  Complex value{0.0, 0.0};
  double bound = 0.0;
  std::size_t cells = 0;
  std::size_t unresolved = 0;
  bool budget_exhausted = false;
};

// int F(k) |Q(k) - m^2|^alpha d^4k by certified refinement down to `refinement_cap` levels below F.
BoxResult integrate_with_symbol(const CellFunction& f, const KGConfig& cfg, int refinement_cap);
// (Box phi)(x) = int chi(-[x,k]) |Q(k) - m^2|^alpha (F phi)(k) d^4k
BoxResult apply_box(const CellFunction& phi, const PadicVector& x, const KGConfig& cfg);
// Same with an explicit refinement cap.
BoxResult apply_box(const CellFunction& phi, const PadicVector& x, const KGConfig& cfg, int refinement_cap);

// Pairing of a plane wave with frequency k with Box phi.
Complex weak_pair_plane_wave(const PadicVector& k, const CellFunction& phi, const KGConfig& cfg);
// Pairing of the distribution with F T = g_plus delta_plus + g_minus delta_minus against Box phi.
ShellMeasureResult weak_pair_branch(const CellFunction& g_plus, const CellFunction& g_minus, const CellFunction& phi,
                                    const KGConfig& cfg);
// Pairing of T with F T = G (a function on frequency space) against Box phi.
BoxResult weak_pair_frequency(const CellFunction& g, const CellFunction& phi, const KGConfig& cfg);

// h(k) = F(k) g(k_1, k_2, k_3) as a cell function on Q_p^4.
CellFunction multiply_spatial(const CellFunction& f4, const CellFunction& g3);

enum class SpatialSign { standard = 1, variant = -1 };

struct EvaluationResult {
  Complex value{0.0, 0.0};
  double bound = 0.0;
  std::size_t cells = 0;
};

// (t, x) -> int [chi(-t w + s x.k) f_plus(k) + chi(t w + s x.k) f_minus(k)] d^3k / |w|^weight_power
class HomogeneousSolution {
 public:
  HomogeneousSolution() = default;
  HomogeneousSolution(CellFunction plus, CellFunction minus, PadicScalar m, SpatialSign sign = SpatialSign::standard,
                      int weight_power = 1, SupportOptions opts = {});

  EvaluationResult evaluate(const PadicScalar& t, const PadicVector& x) const;
  const CellFunction& plus() const { return plus_; }
  const CellFunction& minus() const { return minus_; }
  const PadicScalar& mass() const { return m_; }

 private:
  CellFunction plus_, minus_;
  PadicScalar m_;
  SpatialSign sign_ = SpatialSign::standard;
  int weight_power_ = 1;
  SupportOptions opts_;
  std::vector<ShellCell> plus_cells_, minus_cells_;
};

struct CauchySolution {
  CellFunction u_plus;
  CellFunction u_minus;
  HomogeneousSolution evaluator;
  std::vector<ShellCell> cells;
  KGConfig cfg;
};

CauchySolution cauchy_solve(const CellFunction& psi0, const CellFunction& psi1, const KGConfig& cfg,
                            const SupportOptions& opts = {});

struct InitialConditionReport {
  double ic_b_residual = 0.0;
  double ic_c_residual = 0.0;
  Complex ic_c_constant{1.0, 0.0};
};
// Compares u(0, x) with psi0 and D_t u(0, x) with c psi1 at the sample points.
InitialConditionReport check_initial_conditions(const CauchySolution& sol, const CellFunction& psi0,
                                                const CellFunction& psi1, const std::vector<PadicVector>& samples);

// Multiplies f on each cell by a cell constant.
CellFunction multiply_per_cell(const CellFunction& f, const std::vector<ShellCell>& cells,
                               const std::function<Complex(const ShellCell&)>& factor);

}  // namespace padickg
