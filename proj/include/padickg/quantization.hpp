#pragma once

#include "padickg/kleingordon.hpp"

namespace padickg {

// Frequency-side single-particle vector: psi_hat on Q_p^3 supported on certified shell cells.
class SingleParticleVector {
 public:
  SingleParticleVector() = default;
  // Decomposes the support of psi_hat; throws SupportError if it leaves U_{Q,m}.
  SingleParticleVector(CellFunction psi_hat, PadicScalar m, SupportOptions opts = {});
  SingleParticleVector(CellFunction psi_hat, PadicScalar m, std::vector<ShellCell> cells, SupportOptions opts);

  const CellFunction& psi_hat() const { return psi_hat_; }
  const std::vector<ShellCell>& cells() const { return cells_; }
  const PadicScalar& mass() const { return m_; }
  const SupportOptions& options() const { return opts_; }
  double norm() const { return psi_hat_.l2_norm(); }
  // Psi(t, x) = int chi(-t w(k) + x.k) psi_hat(k) d^3k
  Complex wave_function(const PadicScalar& t, const PadicVector& x) const;

 private:
  CellFunction psi_hat_;
  PadicScalar m_;
  SupportOptions opts_;
  std::vector<ShellCell> cells_;
};

// Refines inside cells until t * omega is constant modulo Z_p on each.
std::vector<ShellCell> refine_for_time(const std::vector<ShellCell>& cells, const PadicScalar& t, const PadicScalar& m,
                                       std::size_t budget);

// psi_hat(k) -> chi(-t w(k)) psi_hat(k)
SingleParticleVector evolve_U(const PadicScalar& t, const SingleParticleVector& psi);

// psi_hat(k) -> chi(a0 w(k) - a.k) psi_hat(R^{-1} k) for a rotation R.
SingleParticleVector rep_U0(const PadicVector& a, const PadicMatrix& r, const SingleParticleVector& psi);

struct Restriction {
  CellFunction values;  // k -> G(w(k), k) on the cells
  std::vector<ShellCell> cells;
  std::size_t unresolved = 0;
};

// Restriction of a 4D function G to the plus branch over the given inside cells, refining them
// until G is resolved. With `symbol_alpha`, each value is multiplied by |Q - m^2|^alpha at the shell point.
Restriction restrict_to_shell(const CellFunction& g, const std::vector<ShellCell>& cells, const PadicScalar& m,
                              int refinement_cap = 8, std::optional<double> symbol_alpha = std::nullopt);

// R phi = (F phi) on the plus branch.
Restriction map_R(const CellFunction& phi, const std::vector<ShellCell>& cells, const PadicScalar& m,
                  int refinement_cap = 8);
// R (Box phi), using the symbol on the shell.
Restriction map_R_box(const CellFunction& phi, const std::vector<ShellCell>& cells, const KGConfig& cfg);
// (J u)(k) = u(k) / sqrt|w(k)|
CellFunction map_J(const CellFunction& u, const std::vector<ShellCell>& cells);

struct CellNorms {
  double frequency_side = 0.0;  // int_C |J u|^2 d^3k
  double shell_side = 0.0;      // int_C |u|^2 d lambda
};
std::vector<CellNorms> j_unitarity(const CellFunction& u, const std::vector<ShellCell>& cells);

}  // namespace padickg
