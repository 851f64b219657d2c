#pragma once

#include "padickg/quantization.hpp"

#include <Eigen/Dense>
#include <map>

namespace padickg {

using Operator = Eigen::MatrixXcd;
using ModeVector = Eigen::VectorXcd;
using Occupation = std::vector<int>;

// Symmetric Fock space over M modes truncated at total occupation N.
class FockSpace {
 public:
  FockSpace(std::size_t modes, int cutoff);

  std::size_t modes() const { return modes_; }
  int cutoff() const { return cutoff_; }
  std::size_t dimension() const { return basis_.size(); }
  const std::vector<Occupation>& basis() const { return basis_; }
  std::size_t index(const Occupation& n) const;
  int total(std::size_t i) const;

  ModeVector vacuum() const;
  Operator annihilate(std::size_t mode) const;
  // Raising from the top level leaves the space; those columns are zero.
  Operator create(std::size_t mode) const;
  // a(v) = sum_i conj(v_i) a_i, antilinear in v.
  Operator annihilate(const ModeVector& v) const;
  Operator create(const ModeVector& v) const;
  // Indices of basis states with total occupation <= cutoff - 1.
  std::vector<std::size_t> below_cutoff() const;
  // Max |entry| of [a(u), a^dag(v)] - <u, v> I on the block below the cutoff.
  double ccr_residual(const ModeVector& u, const ModeVector& v) const;
  // (1/sqrt 2)(a(v) + a^dag(v))
  Operator field(const ModeVector& v) const;

 private:
  std::size_t modes_;
  int cutoff_;
  std::vector<Occupation> basis_;
  std::map<Occupation, std::size_t> lookup_;
};

Operator commutator(const Operator& a, const Operator& b);
double max_abs(const Operator& a);

// L^2-normalized indicators of disjoint inside cells.
struct ModeBasis {
  std::vector<ShellCell> cells;
  PadicScalar m;

  std::size_t size() const { return cells.size(); }
  CellFunction mode(std::size_t i) const;
  // Coefficients <e_i, f> and the squared norm lost by the projection.
  std::pair<ModeVector, double> project(const CellFunction& f) const;
};

// The first `count` inside cells at the given level inside root, in enumeration order.
ModeBasis choose_modes(const Ball& root, const PadicScalar& m, std::size_t count);

struct FieldOperator {
  Operator matrix;
  ModeVector coefficients;
  double projection_loss = 0.0;
  std::size_t unresolved = 0;
};

// Phi(phi) on the truncated space, via J R phi projected onto the modes.
FieldOperator field_operator(const FockSpace& space, const ModeBasis& modes, const CellFunction& phi,
                             int refinement_cap = 8);
// Phi(Box phi), with R(Box phi) computed from the symbol on the shell.
FieldOperator field_operator_box(const FockSpace& space, const ModeBasis& modes, const CellFunction& phi,
                                 const KGConfig& cfg);

}  // namespace padickg
