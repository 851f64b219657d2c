#pragma once

#include "padickg/cell_function.hpp"

#include <cstddef>
#include <vector>

namespace padickg {

// Row-major square matrix over Q_p.
using PadicMatrix = std::vector<PadicVector>;

PadicScalar bilinear_q(const PadicVector& x, const PadicVector& y);
PadicScalar quadratic_q(const PadicVector& x);
// diag(1, -1, ..., -1) applied to a vector.
PadicVector signature_flip(const PadicVector& x);

PadicMatrix identity_matrix(int p, std::size_t n);
PadicMatrix diagonal_matrix(const PadicVector& d);
PadicMatrix permutation_matrix(int p, const std::vector<std::size_t>& perm);
PadicMatrix matmul(const PadicMatrix& a, const PadicMatrix& b);
PadicMatrix transpose(const PadicMatrix& a);
PadicVector matvec(const PadicMatrix& m, const PadicVector& x);
PadicScalar determinant(const PadicMatrix& a);
PadicMatrix inverse(const PadicMatrix& a);
bool same_matrix(const PadicMatrix& a, const PadicMatrix& b);

struct OrthogonalityReport {
  bool member = false;
  PadicScalar det;
  bool special = false;
};
// Decides L^T G L = G; throws PrecisionError when a vanishing entry is not known to enough digits.
OrthogonalityReport check_orthogonal(const PadicMatrix& l);
bool is_rotation(const PadicMatrix& r);

// Plane rotation in coordinates (i, j) of Q_p^3 with c = (1-u^2)/(1+u^2), s = 2u/(1+u^2).
PadicMatrix rotation_from_parameter(int p, std::size_t i, std::size_t j, const PadicScalar& u);
// diag(1, R)
PadicMatrix embed_rotation(const PadicMatrix& r);
// Boost mixing k0 and k_axis with a = (1+u^2)/(1-u^2), b = 2u/(1-u^2).
PadicMatrix boost_from_parameter(int p, std::size_t axis, const PadicScalar& u);
PadicMatrix lambda0(int p);
// G L^T G for a member of O(Q).
PadicMatrix lorentz_inverse(const PadicMatrix& l);

// x -> f(M^{-1}(x - a)); exact for scaled lattice automorphisms, enumerated otherwise.
CellFunction act_linear(const PadicMatrix& m, const PadicMatrix& m_inv, const PadicVector& a, const CellFunction& f,
                        std::size_t max_cells = 200000);
CellFunction act(const PadicMatrix& l, const PadicVector& a, const CellFunction& f, std::size_t max_cells = 200000);

// F f(k) = int chi([x,k]) f(x) dx, inverse with chi(-[x,k]).
CellFunction fourier_minkowski(const CellFunction& f, FourierDirection dir = FourierDirection::forward);

class RefinementCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace padickg
