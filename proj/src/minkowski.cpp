#include "padickg/minkowski.hpp"

#include <algorithm>
#include <map>

namespace padickg {

PadicScalar bilinear_q(const PadicVector& x, const PadicVector& y) {
  if (x.size() != y.size() || x.empty()) throw std::invalid_argument("bilinear_q: dimension mismatch");
  PadicScalar s = x[0] * y[0];
  for (std::size_t i = 1; i < x.size(); ++i) s -= x[i] * y[i];
  return s;
}

PadicScalar quadratic_q(const PadicVector& x) { return bilinear_q(x, x); }

PadicVector signature_flip(const PadicVector& x) {
  PadicVector y = x;
  for (std::size_t i = 1; i < y.size(); ++i) y[i] = -y[i];
  return y;
}

PadicMatrix identity_matrix(int p, std::size_t n) {
  PadicMatrix m(n, zero_vector(p, n));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = PadicScalar::from_integer(p, 1);
  return m;
}

PadicMatrix diagonal_matrix(const PadicVector& d) {
  const int p = d.at(0).prime();
  PadicMatrix m(d.size(), zero_vector(p, d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m[i][i] = d[i];
  return m;
}

PadicMatrix permutation_matrix(int p, const std::vector<std::size_t>& perm) {
  const std::size_t n = perm.size();
  PadicMatrix m(n, zero_vector(p, n));
  for (std::size_t i = 0; i < n; ++i) m[perm[i]][i] = PadicScalar::from_integer(p, 1);
  return m;
}

PadicMatrix matmul(const PadicMatrix& a, const PadicMatrix& b) {
  const std::size_t n = a.size(), k = b.size(), c = b.at(0).size();
  if (a.at(0).size() != k) throw std::invalid_argument("matmul: shape mismatch");
  const int p = a[0][0].prime();
  PadicMatrix r(n, zero_vector(p, c));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      PadicScalar s = PadicScalar::zero(p);
      for (std::size_t l = 0; l < k; ++l)
        if (!a[i][l].is_exact_zero() && !b[l][j].is_exact_zero()) s += a[i][l] * b[l][j];
      r[i][j] = s;
    }
  return r;
}

PadicMatrix transpose(const PadicMatrix& a) {
  PadicMatrix t(a.at(0).size(), PadicVector(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

PadicVector matvec(const PadicMatrix& m, const PadicVector& x) {
  if (m.at(0).size() != x.size()) throw std::invalid_argument("apply: shape mismatch");
  const int p = x.at(0).prime();
  PadicVector y(m.size(), PadicScalar::zero(p));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      if (!m[i][j].is_exact_zero() && !x[j].is_exact_zero()) y[i] += m[i][j] * x[j];
  return y;
}

namespace {

// Row echelon with minimal-valuation pivots; returns the determinant and optionally the inverse.
PadicScalar gauss(PadicMatrix a, PadicMatrix* inv) {
  const std::size_t n = a.size();
  const int p = a.at(0).at(0).prime();
  PadicMatrix id = identity_matrix(p, n);
  PadicScalar det = PadicScalar::from_integer(p, 1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = n;
    for (std::size_t r = col; r < n; ++r)
      if (!a[r][col].is_zero() && (piv == n || a[r][col].valuation() < a[piv][col].valuation())) piv = r;
    if (piv == n) {
      if (inv) throw DivisionByZeroError("matrix is singular");
      return PadicScalar::zero(p);
    }
    if (piv != col) {
      std::swap(a[piv], a[col]);
      std::swap(id[piv], id[col]);
      det = -det;
    }
    det *= a[col][col];
    PadicScalar pinv = a[col][col].inverse();
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      PadicScalar f = a[r][col] * pinv;
      for (std::size_t j = 0; j < n; ++j) {
        if (!a[col][j].is_exact_zero()) a[r][j] -= f * a[col][j];
        if (!id[col][j].is_exact_zero()) id[r][j] -= f * id[col][j];
      }
      a[r][col] = PadicScalar::zero(p);
    }
  }
  if (inv) {
    for (std::size_t r = 0; r < n; ++r) {
      PadicScalar pinv = a[r][r].inverse();
      for (auto& e : id[r])
        if (!e.is_exact_zero()) e *= pinv;
    }
    *inv = std::move(id);
  }
  return det;
}

}  // namespace

PadicScalar determinant(const PadicMatrix& a) { return gauss(a, nullptr); }

PadicMatrix inverse(const PadicMatrix& a) {
  PadicMatrix inv;
  gauss(a, &inv);
  return inv;
}

bool same_matrix(const PadicMatrix& a, const PadicMatrix& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j)
      if (!(a[i][j] == b[i][j])) return false;
  return true;
}

OrthogonalityReport check_orthogonal(const PadicMatrix& l) {
  const std::size_t n = l.size();
  const int p = l.at(0).at(0).prime();
  PadicMatrix gl = l;
  for (std::size_t i = 1; i < n; ++i)
    for (auto& e : gl[i]) e = -e;
  PadicMatrix prod = matmul(transpose(l), gl);
  OrthogonalityReport rep;
  rep.member = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      long target = i != j ? 0 : (i == 0 ? 1 : -1);
      PadicScalar d = prod[i][j] - PadicScalar::from_integer(p, target);
      if (!d.is_zero()) rep.member = false;
      else if (d.absolute_precision() < kDefaultPrecision / 2)
        throw PrecisionError("orthogonality undecidable at the tracked precision");
    }
  rep.det = determinant(l);
  rep.special = rep.member && rep.det == PadicScalar::from_integer(p, 1);
  return rep;
}

bool is_rotation(const PadicMatrix& r) {
  const int p = r.at(0).at(0).prime();
  return same_matrix(matmul(transpose(r), r), identity_matrix(p, r.size())) &&
         determinant(r) == PadicScalar::from_integer(p, 1);
}

PadicMatrix rotation_from_parameter(int p, std::size_t i, std::size_t j, const PadicScalar& u) {
  if (i >= 3 || j >= 3 || i == j) throw std::invalid_argument("rotation plane must be two distinct axes of 0..2");
  PadicScalar one = PadicScalar::from_integer(p, 1);
  PadicScalar den = one + u * u;
  if (den.is_zero()) throw std::invalid_argument("1 + u^2 vanishes");
  PadicScalar c = (one - u * u) / den;
  PadicScalar s = (PadicScalar::from_integer(p, 2) * u) / den;
  PadicMatrix r = identity_matrix(p, 3);
  r[i][i] = c;
  r[i][j] = -s;
  r[j][i] = s;
  r[j][j] = c;
  return r;
}

PadicMatrix embed_rotation(const PadicMatrix& r) {
  if (r.size() != 3 || !is_rotation(r)) throw std::invalid_argument("embed_rotation: not a rotation");
  const int p = r[0][0].prime();
  PadicMatrix l = identity_matrix(p, 4);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) l[i + 1][j + 1] = r[i][j];
  return l;
}

PadicMatrix boost_from_parameter(int p, std::size_t axis, const PadicScalar& u) {
  if (axis < 1 || axis > 3) throw std::invalid_argument("boost axis must be 1..3");
  PadicScalar one = PadicScalar::from_integer(p, 1);
  PadicScalar den = one - u * u;
  if (den.is_zero()) throw std::invalid_argument("1 - u^2 vanishes");
  PadicScalar a = (one + u * u) / den;
  PadicScalar b = (PadicScalar::from_integer(p, 2) * u) / den;
  PadicMatrix l = identity_matrix(p, 4);
  l[0][0] = a;
  l[0][axis] = b;
  l[axis][0] = b;
  l[axis][axis] = a;
  return l;
}

PadicMatrix lambda0(int p) {
  PadicMatrix l = identity_matrix(p, 4);
  l[0][0] = PadicScalar::from_integer(p, -1);
  return l;
}

PadicMatrix lorentz_inverse(const PadicMatrix& l) {
  PadicMatrix t = transpose(l);
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = 0; j < t.size(); ++j)
      if ((i == 0) != (j == 0)) t[i][j] = -t[i][j];
  return t;
}

namespace {

long min_entry_valuation(const PadicMatrix& m) {
  long v = kExact;
  for (const auto& row : m)
    for (const auto& e : row)
      if (!e.is_zero()) v = std::min(v, e.valuation());
  if (v == kExact) throw std::invalid_argument("zero matrix");
  return v;
}

}  // namespace

CellFunction act_linear(const PadicMatrix& m, const PadicMatrix& m_inv, const PadicVector& a, const CellFunction& f,
                        std::size_t max_cells) {
  const int p = f.prime();
  const std::size_t n = f.dimension();
  if (m.size() != n || m_inv.size() != n || a.size() != n) throw std::invalid_argument("act: dimension mismatch");
  const long k = min_entry_valuation(m);
  const long k_inv = min_entry_valuation(m_inv);
  const long d = -k - k_inv;
  if (d < 0) throw std::invalid_argument("act: matrices are not mutually inverse");
  std::size_t per_axis = 1, count = 1;
  for (long i = 0; i < d; ++i) {
    per_axis *= static_cast<std::size_t>(p);
    if (per_axis > max_cells) throw RefinementCapError("act: image refinement exceeds the cell cap");
  }
  for (std::size_t i = 0; i < n; ++i) {
    count *= per_axis;
    if (count > max_cells) throw RefinementCapError("act: image refinement exceeds the cell cap");
  }
  const PadicMatrix m_inv_t = transpose(m_inv);
  std::vector<CellTerm> out;
  for (const auto& t : f.terms()) {
    PadicVector b = matvec(m_inv_t, t.modulation);
    Complex c = t.coeff * (-dot_phase(b, a)).chi();
    const long fine = t.level + k_inv;
    std::map<std::string, PadicVector> centers;
    for (std::size_t idx = 0; idx < count; ++idx) {
      PadicVector y(n);
      std::size_t rest = idx;
      for (std::size_t i = 0; i < n; ++i) {
        long yi = static_cast<long>(rest % per_axis);
        rest /= per_axis;
        y[i] = yi == 0 ? PadicScalar::zero(p) : PadicScalar::from_integer(p, yi) * PadicScalar::power_of_p(p, -t.level);
      }
      PadicVector img = truncated(add(matvec(m, add(t.center, y)), a), -fine);
      std::string key;
      for (const auto& e : img) key += to_literal(e) + "|";
      centers.emplace(std::move(key), std::move(img));
    }
    for (auto& [key, center] : centers) out.push_back({c, b, center, fine});
  }
  return CellFunction::make(p, n, std::move(out));
}

CellFunction act(const PadicMatrix& l, const PadicVector& a, const CellFunction& f, std::size_t max_cells) {
  return act_linear(l, lorentz_inverse(l), a, f, max_cells);
}

CellFunction fourier_minkowski(const CellFunction& f, FourierDirection dir) {
  std::vector<int> signs(f.dimension(), -1);
  signs.at(0) = 1;
  return f.fourier(dir).with_signs(signs);
}

}  // namespace padickg
