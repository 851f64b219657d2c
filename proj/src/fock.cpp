#include "padickg/fock.hpp"

#include <cmath>
#include <numeric>

namespace padickg {

FockSpace::FockSpace(std::size_t modes, int cutoff) : modes_(modes), cutoff_(cutoff) {
  if (modes == 0 || cutoff < 0) throw std::invalid_argument("Fock space needs at least one mode and cutoff >= 0");
  Occupation n(modes, 0);
  std::function<void(std::size_t, int)> fill = [&](std::size_t i, int left) {
    if (i == modes) {
      lookup_.emplace(n, basis_.size());
      basis_.push_back(n);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      n[i] = k;
      fill(i + 1, left - k);
    }
    n[i] = 0;
  };
  fill(0, cutoff);
}

std::size_t FockSpace::index(const Occupation& n) const {
  auto it = lookup_.find(n);
  if (it == lookup_.end()) throw std::out_of_range("occupation outside the truncated space");
  return it->second;
}

int FockSpace::total(std::size_t i) const { return std::accumulate(basis_[i].begin(), basis_[i].end(), 0); }

ModeVector FockSpace::vacuum() const {
  ModeVector v = ModeVector::Zero(static_cast<Eigen::Index>(dimension()));
  v(static_cast<Eigen::Index>(index(Occupation(modes_, 0)))) = 1.0;
  return v;
}

Operator FockSpace::annihilate(std::size_t mode) const {
  Operator a = Operator::Zero(dimension(), dimension());
  for (std::size_t j = 0; j < basis_.size(); ++j) {
    const int n = basis_[j][mode];
    if (n == 0) continue;
    Occupation lower = basis_[j];
    --lower[mode];
    a(index(lower), j) = std::sqrt(static_cast<double>(n));
  }
  return a;
}

Operator FockSpace::create(std::size_t mode) const {
  Operator a = Operator::Zero(dimension(), dimension());
  for (std::size_t j = 0; j < basis_.size(); ++j) {
    if (total(j) >= cutoff_) continue;
    Occupation upper = basis_[j];
    ++upper[mode];
    a(index(upper), j) = std::sqrt(static_cast<double>(upper[mode]));
  }
  return a;
}

Operator FockSpace::annihilate(const ModeVector& v) const {
  if (static_cast<std::size_t>(v.size()) != modes_) throw std::invalid_argument("mode vector size mismatch");
  Operator a = Operator::Zero(dimension(), dimension());
  for (std::size_t i = 0; i < modes_; ++i)
    if (v(i) != Complex(0.0, 0.0)) a += std::conj(v(i)) * annihilate(i);
  return a;
}

Operator FockSpace::create(const ModeVector& v) const {
  if (static_cast<std::size_t>(v.size()) != modes_) throw std::invalid_argument("mode vector size mismatch");
  Operator a = Operator::Zero(dimension(), dimension());
  for (std::size_t i = 0; i < modes_; ++i)
    if (v(i) != Complex(0.0, 0.0)) a += v(i) * create(i);
  return a;
}

std::vector<std::size_t> FockSpace::below_cutoff() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < basis_.size(); ++i)
    if (total(i) < cutoff_) out.push_back(i);
  return out;
}

double FockSpace::ccr_residual(const ModeVector& u, const ModeVector& v) const {
  const Operator c = commutator(annihilate(u), create(v));
  const Complex inner = u.dot(v);  // conjugates u
  double worst = 0.0;
  const auto keep = below_cutoff();
  for (std::size_t i : keep)
    for (std::size_t j : keep) {
      Complex expect = i == j ? inner : Complex(0.0, 0.0);
      worst = std::max(worst, std::abs(c(i, j) - expect));
    }
  return worst;
}

Operator FockSpace::field(const ModeVector& v) const {
  return (annihilate(v) + create(v)) / std::sqrt(2.0);
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

double max_abs(const Operator& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

CellFunction ModeBasis::mode(std::size_t i) const {
  const ShellCell& c = cells.at(i);
  return CellFunction::indicator(c.prime(), {c.center, c.level}, {1.0 / std::sqrt(c.volume()), 0.0});
}

std::pair<ModeVector, double> ModeBasis::project(const CellFunction& f) const {
  ModeVector v(static_cast<Eigen::Index>(cells.size()));
  double kept = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    // <e_i, f> with the inner product conjugate-linear in the first slot.
    v(static_cast<Eigen::Index>(i)) = f.empty() ? Complex(0.0, 0.0) : f.inner_product(mode(i));
    kept += std::norm(v(static_cast<Eigen::Index>(i)));
  }
  const double total = f.empty() ? 0.0 : std::pow(f.l2_norm(), 2);
  return {v, std::max(0.0, total - kept)};
}

ModeBasis choose_modes(const Ball& root, const PadicScalar& m, std::size_t count) {
  ModeBasis basis{{}, m};
  std::vector<Ball> frontier{root};
  for (int depth = 0; depth < 6 && basis.cells.size() < count && !frontier.empty(); ++depth) {
    std::vector<Ball> next;
    for (const auto& b : frontier) {
      if (basis.cells.size() >= count) break;
      ShellCell c = classify_cell(b.center, b.level, m);
      if (c.status == CellStatus::inside) {
        basis.cells.push_back(std::move(c));
      } else if (c.status == CellStatus::unresolved) {
        for (auto& ch : children(m.prime(), b)) next.push_back(std::move(ch));
      }
    }
    frontier = std::move(next);
  }
  if (basis.cells.size() < count) throw SupportError("not enough inside cells for the requested modes");
  return basis;
}

namespace {

FieldOperator assemble(const FockSpace& space, const ModeBasis& modes, const Restriction& r) {
  FieldOperator out;
  out.unresolved = r.unresolved;
  CellFunction jr = map_J(r.values, r.cells);
  auto [v, loss] = modes.project(jr);
  out.coefficients = v;
  out.projection_loss = loss;
  out.matrix = space.field(v);
  return out;
}

}  // namespace

FieldOperator field_operator(const FockSpace& space, const ModeBasis& modes, const CellFunction& phi,
                             int refinement_cap) {
  if (modes.size() != space.modes()) throw std::invalid_argument("mode basis does not match the Fock space");
  return assemble(space, modes, map_R(phi, modes.cells, modes.m, refinement_cap));
}

FieldOperator field_operator_box(const FockSpace& space, const ModeBasis& modes, const CellFunction& phi,
                                 const KGConfig& cfg) {
  if (modes.size() != space.modes()) throw std::invalid_argument("mode basis does not match the Fock space");
  return assemble(space, modes, map_R_box(phi, modes.cells, cfg));
}

}  // namespace padickg
