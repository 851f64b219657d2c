#pragma once

#include "padickg/padic.hpp"

#include <cstddef>
#include <vector>

namespace padickg {

// Closed ball a + p^{-level} Z_p^n, i.e. radius p^level.
struct Ball {
  PadicVector center;
  long level = 0;
};

// coeff * chi(<modulation, x>) * 1_{Ball(center, level)}(x)
struct CellTerm {
  Complex coeff{0.0, 0.0};
  PadicVector modulation;
  PadicVector center;
  long level = 0;
};

bool ball_contains(const Ball& ball, const PadicVector& x);
// Balls are nested or disjoint; returns the smaller one if they meet.
std::optional<Ball> intersect(const Ball& a, const Ball& b);
double ball_volume(int p, std::size_t n, long level);
// Children of a ball at level - 1, in lexicographic digit order.
std::vector<Ball> children(int p, const Ball& ball);
// Drops balls contained in others; result sorted by decreasing level.
std::vector<Ball> maximal_balls(std::vector<Ball> balls);
PadicVector digit_offset(int p, std::size_t index, std::size_t n, long position);

enum class FourierDirection { forward, inverse };

// Finite sum of modulated ball indicators on Q_p^n in canonical form.
class CellFunction {
 public:
  CellFunction() = default;
  CellFunction(int p, std::size_t n) : p_(p), n_(n) {}

  static CellFunction make(int p, std::size_t n, std::vector<CellTerm> terms);
  static CellFunction indicator(int p, const Ball& ball, Complex coeff = {1.0, 0.0});

  int prime() const { return p_; }
  std::size_t dimension() const { return n_; }
  const std::vector<CellTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  Complex evaluate(const PadicVector& x) const;
  Complex integrate() const;
  Complex integrate_over_ball(const Ball& ball) const;
  CellFunction fourier(FourierDirection dir = FourierDirection::forward) const;

  CellFunction operator+(const CellFunction& o) const;
  CellFunction operator-(const CellFunction& o) const;
  CellFunction scaled(Complex c) const;
  CellFunction conjugated() const;
  CellFunction reflected() const;
  // x -> f(diag(signs) x)
  CellFunction with_signs(const std::vector<int>& signs) const;
  // x -> chi(<w, x>) f(x)
  CellFunction modulated(const PadicVector& w) const;
  CellFunction translated(const PadicVector& t) const;
  CellFunction restricted(const Ball& ball) const;
  CellFunction product(const CellFunction& o) const;
  CellFunction convolve(const CellFunction& o) const;
  // Integral of f * conj(g).
  Complex inner_product(const CellFunction& o) const;
  double l2_norm() const;

  // Largest level L with f constant on x + p^{-L} Z_p^n.
  long local_constancy_level(const PadicVector& x) const;
  // Maximal disjoint balls covering the union of term balls.
  std::vector<Ball> support_balls() const;
  std::optional<long> coarsest_level() const;
  std::optional<long> finest_level() const;

 private:
  void check_compatible(const CellFunction& o) const;

  int p_ = 0;
  std::size_t n_ = 0;
  std::vector<CellTerm> terms_;
};

// Reduce a single term: center mod p^{-level}, modulation mod p^{level} with phase compensation.
CellTerm normalize_term(int p, CellTerm t);

}  // namespace padickg
