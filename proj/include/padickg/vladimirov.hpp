#pragma once

#include "padickg/cell_function.hpp"

#include <vector>

namespace padickg {

// Conductor-one character of Z_p^x lifted through the leading digit: tau * (d/p).
class TwistedCharacter {
 public:
  explicit TwistedCharacter(int p, PiConvention convention = PiConvention::unit_tau);

  int prime() const { return p_; }
  PiConvention convention() const { return convention_; }
  Complex value(long d) const;
  Complex inverse_value(long d) const;
  Complex operator()(const PadicScalar& x) const;
  Complex inverse(const PadicScalar& x) const;
  // Values on 1..p-1.
  const std::vector<Complex>& table() const { return table_; }

 private:
  int p_;
  PiConvention convention_;
  std::vector<Complex> table_;
};

// (1/p) sum_t pi1(t) exp(2 pi i t / p)
Complex gauss_sum(int p, PiConvention convention = PiConvention::unit_tau);

struct GammaFactor {
  Complex s;
  Complex value;
  Complex gauss;
};
GammaFactor gamma_factor(int p, Complex s, PiConvention convention = PiConvention::unit_tau);

// sum over shells |x| = p^j of p^{j e} * sum_d chi(d) * int_{|x| = p^j, ac0(x) = d} phi.
// `inverse` selects pi1^{-1} instead of pi1.
Complex pair_quasicharacter(const CellFunction& phi, Complex exponent, const TwistedCharacter& pi, bool inverse = false);
// int pi1(x) |x|^{s-1} phi(x) dx, regularized.
Complex pair_pi_s(Complex s, const CellFunction& phi, const TwistedCharacter& pi);

enum class DtildeRoute { spectral, integral };
Complex apply_dtilde(const CellFunction& phi, double alpha, DtildeRoute route, const PadicScalar& x,
                     const TwistedCharacter& pi);
// lambda(a) with D chi(t a) = lambda(a) chi(t a).
Complex dtilde_on_wave(const PadicScalar& a, double alpha, const TwistedCharacter& pi);

}  // namespace padickg
