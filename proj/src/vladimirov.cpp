#include "padickg/vladimirov.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace padickg {

TwistedCharacter::TwistedCharacter(int p, PiConvention convention) : p_(p), convention_(convention) {
  require_odd_prime(p);
  const Complex tau = convention == PiConvention::unit_tau ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
  for (int d = 1; d < p; ++d) table_.push_back(tau * static_cast<double>(legendre(d, p)));
}

Complex TwistedCharacter::value(long d) const {
  long r = ((d % p_) + p_) % p_;
  if (r == 0) throw std::invalid_argument("character argument must be a unit digit");
  return table_[static_cast<std::size_t>(r - 1)];
}

Complex TwistedCharacter::inverse_value(long d) const { return 1.0 / value(d); }

Complex TwistedCharacter::operator()(const PadicScalar& x) const { return value(x.leading_digit()); }

Complex TwistedCharacter::inverse(const PadicScalar& x) const { return inverse_value(x.leading_digit()); }

Complex gauss_sum(int p, PiConvention convention) {
  TwistedCharacter pi(p, convention);
  Complex s{0.0, 0.0};
  for (int t = 1; t < p; ++t) s += pi.value(t) * std::polar(1.0, 2.0 * std::numbers::pi * t / p);
  return s / static_cast<double>(p);
}

GammaFactor gamma_factor(int p, Complex s, PiConvention convention) {
  GammaFactor g;
  g.s = s;
  g.gauss = gauss_sum(p, convention);
  g.value = std::pow(Complex(p, 0.0), s) * g.gauss;
  return g;
}

namespace {

// Shells |y| = p^j with j <= low see phi(x - y) = phi(x); beyond high, phi(x - y) = 0.
std::pair<long, long> shell_window(const CellFunction& phi, const PadicScalar& x) {
  long low = phi.local_constancy_level({x});
  long high = low;
  for (const auto& t : phi.terms()) {
    high = std::max(high, t.level);
    PadicScalar d = x - t.center[0];
    if (!d.is_zero()) high = std::max(high, d.norm_exponent());
  }
  return {low, high};
}

Ball shell_cell(int p, const PadicScalar& x, long j, int d) {
  PadicScalar y = PadicScalar::from_integer(p, d) * PadicScalar::power_of_p(p, -j);
  return {{x - y}, j - 1};
}

}  // namespace

Complex pair_quasicharacter(const CellFunction& phi, Complex exponent, const TwistedCharacter& pi, bool inverse) {
  if (phi.empty()) return {0.0, 0.0};
  if (phi.dimension() != 1) throw std::invalid_argument("quasicharacter pairing is one-dimensional");
  const int p = phi.prime();
  const PadicScalar zero = PadicScalar::zero(p);
  auto [low, high] = shell_window(phi, zero);
  Complex total{0.0, 0.0};
  for (long j = low + 1; j <= high; ++j) {
    Complex shell{0.0, 0.0};
    for (int d = 1; d < p; ++d) {
      // Cells of the shell around 0 are symmetric: integrate phi over d p^{-j} + p^{1-j} Z_p.
      Ball b = shell_cell(p, zero, j, -d);
      Complex c = inverse ? pi.inverse_value(d) : pi.value(d);
      shell += c * phi.integrate_over_ball(b);
    }
    total += std::pow(Complex(p, 0.0), exponent * static_cast<double>(j)) * shell;
  }
  return total;
}

Complex pair_pi_s(Complex s, const CellFunction& phi, const TwistedCharacter& pi) {
  return pair_quasicharacter(phi, s - 1.0, pi, false);
}

Complex apply_dtilde(const CellFunction& phi, double alpha, DtildeRoute route, const PadicScalar& x,
                     const TwistedCharacter& pi) {
  if (alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
  if (phi.empty()) return {0.0, 0.0};
  if (phi.dimension() != 1) throw std::invalid_argument("the twisted operator acts on one variable");
  const int p = phi.prime();

  if (route == DtildeRoute::integral) {
    auto [low, high] = shell_window(phi, x);
    Complex total{0.0, 0.0};
    for (long j = low + 1; j <= high; ++j) {
      Complex shell{0.0, 0.0};
      for (int d = 1; d < p; ++d) shell += pi.value(d) * phi.integrate_over_ball(shell_cell(p, x, j, d));
      total += std::pow(static_cast<double>(p), -static_cast<double>(j) * (alpha + 1.0)) * shell;
    }
    return total / gamma_factor(p, Complex(-alpha, 0.0), pi.convention()).value;
  }

  const CellFunction f = phi.fourier();
  Complex total{0.0, 0.0};
  for (const auto& t : f.terms()) {
    PadicScalar b = t.modulation[0] - x;
    const PadicScalar& a = t.center[0];
    if (!a.is_zero()) {
      // Symbol is constant on a ball avoiding 0.
      if (!b.is_zero() && b.norm_exponent() + t.level > 0) continue;
      double mag = std::pow(a.norm(), alpha);
      total += t.coeff * pi.inverse(a) * mag * pow_p(p, t.level) * (b * a).chi();
      continue;
    }
    if (b.is_zero()) continue;
    // Only the shell j = 1 - e survives, where |b| = p^e.
    const long e = b.norm_exponent();
    const long j = 1 - e;
    if (j > t.level) continue;
    const long lead = b.leading_digit();
    Complex sum{0.0, 0.0};
    for (int d = 1; d < p; ++d)
      sum += pi.inverse_value(d) * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>((lead * d) % p) / p);
    total += t.coeff * std::pow(static_cast<double>(p), static_cast<double>(j) * alpha) * pow_p(p, j - 1) * sum;
  }
  return total;
}

Complex dtilde_on_wave(const PadicScalar& a, double alpha, const TwistedCharacter& pi) {
  if (a.is_zero()) throw std::invalid_argument("dtilde_on_wave: a must be nonzero");
  return pi.inverse(-a) * std::pow(a.norm(), alpha);
}

}  // namespace padickg
