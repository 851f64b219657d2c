#pragma once

#include <gmpxx.h>

#include <complex>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace padickg {

using Complex = std::complex<double>;

inline constexpr int kDefaultPrecision = 32;
// Absolute precision of an exactly known zero.
inline constexpr long kExact = std::numeric_limits<long>::max();

class PadicError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class PrimeMismatchError : public PadicError {
 public:
  using PadicError::PadicError;
};
class DivisionByZeroError : public PadicError {
 public:
  using PadicError::PadicError;
};
class PrecisionError : public PadicError {
 public:
  using PadicError::PadicError;
};
class LiteralError : public PadicError {
 public:
  using PadicError::PadicError;
};

bool is_prime(long n);
// Throws std::invalid_argument unless p is an odd prime.
void require_odd_prime(long p);
// p^k for k >= 0, cached per prime.
const mpz_class& prime_power(int p, long k);
// Euler criterion on a mod p: 0, +1 or -1.
int legendre(long a, int p);

// Exact element of Z[1/p]/Z stored as num / p^exponent with 0 <= num < p^exponent.
class RationalPhase {
 public:
  RationalPhase() = default;
  RationalPhase(int p, mpz_class num, long exponent);

  int prime() const { return p_; }
  const mpz_class& numerator() const { return num_; }
  long exponent() const { return exp_; }
  bool is_zero() const { return num_ == 0; }
  mpq_class value() const;
  double to_double() const;
  Complex chi() const;

  RationalPhase operator+(const RationalPhase& o) const;
  RationalPhase operator-() const;
  RationalPhase operator-(const RationalPhase& o) const { return *this + (-o); }
  RationalPhase& operator+=(const RationalPhase& o) { return *this = *this + o; }
  bool operator==(const RationalPhase& o) const { return exp_ == o.exp_ && num_ == o.num_; }

 private:
  int p_ = 0;
  mpz_class num_ = 0;
  long exp_ = 0;
};

enum class PiConvention { unit_tau, imaginary_tau };

// x = p^v * u with p not dividing u and 0 < u < p^N; zero carries an absolute precision.
class PadicScalar {
 public:
  PadicScalar() = default;

  static PadicScalar zero(int p, long absolute_precision = kExact);
  static PadicScalar from_integer(int p, long n, int precision = kDefaultPrecision);
  static PadicScalar from_mpz(int p, const mpz_class& n, int precision = kDefaultPrecision);
  static PadicScalar from_rational(int p, const mpq_class& q, int precision = kDefaultPrecision);
  // p^valuation * sum digits[j] p^j; digits[0] must be nonzero.
  static PadicScalar from_digits(int p, long valuation, std::span<const int> digits,
                                 int precision = kDefaultPrecision);
  static PadicScalar power_of_p(int p, long e, int precision = kDefaultPrecision);

  int prime() const { return p_; }
  bool is_zero() const { return zero_; }
  bool is_exact_zero() const { return zero_ && zero_abs_ == kExact; }
  // kExact for zero.
  long valuation() const { return zero_ ? kExact : val_; }
  int precision() const { return zero_ ? 0 : prec_; }
  long absolute_precision() const { return zero_ ? zero_abs_ : val_ + prec_; }
  const mpz_class& unit() const { return unit_; }
  std::vector<int> digits() const;
  int leading_digit() const;

  double norm() const;
  // Norm exponent e with |x| = p^e; throws on zero.
  long norm_exponent() const;
  mpq_class norm_exact() const;
  std::optional<PadicScalar> angular_component() const;
  RationalPhase fractional_part() const;
  Complex chi() const { return fractional_part().chi(); }
  mpq_class to_rational() const;

  // Digits at positions below `position`, as an exact finite expansion.
  PadicScalar truncated(long position) const;
  PadicScalar with_precision(int precision) const;

  PadicScalar operator+(const PadicScalar& o) const;
  PadicScalar operator-(const PadicScalar& o) const;
  PadicScalar operator-() const;
  PadicScalar operator*(const PadicScalar& o) const;
  PadicScalar operator/(const PadicScalar& o) const;
  PadicScalar& operator+=(const PadicScalar& o) { return *this = *this + o; }
  PadicScalar& operator-=(const PadicScalar& o) { return *this = *this - o; }
  PadicScalar& operator*=(const PadicScalar& o) { return *this = *this * o; }
  PadicScalar inverse() const;

  // Equality of the difference to zero at tracked precision.
  bool operator==(const PadicScalar& o) const { return (*this - o).is_zero(); }
  // Representation identity for finite expansions; ignores precision.
  bool same_digits(const PadicScalar& o) const;
  // Total order on representations used for canonical sorting.
  static int compare_keys(const PadicScalar& a, const PadicScalar& b);

 private:
  static PadicScalar make(int p, long v, int prec, mpz_class unit);
  void check_prime(const PadicScalar& o) const;

  int p_ = 0;
  bool zero_ = true;
  long zero_abs_ = kExact;
  long val_ = 0;
  int prec_ = 0;
  mpz_class unit_ = 0;
};

using PadicVector = std::vector<PadicScalar>;

PadicScalar parse_literal(std::string_view text, int prime, int precision = kDefaultPrecision);
std::string to_literal(const PadicScalar& x);

struct SquareRoots {
  PadicScalar positive;
  PadicScalar negative;
};
std::optional<SquareRoots> sqrt_hensel(const PadicScalar& x);

enum class Sign { positive = 1, negative = -1 };
// Positive iff the leading digit of ac(x) lies in 1..(p-1)/2.
Sign sign(const PadicScalar& x);

struct QuadraticData {
  int legendre = 0;
  bool is_square = false;
  Complex pi1{0.0, 0.0};
};
QuadraticData quadratic_data(const PadicScalar& x, PiConvention convention = PiConvention::unit_tau);
Complex pi1(const PadicScalar& x, PiConvention convention = PiConvention::unit_tau);

// Vector helpers.
PadicVector zero_vector(int p, std::size_t n);
PadicScalar dot(const PadicVector& a, const PadicVector& b);
PadicVector add(const PadicVector& a, const PadicVector& b);
PadicVector sub(const PadicVector& a, const PadicVector& b);
PadicVector negate(const PadicVector& a);
PadicVector truncated(const PadicVector& a, long position);
// Max norm; 0 for the zero vector.
double norm(const PadicVector& a);
// Exponent of the max norm, or nullopt for the zero vector.
std::optional<long> norm_exponent(const PadicVector& a);
bool is_zero(const PadicVector& a);
bool same_digits(const PadicVector& a, const PadicVector& b);
int compare_keys(const PadicVector& a, const PadicVector& b);
// Exact phase of <a, b>.
RationalPhase dot_phase(const PadicVector& a, const PadicVector& b);
double pow_p(int p, long e);

}  // namespace padickg
