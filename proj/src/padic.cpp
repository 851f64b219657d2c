#include "padickg/padic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>

namespace padickg {

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

void require_odd_prime(long p) {
  if (p == 2 || !is_prime(p))
    throw std::invalid_argument("prime must be an odd prime, got " + std::to_string(p));
}

const mpz_class& prime_power(int p, long k) {
  if (k < 0) throw std::invalid_argument("prime_power: negative exponent");
  thread_local std::map<int, std::deque<mpz_class>> cache;
  auto& powers = cache[p];
  if (powers.empty()) powers.emplace_back(1);
  while (static_cast<long>(powers.size()) <= k) powers.push_back(powers.back() * p);
  return powers[static_cast<std::size_t>(k)];
}

int legendre(long a, int p) {
  long r = ((a % p) + p) % p;
  if (r == 0) return 0;
  mpz_class base = r, out;
  mpz_class e = (p - 1) / 2, mod = p;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), mod.get_mpz_t());
  return out == 1 ? 1 : -1;
}

double pow_p(int p, long e) { return std::pow(static_cast<double>(p), static_cast<double>(e)); }

// ---------------------------------------------------------------- RationalPhase

RationalPhase::RationalPhase(int p, mpz_class num, long exponent) : p_(p), exp_(exponent) {
  if (exponent < 0) throw std::invalid_argument("RationalPhase: negative exponent");
  mpz_mod(num.get_mpz_t(), num.get_mpz_t(), prime_power(p, exponent).get_mpz_t());
  while (exp_ > 0 && num != 0 && mpz_divisible_ui_p(num.get_mpz_t(), p)) {
    num /= p;
    --exp_;
  }
  if (num == 0) exp_ = 0;
  num_ = num;
}

mpq_class RationalPhase::value() const {
  if (num_ == 0) return 0;
  mpq_class q(num_, prime_power(p_, exp_));
  q.canonicalize();
  return q;
}

double RationalPhase::to_double() const { return num_ == 0 ? 0.0 : value().get_d(); }

Complex RationalPhase::chi() const {
  if (num_ == 0) return {1.0, 0.0};
  return std::polar(1.0, 2.0 * std::numbers::pi * to_double());
}

RationalPhase RationalPhase::operator+(const RationalPhase& o) const {
  if (o.num_ == 0) return *this;
  if (num_ == 0) return o;
  if (p_ != o.p_) throw PrimeMismatchError("phase primes differ");
  long e = std::max(exp_, o.exp_);
  mpz_class n = num_ * prime_power(p_, e - exp_) + o.num_ * prime_power(p_, e - o.exp_);
  return RationalPhase(p_, n, e);
}

RationalPhase RationalPhase::operator-() const {
  if (num_ == 0) return *this;
  return RationalPhase(p_, prime_power(p_, exp_) - num_, exp_);
}

// ---------------------------------------------------------------- PadicScalar

namespace {

long strip_p(mpz_class& n, int p) {
  long j = 0;
  while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
    n /= p;
    ++j;
  }
  return j;
}

long ord_p(mpz_class& n, int p) { return strip_p(n, p); }

mpz_class mod_pow(const mpz_class& n, int p, long k) {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), n.get_mpz_t(), prime_power(p, k).get_mpz_t());
  return r;
}

}  // namespace

PadicScalar PadicScalar::make(int p, long v, int prec, mpz_class unit) {
  PadicScalar x;
  x.p_ = p;
  x.zero_ = false;
  x.val_ = v;
  x.prec_ = prec;
  x.unit_ = std::move(unit);
  return x;
}

PadicScalar PadicScalar::zero(int p, long absolute_precision) {
  PadicScalar x;
  x.p_ = p;
  x.zero_ = true;
  x.zero_abs_ = absolute_precision;
  return x;
}

PadicScalar PadicScalar::from_integer(int p, long n, int precision) {
  return from_mpz(p, mpz_class(n), precision);
}

PadicScalar PadicScalar::from_mpz(int p, const mpz_class& n, int precision) {
  if (precision < 1) throw std::invalid_argument("precision must be positive");
  if (n == 0) return zero(p);
  mpz_class m = n;
  long v = ord_p(m, p);
  return make(p, v, precision, mod_pow(m, p, precision));
}

PadicScalar PadicScalar::from_rational(int p, const mpq_class& q, int precision) {
  if (precision < 1) throw std::invalid_argument("precision must be positive");
  mpq_class c = q;
  c.canonicalize();
  if (c == 0) return zero(p);
  mpz_class num = c.get_num(), den = c.get_den();
  long v = ord_p(num, p) - ord_p(den, p);
  const mpz_class& mod = prime_power(p, precision);
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
  return make(p, v, precision, mod_pow(num * inv, p, precision));
}

PadicScalar PadicScalar::from_digits(int p, long valuation, std::span<const int> digits, int precision) {
  if (digits.empty()) return zero(p);
  if (digits[0] == 0) throw LiteralError("leading digit must be nonzero");
  int prec = std::max<int>(precision, static_cast<int>(digits.size()));
  mpz_class u = 0;
  for (std::size_t j = digits.size(); j-- > 0;) {
    if (digits[j] < 0 || digits[j] >= p) throw LiteralError("digit out of range");
    u = u * p + digits[j];
  }
  return make(p, valuation, prec, u);
}

PadicScalar PadicScalar::power_of_p(int p, long e, int precision) {
  return make(p, e, precision, mpz_class(1));
}

void PadicScalar::check_prime(const PadicScalar& o) const {
  if (p_ != o.p_) throw PrimeMismatchError("operands have different primes");
}

std::vector<int> PadicScalar::digits() const {
  std::vector<int> out;
  if (zero_) return out;
  mpz_class u = unit_;
  for (int j = 0; j < prec_; ++j) {
    out.push_back(static_cast<int>(mpz_fdiv_ui(u.get_mpz_t(), p_)));
    u /= p_;
  }
  return out;
}

int PadicScalar::leading_digit() const {
  if (zero_) throw PadicError("leading digit of zero");
  return static_cast<int>(mpz_fdiv_ui(unit_.get_mpz_t(), p_));
}

double PadicScalar::norm() const { return zero_ ? 0.0 : pow_p(p_, -val_); }

long PadicScalar::norm_exponent() const {
  if (zero_) throw PadicError("norm exponent of zero");
  return -val_;
}

mpq_class PadicScalar::norm_exact() const {
  if (zero_) return 0;
  if (val_ >= 0) return mpq_class(1, prime_power(p_, val_));
  return mpq_class(prime_power(p_, -val_));
}

std::optional<PadicScalar> PadicScalar::angular_component() const {
  if (zero_) return std::nullopt;
  return make(p_, 0, prec_, unit_);
}

RationalPhase PadicScalar::fractional_part() const {
  if (zero_) {
    if (zero_abs_ < 0) throw PrecisionError("fractional part of an imprecise zero");
    return {};
  }
  if (val_ >= 0) return {};
  if (val_ + prec_ < 0) throw PrecisionError("fractional part needs digits beyond the tracked precision");
  return RationalPhase(p_, mod_pow(unit_, p_, -val_), -val_);
}

mpq_class PadicScalar::to_rational() const {
  if (zero_) return 0;
  mpq_class q(unit_);
  if (val_ >= 0) q *= mpq_class(prime_power(p_, val_));
  else q /= mpq_class(prime_power(p_, -val_));
  q.canonicalize();
  return q;
}

PadicScalar PadicScalar::truncated(long position) const {
  if (zero_) {
    if (zero_abs_ < position) throw PrecisionError("truncation beyond the precision of a zero");
    return zero(p_);
  }
  if (val_ >= position) return zero(p_);
  if (val_ + prec_ < position) throw PrecisionError("truncation beyond the tracked precision");
  return make(p_, val_, prec_, mod_pow(unit_, p_, position - val_));
}

PadicScalar PadicScalar::with_precision(int precision) const {
  if (zero_ || precision >= prec_) return *this;
  return make(p_, val_, precision, mod_pow(unit_, p_, precision));
}

PadicScalar PadicScalar::operator+(const PadicScalar& o) const {
  check_prime(o);
  if (zero_ && o.zero_) return zero(p_, std::min(zero_abs_, o.zero_abs_));
  long abs = std::min(absolute_precision(), o.absolute_precision());
  long vmin = std::min(valuation(), o.valuation());
  if (vmin >= abs) return zero(p_, abs);
  long width = abs - vmin;
  mpz_class s = 0;
  if (!zero_ && val_ - vmin < width) s += unit_ * prime_power(p_, val_ - vmin);
  if (!o.zero_ && o.val_ - vmin < width) s += o.unit_ * prime_power(p_, o.val_ - vmin);
  mpz_mod(s.get_mpz_t(), s.get_mpz_t(), prime_power(p_, width).get_mpz_t());
  if (s == 0) return zero(p_, abs);
  long j = strip_p(s, p_);
  return make(p_, vmin + j, static_cast<int>(width - j), s);
}

PadicScalar PadicScalar::operator-() const {
  if (zero_) return *this;
  return make(p_, val_, prec_, prime_power(p_, prec_) - unit_);
}

PadicScalar PadicScalar::operator-(const PadicScalar& o) const { return *this + (-o); }

PadicScalar PadicScalar::operator*(const PadicScalar& o) const {
  check_prime(o);
  if (zero_ || o.zero_) {
    if (is_exact_zero() || o.is_exact_zero()) return zero(p_);
    long abs;
    if (zero_ && o.zero_) abs = zero_abs_ + o.zero_abs_;
    else if (zero_) abs = zero_abs_ + o.val_;
    else abs = o.zero_abs_ + val_;
    return zero(p_, abs);
  }
  int n = std::min(prec_, o.prec_);
  return make(p_, val_ + o.val_, n, mod_pow(unit_ * o.unit_, p_, n));
}

PadicScalar PadicScalar::operator/(const PadicScalar& o) const {
  check_prime(o);
  if (o.zero_) throw DivisionByZeroError("division by zero");
  if (zero_) return zero(p_, zero_abs_ == kExact ? kExact : zero_abs_ - o.val_);
  int n = std::min(prec_, o.prec_);
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), o.unit_.get_mpz_t(), prime_power(p_, n).get_mpz_t());
  return make(p_, val_ - o.val_, n, mod_pow(unit_ * inv, p_, n));
}

PadicScalar PadicScalar::inverse() const {
  if (zero_) throw DivisionByZeroError("inverse of zero");
  return make(p_, 0, prec_, mpz_class(1)) / *this;
}

bool PadicScalar::same_digits(const PadicScalar& o) const {
  if (p_ != o.p_ || zero_ != o.zero_) return false;
  if (zero_) return true;
  return val_ == o.val_ && unit_ == o.unit_;
}

int PadicScalar::compare_keys(const PadicScalar& a, const PadicScalar& b) {
  if (a.zero_ != b.zero_) return a.zero_ ? -1 : 1;
  if (a.zero_) return 0;
  if (a.val_ != b.val_) return a.val_ < b.val_ ? -1 : 1;
  int c = cmp(a.unit_, b.unit_);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

// ---------------------------------------------------------------- literals

namespace {

long parse_long(std::string_view s, std::string_view what) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw LiteralError("invalid " + std::string(what) + ": '" + std::string(s) + "'");
  return v;
}

mpz_class parse_mpz(std::string_view s) {
  std::string t(s);
  if (t.empty()) throw LiteralError("empty integer");
  std::size_t start = (t[0] == '-' || t[0] == '+') ? 1 : 0;
  if (start == t.size() || !std::all_of(t.begin() + static_cast<long>(start), t.end(), ::isdigit))
    throw LiteralError("invalid integer: '" + t + "'");
  if (t[0] == '+') t.erase(0, 1);
  return mpz_class(t, 10);
}

}  // namespace

PadicScalar parse_literal(std::string_view text, int prime, int precision) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw LiteralError("empty literal");
  if (text.starts_with("rat:")) {
    std::string_view body = text.substr(4);
    auto slash = body.find('/');
    mpz_class num = parse_mpz(body.substr(0, slash));
    mpz_class den = slash == std::string_view::npos ? mpz_class(1) : parse_mpz(body.substr(slash + 1));
    if (den == 0) throw LiteralError("zero denominator");
    return PadicScalar::from_rational(prime, mpq_class(num, den), precision);
  }
  auto adic = text.find("adic:");
  if (adic != std::string_view::npos) {
    long p = parse_long(text.substr(0, adic), "prime");
    if (p != prime)
      throw PrimeMismatchError("literal prime " + std::to_string(p) + " differs from " + std::to_string(prime));
    std::string_view rest = text.substr(adic + 5);
    if (!rest.starts_with("v=")) throw LiteralError("expected 'v=' in literal");
    auto colon = rest.find(':');
    if (colon == std::string_view::npos) throw LiteralError("expected ':d=' in literal");
    long v = parse_long(rest.substr(2, colon - 2), "valuation");
    std::string_view ds = rest.substr(colon + 1);
    if (!ds.starts_with("d=")) throw LiteralError("expected 'd=' in literal");
    ds.remove_prefix(2);
    std::vector<int> digits;
    while (true) {
      auto comma = ds.find(',');
      long d = parse_long(ds.substr(0, comma), "digit");
      if (d < 0 || d >= prime) throw LiteralError("digit " + std::to_string(d) + " out of range");
      digits.push_back(static_cast<int>(d));
      if (comma == std::string_view::npos) break;
      ds.remove_prefix(comma + 1);
    }
    if (digits.front() == 0) throw LiteralError("leading digit must be nonzero");
    return PadicScalar::from_digits(prime, v, digits, precision);
  }
  return PadicScalar::from_mpz(prime, parse_mpz(text), precision);
}

std::string to_literal(const PadicScalar& x) {
  if (x.is_zero()) return "0";
  auto d = x.digits();
  while (d.size() > 1 && d.back() == 0) d.pop_back();
  std::string s = std::to_string(x.prime()) + "adic:v=" + std::to_string(x.valuation()) + ":d=";
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(d[i]);
  }
  return s;
}

// ---------------------------------------------------------------- squares, signs

std::optional<SquareRoots> sqrt_hensel(const PadicScalar& x) {
  if (x.is_zero() || x.valuation() % 2 != 0) return std::nullopt;
  const int p = x.prime();
  const int u0 = x.leading_digit();
  if (legendre(u0, p) != 1) return std::nullopt;
  int r0 = 1;
  while ((static_cast<long>(r0) * r0 - u0) % p != 0) ++r0;
  if (r0 > (p - 1) / 2) r0 = p - r0;
  const int n = x.precision();
  const mpz_class& mod = prime_power(p, n);
  mpz_class r = r0, t, inv;
  while (true) {
    t = r * r - x.unit();
    mpz_mod(t.get_mpz_t(), t.get_mpz_t(), mod.get_mpz_t());
    if (t == 0) break;
    mpz_class two_r = 2 * r;
    mpz_invert(inv.get_mpz_t(), two_r.get_mpz_t(), mod.get_mpz_t());
    r = r - t * inv;
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
  }
  PadicScalar pos = PadicScalar::power_of_p(p, x.valuation() / 2, n) * PadicScalar::from_mpz(p, r, n);
  return SquareRoots{pos, -pos};
}

Sign sign(const PadicScalar& x) {
  if (x.is_zero()) throw PadicError("sign of zero");
  return x.leading_digit() <= (x.prime() - 1) / 2 ? Sign::positive : Sign::negative;
}

QuadraticData quadratic_data(const PadicScalar& x, PiConvention convention) {
  QuadraticData q;
  if (x.is_zero()) return q;
  q.legendre = legendre(x.leading_digit(), x.prime());
  q.is_square = x.valuation() % 2 == 0 && q.legendre == 1;
  Complex tau = convention == PiConvention::unit_tau ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
  q.pi1 = tau * static_cast<double>(q.legendre);
  return q;
}

Complex pi1(const PadicScalar& x, PiConvention convention) {
  if (x.is_zero()) throw PadicError("pi1 of zero");
  return quadratic_data(x, convention).pi1;
}

// ---------------------------------------------------------------- vectors

PadicVector zero_vector(int p, std::size_t n) { return PadicVector(n, PadicScalar::zero(p)); }

PadicScalar dot(const PadicVector& a, const PadicVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
  if (a.empty()) throw std::invalid_argument("dot: empty vectors");
  PadicScalar s = a[0] * b[0];
  for (std::size_t i = 1; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

PadicVector add(const PadicVector& a, const PadicVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("add: dimension mismatch");
  PadicVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

PadicVector sub(const PadicVector& a, const PadicVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("sub: dimension mismatch");
  PadicVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

PadicVector negate(const PadicVector& a) {
  PadicVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

PadicVector truncated(const PadicVector& a, long position) {
  PadicVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i].truncated(position);
  return r;
}

std::optional<long> norm_exponent(const PadicVector& a) {
  std::optional<long> e;
  for (const auto& x : a)
    if (!x.is_zero()) e = e ? std::max(*e, x.norm_exponent()) : x.norm_exponent();
  return e;
}

double norm(const PadicVector& a) {
  auto e = norm_exponent(a);
  return e ? pow_p(a[0].prime(), *e) : 0.0;
}

bool is_zero(const PadicVector& a) {
  return std::all_of(a.begin(), a.end(), [](const PadicScalar& x) { return x.is_zero(); });
}

bool same_digits(const PadicVector& a, const PadicVector& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].same_digits(b[i])) return false;
  return true;
}

int compare_keys(const PadicVector& a, const PadicVector& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (int c = PadicScalar::compare_keys(a[i], b[i])) return c;
  return 0;
}

RationalPhase dot_phase(const PadicVector& a, const PadicVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot_phase: dimension mismatch");
  RationalPhase s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_exact_zero() || b[i].is_exact_zero()) continue;
    s += (a[i] * b[i]).fractional_part();
  }
  return s;
}

}  // namespace padickg
