#include "padickg/cell_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>

namespace padickg {

bool ball_contains(const Ball& ball, const PadicVector& x) {
  if (x.size() != ball.center.size()) throw std::invalid_argument("ball_contains: dimension mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) {
    PadicScalar d = x[i] - ball.center[i];
    if (d.is_zero()) {
      if (d.absolute_precision() < -ball.level) throw PrecisionError("point precision too low for ball test");
      continue;
    }
    if (d.valuation() < -ball.level) return false;
  }
  return true;
}

std::optional<Ball> intersect(const Ball& a, const Ball& b) {
  const Ball& big = a.level >= b.level ? a : b;
  const Ball& small = a.level >= b.level ? b : a;
  if (ball_contains(big, small.center)) return small;
  return std::nullopt;
}

double ball_volume(int p, std::size_t n, long level) { return pow_p(p, static_cast<long>(n) * level); }

PadicVector digit_offset(int p, std::size_t index, std::size_t n, long position) {
  PadicVector v(n);
  for (std::size_t i = n; i-- > 0;) {
    int d = static_cast<int>(index % static_cast<std::size_t>(p));
    index /= static_cast<std::size_t>(p);
    v[i] = d == 0 ? PadicScalar::zero(p) : PadicScalar::power_of_p(p, position) * PadicScalar::from_integer(p, d);
  }
  return v;
}

std::vector<Ball> children(int p, const Ball& ball) {
  const std::size_t n = ball.center.size();
  std::size_t count = 1;
  for (std::size_t i = 0; i < n; ++i) count *= static_cast<std::size_t>(p);
  std::vector<Ball> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k)
    out.push_back({add(ball.center, digit_offset(p, k, n, -ball.level)), ball.level - 1});
  return out;
}

CellTerm normalize_term(int p, CellTerm t) {
  (void)p;
  t.center = truncated(t.center, -t.level);
  PadicVector reduced = truncated(t.modulation, t.level);
  PadicVector delta = sub(t.modulation, reduced);
  RationalPhase ph;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    if (delta[i].is_zero() || t.center[i].is_zero()) continue;
    ph += (delta[i] * t.center[i]).fractional_part();
  }
  if (!ph.is_zero()) t.coeff *= ph.chi();
  t.modulation = std::move(reduced);
  return t;
}

namespace {

int compare_terms(const CellTerm& a, const CellTerm& b) {
  if (a.level != b.level) return a.level > b.level ? -1 : 1;
  if (int c = compare_keys(a.center, b.center)) return c;
  return compare_keys(a.modulation, b.modulation);
}

std::vector<CellTerm> merge(std::vector<CellTerm> terms) {
  std::sort(terms.begin(), terms.end(), [](const CellTerm& a, const CellTerm& b) { return compare_terms(a, b) < 0; });
  std::vector<CellTerm> out;
  std::size_t i = 0;
  while (i < terms.size()) {
    CellTerm acc = terms[i];
    double mass = std::abs(acc.coeff);
    std::size_t j = i + 1;
    for (; j < terms.size() && compare_terms(terms[j], acc) == 0; ++j) {
      acc.coeff += terms[j].coeff;
      mass += std::abs(terms[j].coeff);
    }
    if (std::abs(acc.coeff) > 1e-12 * mass) out.push_back(std::move(acc));
    i = j;
  }
  return out;
}

std::string ball_key(long level, const PadicVector& center) {
  std::string key = std::to_string(level);
  for (const auto& c : center) key += "|" + to_literal(c);
  return key;
}

bool same_modulation_at(const CellTerm& big, const CellTerm& small) {
  return same_digits(truncated(big.modulation, small.level), small.modulation);
}

}  // namespace

CellFunction CellFunction::make(int p, std::size_t n, std::vector<CellTerm> raw) {
  CellFunction f(p, n);
  std::vector<CellTerm> terms;
  terms.reserve(raw.size());
  for (auto& t : raw) {
    if (t.center.size() != n || t.modulation.size() != n)
      throw std::invalid_argument("cell term dimension mismatch");
    if (t.coeff == Complex(0.0, 0.0)) continue;
    terms.push_back(normalize_term(p, std::move(t)));
  }
  terms = merge(std::move(terms));
  // Split balls that contain a finer ball carrying the same modulation, one level at a time.
  while (true) {
    std::vector<char> split(terms.size(), 0);
    bool any = false;
    std::map<std::string, std::vector<std::size_t>> by_ball;
    std::set<long> levels;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      by_ball[ball_key(terms[i].level, terms[i].center)].push_back(i);
      levels.insert(terms[i].level);
    }
    for (std::size_t j = 0; j < terms.size(); ++j)
      for (auto it = levels.upper_bound(terms[j].level); it != levels.end(); ++it) {
        auto hit = by_ball.find(ball_key(*it, truncated(terms[j].center, -*it)));
        if (hit == by_ball.end()) continue;
        for (std::size_t i : hit->second)
          if (!split[i] && same_modulation_at(terms[i], terms[j])) {
            split[i] = 1;
            any = true;
          }
      }
    if (!any) break;
    std::vector<CellTerm> next;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (!split[i]) {
        next.push_back(std::move(terms[i]));
        continue;
      }
      for (auto& child : children(p, {terms[i].center, terms[i].level}))
        next.push_back(normalize_term(p, {terms[i].coeff, terms[i].modulation, std::move(child.center), child.level}));
    }
    terms = merge(std::move(next));
  }
  f.terms_ = std::move(terms);
  return f;
}

CellFunction CellFunction::indicator(int p, const Ball& ball, Complex coeff) {
  const std::size_t n = ball.center.size();
  return make(p, n, {CellTerm{coeff, zero_vector(p, n), ball.center, ball.level}});
}

void CellFunction::check_compatible(const CellFunction& o) const {
  if (p_ != o.p_) throw PrimeMismatchError("cell functions over different primes");
  if (n_ != o.n_) throw std::invalid_argument("cell functions of different dimension");
}

Complex CellFunction::evaluate(const PadicVector& x) const {
  if (x.size() != n_) throw std::invalid_argument("evaluate: dimension mismatch");
  Complex s{0.0, 0.0};
  for (const auto& t : terms_)
    if (ball_contains({t.center, t.level}, x)) s += t.coeff * dot_phase(t.modulation, x).chi();
  return s;
}

Complex CellFunction::integrate() const {
  Complex s{0.0, 0.0};
  for (const auto& t : terms_)
    if (is_zero(t.modulation)) s += t.coeff * ball_volume(p_, n_, t.level);
  return s;
}

Complex CellFunction::integrate_over_ball(const Ball& ball) const {
  Complex s{0.0, 0.0};
  for (const auto& t : terms_) {
    Ball tb{t.center, t.level};
    auto meet = intersect(tb, ball);
    if (!meet) continue;
    auto e = norm_exponent(t.modulation);
    if (e && *e > -meet->level) continue;
    s += t.coeff * ball_volume(p_, n_, meet->level) * dot_phase(t.modulation, meet->center).chi();
  }
  return s;
}

CellFunction CellFunction::fourier(FourierDirection dir) const {
  std::vector<CellTerm> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    Complex c = t.coeff * ball_volume(p_, n_, t.level) * dot_phase(t.modulation, t.center).chi();
    if (dir == FourierDirection::forward) out.push_back({c, t.center, negate(t.modulation), -t.level});
    else out.push_back({c, negate(t.center), t.modulation, -t.level});
  }
  return make(p_, n_, std::move(out));
}

CellFunction CellFunction::operator+(const CellFunction& o) const {
  if (terms_.empty()) return o;
  if (o.terms_.empty()) return *this;
  check_compatible(o);
  std::vector<CellTerm> all = terms_;
  all.insert(all.end(), o.terms_.begin(), o.terms_.end());
  return make(p_, n_, std::move(all));
}

CellFunction CellFunction::operator-(const CellFunction& o) const { return *this + o.scaled(-1.0); }

CellFunction CellFunction::scaled(Complex c) const {
  if (c == Complex(0.0, 0.0)) return CellFunction(p_, n_);
  CellFunction f = *this;
  for (auto& t : f.terms_) t.coeff *= c;
  return f;
}

CellFunction CellFunction::conjugated() const {
  std::vector<CellTerm> out = terms_;
  for (auto& t : out) {
    t.coeff = std::conj(t.coeff);
    t.modulation = negate(t.modulation);
  }
  return make(p_, n_, std::move(out));
}

CellFunction CellFunction::with_signs(const std::vector<int>& signs) const {
  if (signs.size() != n_) throw std::invalid_argument("with_signs: dimension mismatch");
  std::vector<CellTerm> out = terms_;
  for (auto& t : out)
    for (std::size_t i = 0; i < n_; ++i)
      if (signs[i] < 0) {
        t.modulation[i] = -t.modulation[i];
        t.center[i] = -t.center[i];
      }
  return make(p_, n_, std::move(out));
}

CellFunction CellFunction::reflected() const { return with_signs(std::vector<int>(n_, -1)); }

CellFunction CellFunction::modulated(const PadicVector& w) const {
  std::vector<CellTerm> out = terms_;
  for (auto& t : out) t.modulation = add(t.modulation, w);
  return make(p_, n_, std::move(out));
}

CellFunction CellFunction::translated(const PadicVector& shift) const {
  std::vector<CellTerm> out = terms_;
  for (auto& t : out) {
    t.coeff *= (-dot_phase(t.modulation, shift)).chi();
    t.center = add(t.center, shift);
  }
  return make(p_, n_, std::move(out));
}

CellFunction CellFunction::restricted(const Ball& ball) const {
  std::vector<CellTerm> out;
  for (const auto& t : terms_)
    if (auto meet = intersect({t.center, t.level}, ball)) out.push_back({t.coeff, t.modulation, meet->center, meet->level});
  return make(p_, n_, std::move(out));
}

CellFunction CellFunction::product(const CellFunction& o) const {
  check_compatible(o);
  std::vector<CellTerm> out;
  for (const auto& a : terms_)
    for (const auto& b : o.terms_)
      if (auto meet = intersect({a.center, a.level}, {b.center, b.level}))
        out.push_back({a.coeff * b.coeff, add(a.modulation, b.modulation), meet->center, meet->level});
  return make(p_, n_, std::move(out));
}

CellFunction CellFunction::convolve(const CellFunction& o) const {
  return fourier().product(o.fourier()).fourier(FourierDirection::inverse);
}

Complex CellFunction::inner_product(const CellFunction& o) const {
  check_compatible(o);
  Complex s{0.0, 0.0};
  for (const auto& a : terms_)
    for (const auto& b : o.terms_) {
      auto meet = intersect({a.center, a.level}, {b.center, b.level});
      if (!meet) continue;
      PadicVector w = sub(a.modulation, b.modulation);
      auto e = norm_exponent(w);
      if (e && *e > -meet->level) continue;
      s += a.coeff * std::conj(b.coeff) * ball_volume(p_, n_, meet->level) * dot_phase(w, meet->center).chi();
    }
  return s;
}

double CellFunction::l2_norm() const { return std::sqrt(std::max(0.0, inner_product(*this).real())); }

long CellFunction::local_constancy_level(const PadicVector& x) const {
  (void)x;
  long level = std::numeric_limits<long>::max();
  for (const auto& t : terms_) {
    level = std::min(level, t.level);
    if (auto e = norm_exponent(t.modulation)) level = std::min(level, -*e);
  }
  return level;
}

std::vector<Ball> CellFunction::support_balls() const {
  std::vector<Ball> out;
  for (const auto& t : terms_) {  // terms are sorted by decreasing level
    Ball b{t.center, t.level};
    bool covered = std::any_of(out.begin(), out.end(), [&](const Ball& k) {
      return k.level >= b.level && same_digits(truncated(b.center, -k.level), k.center);
    });
    if (!covered) out.push_back(std::move(b));
  }
  return out;
}

std::optional<long> CellFunction::coarsest_level() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.front().level;
}

std::optional<long> CellFunction::finest_level() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.back().level;
}


std::vector<Ball> maximal_balls(std::vector<Ball> balls) {
  std::sort(balls.begin(), balls.end(), [](const Ball& a, const Ball& b) {
    if (a.level != b.level) return a.level > b.level;
    return compare_keys(a.center, b.center) < 0;
  });
  std::vector<Ball> out;
  for (auto& b : balls) {
    bool covered = std::any_of(out.begin(), out.end(), [&](const Ball& k) { return intersect(k, b).has_value(); });
    if (!covered) out.push_back(std::move(b));
  }
  return out;
}

}  // namespace padickg
