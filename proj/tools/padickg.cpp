#include "padickg/fock.hpp"
#include "padickg/function_io.hpp"
#include "padickg/quantization.hpp"
#include "padickg/random.hpp"
#include "padickg/suites.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>

using namespace padickg;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUnknownCommand = 2;
constexpr int kExitConfig = 3;

// Raised for inputs that violate the scenario configuration.
class ConfigViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::uint64_t seed = 0;
  int p = 7;
  int precision = kDefaultPrecision;
  double alpha = 1.0;
  std::string m = "1";
  std::string tau = "1";
  double eps = 1e-9;
  int cap = 8;
  std::size_t budget = 200000;
  bool timing = false;
};

struct Context {
  Options opt;
  PadicScalar m;
  PiConvention convention = PiConvention::unit_tau;
  bool failed = false;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  int p() const { return opt.p; }
  KGConfig kg() const {
    KGConfig cfg;
    cfg.alpha = opt.alpha;
    cfg.m = m;
    cfg.eps_target = opt.eps;
    cfg.refinement_cap = opt.cap;
    cfg.budget = opt.budget;
    cfg.convention = convention;
    return cfg;
  }
  ShellOptions shell() const { return {opt.cap, opt.budget, std::nullopt}; }

  void emit(Json record) {
    if (record.contains("pass") && !record["pass"].get<bool>()) failed = true;
    if (opt.timing) {
      auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      record["wall_ms"] = ms;
    }
    std::cout << record.dump() << '\n';
  }
};

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

void validate(Context& ctx) {
  const auto& o = ctx.opt;
  if (o.p == 2 || !is_prime(o.p)) throw ConfigViolation("p must be an odd prime, got " + std::to_string(o.p));
  if (o.precision < 4) throw ConfigViolation("precision must be at least 4");
  if (!(o.alpha > 0.0)) throw ConfigViolation("alpha must be positive");
  if (!(o.eps > 0.0)) throw ConfigViolation("eps must be positive");
  if (o.cap < 0) throw ConfigViolation("cap must be non-negative");
  ctx.m = parse_literal(o.m, o.p, o.precision);
  if (ctx.m.is_zero()) throw ConfigViolation("m must be nonzero");
  ctx.convention = o.tau == "i" ? PiConvention::imaginary_tau : PiConvention::unit_tau;
}

Json complex_fields(Json j, const std::string& name, Complex z) {
  j[name + "_re"] = z.real();
  j[name + "_im"] = z.imag();
  return j;
}

Json header(const std::string& command, const Context& ctx) {
  Json j;
  j["command"] = command;
  j["p"] = ctx.p();
  return j;
}

PadicVector literals(const std::string& text, const Context& ctx, std::size_t n) {
  PadicVector v = parse_literal_list(text, ctx.p(), ctx.opt.precision);
  if (v.size() != n)
    throw ConfigViolation("expected " + std::to_string(n) + " literals, got " + std::to_string(v.size()));
  return v;
}

CellFunction load(const std::string& path, const Context& ctx, std::size_t n) {
  if (!std::filesystem::is_regular_file(path)) throw ConfigViolation("cannot read " + path);
  CellFunction f = parse_function_file(path, ctx.p(), ctx.opt.precision);
  if (n != 0 && !f.empty() && f.dimension() != n)
    throw ConfigViolation(path + ": expected dimension " + std::to_string(n) + ", got " +
                          std::to_string(f.dimension()));
  return f.empty() && n != 0 ? CellFunction(ctx.p(), n) : f;
}

// 1 on (m, 0, 0, 0) + (pZ_p)^4.
CellFunction shell_probe(const Context& ctx) {
  const PadicScalar z = PadicScalar::zero(ctx.p());
  return CellFunction::indicator(ctx.p(), {{ctx.m, z, z, z}, -1});
}

PadicScalar p_power(const Context& ctx, long e) { return PadicScalar::power_of_p(ctx.p(), e, ctx.opt.precision); }

// Spatial data with transform in (pZ_p)^3.
CellFunction default_cauchy_data(Rng& rng, int p) {
  std::vector<CellTerm> terms;
  for (int i = 0; i < 2; ++i) {
    CellTerm t;
    t.coeff = rng.coefficient();
    t.level = 1;
    t.center = random_point(rng, p, 3, -2, -1);
    t.modulation = random_point(rng, p, 3, 1, 3);
    terms.push_back(std::move(t));
  }
  return CellFunction::make(p, 3, std::move(terms));
}

// ------------------------------------------------------------------ commands

void char_table(Context& ctx, std::optional<int> prime) {
  if (prime) {
    ctx.opt.p = *prime;
    if (*prime == 2 || !is_prime(*prime)) throw ConfigViolation("char-table needs an odd prime");
  }
  const int p = ctx.p();
  TwistedCharacter pi(p, ctx.convention);
  Json residues = Json::array();
  for (long d = 1; d < p; ++d) {
    Json j = header("char-table", ctx);
    j["d"] = d;
    j["legendre"] = legendre(d, p);
    j = complex_fields(j, "pi1", pi.value(d));
    ctx.emit(j);
    if (legendre(d, p) == 1) residues.push_back(d);
  }
  const Complex g = gauss_sum(p, ctx.convention);
  const double expected = 1.0 / std::sqrt(static_cast<double>(p));
  Json j = header("char-table", ctx);
  j["tau"] = ctx.opt.tau;
  j["legendre_residues"] = residues;
  j = complex_fields(j, "gauss", g);
  j["gauss_abs"] = std::abs(g);
  j["expected_abs"] = expected;
  j["residual"] = std::abs(std::abs(g) - expected);
  j["tolerance"] = 1e-12;
  j["pass"] = std::abs(std::abs(g) - expected) <= 1e-12;
  ctx.emit(j);
}

struct FourierArgs {
  std::string in, out, form = "euclid";
  std::size_t dim = 1;
  bool inverse = false;
};

void fourier_cmd(Context& ctx, const FourierArgs& a) {
  CellFunction f = a.in.empty() ? CellFunction::indicator(ctx.p(), {zero_vector(ctx.p(), a.dim), 0})
                                : load(a.in, ctx, 0);
  const auto dir = a.inverse ? FourierDirection::inverse : FourierDirection::forward;
  const auto back = a.inverse ? FourierDirection::forward : FourierDirection::inverse;
  const bool mink = a.form == "minkowski";
  if (mink && f.dimension() != 4) throw ConfigViolation("the Minkowski transform needs dimension 4");
  CellFunction g = mink ? fourier_minkowski(f, dir) : f.fourier(dir);
  CellFunction round = mink ? fourier_minkowski(g, back) : g.fourier(back);
  const double residual = (round - f).l2_norm();

  Json j = header("fourier", ctx);
  j["form"] = a.form;
  j["direction"] = a.inverse ? "inverse" : "forward";
  j["dimension"] = f.dimension();
  j["input_terms"] = f.size();
  j["output_terms"] = g.size();
  j["norm_in"] = f.l2_norm();
  j["norm_out"] = g.l2_norm();
  j["round_trip_residual"] = residual;
  j["tolerance"] = ctx.opt.eps;
  j["pass"] = residual <= ctx.opt.eps && std::abs(f.l2_norm() - g.l2_norm()) <= ctx.opt.eps;
  if (a.out.empty()) {
    j["function"] = emit_function_text(g);
  } else {
    write_function_file(a.out, g);
    j["written"] = a.out;
  }
  ctx.emit(j);
}

void kg_apply(Context& ctx, const std::string& in, const std::string& x) {
  const KGConfig cfg = ctx.kg();
  // Default: transform supported on (1/p, 0, 0, 0) + Z_p^4, where the symbol is constant.
  const PadicScalar z = PadicScalar::zero(ctx.p());
  CellFunction phi = in.empty() ? fourier_minkowski(CellFunction::indicator(ctx.p(), {{p_power(ctx, -1), z, z, z}, 0}),
                                                    FourierDirection::inverse)
                                : load(in, ctx, 4);
  PadicVector point = x.empty() ? zero_vector(ctx.p(), 4) : literals(x, ctx, 4);
  auto r = apply_box(phi, point, cfg);
  Json j = header("kg-apply", ctx);
  j["alpha"] = cfg.alpha;
  j = complex_fields(j, "value", r.value);
  j["bound"] = r.bound;
  j["cells"] = r.cells;
  j["unresolved"] = r.unresolved;
  if (r.budget_exhausted) j["warning"] = "cell budget exhausted";
  ctx.emit(j);
}

void plane_wave_check(Context& ctx, const std::string& in, const std::string& k_text) {
  const KGConfig cfg = ctx.kg();
  const int p = ctx.p();
  PadicVector k = k_text.empty() ? PadicVector{ctx.m, PadicScalar::zero(p), PadicScalar::zero(p),
                                               PadicScalar::zero(p)}
                                 : literals(k_text, ctx, 4);
  const bool on_shell = quadratic_q(k) == ctx.m * ctx.m;
  std::vector<CellFunction> tests;
  if (!in.empty()) {
    tests.push_back(load(in, ctx, 4));
  } else {
    Rng rng(ctx.opt.seed);
    FunctionShape shape;
    shape.dimension = 4;
    shape.max_terms = 3;
    shape.center_low = -1;
    shape.modulation_high = 2;
    for (int i = 0; i < 5; ++i) tests.push_back(random_function(rng, p, shape));
  }
  for (std::size_t i = 0; i < tests.size(); ++i) {
    const Complex v = weak_pair_plane_wave(k, tests[i], cfg);
    Json j = header("plane-wave-check", ctx);
    j["test"] = i;
    j["on_shell"] = on_shell;
    j = complex_fields(j, "value", v);
    if (on_shell) {
      j["tolerance"] = ctx.opt.eps;
      j["pass"] = std::abs(v) <= ctx.opt.eps;
    }
    ctx.emit(j);
  }
}

void shell_census_cmd(Context& ctx, const std::string& center, long level, int levels) {
  PadicVector c = center.empty() ? zero_vector(ctx.p(), 3) : literals(center, ctx, 3);
  auto rows = shell_census({c, level}, ctx.m, levels, ctx.opt.budget);
  for (const auto& r : rows) {
    Json j = header("shell-census", ctx);
    j["level"] = r.level;
    j["inside"] = r.inside;
    j["outside"] = r.outside;
    j["unresolved"] = r.unresolved;
    j["mass"] = r.mass;
    j["bound"] = r.bound;
    ctx.emit(j);
  }
}

void shell_integrate_cmd(Context& ctx, const std::string& in, const std::string& branch_name, std::size_t chart) {
  CellFunction g = in.empty() ? shell_probe(ctx) : load(in, ctx, 4);
  Branch b = branch_name == "plus" ? Branch::plus : branch_name == "minus" ? Branch::minus : Branch::both;
  auto r = shell_integrate(g, ctx.m, b, ctx.shell(), chart);
  Json j = header("shell-integrate", ctx);
  j["branch"] = branch_name;
  j["chart"] = chart;
  j = complex_fields(j, "value", r.value);
  j["bound"] = r.error_bound;
  j["cells"] = r.cells_used;
  j["unresolved"] = r.cells_unresolved;
  if (r.budget_exhausted) j["warning"] = "cell budget exhausted";
  ctx.emit(j);
}

struct CauchyArgs {
  std::string psi0, psi1, t, x;
  int samples = 50;
};

void cauchy_cmd(Context& ctx, const CauchyArgs& a) {
  const int p = ctx.p();
  if (p % 4 != 3) throw ConfigViolation("cauchy-solve requires p = 3 mod 4, got " + std::to_string(p));
  Rng rng(ctx.opt.seed);
  CellFunction psi0 = a.psi0.empty() ? default_cauchy_data(rng, p) : load(a.psi0, ctx, 3);
  CellFunction psi1 = a.psi1.empty() ? default_cauchy_data(rng, p) : load(a.psi1, ctx, 3);
  const KGConfig cfg = ctx.kg();
  CauchySolution sol;
  try {
    sol = cauchy_solve(psi0, psi1, cfg);
  } catch (const ConditionError& e) {
    throw ConfigViolation(e.what());
  }
  std::vector<PadicVector> samples;
  // Odd samples land in term balls, where the data is nonzero.
  for (int i = 0; i < a.samples; ++i) {
    const CellFunction& src = (i % 4 == 1 || psi1.empty()) ? psi0 : psi1;
    if (i % 2 == 0 || src.empty()) {
      samples.push_back(random_point(rng, p, 3, -2, 2));
    } else {
      const CellTerm& term = src.terms()[static_cast<std::size_t>(i / 2) % src.size()];
      samples.push_back(add(term.center, random_point(rng, p, 3, -term.level, 2)));
    }
  }
  auto ic = check_initial_conditions(sol, psi0, psi1, samples);
  PadicScalar t = a.t.empty() ? PadicScalar::zero(p) : parse_literal(a.t, p, ctx.opt.precision);
  PadicVector x = a.x.empty() ? zero_vector(p, 3) : literals(a.x, ctx, 3);
  auto v = sol.evaluator.evaluate(t, x);

  Json j = header("cauchy-solve", ctx);
  j["alpha"] = cfg.alpha;
  j["tau"] = ctx.opt.tau;
  j = complex_fields(j, "value", v.value);
  j["bound"] = v.bound;
  j["cells"] = v.cells;
  j["samples"] = samples.size();
  j["ic_b_residual"] = ic.ic_b_residual;
  j["ic_c_residual"] = ic.ic_c_residual;
  j = complex_fields(j, "ic_c_constant", ic.ic_c_constant);
  j["tolerance"] = ctx.opt.eps;
  j["pass"] = ic.ic_b_residual <= ctx.opt.eps && ic.ic_c_residual <= ctx.opt.eps;
  ctx.emit(j);
}

void vladimirov_cmd(Context& ctx, const std::string& in, const std::string& x_text, const std::string& route) {
  const int p = ctx.p();
  CellFunction f = in.empty() ? CellFunction::indicator(p, {zero_vector(p, 1), 0}) : load(in, ctx, 1);
  PadicScalar x = x_text.empty() ? p_power(ctx, -1) : parse_literal(x_text, p, ctx.opt.precision);
  TwistedCharacter pi(p, ctx.convention);
  Json j = header("vladimirov-apply", ctx);
  j["alpha"] = ctx.opt.alpha;
  j["tau"] = ctx.opt.tau;
  j["x"] = to_literal(x);
  std::optional<Complex> spectral, integral;
  if (route != "integral") spectral = apply_dtilde(f, ctx.opt.alpha, DtildeRoute::spectral, x, pi);
  if (route != "spectral") integral = apply_dtilde(f, ctx.opt.alpha, DtildeRoute::integral, x, pi);
  if (spectral) j = complex_fields(j, "spectral", *spectral);
  if (integral) j = complex_fields(j, "integral", *integral);
  if (spectral && integral) {
    const double gap = std::abs(*spectral - *integral);
    j["discrepancy"] = gap;
    // The integral route relies on the Gamma identity, which holds for tau = 1 only.
    if (ctx.convention == PiConvention::unit_tau) {
      j["tolerance"] = ctx.opt.eps;
      j["pass"] = gap <= ctx.opt.eps;
    } else {
      j["note"] = "routes are not expected to agree for tau=i";
    }
  }
  ctx.emit(j);
}

void evolve_cmd(Context& ctx, const std::string& in, const std::string& t_text) {
  const int p = ctx.p();
  CellFunction data;
  if (!in.empty()) {
    data = load(in, ctx, 3);
  } else {
    Rng rng(ctx.opt.seed);
    std::vector<CellTerm> terms;
    for (int i = 0; i < 2; ++i)
      terms.push_back({rng.coefficient(), random_point(rng, p, 3, -1, 2), random_point(rng, p, 3, 1, 2), -2});
    data = CellFunction::make(p, 3, std::move(terms));
  }
  SingleParticleVector psi;
  try {
    psi = SingleParticleVector(data, ctx.m, SupportOptions{ctx.opt.cap, ctx.opt.budget, std::nullopt});
  } catch (const SupportError& e) {
    throw ConfigViolation(e.what());
  }
  PadicScalar t = t_text.empty() ? p_power(ctx, -2) : parse_literal(t_text, p, ctx.opt.precision);
  auto ut = evolve_U(t, psi);
  auto twice = evolve_U(t, ut);
  auto doubled = evolve_U(t + t, psi);
  auto back = evolve_U(-t, ut);
  const PadicVector origin = zero_vector(p, 3);
  const double group = (twice.psi_hat() - doubled.psi_hat()).l2_norm();
  const double inverse = (back.psi_hat() - psi.psi_hat()).l2_norm();
  const double unitarity = std::abs(ut.norm() - psi.norm());

  Json j = header("evolve", ctx);
  j["t"] = to_literal(t);
  j["cells"] = psi.cells().size();
  j["norm"] = psi.norm();
  j["evolved_norm"] = ut.norm();
  j = complex_fields(j, "wave_at_0", psi.wave_function(PadicScalar::zero(p), origin));
  j = complex_fields(j, "wave_at_t", psi.wave_function(t, origin));
  j["unitarity_residual"] = unitarity;
  j["group_law_residual"] = group;
  j["inverse_residual"] = inverse;
  j["tolerance"] = 1e-12;
  j["pass"] = unitarity <= 1e-12 && group <= 1e-12 && inverse <= 1e-12;
  ctx.emit(j);
}

void fock_demo(Context& ctx, std::size_t modes_count, int cutoff, int functions) {
  if (modes_count == 0 || cutoff < 0) throw ConfigViolation("fock-demo needs at least one mode and cutoff >= 0");
  const int p = ctx.p();
  ModeBasis modes;
  try {
    modes = choose_modes({zero_vector(p, 3), 0}, ctx.m, modes_count);
  } catch (const SupportError& e) {
    throw ConfigViolation(e.what());
  }
  FockSpace space(modes_count, cutoff);
  Json dim = header("fock-demo", ctx);
  dim["modes"] = modes_count;
  dim["cutoff"] = cutoff;
  dim["dimension"] = space.dimension();
  ctx.emit(dim);

  for (std::size_t i = 0; i < modes_count; ++i)
    for (std::size_t k = 0; k < modes_count; ++k) {
      ModeVector u = ModeVector::Zero(static_cast<Eigen::Index>(modes_count));
      ModeVector v = u;
      u(static_cast<Eigen::Index>(i)) = 1.0;
      v(static_cast<Eigen::Index>(k)) = 1.0;
      const double ccr = space.ccr_residual(u, v);
      const double aa = max_abs(commutator(space.annihilate(i), space.annihilate(k)));
      Json j = header("fock-demo", ctx);
      j["i"] = i;
      j["j"] = k;
      j["ccr_residual"] = ccr;
      j["aa_residual"] = aa;
      j["tolerance"] = 1e-12;
      j["pass"] = ccr <= 1e-12 && aa <= 1e-12;
      ctx.emit(j);
    }

  Rng rng(ctx.opt.seed);
  const KGConfig cfg = ctx.kg();
  for (int n = 0; n < functions; ++n) {
    std::vector<CellTerm> terms;
    for (const auto& c : modes.cells) {
      if (!rng.coin() && !terms.empty()) continue;
      PadicScalar w = omega(c.center, modes.m);
      terms.push_back(
          {rng.coefficient(), zero_vector(p, 4), {w.truncated(-c.level), c.center[0], c.center[1], c.center[2]}, c.level});
    }
    CellFunction phi = fourier_minkowski(CellFunction::make(p, 4, std::move(terms)), FourierDirection::inverse);
    auto field = field_operator(space, modes, phi, ctx.opt.cap);
    auto boxed = field_operator_box(space, modes, phi, cfg);
    Json j = header("fock-demo", ctx);
    j["function"] = n;
    j["field_norm"] = max_abs(field.matrix);
    j["projection_loss"] = field.projection_loss;
    j["field_of_box_max"] = max_abs(boxed.matrix);
    j["pass"] = max_abs(boxed.matrix) == 0.0;
    ctx.emit(j);
  }
}

void invariants_run(Context& ctx, bool p_given, const std::vector<std::string>& only) {
  SuiteConfig cfg;
  cfg.seed = ctx.opt.seed;
  if (p_given) cfg.primes = {ctx.p()};
  cfg.precision = ctx.opt.precision;
  cfg.eps = ctx.opt.eps;
  cfg.convention = ctx.convention;
  cfg.refinement_cap = ctx.opt.cap;
  cfg.budget = ctx.opt.budget;
  for (const auto& name : only)
    if (std::find(suite_names().begin(), suite_names().end(), name) == suite_names().end())
      throw ConfigViolation("unknown suite " + name);
  for (const auto& name : suite_names()) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
    for (const auto& r : run_suite(name, cfg)) {
      Json j;
      j["command"] = "invariants";
      j["suite"] = r.suite;
      j["check"] = r.check;
      j["value"] = r.value;
      j["tolerance"] = r.tolerance;
      j["lower_bound"] = r.lower_bound;
      j["samples"] = r.samples;
      if (!r.note.empty()) j["note"] = r.note;
      j["pass"] = r.pass;
      ctx.emit(j);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-adic Klein-Gordon toolkit"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file; command-line flags take precedence");

  Context ctx;
  Options& o = ctx.opt;
  auto* p_opt = app.add_option("--p", o.p, "odd prime");
  app.add_option("--seed", o.seed, "seed for randomized data");
  app.add_option("--precision", o.precision, "relative precision in digits");
  app.add_option("--alpha", o.alpha, "order of the operator");
  app.add_option("--m", o.m, "mass literal");
  app.add_option("--tau", o.tau, "pi1 convention")->check(CLI::IsMember({"1", "i"}));
  app.add_option("--eps", o.eps, "numerical tolerance");
  app.add_option("--cap", o.cap, "refinement levels below the input");
  app.add_option("--budget", o.budget, "cell budget per call");
  app.add_flag("--timing", o.timing, "append wall time to every record");

  std::optional<int> table_prime;
  auto* ct = app.add_subcommand("char-table", "Legendre, pi1 and Gauss data");
  ct->add_option("prime", table_prime);

  FourierArgs fa;
  auto* fo = app.add_subcommand("fourier", "transform a function file");
  fo->add_option("--in", fa.in);
  fo->add_option("--out", fa.out);
  fo->add_option("--dim", fa.dim, "dimension of the default unit ball");
  fo->add_option("--form", fa.form)->check(CLI::IsMember({"euclid", "minkowski"}));
  fo->add_flag("--inverse", fa.inverse);

  std::string in, x, k, center, branch = "both", route = "both", t;
  long level = 0;
  int levels = 3;
  std::size_t chart = 0;
  auto* kg = app.add_subcommand("kg-apply", "evaluate the Klein-Gordon operator");
  kg->add_option("--in", in);
  kg->add_option("--x", x, "four comma-separated literals");

  auto* pw = app.add_subcommand("plane-wave-check", "pair a plane wave with Box phi");
  pw->add_option("--in", in);
  pw->add_option("--k", k, "four comma-separated literals");

  auto* sc = app.add_subcommand("shell-census", "cell counts per level");
  sc->add_option("--center", center);
  sc->add_option("--level", level);
  sc->add_option("--levels", levels);

  auto* si = app.add_subcommand("shell-integrate", "integrate against the mass shell measure");
  si->add_option("--in", in);
  si->add_option("--branch", branch)->check(CLI::IsMember({"plus", "minus", "both"}));
  si->add_option("--chart", chart)->check(CLI::Range(0, 3));

  CauchyArgs ca;
  auto* cs = app.add_subcommand("cauchy-solve", "solve the homogeneous Cauchy problem");
  cs->add_option("--psi0", ca.psi0);
  cs->add_option("--psi1", ca.psi1);
  cs->add_option("--t", ca.t);
  cs->add_option("--x", ca.x, "three comma-separated literals");
  cs->add_option("--samples", ca.samples);

  auto* va = app.add_subcommand("vladimirov-apply", "twisted Vladimirov operator");
  va->add_option("--in", in);
  va->add_option("--x", x);
  va->add_option("--route", route)->check(CLI::IsMember({"spectral", "integral", "both"}));

  auto* ev = app.add_subcommand("evolve", "unitary time evolution");
  ev->add_option("--in", in);
  ev->add_option("--t", t);

  std::size_t modes = 4;
  int cutoff = 4, functions = 10;
  auto* fd = app.add_subcommand("fock-demo", "truncated Fock space checks");
  fd->add_option("--modes", modes);
  fd->add_option("--cutoff", cutoff);
  fd->add_option("--functions", functions);

  std::vector<std::string> suites;
  auto* inv = app.add_subcommand("invariants", "property suites");
  inv->require_subcommand(1);
  auto* run = inv->add_subcommand("run", "run the property suites");
  run->add_option("--suite", suites, "restrict to the named suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ExtrasError& e) {
    std::cerr << "unknown command: " << e.what() << '\n';
    return kExitUnknownCommand;
  } catch (const CLI::RequiredError& e) {
    std::cerr << (argc > 1 ? "unknown command" : e.what()) << '\n';
    return kExitUnknownCommand;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  }

  try {
    validate(ctx);
    if (*ct) char_table(ctx, table_prime);
    else if (*fo) fourier_cmd(ctx, fa);
    else if (*kg) kg_apply(ctx, in, x);
    else if (*pw) plane_wave_check(ctx, in, k);
    else if (*sc) shell_census_cmd(ctx, center, level, levels);
    else if (*si) shell_integrate_cmd(ctx, in, branch, chart);
    else if (*cs) cauchy_cmd(ctx, ca);
    else if (*va) vladimirov_cmd(ctx, in, x, route);
    else if (*ev) evolve_cmd(ctx, in, t);
    else if (*fd) fock_demo(ctx, modes, cutoff, functions);
    else if (*run) invariants_run(ctx, p_opt->count() > 0, suites);
  } catch (const ConfigViolation& e) {
    std::cerr << "config violation: " << e.what() << '\n';
    return kExitConfig;
  } catch (const PadicError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  }
  return ctx.failed ? kExitFailed : kExitOk;
}
