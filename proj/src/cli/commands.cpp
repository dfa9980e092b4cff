#include "hall_edge/cli/commands.hpp"

#include <chrono>
#include <cmath>

#include "hall_edge/bosonization.hpp"
#include "hall_edge/errors.hpp"
#include "hall_edge/fock_space.hpp"
#include "hall_edge/laughlin.hpp"
#include "hall_edge/single_particle.hpp"

namespace hall_edge::cli {

namespace {

namespace sp = single_particle;
namespace fs = fock_space;
namespace bz = bosonization;
namespace la = laughlin;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

class Builder {
 public:
  Builder(std::string command, const ParamSet& params) : params_(params) { result_.command = std::move(command); }

  ResultRecord& add(std::string module, std::string operation, std::optional<double> tolerance = std::nullopt,
                    Json extra_inputs = Json::object()) {
    ResultRecord r;
    r.inputs = params_.json();
    for (const auto& [k, v] : extra_inputs.items()) r.inputs[k] = v;
    r.provenance = {std::move(module), std::move(operation), tolerance};
    r.seconds = seconds_since(mark_);
    mark_ = Clock::now();
    result_.records.push_back(std::move(r));
    return result_.records.back();
  }

  void reset_clock() { mark_ = Clock::now(); }
  void x_key(std::string key) { result_.x_key = std::move(key); }
  RunResult take() { return std::move(result_); }

 private:
  const ParamSet& params_;
  RunResult result_;
  Clock::time_point mark_ = Clock::now();
};

int as_int(const ParamSet& p, const std::string& name) {
  const long long v = p.integer(name);
  if (v > 1'000'000'000LL || v < -1'000'000'000LL) throw DomainError("parameter '" + name + "' out of range");
  return static_cast<int>(v);
}

fs::QuasiFreeState state_for(double beta) {
  return beta == inf ? fs::QuasiFreeState::zero_temperature() : fs::QuasiFreeState::kms(beta);
}

sp::FieldConfig field(const ParamSet& p) { return sp::effective_field(p.real("B"), p.real("E")); }

RunResult run_spectrum(const ParamSet& p) {
  Builder b("spectrum", p);
  const auto cfg = field(p);
  const double e0 = sp::ground_state_energy(cfg);
  for (int n = 0; n <= as_int(p, "n-max"); ++n)
    for (int m = 0; m <= as_int(p, "m-max"); ++m) {
      const double e = sp::spectrum(n, m, cfg);
      auto& r = b.add("single_particle", "spectrum", std::nullopt, Json{{"n", n}, {"m", m}});
      r.outputs = {{"energy", e},           {"ground_state_energy", e0}, {"total_energy", e0 + e},
                   {"omega_c", cfg.omega_c}, {"omega_h", cfg.omega_h},     {"b", cfg.b}};
    }
  return b.take();
}

RunResult run_wavefunction(const ParamSet& p) {
  Builder b("wavefunction", p);
  const auto cfg = field(p);
  const int n = as_int(p, "n"), m = as_int(p, "m");
  const LogComplex lv = sp::eval_wavefunction_log(n, m, cfg, p.real("x1"), p.real("x2"));
  const cplx psi = lv.value();
  auto& r = b.add("single_particle", "eval_wavefunction");
  r.outputs = {{"psi", psi}, {"abs2", std::norm(psi)}, {"log_abs", lv.log_abs},
               {"angular_momentum", static_cast<long long>(m - n)}};
  return b.take();
}

RunResult run_density(const ParamSet& p) {
  Builder b("density", p);
  const auto cfg = field(p);
  const double rho = sp::lll_density(as_int(p, "m-max"), cfg, p.real("x1"), p.real("x2"));
  const double sat = cfg.b / (2.0 * pi);
  auto& r = b.add("single_particle", "lll_density");
  r.outputs = {{"density", rho}, {"saturation", sat}, {"ratio", rho / sat}};
  return b.take();
}

RunResult run_dynamics(const ParamSet& p) {
  Builder b("dynamics", p);
  b.x_key("t");
  const auto cfg = field(p);
  const sp::PhasePoint init{p.real("x1"), p.real("x2"), p.real("p1"), p.real("p2")};
  const std::string method = p.text("method");
  const sp::TrajectoryOptions opts{p.real("step"), p.real("energy-tolerance")};
  const int samples = as_int(p, "samples");
  const double t_max = p.real("t-max");
  const double e0 = sp::hamiltonian(init, cfg);
  sp::PhasePoint numeric = init;
  double t_prev = 0.0;
  b.reset_clock();
  for (int k = 0; k <= samples; ++k) {
    const double t = t_max * k / samples;
    sp::PhasePoint shown;
    double deviation = 0.0;
    const sp::PhasePoint exact = sp::classical_trajectory(init, cfg, t, sp::Integrator::analytic);
    if (method == "analytic") {
      shown = exact;
    } else {
      numeric = sp::classical_trajectory(numeric, cfg, t - t_prev, sp::Integrator::rk4, opts);
      t_prev = t;
      shown = numeric;
      deviation = std::max({std::abs(numeric.x1 - exact.x1), std::abs(numeric.x2 - exact.x2),
                            std::abs(numeric.p1 - exact.p1), std::abs(numeric.p2 - exact.p2)});
    }
    const double e = sp::hamiltonian(shown, cfg);
    auto& r = b.add("single_particle", "classical_trajectory",
                    method == "analytic" ? std::nullopt : std::optional<double>(opts.energy_tolerance),
                    Json{{"t", t}});
    r.outputs = {{"x1", shown.x1}, {"x2", shown.x2}, {"p1", shown.p1}, {"p2", shown.p2},
                 {"energy", e},    {"energy_drift", e - e0}};
    if (method == "both") r.outputs.push_back({"analytic_deviation", deviation});
  }
  return b.take();
}

RunResult run_current_algebra(const ParamSet& p) {
  Builder b("current-algebra", p);
  const std::string q = p.text("quantity");
  const int M = as_int(p, "M");
  const fs::ModeWindow window(M);
  const double beta = p.real("beta");
  const auto state = state_for(beta);

  if (q == "central-term" || q == "two-point") {
    const int pmax = as_int(p, "p-max");
    const int limit = q == "central-term" ? M : 2 * M;
    if (pmax > limit)
      throw DomainError("current-algebra: p-max " + std::to_string(pmax) + " exceeds " + std::to_string(limit));
    b.x_key("p");
    for (int a = -pmax; a <= pmax; ++a)
      for (int c = -pmax; c <= pmax; ++c) {
        Json extra{{"p", a}, {"p-prime", c}};
        if (q == "central-term") {
          const cplx v = fs::commutator_central_term(a, c, window, state);
          auto& r = b.add("fock_space", "commutator_central_term", 1e-12, extra);
          r.outputs = {{"value", v}, {"expected", a + c == 0 ? -static_cast<double>(a) : 0.0}};
        } else {
          const cplx v = fs::current_two_point(a, c, window, state);
          auto& r = b.add("fock_space", "current_two_point", 1e-12, extra);
          r.outputs = {{"value", v}};
          if (state.is_zero_temperature())
            r.outputs.push_back({"expected", (a == c && a < 0) ? -static_cast<double>(a) : 0.0});
        }
      }
  } else if (q == "variance-tail") {
    const int pp = as_int(p, "p"), Mp = as_int(p, "M-prime");
    const double v = fs::variance_tail(pp, M, Mp, beta);
    const double bound = fs::variance_tail_bound(pp, M, Mp, beta);
    auto& r = b.add("fock_space", "variance_tail");
    r.outputs = {{"variance", v}, {"bound", bound}, {"within_bound", v <= bound}};
  } else if (q == "double-commutator") {
    const int a = as_int(p, "p"), c = as_int(p, "p-prime"), k = as_int(p, "k");
    auto& r = b.add("fock_space", "double_commutator_norm");
    r.outputs = {{"coefficient", fs::double_commutator_coefficient(a, c, k, window)},
                 {"norm", fs::double_commutator_norm(a, c, k, window)}};
  } else {
    const int a = as_int(p, "p"), c = as_int(p, "p-prime");
    const auto cmp = fs::exact_vs_wick(a, c, window, state);
    auto& r = b.add("fock_space", "exact_vs_wick", 1e-12);
    r.outputs = {{"matrix", cmp.matrix}, {"wick", cmp.wick}, {"difference", std::abs(cmp.matrix - cmp.wick)}};
  }
  return b.take();
}

bz::CorrelatorSpec insertions(const ParamSet& p) {
  const auto charges = p.reals("charges");
  const auto angles = p.reals("angles");
  if (charges.size() != angles.size())
    throw DomainError("correlator: charges and angles must have the same length");
  bz::CorrelatorSpec spec{{}, bz::Cutoff(p.real("eps"))};
  for (std::size_t k = 0; k < charges.size(); ++k) spec.insertions.push_back({charges[k], angles[k]});
  return spec;
}

bz::OscillatorBudget budget(const ParamSet& p) {
  bz::OscillatorBudget bu;
  bu.modes = as_int(p, "modes");
  bu.max_occupation = as_int(p, "max-occupation");
  bu.work_limit = p.real("work-limit");
  return bu;
}

RunResult run_correlator(const ParamSet& p) {
  Builder b("correlator", p);
  const std::string q = p.text("quantity");
  const bz::Cutoff eps(p.real("eps"));
  if (q == "two-point") {
    const cplx v = bz::vertex_two_point(p.real("alpha"), p.real("theta"), p.real("theta-prime"), eps);
    auto& r = b.add("bosonization", "vertex_two_point");
    r.outputs = {{"value", v}, {"magnitude", std::abs(v)}};
  } else if (q == "propagator") {
    auto& r = b.add("bosonization", "propagator");
    r.outputs = {{"value", bz::propagator(p.real("theta") - p.real("theta-prime"), eps)}};
  } else if (q == "n-point") {
    const auto spec = insertions(p);
    const auto v = bz::vertex_n_point(spec);
    auto& r = b.add("bosonization", "vertex_n_point");
    r.outputs = {{"value", v.value}, {"magnitude", std::abs(v.value)}, {"vanishing_order", v.vanishing_order},
                 {"neutral", spec.neutral()}};
  } else if (q == "brute-force") {
    const auto spec = insertions(p);
    const cplx analytic = bz::vertex_n_point(spec).value;
    const cplx brute = bz::brute_force_vertex(spec, budget(p));
    auto& r = b.add("bosonization", "brute_force_vertex", 1e-6);
    r.outputs = {{"analytic", analytic}, {"brute_force", brute},
                 {"relative_error", std::abs(analytic - brute) / std::abs(analytic)}};
  } else {
    const bz::GaussianBump f{p.real("center"), p.real("width"), p.real("amplitude")};
    const auto grid = p.reals("grid");
    const double dev = bz::charge_commutator_check(as_int(p, "nu"), grid, f, eps, budget(p));
    auto& r = b.add("bosonization", "charge_commutator_check");
    r.outputs = {{"deviation", dev}};
  }
  return b.take();
}

RunResult run_anyon(const ParamSet& p) {
  Builder b("anyon", p);
  bz::AnyonSpec spec;
  spec.nu = as_int(p, "nu");
  spec.xs = p.reals("xs");
  spec.ys = p.reals("ys");
  spec.cutoff = bz::Cutoff(p.real("eps"));
  spec.velocity = p.real("velocity");
  const cplx value = bz::anyon_2n_point(spec);
  const auto n = static_cast<long long>(spec.xs.size());
  const cplx det = bz::cauchy_kernel_determinant(spec);
  const bool flip = ((n * (n - 1) / 2) * spec.nu) % 2 != 0;
  const cplx power = (flip ? -1.0 : 1.0) * ipow(det, spec.nu);
  const cplx rescaled = bz::rescaled_vertex_correlator(spec);
  auto& r = b.add("bosonization", "anyon_2n_point", 1e-10);
  r.outputs = {{"correlator", value},
               {"cauchy_power", power},
               {"cauchy_relative_difference", std::abs(value - power) / std::abs(value)},
               {"rescaled_vertex", rescaled},
               {"rescaled_relative_difference", std::abs(rescaled - value) / std::abs(value)}};
  if (spec.xs.size() >= 2 && spec.xs[0] != spec.xs[1])
    r.outputs.push_back({"exchange_phase", bz::exchange_phase(spec.nu, spec)});
  return b.take();
}

RunResult run_laughlin(const ParamSet& p) {
  Builder b("laughlin", p);
  const std::string q = p.text("quantity");
  la::SlaterSpec spec{p.complexes("poles"), as_int(p, "nu"), bz::Cutoff(p.real("eps"))};
  const auto xs = p.reals("xs");
  const LogComplex closed_log = la::laughlin_closed_form_log(spec, xs);
  if (q == "closed-form") {
    auto& r = b.add("laughlin", "laughlin_closed_form");
    r.outputs = {{"value", la::laughlin_closed_form(spec, xs)}, {"log_abs", closed_log.log_abs},
                 {"arg", closed_log.arg}};
  } else if (q == "correlator") {
    la::QuadratureBudget budget;
    budget.options = {p.real("abs-tol"), p.real("rel-tol"), static_cast<std::size_t>(p.integer("max-intervals"))};
    budget.scheme = p.text("scheme") == "nested" ? la::QuadratureScheme::nested : la::QuadratureScheme::factorised;
    const auto w = la::wavefunction_from_correlator(spec, xs, budget);
    const cplx closed = la::laughlin_closed_form(spec, xs);
    auto& r = b.add("laughlin", "wavefunction_from_correlator", budget.options.rel_tol);
    r.outputs = {{"value", w.value},
                 {"closed_form", closed},
                 {"ratio", w.value / closed},
                 {"error_estimate", w.error},
                 {"evaluations", static_cast<long long>(w.evaluations)}};
  } else if (q == "slater") {
    const auto cmp = la::slater_determinant_compare(spec, xs);
    auto& r = b.add("laughlin", "slater_determinant_compare", 1e-10);
    r.outputs = {{"closed_form", cmp.closed_form}, {"determinant", cmp.determinant},
                 {"ratio", cmp.closed_form / cmp.determinant}};
  } else {
    const double beta = p.real("beta");
    const LogComplex ft = la::finite_temperature_wavefunction_log(spec, xs, beta);
    LogComplex rel = ft;
    rel /= closed_log;
    auto& r = b.add("laughlin", "finite_temperature_wavefunction");
    r.outputs = {{"value", la::finite_temperature_wavefunction(spec, xs, beta)},
                 {"log_abs", ft.log_abs},
                 {"arg", ft.arg},
                 {"zero_temperature_ratio", rel.value()}};
  }
  return b.take();
}

}  // namespace

RunResult execute(const std::string& command, const ParamSet& params) {
  const auto t0 = Clock::now();
  RunResult result;
  if (command == "spectrum") result = run_spectrum(params);
  else if (command == "wavefunction") result = run_wavefunction(params);
  else if (command == "density") result = run_density(params);
  else if (command == "dynamics") result = run_dynamics(params);
  else if (command == "current-algebra") result = run_current_algebra(params);
  else if (command == "correlator") result = run_correlator(params);
  else if (command == "anyon") result = run_anyon(params);
  else if (command == "laughlin") result = run_laughlin(params);
  else throw ConfigError("unknown command '" + command + "'");
  result.seconds = seconds_since(t0);
  return result;
}

}  // namespace hall_edge::cli
