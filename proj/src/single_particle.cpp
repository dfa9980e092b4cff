#include "hall_edge/single_particle.hpp"

#include <cmath>
#include <string>

#include "hall_edge/errors.hpp"

namespace hall_edge::single_particle {

FieldConfig effective_field(double B, double E) {
  if (!(B > 0.0) || !std::isfinite(B)) throw DomainError("effective_field: B must be positive and finite");
  if (!(E >= 0.0) || !std::isfinite(E)) throw DomainError("effective_field: E must be non-negative and finite");
  FieldConfig cfg;
  cfg.B = B;
  cfg.E = E;
  cfg.b = std::hypot(B, 2.0 * std::sqrt(E));
  cfg.omega_c = 0.5 * (cfg.b + B);
  // (b - B)/2 = 2E / (b + B), free of cancellation for small E.
  cfg.omega_h = 2.0 * E / (cfg.b + B);
  cfg.v = cfg.omega_h;
  return cfg;
}

double ground_state_energy(const FieldConfig& cfg) { return 0.5 * cfg.b; }

double spectrum(int n, int m, const FieldConfig& cfg) {
  if (n < 0 || m < 0) throw DomainError("spectrum: quantum numbers must be non-negative");
  return n * cfg.omega_c + m * cfg.omega_h;
}

LogComplex eval_wavefunction_log(int n, int m, const FieldConfig& cfg, double x1, double x2) {
  if (n < 0 || m < 0) throw DomainError("eval_wavefunction: quantum numbers must be non-negative");
  if (!std::isfinite(x1) || !std::isfinite(x2)) throw DomainError("eval_wavefunction: non-finite coordinate");

  const double b = cfg.b;
  const double r2 = x1 * x1 + x2 * x2;
  const double x = 0.5 * b * r2;
  const int lo = std::min(n, m);
  const int order = std::abs(m - n);

  if (order > 0 && r2 == 0.0) return {};

  const double log_norm = -0.5 * (std::log(pi) + std::lgamma(m + 1.0) + std::lgamma(n + 1.0) +
                                  (m + n + 1) * std::log(2.0) + (m + n - 1) * std::log(b));
  double log_abs = log_norm + m * std::log(b) + n * std::log(2.0) + std::lgamma(lo + 1.0);
  bool negative = false;
  double phase = 0.0;
  const double angle = (r2 == 0.0) ? 0.0 : std::atan2(x2, x1);
  if (order > 0) log_abs += 0.5 * order * std::log(r2);
  if (m >= n) {
    negative = (m % 2) != 0;
    phase = order * angle;
  } else {
    log_abs += order * (std::log(b) - std::log(2.0));
    negative = (n % 2) != 0;
    phase = -order * angle;
  }

  const double lag = std::assoc_laguerre(static_cast<unsigned>(lo), static_cast<unsigned>(order), x);
  if (std::isnan(lag)) throw InternalError("eval_wavefunction: Laguerre evaluation produced NaN");
  if (lag == 0.0) return {};
  if (lag < 0.0) negative = !negative;
  log_abs += std::log(std::abs(lag)) - 0.5 * x;
  if (negative) phase += pi;
  return {log_abs, std::remainder(phase, 2.0 * pi)};
}

cplx eval_wavefunction(int n, int m, const FieldConfig& cfg, double x1, double x2) {
  return eval_wavefunction_log(n, m, cfg, x1, x2).value();
}

double lll_density(int m_max, const FieldConfig& cfg, double x1, double x2) {
  if (m_max < 0) throw DomainError("lll_density: m_max must be non-negative");
  const double x = 0.5 * cfg.b * (x1 * x1 + x2 * x2);
  const double log_pref = std::log(cfg.b / (2.0 * pi)) - x;
  const double log_x = std::log(x);
  CompensatedSum sum;
  for (int m = 0; m <= m_max; ++m) {
    const double log_power = (m == 0) ? 0.0 : m * log_x;
    sum.add(std::exp(log_pref + log_power - std::lgamma(m + 1.0)));
  }
  const double result = sum.value();
  if (std::isnan(result)) throw InternalError("lll_density: NaN in accumulation");
  return result;
}

double hamiltonian(const PhasePoint& pt, const FieldConfig& cfg) {
  const double v1 = pt.p1 + 0.5 * cfg.B * pt.x2;
  const double v2 = pt.p2 - 0.5 * cfg.B * pt.x1;
  return 0.5 * (v1 * v1 + v2 * v2) + 0.5 * cfg.E * (pt.x1 * pt.x1 + pt.x2 * pt.x2);
}

ModeAmplitudes to_modes(const PhasePoint& pt, const FieldConfig& cfg) {
  const double b = cfg.b;
  const double q = pt.p1 + 0.5 * b * pt.x2;
  const double p = pt.p2 - 0.5 * b * pt.x1;
  const double qbar = 0.5 * pt.x1 + pt.p2 / b;
  const double pbar = pt.p1 / b - 0.5 * pt.x2;
  return {cplx{q, p} / std::sqrt(2.0 * b), cplx{qbar, pbar} * std::sqrt(0.5 * b)};
}

PhasePoint from_modes(const ModeAmplitudes& modes, const FieldConfig& cfg) {
  const double b = cfg.b;
  const double q = modes.a.real() * std::sqrt(2.0 * b);
  const double p = modes.a.imag() * std::sqrt(2.0 * b);
  const double centre1 = modes.c.real() / std::sqrt(0.5 * b);
  const double centre2 = -modes.c.imag() / std::sqrt(0.5 * b);
  PhasePoint pt;
  pt.x1 = centre1 - p / b;
  pt.x2 = centre2 + q / b;
  pt.p1 = q - 0.5 * b * pt.x2;
  pt.p2 = p + 0.5 * b * pt.x1;
  return pt;
}

namespace {

PhasePoint rhs(const PhasePoint& s, const FieldConfig& cfg) {
  const double v1 = s.p1 + 0.5 * cfg.B * s.x2;
  const double v2 = s.p2 - 0.5 * cfg.B * s.x1;
  return {v1, v2, 0.5 * cfg.B * v2 - cfg.E * s.x1, -0.5 * cfg.B * v1 - cfg.E * s.x2};
}

PhasePoint axpy(const PhasePoint& s, double h, const PhasePoint& d) {
  return {s.x1 + h * d.x1, s.x2 + h * d.x2, s.p1 + h * d.p1, s.p2 + h * d.p2};
}

PhasePoint rk4_step(const PhasePoint& s, double h, const FieldConfig& cfg) {
  const PhasePoint k1 = rhs(s, cfg);
  const PhasePoint k2 = rhs(axpy(s, 0.5 * h, k1), cfg);
  const PhasePoint k3 = rhs(axpy(s, 0.5 * h, k2), cfg);
  const PhasePoint k4 = rhs(axpy(s, h, k3), cfg);
  const double w = h / 6.0;
  return {s.x1 + w * (k1.x1 + 2 * k2.x1 + 2 * k3.x1 + k4.x1),
          s.x2 + w * (k1.x2 + 2 * k2.x2 + 2 * k3.x2 + k4.x2),
          s.p1 + w * (k1.p1 + 2 * k2.p1 + 2 * k3.p1 + k4.p1),
          s.p2 + w * (k1.p2 + 2 * k2.p2 + 2 * k3.p2 + k4.p2)};
}

}  // namespace

PhasePoint classical_trajectory(const PhasePoint& init, const FieldConfig& cfg, double t,
                                Integrator method, const TrajectoryOptions& opts) {
  if (!std::isfinite(init.x1) || !std::isfinite(init.x2) || !std::isfinite(init.p1) ||
      !std::isfinite(init.p2) || !std::isfinite(t))
    throw DomainError("classical_trajectory: non-finite input");

  if (method == Integrator::analytic) {
    ModeAmplitudes modes = to_modes(init, cfg);
    modes.a *= std::polar(1.0, -cfg.omega_c * t);
    modes.c *= std::polar(1.0, -cfg.v * t);
    return from_modes(modes, cfg);
  }

  const double nominal = opts.step > 0.0 ? opts.step : 1e-3 * 2.0 * pi / cfg.omega_c;
  const double duration = std::abs(t);
  const auto steps = static_cast<long long>(std::ceil(duration / nominal - 1e-9));
  if (steps == 0) return init;
  const double h = std::copysign(duration / static_cast<double>(steps), t);

  const double e0 = hamiltonian(init, cfg);
  const double allowed = opts.energy_tolerance * std::max(1.0, std::abs(e0));
  PhasePoint s = init;
  for (long long k = 0; k < steps; ++k) {
    s = rk4_step(s, h, cfg);
    if ((k & 1023) == 1023 || k + 1 == steps) {
      const double drift = std::abs(hamiltonian(s, cfg) - e0);
      if (!(drift <= allowed))
        throw AccuracyError("classical_trajectory: rk4 energy drift " + std::to_string(drift) +
                            " exceeds tolerance " + std::to_string(allowed));
    }
  }
  return s;
}

}  // namespace hall_edge::single_particle
