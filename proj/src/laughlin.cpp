#include "hall_edge/laughlin.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "hall_edge/errors.hpp"

namespace hall_edge::laughlin {

namespace {

constexpr cplx I{0.0, 1.0};

void check_arguments(const SlaterSpec& spec, std::span<const double> xs) {
  validate(spec);
  if (xs.size() != spec.poles.size())
    throw DomainError("laughlin: need one position per pole (" + std::to_string(spec.poles.size()) +
                      " poles, " + std::to_string(xs.size()) + " positions)");
  for (double x : xs)
    if (!std::isfinite(x)) throw DomainError("laughlin: non-finite position");
}

// prod_{k>l} (z_k - z_l)
cplx pole_vandermonde(const SlaterSpec& spec) {
  cplx v{1.0, 0.0};
  const auto& z = spec.poles;
  for (std::size_t l = 0; l < z.size(); ++l)
    for (std::size_t k = l + 1; k < z.size(); ++k) v *= z[k] - z[l];
  return v;
}

// Magnitude of prod_{l>j}(x_l - x_j) over sorted x's and whether the
// original order makes it negative.
struct SortedVandermonde {
  Ordering order;
  double magnitude = 1.0;
  bool odd = false;
};

SortedVandermonde sorted_vandermonde(std::span<const double> xs) {
  SortedVandermonde v;
  v.order = ascending_order(xs);
  const auto n = xs.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) v.magnitude *= xs[v.order.index[b]] - xs[v.order.index[a]];
  v.odd = (v.order.inversions % 2) != 0;
  return v;
}

std::string describe(const QuadratureResult& r) {
  std::ostringstream os;
  os.precision(3);
  os << "estimated error " << r.error << ", " << r.intervals << " intervals, " << r.evaluations
     << " evaluations" << (r.roundoff ? ", roundoff detected" : "");
  return os.str();
}

void require_accurate(const QuadratureResult& r, const std::string& what) {
  if (!r.converged || r.roundoff || !std::isfinite(r.value.real()) || !std::isfinite(r.value.imag()))
    throw AccuracyError("wavefunction_from_correlator: " + what + " did not converge (" + describe(r) + ")");
}

struct Window {
  double center;
  double scale;
};

Window integration_window(const SlaterSpec& spec, std::span<const double> xs) {
  CompensatedSum sum;
  for (double x : xs) sum.add(x);
  for (const cplx z : spec.poles) sum.add(z.real());
  const double center = sum.value() / static_cast<double>(xs.size() + spec.poles.size());
  double scale = 1.0;
  for (double x : xs) scale = std::max(scale, std::abs(x - center));
  for (const cplx z : spec.poles) scale = std::max(scale, std::abs(z - center));
  return {center, scale};
}

cplx cross_denominator(std::span<const double> xs, double y, double eps) {
  cplx d{1.0, 0.0};
  for (double x : xs) d *= cplx{x - y, eps};
  return d;
}

CorrelatorWavefunction factorised(const SlaterSpec& spec, std::span<const double> xs,
                                  const QuadratureBudget& budget) {
  const auto n = static_cast<Eigen::Index>(xs.size());
  const double eps = spec.cutoff.epsilon();
  const Window w = integration_window(spec, xs);
  Eigen::MatrixXcd m(n, n);
  Eigen::MatrixXd err(n, n);
  std::size_t evaluations = 0;
  for (Eigen::Index l = 0; l < n; ++l) {
    const cplx z = spec.poles[static_cast<std::size_t>(l)];
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto f = [&](double y) {
        return ipow(cplx{y}, static_cast<int>(j)) / ((y - z) * cross_denominator(xs, y, eps));
      };
      const QuadratureResult r = integrate_real_line(f, w.center, w.scale, budget.options);
      require_accurate(r, "moment y^" + std::to_string(j) + " of pole " + std::to_string(l));
      m(j, l) = r.value;
      err(j, l) = r.error;
      evaluations += r.evaluations;
    }
  }

  const cplx det = m.partialPivLu().determinant();
  // First-order propagation through the cofactors.
  double det_error = 0.0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index l = 0; l < n; ++l) {
      if (n == 1) {
        det_error += err(j, l);
        continue;
      }
      Eigen::MatrixXcd minor(n - 1, n - 1);
      for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
        if (r == j) continue;
        for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
          if (c == l) continue;
          minor(rr, cc++) = m(r, c);
        }
        ++rr;
      }
      det_error += std::abs(minor.determinant()) * err(j, l);
    }

  cplx prefactor{1.0, 0.0};
  for (std::size_t j = 0; j < xs.size(); ++j)
    for (std::size_t i = j + 1; i < xs.size(); ++i) prefactor *= xs[i] - xs[j];
  return {prefactor * det, std::abs(prefactor) * det_error, evaluations};
}

CorrelatorWavefunction nested(const SlaterSpec& spec, std::span<const double> xs,
                              const QuadratureBudget& budget) {
  const auto n = xs.size();
  if (n > 2) throw UnsupportedOrderError("wavefunction_from_correlator: nested scheme supports n <= 2");
  const double eps = spec.cutoff.epsilon();
  const Window w = integration_window(spec, xs);
  const auto& z = spec.poles;

  std::size_t evaluations = 0;
  double inner_rel = 0.0;
  QuadratureResult outer;
  if (n == 1) {
    outer = integrate_real_line(
        [&](double y) { return 1.0 / ((y - z[0]) * cross_denominator(xs, y, eps)); }, w.center, w.scale,
        budget.options);
    require_accurate(outer, "integral");
  } else {
    outer = integrate_real_line(
        [&](double y1) {
          const cplx g1 = 1.0 / ((y1 - z[0]) * cross_denominator(xs, y1, eps));
          const QuadratureResult inner = integrate_real_line(
              [&](double y2) { return (y2 - y1) / ((y2 - z[1]) * cross_denominator(xs, y2, eps)); },
              w.center, w.scale, budget.options);
          require_accurate(inner, "inner integral");
          evaluations += inner.evaluations;
          if (inner.value != 0.0) inner_rel = std::max(inner_rel, inner.error / std::abs(inner.value));
          return g1 * inner.value;
        },
        w.center, w.scale, budget.options);
    require_accurate(outer, "outer integral");
  }
  evaluations += outer.evaluations;

  cplx prefactor{1.0, 0.0};
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j + 1; i < n; ++i) prefactor *= xs[i] - xs[j];
  const double error = std::abs(prefactor) * (outer.error + inner_rel * std::abs(outer.value));
  return {prefactor * outer.value, error, evaluations};
}

// Log of the permutation-independent part of the deformed wave function.
// `log_factor` maps a factor w to log s(w).
template <class LogFactor>
cplx log_core(const SlaterSpec& spec, std::span<const double> xs, const Ordering& order, LogFactor log_factor) {
  const auto n = xs.size();
  const double nu = spec.nu;
  const double eps = spec.cutoff.epsilon();
  cplx acc{0.0, 0.0};
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      acc += nu * log_factor(cplx{xs[order.index[b]] - xs[order.index[a]], 0.0});
  cplx den{0.0, 0.0};
  for (std::size_t a = 0; a < n; ++a) {
    const double x = xs[order.index[a]];
    for (const cplx z : spec.poles) den += log_factor(x - z + I * eps);
  }
  acc -= nu * den;
  const auto& z = spec.poles;
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t k = l + 1; k < n; ++k) acc += nu * std::log(z[k] - z[l]);
  return acc;
}

LogComplex to_log_complex(cplx log_value) {
  return {log_value.real(), std::remainder(log_value.imag(), 2.0 * pi)};
}

}  // namespace

void validate(const SlaterSpec& spec) {
  if (spec.nu < 1) throw DomainError("SlaterSpec: nu must be a positive integer");
  if (spec.poles.empty()) throw DomainError("SlaterSpec: need at least one pole");
  for (const cplx z : spec.poles)
    if (!(z.imag() < 0.0) || !std::isfinite(z.real()))
      throw DomainError("SlaterSpec: poles must satisfy Im z < 0");
  for (std::size_t a = 0; a < spec.poles.size(); ++a)
    for (std::size_t b = a + 1; b < spec.poles.size(); ++b)
      if (spec.poles[a] == spec.poles[b]) throw DegenerateInputError("SlaterSpec: coincident poles");
}

cplx Phi(const SlaterSpec& spec, double x) {
  const double eps = spec.cutoff.epsilon();
  cplx den{1.0, 0.0};
  for (const cplx z : spec.poles) den *= ipow(x - z + I * eps, spec.nu);
  return 1.0 / den;
}

cplx laughlin_closed_form(const SlaterSpec& spec, std::span<const double> xs) {
  check_arguments(spec, xs);
  const SortedVandermonde v = sorted_vandermonde(xs);
  cplx phi_product{1.0, 0.0};
  for (const std::size_t k : v.order.index) phi_product *= Phi(spec, xs[k]);
  const cplx value = ipow(cplx{v.magnitude}, spec.nu) * ipow(pole_vandermonde(spec), spec.nu) * phi_product;
  return (v.odd && spec.nu % 2 != 0) ? -value : value;
}

LogComplex laughlin_closed_form_log(const SlaterSpec& spec, std::span<const double> xs) {
  check_arguments(spec, xs);
  const Ordering order = ascending_order(xs);
  cplx log_value = log_core(spec, xs, order, [](cplx w) { return std::log(w); });
  if (order.inversions % 2 != 0 && spec.nu % 2 != 0) log_value += I * pi;
  return to_log_complex(log_value);
}

CorrelatorWavefunction wavefunction_from_correlator(const SlaterSpec& spec, std::span<const double> xs,
                                                    const QuadratureBudget& budget) {
  check_arguments(spec, xs);
  if (spec.nu != 1) throw DomainError("wavefunction_from_correlator: only nu = 1 is supported");
  if (xs.size() > 3) throw UnsupportedOrderError("wavefunction_from_correlator: n <= 3 only");
  if (budget.scheme == QuadratureScheme::nested) return nested(spec, xs, budget);
  return factorised(spec, xs, budget);
}

SlaterComparison slater_determinant_compare(const SlaterSpec& spec, std::span<const double> xs) {
  check_arguments(spec, xs);
  if (spec.nu != 1) throw DomainError("slater_determinant_compare: only nu = 1 is a Slater determinant");
  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double x = xs[static_cast<std::size_t>(k)];
    const cplx phi = Phi(spec, x);
    for (Eigen::Index j = 0; j < n; ++j) m(j, k) = ipow(cplx{x}, static_cast<int>(j)) * phi;
  }
  return {laughlin_closed_form(spec, xs), m.partialPivLu().determinant()};
}

LogComplex finite_temperature_wavefunction_log(const SlaterSpec& spec, std::span<const double> xs,
                                               double beta) {
  check_arguments(spec, xs);
  if (!(beta > 0.0)) throw DomainError("finite_temperature_wavefunction: beta must be positive");
  if (beta == inf) return laughlin_closed_form_log(spec, xs);
  const Ordering order = ascending_order(xs);
  const double log_scale = std::log(beta / pi);
  cplx log_value = log_core(spec, xs, order, [&](cplx w) { return log_scale + log_sinh(pi * w / beta); });
  if (order.inversions % 2 != 0 && spec.nu % 2 != 0) log_value += I * pi;
  return to_log_complex(log_value);
}

cplx finite_temperature_wavefunction(const SlaterSpec& spec, std::span<const double> xs, double beta) {
  check_arguments(spec, xs);
  if (!(beta > 0.0)) throw DomainError("finite_temperature_wavefunction: beta must be positive");
  if (beta == inf) return laughlin_closed_form(spec, xs);
  const Ordering order = ascending_order(xs);
  const double log_scale = std::log(beta / pi);
  const cplx core = std::exp(log_core(spec, xs, order, [&](cplx w) { return log_scale + log_sinh(pi * w / beta); }));
  return (order.inversions % 2 != 0 && spec.nu % 2 != 0) ? -core : core;
}

}  // namespace hall_edge::laughlin
