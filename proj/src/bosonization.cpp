#include "hall_edge/bosonization.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "hall_edge/errors.hpp"

namespace hall_edge::bosonization {

namespace {

using Matrix = Eigen::MatrixXcd;

constexpr cplx I{0.0, 1.0};

// Truncated annihilation operator on {|0>, ..., |n_max>}.
Matrix annihilator(int n_max) {
  Matrix c = Matrix::Zero(n_max + 1, n_max + 1);
  for (int k = 0; k < n_max; ++k) c(k, k + 1) = std::sqrt(static_cast<double>(k + 1));
  return c;
}

// exp(-lambda c^* + conj(lambda) c) on the truncated space. The generator is
// anti-Hermitian, so exponentiate through the spectrum of i * generator.
Matrix truncated_displacement(cplx lambda, const Matrix& c) {
  const Matrix gen = -lambda * c.adjoint() + std::conj(lambda) * c;
  const Matrix herm = I * gen;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(herm);
  const Eigen::VectorXcd phases =
      (-I * eig.eigenvalues().cast<cplx>().array()).exp().matrix();
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

void check_budget(const OscillatorBudget& b, std::size_t insertions) {
  if (b.modes < 1) throw DomainError("oscillator budget: modes must be >= 1");
  if (b.max_occupation < 1) throw DomainError("oscillator budget: max_occupation must be >= 1");
  const double dim = b.max_occupation + 1.0;
  const double work = b.modes * static_cast<double>(std::max<std::size_t>(insertions, 1)) * dim * dim * dim;
  if (work > b.work_limit)
    throw ResourceError("oscillator budget: factorised work " + std::to_string(work) +
                        " exceeds limit " + std::to_string(b.work_limit));
}

cplx mode_coupling(double alpha, double theta, int q, double eps) {
  return alpha * std::exp(-0.5 * eps * q) * std::polar(1.0, -q * theta) / std::sqrt(static_cast<double>(q));
}

}  // namespace

Cutoff::Cutoff(double epsilon) : epsilon_(epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("Cutoff: epsilon must be positive and finite");
}

double CorrelatorSpec::total_charge() const {
  CompensatedSum s;
  for (const auto& ins : insertions) s.add(ins.charge);
  return s.value();
}

cplx propagator(double dtheta, const Cutoff& eps) {
  return -std::log(one_minus_exp(cplx{-eps.epsilon(), dtheta}));
}

cplx vertex_two_point(double alpha, double theta, double theta_prime, const Cutoff& eps) {
  if (theta == theta_prime) return {1.0, 0.0};
  const double a2 = alpha * alpha;
  return std::exp(a2 * (propagator(theta - theta_prime, eps) - propagator(0.0, eps)));
}

NPointResult vertex_n_point(const CorrelatorSpec& spec) {
  const auto& ins = spec.insertions;
  const cplx s0 = propagator(0.0, spec.cutoff);
  ComplexCompensatedSum exponent;
  double sum_sq = 0.0;
  for (const auto& x : ins) sum_sq += x.charge * x.charge;
  exponent.add(-0.5 * sum_sq * s0);
  for (std::size_t r = 0; r < ins.size(); ++r)
    for (std::size_t s = r + 1; s < ins.size(); ++s) {
      const double q = ins[r].charge * ins[s].charge;
      if (q == 0.0) continue;
      exponent.add(-q * propagator(ins[r].angle - ins[s].angle, spec.cutoff));
    }
  const double total = spec.total_charge();
  return {std::exp(exponent.value()), 0.5 * total * total};
}

cplx brute_force_vertex(const CorrelatorSpec& spec, const OscillatorBudget& budget) {
  check_budget(budget, spec.insertions.size());
  bool all_zero = true;
  for (const auto& x : spec.insertions) all_zero = all_zero && x.charge == 0.0;
  if (all_zero) return {1.0, 0.0};

  const Matrix c = annihilator(budget.max_occupation);
  const double eps = spec.cutoff.epsilon();
  std::vector<cplx> factors(static_cast<std::size_t>(budget.modes));
  for (int q = 1; q <= budget.modes; ++q) {
    // <0| U_1 U_2 ... U_n |0>, applied right to left on the vacuum.
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(budget.max_occupation + 1);
    v(0) = 1.0;
    for (auto it = spec.insertions.rbegin(); it != spec.insertions.rend(); ++it) {
      if (it->charge == 0.0) continue;
      v = truncated_displacement(mode_coupling(it->charge, it->angle, q, eps), c) * v;
    }
    factors[static_cast<std::size_t>(q - 1)] = v(0);
  }
  cplx result{1.0, 0.0};
  for (const cplx f : factors) result *= f;
  return result;
}

namespace {

void check_anyon(const AnyonSpec& spec) {
  if (spec.nu < 1) throw DomainError("anyon spec: nu must be a positive integer");
  if (spec.xs.size() != spec.ys.size()) throw DomainError("anyon spec: need equal numbers of x and y positions");
  if (spec.xs.empty()) throw DomainError("anyon spec: need at least one pair of positions");
}

}  // namespace

namespace {

// prod_{k<l} (u_k - u_l)^nu, evaluated over ascending-sorted values with the
// sign taken from the number of ordered pairs u_k < u_l.
cplx pair_product(const std::vector<double>& u, int nu, const Ordering& order) {
  const auto n = u.size();
  double magnitude = 1.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) magnitude *= u[order.index[b]] - u[order.index[a]];
  const long pairs = static_cast<long>(n * (n - 1) / 2);
  const bool negative = ((pairs - order.inversions) % 2 != 0) && (nu % 2 != 0);
  const cplx m = ipow(cplx{magnitude}, nu);
  return negative ? -m : m;
}

}  // namespace

cplx anyon_2n_point(const AnyonSpec& spec) {
  check_anyon(spec);
  const auto n = spec.xs.size();
  const int nu = spec.nu;
  const double eps = spec.cutoff.epsilon();
  const Ordering ox = ascending_order(spec.xs);
  const Ordering oy = ascending_order(spec.ys);
  const cplx num = pair_product(spec.xs, nu, ox) * pair_product(spec.ys, nu, oy);

  cplx den{1.0, 0.0};
  for (std::size_t a = 0; a < n; ++a) {
    const double x = spec.xs[ox.index[a]];
    for (std::size_t b = 0; b < n; ++b) den *= ipow(cplx{x - spec.ys[oy.index[b]], eps}, nu);
  }
  den *= ipow(-I, static_cast<int>(n) * nu);
  return num / den;
}

cplx cauchy_kernel_determinant(const AnyonSpec& spec) {
  check_anyon(spec);
  const auto n = static_cast<Eigen::Index>(spec.xs.size());
  const double eps = spec.cutoff.epsilon();
  Matrix k(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index s = 0; s < n; ++s)
      k(r, s) = 1.0 / (-I * cplx{spec.xs[static_cast<std::size_t>(r)] - spec.ys[static_cast<std::size_t>(s)], eps});
  return k.partialPivLu().determinant();
}

cplx rescaled_vertex_correlator(const AnyonSpec& spec) {
  check_anyon(spec);
  if (!(spec.velocity > 0.0)) throw DomainError("rescaled_vertex_correlator: velocity must be positive");
  const double v = spec.velocity;
  const double eps_theta = v * spec.cutoff.epsilon();
  const double alpha = std::sqrt(static_cast<double>(spec.nu));
  CorrelatorSpec cs{{}, Cutoff(eps_theta)};
  for (double x : spec.xs) cs.insertions.push_back({alpha, v * x});
  for (double y : spec.ys) cs.insertions.push_back({-alpha, v * y});
  const double n = static_cast<double>(spec.xs.size());
  // (eps^{-nu/2} v^{nu/2})^{2n} = (v / eps_theta)^{n nu}
  const double log_norm = n * spec.nu * (std::log(v) - std::log(eps_theta));
  return vertex_n_point(cs).value * std::exp(log_norm);
}

cplx exchange_phase(int nu, const AnyonSpec& spec) {
  if (spec.xs.size() < 2) throw DegenerateInputError("exchange_phase: need at least two x positions");
  if (spec.xs[0] == spec.xs[1]) throw DegenerateInputError("exchange_phase: coincident exchange points");
  AnyonSpec base = spec;
  base.nu = nu;
  AnyonSpec swapped = base;
  std::swap(swapped.xs[0], swapped.xs[1]);
  const cplx a = anyon_2n_point(swapped), b = anyon_2n_point(base);
  // Sorted evaluation makes the two values equal up to the sign bit; complex
  // division would otherwise leave a rounding residue in the imaginary part.
  if (a == b) return {1.0, 0.0};
  if (a == -b) return {-1.0, 0.0};
  return a / b;
}

double GaussianBump::value(double theta) const {
  if (amplitude == 0.0) return 0.0;
  double s = 0.0;
  for (int k = -6; k <= 6; ++k) {
    const double d = theta - center + 2.0 * pi * k;
    s += std::exp(-d * d / (2.0 * width * width));
  }
  return amplitude * s;
}

cplx GaussianBump::fourier(int q) const {
  return amplitude * width * std::sqrt(2.0 * pi) * std::exp(-0.5 * q * q * width * width) *
         std::polar(1.0, -q * center);
}

double GaussianBump::mean() const { return fourier(0).real() / (2.0 * pi); }

double charge_commutator_check(int nu, std::span<const double> grid, const GaussianBump& f,
                               const Cutoff& eps, const OscillatorBudget& budget) {
  if (nu < 1) throw DomainError("charge_commutator_check: nu must be a positive integer");
  if (!(f.width > 0.0)) throw DomainError("charge_commutator_check: test function width must be positive");
  check_budget(budget, grid.size());
  const double alpha = std::sqrt(static_cast<double>(nu));
  const Matrix c = annihilator(budget.max_occupation);
  const double e = eps.epsilon();

  double worst = 0.0;
  for (const double theta : grid) {
    ComplexCompensatedSum induced;
    for (int q = 1; q <= budget.modes; ++q) {
      const Matrix u = truncated_displacement(mode_coupling(alpha, theta, q, e), c);
      // Q(f) restricted to mode q: kappa c^* + conj(kappa) c.
      const cplx kappa = std::exp(-0.5 * e * q) * std::sqrt(static_cast<double>(q)) * f.fourier(q) / (2.0 * pi);
      const Matrix k = kappa * c.adjoint() + std::conj(kappa) * c;
      const cplx comm = (u * k - k * u)(0, 0);
      induced.add(comm / u(0, 0));
    }
    const double expected = alpha * (f.value(theta) - f.mean());
    worst = std::max(worst, std::abs(induced.value() - expected));
  }
  return worst;
}

}  // namespace hall_edge::bosonization
