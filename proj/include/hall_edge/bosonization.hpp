#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hall_edge/numerics.hpp"

// Chiral boson on the circle and its vertex operators.
//
// Oscillator conventions. With c_q = j_{-q}/sqrt(q) and c_q^* = j_q/sqrt(q)
// (q > 0) the current algebra becomes [c_q, c_r^*] = delta_qr and the ground
// state is annihilated by every c_q. The regularised field
// rho(theta) = i sum_{p != 0} e^{-ip theta - eps|p|/2} j_p / p splits as
//
//   rho(theta) = sum_{q>0} e^{-eps q/2}/sqrt(q) (i e^{-iq theta} c_q^* - i e^{iq theta} c_q),
//
// so each vertex operator e^{i alpha rho(theta)} factorises over modes into
// displacements exp(-lambda_q c_q^* + conj(lambda_q) c_q) with
// lambda_q = alpha e^{-eps q/2} e^{-iq theta} / sqrt(q).
namespace hall_edge::bosonization {

class Cutoff {
 public:
  // Throws DomainError unless epsilon > 0.
  explicit Cutoff(double epsilon);
  double epsilon() const { return epsilon_; }

 private:
  double epsilon_;
};

struct Insertion {
  double charge;
  double angle;
};

struct CorrelatorSpec {
  std::vector<Insertion> insertions;  // operator-product order
  Cutoff cutoff;

  double total_charge() const;
  bool neutral() const { return total_charge() == 0.0; }
};

// S(dtheta) = -ln(1 - e^{i dtheta - eps}), principal branch.
cplx propagator(double dtheta, const Cutoff& eps);

// <Psi_alpha(theta) Psi_alpha^*(theta')> = e^{-alpha^2 S(0)} e^{alpha^2 S(theta - theta')}.
cplx vertex_two_point(double alpha, double theta, double theta_prime, const Cutoff& eps);

struct NPointResult {
  cplx value;
  // (sum_r alpha_r)^2 / 2: the eps -> 0 value scales like eps^order.
  double vanishing_order;
};

// exp(-sum_r alpha_r^2 S(0)/2 - sum_{r<s} alpha_r alpha_s S(theta_r - theta_s)).
NPointResult vertex_n_point(const CorrelatorSpec& spec);

struct OscillatorBudget {
  int modes = 100;      // P: oscillator modes q = 1..P
  int max_occupation = 15;  // N_max: per-mode cutoff
  // Cap on P * n_insertions * (N_max+1)^3, the factorised work.
  double work_limit = 5e9;
};

// Vacuum expectation of the ordered product of truncated matrix exponentials,
// evaluated mode by mode. Independent oracle for vertex_n_point.
cplx brute_force_vertex(const CorrelatorSpec& spec, const OscillatorBudget& budget);

struct AnyonSpec {
  int nu = 1;
  std::vector<double> xs;
  std::vector<double> ys;
  Cutoff cutoff{0.1};
  double velocity = 1.0;
};

// prod_{k<l}(x_k-x_l)^nu prod_{k<l}(y_k-y_l)^nu / [(-i)^{n nu} prod_{k,l}(x_k-y_l+i eps)^nu]
cplx anyon_2n_point(const AnyonSpec& spec);

// det[1 / ((-i)(x_k - y_l + i eps))]. For nu = 1,
// anyon_2n_point = (-1)^{n(n-1)/2} * cauchy_kernel_determinant.
cplx cauchy_kernel_determinant(const AnyonSpec& spec);

// Vertex correlator at theta = v x with charges +-sqrt(nu), angular cutoff
// v * eps and field normalisation (v / (v eps))^{nu/2} per insertion. Tends
// to anyon_2n_point as v -> 0.
cplx rescaled_vertex_correlator(const AnyonSpec& spec);

// anyon_2n_point with x_1 and x_2 exchanged, divided by the original.
// Throws DegenerateInputError if x_1 == x_2 or fewer than two x's.
cplx exchange_phase(int nu, const AnyonSpec& spec);

// Periodised Gaussian test function on the circle.
struct GaussianBump {
  double center = 0.0;
  double width = 0.2;
  double amplitude = 1.0;

  double value(double theta) const;
  cplx fourier(int q) const;  // int_{-pi}^{pi} f(theta) e^{-iq theta} d theta
  double mean() const;        // fourier(0) / 2 pi
};

// Smeared charge Q(f) = (1/2pi) int f(theta) rho'(theta) d theta. In the
// limit [Psi_nu(theta), Q(f)] = sqrt(nu) (f(theta) - mean f) Psi_nu(theta):
// rho carries no zero mode, so the compensating charge is spread uniformly.
// Returns the largest deviation over `grid` between the truncated-oscillator
// value <[Psi, Q]>/<Psi> and sqrt(nu)(f - mean f).
double charge_commutator_check(int nu, std::span<const double> grid, const GaussianBump& f,
                               const Cutoff& eps, const OscillatorBudget& budget);

}  // namespace hall_edge::bosonization
