#pragma once

#include <span>
#include <vector>

#include "hall_edge/bosonization.hpp"
#include "hall_edge/numerics.hpp"

// Slater states built from the single-particle functions f_z(x) = 1/(x - z),
// Im z < 0, and their Laughlin-type wave functions
//
//   phi(x_1..x_n) = prod_{l>j}(x_l - x_j)^nu prod_{k>l}(z_k - z_l)^nu prod_k Phi(x_k),
//   Phi(x) = prod_l (x - z_l + i eps)^{-nu}.
//
// Products of x differences are evaluated over the ascending-sorted x's with
// the sign taken from the permutation parity, so exchanging arguments flips
// the sign bit exactly (odd nu) and leaves the magnitude bit-identical.
namespace hall_edge::laughlin {

struct SlaterSpec {
  std::vector<cplx> poles;
  int nu = 1;
  bosonization::Cutoff cutoff{0.1};
};

// Throws DomainError for Im z >= 0 or nu < 1, DegenerateInputError for
// coincident poles.
void validate(const SlaterSpec& spec);

cplx Phi(const SlaterSpec& spec, double x);

// Closed-form phi. xs.size() must equal the number of poles.
cplx laughlin_closed_form(const SlaterSpec& spec, std::span<const double> xs);
LogComplex laughlin_closed_form_log(const SlaterSpec& spec, std::span<const double> xs);

enum class QuadratureScheme {
  // The y-integrand factorises column by column once the y Vandermonde is
  // written as det[y_l^j]; n one-dimensional integrals per column.
  factorised,
  // Direct nested adaptive quadrature over (y_1, ..., y_n); n <= 2 only.
  nested,
};

struct QuadratureBudget {
  QuadratureOptions options{1e-13, 1e-11, 20000};
  QuadratureScheme scheme = QuadratureScheme::factorised;
};

struct CorrelatorWavefunction {
  cplx value;
  double error = 0.0;  // propagated absolute error estimate
  std::size_t evaluations = 0;
};

// prod_{i>j}(x_i - x_j) * int dy_1..dy_n prod_l 1/(y_l - z_l)
//   * prod_{k>l}(y_k - y_l) / prod_{k,l}(x_k - y_l + i eps),
// integrated over the whole real line. nu = 1 and n <= 3 only
// (UnsupportedOrderError / DomainError otherwise). Throws AccuracyError with
// diagnostics when a quadrature fails to reach its tolerance.
CorrelatorWavefunction wavefunction_from_correlator(const SlaterSpec& spec, std::span<const double> xs,
                                                    const QuadratureBudget& budget = {});

struct SlaterComparison {
  cplx closed_form;
  cplx determinant;  // det[x_k^j Phi(x_k)], j = 0..n-1
};

// nu = 1 only; other nu throw DomainError. closed_form / determinant equals
// prod_{k>l}(z_k - z_l) for every configuration.
SlaterComparison slater_determinant_compare(const SlaterSpec& spec, std::span<const double> xs);

// Every factor w among (x_l - x_j) and (x_k - z_l + i eps) is replaced by
// s(w) = (beta/pi) sinh(pi w / beta), which tends to w as beta -> inf. The
// constant pole factor prod(z_k - z_l)^nu is kept as is.
cplx finite_temperature_wavefunction(const SlaterSpec& spec, std::span<const double> xs, double beta);
LogComplex finite_temperature_wavefunction_log(const SlaterSpec& spec, std::span<const double> xs,
                                               double beta);

}  // namespace hall_edge::laughlin
