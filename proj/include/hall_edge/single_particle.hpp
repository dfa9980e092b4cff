#pragma once

#include "hall_edge/numerics.hpp"

// One electron in a uniform magnetic field B plus the radial background
// potential E r^2 / 2 (units e = m = 1).
//
// The Hamiltonian separates into a fast cyclotron oscillator and a slow
// guiding-centre oscillator, both governed by the effective field
// b = sqrt(B^2 + 4E):
//
//   H = (b+B)/2 (n + 1/2) + (b-B)/2 (m + 1/2),
//
// so the ground-state energy is E0 = b/2. spectrum() returns the excitation
// energy E_{n,m} - E0; ground_state_energy() returns E0.
namespace hall_edge::single_particle {

struct FieldConfig {
  double B = 0.0;
  double E = 0.0;
  double b = 0.0;        // sqrt(B^2 + 4E)
  double omega_c = 0.0;  // (b + B)/2, cyclotron frequency
  double omega_h = 0.0;  // (b - B)/2, Hall drift frequency
  double v = 0.0;        // same as omega_h
};

// Throws DomainError unless B > 0 and E >= 0.
FieldConfig effective_field(double B, double E);

double ground_state_energy(const FieldConfig& cfg);

// E_{n,m} - E0 = n (b+B)/2 + m (b-B)/2. Throws DomainError for n < 0 or m < 0.
double spectrum(int n, int m, const FieldConfig& cfg);

// Psi_{n,m}(x1, x2) in log-magnitude/phase form. Uses the closed form
//
//   Psi_{n,m} = N (-b)^m 2^n min(n,m)! w^{|m-n|} L_{min}^{(|m-n|)}(b r^2/2) e^{-b r^2/4}
//
// with w = z for m >= n and w = -b zbar / 2 otherwise (z = x1 + i x2), which
// is what the double-derivative representation reduces to.
LogComplex eval_wavefunction_log(int n, int m, const FieldConfig& cfg, double x1, double x2);

cplx eval_wavefunction(int n, int m, const FieldConfig& cfg, double x1, double x2);

// Sum_{m=0}^{m_max} |Psi_{0,m}(x)|^2. Saturates at b / (2 pi) inside the droplet.
double lll_density(int m_max, const FieldConfig& cfg, double x1, double x2);

struct PhasePoint {
  double x1 = 0.0, x2 = 0.0, p1 = 0.0, p2 = 0.0;
};

// Hamiltonian value at a phase-space point.
double hamiltonian(const PhasePoint& pt, const FieldConfig& cfg);

enum class Integrator { analytic, rk4 };

struct TrajectoryOptions {
  // Fixed rk4 step; <= 0 selects 1e-3 * 2 pi / omega_c.
  double step = 0.0;
  // Relative energy drift allowed before the rk4 run is rejected.
  double energy_tolerance = 1e-8;
};

// Phase point at time t. `analytic` rotates the cyclotron and guiding-centre
// amplitudes by exp(-i omega_c t) and exp(-i v t); `rk4` integrates Hamilton's
// equations. rk4 throws AccuracyError if energy drift exceeds the tolerance.
PhasePoint classical_trajectory(const PhasePoint& init, const FieldConfig& cfg, double t,
                                Integrator method, const TrajectoryOptions& opts = {});

// Cyclotron (a) and guiding-centre (c) amplitudes of a phase point.
struct ModeAmplitudes {
  cplx a, c;
};
ModeAmplitudes to_modes(const PhasePoint& pt, const FieldConfig& cfg);
PhasePoint from_modes(const ModeAmplitudes& modes, const FieldConfig& cfg);

}  // namespace hall_edge::single_particle
