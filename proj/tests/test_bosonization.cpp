#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "hall_edge/bosonization.hpp"
#include "hall_edge/errors.hpp"
#include "oracles.hpp"

using namespace hall_edge;
using namespace hall_edge::bosonization;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

CorrelatorSpec pair_spec(double alpha, double t1, double t2, double eps) {
  return {{{alpha, t1}, {-alpha, t2}}, Cutoff(eps)};
}

}  // namespace

TEST_CASE("propagator against high-precision values") {
  struct Row {
    double eps, dt, re, im;
  };
  // mpmath at 30 digits.
  const Row rows[] = {
      {0.1, 0.0, 2.3521684610440907561, 0.0},
      {0.1, 0.7, 0.41664724142785796473, 1.0847797963213431437},
      {0.5, -2.3, -0.38877015431919706893, -0.3116241650139055484},
      {0.01, 3.0, -0.68565158717665357465, 0.070441755542997980037},
      {1.0, 0.001, 0.45867468505053505833, 0.00058197637482039860997},
      {0.2, -0.4, 0.90971502591885345621, -0.91382873322481580401},
  };
  for (const auto& r : rows) {
    const cplx s = propagator(r.dt, Cutoff(r.eps));
    CHECK(std::abs(s - cplx{r.re, r.im}) < 1e-15 * std::max(1.0, std::abs(s)));
  }
  CHECK(propagator(0.0, Cutoff(0.01)).real() == doctest::Approx(4.6101).epsilon(1e-4));
  CHECK(std::abs(propagator(pi, Cutoff(1e-9)) + std::log(2.0)) < 1e-9);
  CHECK_THROWS_AS(Cutoff(0.0), DomainError);
  CHECK_THROWS_AS(Cutoff(-1.0), DomainError);
}

TEST_CASE("propagator equals its defining series") {
  for (const double eps : {0.1, 0.3, 1.0})
    for (const double dt : {0.0, 0.4, -1.7, 3.1}) {
      cplx series{0.0, 0.0};
      for (int p = 500; p >= 1; --p) series += std::polar(std::exp(-p * eps) / p, p * dt);
      CHECK(std::abs(propagator(dt, Cutoff(eps)) - series) < 1e-12);
    }
}

TEST_CASE("vertex two-point function") {
  const Cutoff eps(0.01);
  CHECK(vertex_two_point(1.7, 0.3, 0.3, eps) == cplx{1.0, 0.0});
  const double e = std::exp(-0.01);
  CHECK(std::abs(vertex_two_point(1.0, pi, 0.0, eps) - (1.0 - e) / (1.0 + e)) < 1e-14);
  for (const double a : {0.5, 1.0, 1.3}) {
    const cplx two = vertex_two_point(a, 0.9, -0.2, Cutoff(0.1));
    CHECK(rel(vertex_n_point(pair_spec(a, 0.9, -0.2, 0.1)).value, two) < 1e-14);
    CHECK(std::abs(two - std::conj(vertex_two_point(a, -0.2, 0.9, Cutoff(0.1)))) < 1e-14);
  }
}

TEST_CASE("n-point function structure") {
  const CorrelatorSpec one{{{1.0, 0.4}}, Cutoff(0.01)};
  const auto r = vertex_n_point(one);
  CHECK(std::abs(r.value) == doctest::Approx(std::sqrt(1.0 - std::exp(-0.01))).epsilon(1e-14));
  CHECK(std::abs(r.value) == doctest::Approx(0.1).epsilon(1e-2));
  CHECK(r.vanishing_order == 0.5);

  const CorrelatorSpec mixed{{{0.5, 0.0}, {1.0, 1.0}, {-0.7, 2.0}}, Cutoff(0.1)};
  CHECK(vertex_n_point(mixed).vanishing_order == doctest::Approx(0.32).epsilon(1e-14));
  CHECK_FALSE(mixed.neutral());

  // Hermiticity: reversed order with negated charges gives the conjugate.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(-pi, pi), chg(-1.5, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    CorrelatorSpec s{{}, Cutoff(0.1)}, t{{}, Cutoff(0.1)};
    for (int k = 0; k < 4; ++k) s.insertions.push_back({chg(rng), ang(rng)});
    for (auto it = s.insertions.rbegin(); it != s.insertions.rend(); ++it) t.insertions.push_back({-it->charge, it->angle});
    CHECK(rel(vertex_n_point(s).value, std::conj(vertex_n_point(t).value)) < 1e-13);
  }
}

TEST_CASE("oscillator brute force reproduces the truncated series") {
  CHECK(brute_force_vertex({{{0.0, 1.0}, {0.0, 2.0}}, Cutoff(0.1)}, {}) == cplx{1.0, 0.0});

  // One mode: coherent-state closed form.
  for (const double a : {0.5, 1.0, 1.4}) {
    const double dt = 0.8, eps = 0.1;
    const cplx exact = std::exp(a * a * std::exp(-eps) * (std::polar(1.0, dt) - 1.0));
    const cplx bf = brute_force_vertex(pair_spec(a, dt, 0.0, eps), {1, 25, 5e9});
    CHECK(std::abs(bf - exact) < 1e-12);
  }

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ang(-pi, pi);
  for (int trial = 0; trial < 12; ++trial) {
    CorrelatorSpec s{{}, Cutoff(0.1)};
    const std::vector<double> charges =
        trial % 3 == 0 ? std::vector<double>{1.0, -1.0}
                       : (trial % 3 == 1 ? std::vector<double>{1.0, 1.0, -1.0, -1.0} : std::vector<double>{0.8, -0.3, -0.5});
    for (const double c : charges) s.insertions.push_back({c, ang(rng)});
    for (const int P : {1, 5, 30}) {
      const cplx bf = brute_force_vertex(s, {P, 32, 5e9});
      CHECK(rel(bf, oracle::truncated_series_vertex(s, P)) < 1e-10);
    }
  }
  CHECK_THROWS_AS(brute_force_vertex(pair_spec(1.0, 0.0, 1.0, 0.1), {100, 15, 1e3}), ResourceError);
  CHECK_THROWS_AS(brute_force_vertex(pair_spec(1.0, 0.0, 1.0, 0.1), {0, 15, 5e9}), DomainError);
}

TEST_CASE("brute force converges to the analytic value as P grows") {
  const CorrelatorSpec s{{{1.0, 0.3}, {1.0, 1.4}, {-1.0, -0.9}, {-1.0, 2.2}}, Cutoff(0.05)};
  const cplx exact = vertex_n_point(s).value;
  double prev = inf;
  for (const int P : {60, 120, 240, 480}) {
    const double err = rel(brute_force_vertex(s, {P, 30, 5e9}), exact);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-6);
}

TEST_CASE("occupation truncation matters when like charges cluster") {
  // Two +1 and two -1 charges at antipodal pairs push the intermediate
  // coherent amplitude to ~2 in mode q = 1.
  const CorrelatorSpec s{{{1.0, 0.0}, {1.0, 0.0}, {-1.0, pi}, {-1.0, pi}}, Cutoff(0.1)};
  const cplx one_mode = oracle::truncated_series_vertex(s, 1);
  double prev = inf;
  for (const int N : {15, 20, 25}) {
    const double err = rel(brute_force_vertex(s, {1, N, 5e9}), one_mode);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(rel(brute_force_vertex(s, {1, 15, 5e9}), one_mode) > 1e-6);
  CHECK(prev < 1e-8);
  // Increasing N_max at fixed P does not change the answer once converged.
  const cplx a = brute_force_vertex(s, {40, 30, 5e9}), b = brute_force_vertex(s, {40, 40, 5e9});
  CHECK(rel(a, b) < 1e-11);
}

TEST_CASE("Cauchy determinant and power identities") {
  std::mt19937_64 rng(23);
  for (int n = 1; n <= 6; ++n)
    for (int trial = 0; trial < 8; ++trial) {
      AnyonSpec s;
      s.xs = oracle::separated_reals(rng, n, -3.0, 3.0, 0.05);
      s.ys = oracle::separated_reals(rng, n, -3.0, 3.0, 0.05);
      const cplx det = cauchy_kernel_determinant(s);
      const double sign = ((n * (n - 1) / 2) % 2) ? -1.0 : 1.0;
      CHECK(rel(anyon_2n_point(s), sign * det) < 1e-10);

      std::vector<std::vector<cplx>> k(n, std::vector<cplx>(n));
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) k[r][c] = 1.0 / (cplx{0.0, -1.0} * cplx{s.xs[r] - s.ys[c], 0.1});
      CHECK(rel(det, oracle::leibniz_det(k)) < 1e-8);

      if (n <= 4)
        for (int nu = 2; nu <= 5; ++nu) {
          AnyonSpec t = s;
          t.nu = nu;
          CHECK(rel(anyon_2n_point(t), ipow(anyon_2n_point(s), nu)) < 1e-10);
        }
    }
  AnyonSpec single;
  single.xs = {0.0};
  single.ys = {0.0};
  CHECK(std::abs(anyon_2n_point(single) - 10.0) < 1e-13);
  AnyonSpec bad;
  bad.xs = {0.0, 1.0};
  bad.ys = {0.0};
  CHECK_THROWS_AS(anyon_2n_point(bad), DomainError);
}

TEST_CASE("exchange phase is exactly (-1)^nu") {
  std::mt19937_64 rng(29);
  for (int nu = 1; nu <= 6; ++nu)
    for (int trial = 0; trial < 10; ++trial) {
      AnyonSpec s;
      s.xs = oracle::separated_reals(rng, 3, -2.0, 2.0, 0.01);
      s.ys = oracle::separated_reals(rng, 3, -2.0, 2.0, 0.01);
      CHECK(exchange_phase(nu, s) == cplx{nu % 2 ? -1.0 : 1.0, 0.0});
    }
  AnyonSpec same;
  same.xs = {0.5, 0.5};
  same.ys = {0.0, 1.0};
  CHECK_THROWS_AS(exchange_phase(1, same), DegenerateInputError);
}

// Rescaled limit at finite eps: same-sign pairs keep their i eps shift.
cplx rescaled_limit(const AnyonSpec& s) {
  const double e = s.cutoff.epsilon();
  std::vector<std::pair<double, double>> ins;
  for (const double x : s.xs) ins.push_back({1.0, x});
  for (const double y : s.ys) ins.push_back({-1.0, y});
  cplx v{1.0, 0.0};
  for (std::size_t r = 0; r < ins.size(); ++r)
    for (std::size_t t = r + 1; t < ins.size(); ++t)
      v *= std::pow(cplx{0.0, -1.0} * cplx{ins[r].second - ins[t].second, e}, ins[r].first * ins[t].first * s.nu);
  return v;
}

TEST_CASE("rescaled vertex correlator approaches the anyon function") {
  AnyonSpec s;
  s.xs = {-0.7, 0.4};
  s.ys = {0.1, 1.3};
  for (const int nu : {1, 2, 3}) {
    s.nu = nu;
    const cplx target = rescaled_limit(s);
    double prev = inf;
    for (const double v : {1e-1, 1e-2, 1e-3, 1e-4}) {
      s.velocity = v;
      const double err = rel(rescaled_vertex_correlator(s), target);
      CHECK(err < prev);
      CHECK(err < 3.0 * v);
      prev = err;
    }
    // The remaining gap to the anyon function is the i eps shift of like pairs.
    s.cutoff = Cutoff(1e-5);
    s.velocity = 1e-4;
    CHECK(rel(rescaled_vertex_correlator(s), anyon_2n_point(s)) < 1e-3);
    s.cutoff = Cutoff(0.1);
  }
}

TEST_CASE("smeared charge commutator") {
  const std::vector<double> grid{-1.0, -0.2, 0.0, 0.5, 2.0};
  const Cutoff eps(1e-5);
  CHECK(charge_commutator_check(1, grid, {0.0, 0.2, 0.0}, eps, {40, 10, 5e9}) == 0.0);

  // Narrow bump: the mode cutoff P, not eps, limits the accuracy.
  const GaussianBump f{0.3, 0.1, 1.0};
  double prev = inf;
  for (const int P : {20, 40, 80}) {
    const double d = charge_commutator_check(1, grid, f, eps, {P, 30, 5e9});
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 1e-4);
  const double d1 = charge_commutator_check(1, grid, f, eps, {20, 30, 5e9});
  const double d4 = charge_commutator_check(4, grid, f, eps, {20, 30, 5e9});
  CHECK(d1 / d4 == doctest::Approx(0.5).epsilon(0.02));
  CHECK_THROWS_AS(charge_commutator_check(0, grid, f, eps, {20, 10, 5e9}), DomainError);
}
