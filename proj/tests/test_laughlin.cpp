#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "hall_edge/errors.hpp"
#include "hall_edge/laughlin.hpp"
#include "oracles.hpp"

using namespace hall_edge;
using namespace hall_edge::laughlin;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

SlaterSpec random_spec(std::mt19937_64& rng, std::size_t n, int nu) {
  return {oracle::lower_half_plane(rng, n, 0.3, 1.5), nu, bosonization::Cutoff(0.1)};
}

// Independent product evaluation of the closed form, in the given order.
cplx naive_closed_form(const SlaterSpec& s, const std::vector<double>& x) {
  const std::size_t n = x.size();
  cplx v{1.0, 0.0};
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = j + 1; l < n; ++l) v *= ipow(cplx{x[l] - x[j]}, s.nu);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t k = l + 1; k < n; ++k) v *= ipow(s.poles[k] - s.poles[l], s.nu);
  for (const double xk : x)
    for (const cplx z : s.poles) v /= ipow(xk - z + cplx{0.0, s.cutoff.epsilon()}, s.nu);
  return v;
}

}  // namespace

TEST_CASE("validation") {
  CHECK_THROWS_AS(validate({{{0.0, 0.5}}, 1, bosonization::Cutoff(0.1)}), DomainError);
  CHECK_THROWS_AS(validate({{{0.0, 0.0}}, 1, bosonization::Cutoff(0.1)}), DomainError);
  CHECK_THROWS_AS(validate({{}, 1, bosonization::Cutoff(0.1)}), DomainError);
  CHECK_THROWS_AS(validate({{{0.0, -1.0}}, 0, bosonization::Cutoff(0.1)}), DomainError);
  CHECK_THROWS_AS(validate({{{0.0, -1.0}, {0.0, -1.0}}, 1, bosonization::Cutoff(0.1)}), DegenerateInputError);
  const SlaterSpec s{{{0.0, -1.0}}, 1, bosonization::Cutoff(0.1)};
  const std::vector<double> two{0.0, 1.0};
  CHECK_THROWS_AS(laughlin_closed_form(s, two), DomainError);
}

TEST_CASE("closed form values") {
  const SlaterSpec s{{{0.2, -0.7}}, 1, bosonization::Cutoff(0.1)};
  const std::vector<double> x{0.5};
  CHECK(rel(laughlin_closed_form(s, x), 1.0 / (0.5 - cplx{0.2, -0.7} + cplx{0.0, 0.1})) < 1e-15);
  std::mt19937_64 rng(2);
  for (int nu : {1, 2, 3})
    for (std::size_t n = 1; n <= 5; ++n) {
      const SlaterSpec t = random_spec(rng, n, nu);
      const auto xs = oracle::separated_reals(rng, n, -2.0, 2.0, 0.1);
      CHECK(rel(laughlin_closed_form(t, xs), naive_closed_form(t, xs)) < 1e-12);
      const LogComplex lg = laughlin_closed_form_log(t, xs);
      CHECK(rel(lg.value(), naive_closed_form(t, xs)) < 1e-12);
    }
}

TEST_CASE("power identity in nu") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    SlaterSpec s = random_spec(rng, 3, 1);
    const auto xs = oracle::separated_reals(rng, 3, -2.0, 2.0, 0.1);
    const cplx one = laughlin_closed_form(s, xs);
    for (int nu : {3, 5}) {
      s.nu = nu;
      CHECK(rel(laughlin_closed_form(s, xs), ipow(one, nu)) < 1e-10);
    }
  }
}

TEST_CASE("exchange symmetry is exact") {
  std::mt19937_64 rng(6);
  for (int nu = 1; nu <= 6; ++nu)
    for (std::size_t n = 2; n <= 5; ++n)
      for (int trial = 0; trial < 5; ++trial) {
        const SlaterSpec s = random_spec(rng, n, nu);
        auto xs = oracle::separated_reals(rng, n, -2.0, 2.0, 0.05);
        const cplx a = laughlin_closed_form(s, xs);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::size_t i = pick(rng), j = pick(rng);
        if (i == j) j = (i + 1) % n;
        std::swap(xs[i], xs[j]);
        const cplx b = laughlin_closed_form(s, xs);
        CHECK(b == (nu % 2 ? -a : a));
        const double beta = 1.0;
        std::swap(xs[i], xs[j]);
        const cplx fa = finite_temperature_wavefunction(s, xs, beta);
        std::swap(xs[i], xs[j]);
        CHECK(finite_temperature_wavefunction(s, xs, beta) == (nu % 2 ? -fa : fa));
      }
}

TEST_CASE("zeros of order exactly nu") {
  std::mt19937_64 rng(8);
  for (int nu : {1, 3, 5})
    for (std::size_t n = 2; n <= 5; ++n) {
      const SlaterSpec s = random_spec(rng, n, nu);
      const auto base = oracle::separated_reals(rng, n, -2.0, 2.0, 0.2);
      const double t = 1e-9;
      // Approach x_2 -> x_1 from the right, from the left, and symmetrically.
      const double x1 = base[0];
      std::vector<cplx> limits;
      for (const auto& [d1, d2] : {std::pair{0.0, 1.0}, std::pair{0.0, -1.0}, std::pair{-0.5, 0.5}}) {
        auto xs = base;
        xs[0] = x1 + d1 * t;
        xs[1] = x1 + d2 * t;
        limits.push_back(laughlin_closed_form(s, xs) / ipow(cplx{xs[1] - xs[0]}, nu));
      }
      for (const cplx l : limits) {
        CHECK(std::abs(l) > 0.0);
        CHECK(std::isfinite(std::abs(l)));
        CHECK(rel(l, limits[0]) < 1e-6);
      }
    }
}

TEST_CASE("correlator integrals reproduce the closed form up to a constant") {
  std::mt19937_64 rng(10);
  for (std::size_t n = 1; n <= 3; ++n) {
    const SlaterSpec s = random_spec(rng, n, 1);
    const cplx expected_ratio = ipow(cplx{0.0, -2.0 * pi}, static_cast<int>(n));
    for (int trial = 0; trial < 4; ++trial) {
      const auto xs = oracle::separated_reals(rng, n, -1.5, 1.5, 0.2);
      const auto w = wavefunction_from_correlator(s, xs);
      CHECK(rel(w.value / laughlin_closed_form(s, xs), expected_ratio) < 1e-6);
      CHECK(w.error < 1e-6 * std::abs(w.value));
      if (n <= 2) {
        const auto nested = wavefunction_from_correlator(s, xs, {{1e-12, 1e-10, 20000}, QuadratureScheme::nested});
        CHECK(rel(nested.value, w.value) < 1e-6);
      }
    }
  }
}

TEST_CASE("correlator integrals refuse unsupported or ill-conditioned input") {
  std::mt19937_64 rng(12);
  const std::vector<double> xs{0.0, 0.7};
  SlaterSpec three = random_spec(rng, 2, 3);
  CHECK_THROWS_AS(wavefunction_from_correlator(three, xs), DomainError);
  const std::vector<double> four{0.0, 0.5, 1.0, 1.5};
  CHECK_THROWS_AS(wavefunction_from_correlator(random_spec(rng, 4, 1), four), UnsupportedOrderError);
  const std::vector<double> triple{0.0, 0.5, 1.0};
  CHECK_THROWS_AS(wavefunction_from_correlator(random_spec(rng, 3, 1), triple,
                                               {{1e-12, 1e-10, 200}, QuadratureScheme::nested}),
                  UnsupportedOrderError);
  // Pole pinched onto the integration contour.
  const SlaterSpec pinched{{{0.3, -1e-13}}, 1, bosonization::Cutoff(0.1)};
  const std::vector<double> one{0.0};
  CHECK_THROWS_AS(wavefunction_from_correlator(pinched, one, {{1e-13, 1e-11, 300}, QuadratureScheme::factorised}),
                  AccuracyError);
}

TEST_CASE("Slater determinant correspondence") {
  std::mt19937_64 rng(14);
  for (std::size_t n = 1; n <= 5; ++n) {
    const SlaterSpec s = random_spec(rng, n, 1);
    cplx pole_factor{1.0, 0.0};
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t k = l + 1; k < n; ++k) pole_factor *= s.poles[k] - s.poles[l];
    for (int trial = 0; trial < 10; ++trial) {
      const auto xs = oracle::separated_reals(rng, n, -2.0, 2.0, 0.1);
      const auto c = slater_determinant_compare(s, xs);
      CHECK(rel(c.closed_form / c.determinant, pole_factor) < 1e-10);
    }
  }
  CHECK_THROWS_AS(slater_determinant_compare(random_spec(rng, 2, 3), std::vector<double>{0.0, 1.0}), DomainError);
}

TEST_CASE("finite temperature deformation") {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const SlaterSpec s = random_spec(rng, n, 1 + 2 * (trial % 3));
    const auto xs = oracle::separated_reals(rng, n, -1.0, 1.0, 0.05);
    const cplx zero_t = laughlin_closed_form(s, xs);
    CHECK(std::abs(finite_temperature_wavefunction(s, xs, 1e6) / zero_t - 1.0) < 1e-6);
    CHECK(finite_temperature_wavefunction(s, xs, inf) == zero_t);
    const LogComplex lg = finite_temperature_wavefunction_log(s, xs, 2.0);
    CHECK(rel(lg.value(), finite_temperature_wavefunction(s, xs, 2.0)) < 1e-12);
  }
  CHECK_THROWS_AS(finite_temperature_wavefunction(random_spec(rng, 1, 1), std::vector<double>{0.0}, 0.0),
                  DomainError);
}

TEST_CASE("finite temperature approach to zero temperature is quadratic and monotone") {
  std::mt19937_64 rng(18);
  const SlaterSpec s = random_spec(rng, 3, 3);
  const std::vector<double> xs{-0.6, 0.1, 0.9};
  double scale = 0.0;
  for (const double x : xs)
    for (const cplx z : s.poles) scale = std::max(scale, std::abs(pi * (x - z)));
  const cplx zero_t = laughlin_closed_form(s, xs);
  std::vector<double> c;
  double prev = inf;
  for (const double beta : {10.0 * scale, 20.0 * scale, 40.0 * scale, 80.0 * scale, 160.0 * scale}) {
    const double d = std::abs(finite_temperature_wavefunction(s, xs, beta) / zero_t - 1.0);
    CHECK(d < prev);
    prev = d;
    c.push_back(d * beta * beta);
  }
  for (const double ck : c) CHECK(ck == doctest::Approx(c.back()).epsilon(0.05));
}

TEST_CASE("large separations compared with the asymptotic form") {
  // For |Re u| large, log|sinh u| = |Re u| - ln 2 up to e^{-2|Re u|}.
  const SlaterSpec s{{{0.0, -0.5}, {0.3, -1.0}}, 3, bosonization::Cutoff(0.1)};
  const double beta = 1.0;
  const std::vector<double> xs{-40.0, 45.0};
  const auto log_abs_s = [&](cplx w) { return std::log(beta / pi) + std::abs(pi * w.real() / beta) - std::log(2.0); };
  double expected = s.nu * log_abs_s(xs[1] - xs[0]) + s.nu * std::log(std::abs(s.poles[1] - s.poles[0]));
  for (const double x : xs)
    for (const cplx z : s.poles) expected -= s.nu * log_abs_s(x - z + cplx{0.0, 0.1});
  const LogComplex got = finite_temperature_wavefunction_log(s, xs, beta);
  CHECK(got.log_abs == doctest::Approx(expected).epsilon(1e-13));
  CHECK(std::isfinite(got.log_abs));
  const std::vector<double> far{-4000.0, 4500.0};
  CHECK(std::isfinite(finite_temperature_wavefunction_log(s, far, beta).log_abs));
}
