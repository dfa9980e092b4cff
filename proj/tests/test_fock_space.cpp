#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "hall_edge/errors.hpp"
#include "hall_edge/fock_space.hpp"
#include "oracles.hpp"

using namespace hall_edge;
using namespace hall_edge::fock_space;

namespace {

double max_abs(const FockOperator& op) {
  double m = 0.0;
  for (int k = 0; k < op.matrix.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(op.matrix, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

FockOperator a(int m, const ModeWindow& w) { return build_mode_operator(ModeKind::annihilate, m, w); }
FockOperator ad(int m, const ModeWindow& w) { return build_mode_operator(ModeKind::create, m, w); }

std::vector<QuasiFreeState> states() {
  return {QuasiFreeState::zero_temperature(), QuasiFreeState::kms(1.0), QuasiFreeState::kms(0.2)};
}

}  // namespace

TEST_CASE("window and state basics") {
  CHECK_THROWS_AS(ModeWindow(0), DomainError);
  const ModeWindow w(3);
  CHECK(w.size() == 7);
  CHECK(w.weight(3) == 1.0);
  CHECK(w.weight(4) == 0.0);
  const auto zero = QuasiFreeState::zero_temperature();
  CHECK(zero.occupation(0) == 0.5);
  CHECK(zero.occupation(-2) == 1.0);
  CHECK(zero.hole(-2) == 0.0);
  const auto kms = QuasiFreeState::kms(0.7);
  CHECK(kms.occupation(3) == doctest::Approx(1.0 / (1.0 + std::exp(2.1))).epsilon(1e-15));
  CHECK(kms.occupation(3) + kms.hole(3) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(QuasiFreeState::kms(0.0), DomainError);
}

TEST_CASE("canonical anticommutation relations") {
  const ModeWindow w(2);
  const FockOperator one = identity(w);
  for (int m = -2; m <= 2; ++m)
    for (int n = -2; n <= 2; ++n) {
      const FockOperator mixed = anticommutator(a(m, w), ad(n, w));
      CHECK(max_abs(m == n ? mixed - one : mixed) == 0.0);
      CHECK(max_abs(anticommutator(a(m, w), a(n, w))) == 0.0);
      CHECK(max_abs(anticommutator(ad(m, w), ad(n, w))) == 0.0);
    }
  CHECK_THROWS_AS(a(3, w), IndexError);
}

TEST_CASE("direct current construction equals the mode-operator sum") {
  for (int M : {2, 3}) {
    const ModeWindow w(M);
    for (const auto& st : states())
      for (int p = -2 * M; p <= 2 * M; ++p) {
        const FockOperator direct = build_current(p, w, st);
        const FockOperator modes = oracle::current_from_modes(p, M, w, st);
        CHECK(max_abs(direct - modes) < 1e-15);
        CHECK(max_abs(direct.adjoint() - build_current(-p, w, st)) < 1e-15);
      }
    CHECK(max_abs(build_current(2 * M + 1, w, QuasiFreeState::zero_temperature())) == 0.0);
  }
}

TEST_CASE("matrix expectation of number operators") {
  const ModeWindow w(3);
  for (const auto& st : states())
    for (int m = -3; m <= 3; ++m) {
      CHECK(matrix_expectation(ad(m, w) * a(m, w), st).real() == doctest::Approx(st.occupation(m)).epsilon(1e-14));
      CHECK(std::abs(matrix_expectation(ad(m, w) * a(m == 3 ? -3 : m + 1, w), st)) == 0.0);
    }
}

TEST_CASE("Wick evaluation agrees with explicit matrices") {
  const ModeWindow w(2);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> mode(-2, 2);
  std::bernoulli_distribution coin(0.5);
  for (const auto& st : states()) {
    const FockOperator one = identity(w);
    for (int trial = 0; trial < 150; ++trial) {
      Bilinear x{mode(rng), mode(rng), coin(rng)}, y{mode(rng), mode(rng), coin(rng)};
      // Force contractible pairs often.
      if (trial % 3 == 0) {
        y.create = x.annihilate;
        y.annihilate = x.create;
      }
      auto op = [&](const Bilinear& b) {
        FockOperator o = ad(b.create, w) * a(b.annihilate, w);
        if (b.normal_ordered) {
          FockOperator shift = one;
          shift.matrix *= matrix_expectation(o, st);
          o = o - shift;
        }
        return o;
      };
      const Bilinear pair[2] = {x, y};
      const cplx exact = matrix_expectation(op(x) * op(y), st);
      CHECK(std::abs(wick_expectation(pair, st) - exact) < 1e-14);
      const Bilinear single[1] = {x};
      CHECK(std::abs(wick_expectation(single, st) - matrix_expectation(op(x), st)) < 1e-14);
    }
  }
  const Bilinear three[3] = {{0, 0}, {1, 1}, {-1, -1}};
  CHECK_THROWS_AS(wick_expectation(three, QuasiFreeState::zero_temperature()), UnsupportedOrderError);
}

TEST_CASE("central term from commutator matrices") {
  const ModeWindow w(3);
  for (const auto& st : states())
    for (int p = -3; p <= 3; ++p)
      for (int q = -3; q <= 3; ++q) {
        const cplx exact = matrix_expectation(commutator(build_current(p, w, st), build_current(q, w, st)), st);
        CHECK(std::abs(commutator_central_term(p, q, w, st) - exact) < 1e-13);
      }
  const auto zero = QuasiFreeState::zero_temperature();
  for (int M : {5, 50, 500})
    for (int p = 1; p <= M; p += (M > 50 ? 37 : 1))
      CHECK(commutator_central_term(p, -p, ModeWindow(M), zero).real() == -static_cast<double>(p));
  CHECK_THROWS_AS(commutator_central_term(4, 0, w, zero), DomainError);
}

TEST_CASE("two-point function") {
  const auto zero = QuasiFreeState::zero_temperature();
  const ModeWindow big(100);
  for (int p = -50; p <= 50; p += 7)
    for (int q = -50; q <= 50; q += 5) {
      if (p == 0 && q == 0) continue;
      const double expected = (p == q && p < 0) ? -static_cast<double>(p) : 0.0;
      CHECK(current_two_point(p, q, big, zero) == cplx{expected, 0.0});
    }
  // The half-filled mode 0 leaves a charge fluctuation <j_0 j_0> = 1/4.
  CHECK(current_two_point(0, 0, big, zero) == cplx{0.25, 0.0});
  // <j_p j_{-p'}> against the matrix backend, and its Hermitian symmetry.
  const ModeWindow w(3);
  for (const auto& st : states())
    for (int p = -4; p <= 4; ++p)
      for (int q = -4; q <= 4; ++q) {
        const auto cmp = exact_vs_wick(p, -q, w, st);
        CHECK(std::abs(current_two_point(p, q, w, st) - cmp.matrix) < 1e-13);
        CHECK(std::abs(current_two_point(p, q, w, st) - std::conj(current_two_point(q, p, w, st))) < 1e-14);
      }
}

TEST_CASE("double commutator equals coefficient times a creation operator") {
  const ModeWindow w(2);
  const auto st = QuasiFreeState::zero_temperature();
  for (int p = -3; p <= 3; ++p)
    for (int q = -3; q <= 3; ++q)
      for (int k = -2; k <= 2; ++k) {
        const FockOperator dc =
            commutator(commutator(build_current(p, w, st), build_current(q, w, st)), ad(k, w));
        const double c = double_commutator_coefficient(p, q, k, w);
        if (w.contains(k + p + q)) {
          FockOperator expected = ad(k + p + q, w);
          expected.matrix *= cplx{c, 0.0};
          CHECK(max_abs(dc - expected) < 1e-14);
        } else {
          CHECK(max_abs(dc) == 0.0);
        }
        CHECK(double_commutator_norm(p, q, k, w) <= 1.0);
      }
  CHECK(double_commutator_norm(1, 2, 0, ModeWindow(3)) == 0.0);
}

TEST_CASE("variance tail against matrices and its bound") {
  const int M = 4;
  const ModeWindow w(M);
  for (const double beta : {inf, 1.0, 0.5})
    for (int p : {-1, 0, 1, 2})
      for (int Mp = std::abs(p); Mp <= 3; ++Mp) {
        if (Mp == 0) continue;
        const auto st = beta == inf ? QuasiFreeState::zero_temperature() : QuasiFreeState::kms(beta);
        const FockOperator d = build_current(p, w, st) - oracle::current_from_modes(p, Mp, w, st);
        const double exact = matrix_expectation(d * d.adjoint(), st).real();
        CHECK(variance_tail(p, M, Mp, beta) == doctest::Approx(exact).epsilon(1e-12));
      }
  // For p = 1 both window edges contribute the same summand s(n), so the
  // exact value is 2 sum_{n=M'}^{M-1} s(n) while the bound sums s(n) once
  // from n = M' - 1. The bound therefore holds for M' >= 2 but not at M' = 1.
  const auto s = [](int n) { return 1.0 / (1.0 + std::exp(-n)) / (1.0 + std::exp(n + 1.0)); };
  for (int Mp = 1; Mp <= 40; Mp += 3)
    for (int M2 = Mp; M2 <= Mp + 30; M2 += 7) {
      double two_edges = 0.0;
      for (int n = Mp; n < M2; ++n) two_edges += 2.0 * s(n);
      CHECK(variance_tail(1, M2, Mp, 1.0) == doctest::Approx(two_edges).epsilon(1e-13));
      if (Mp >= 2) CHECK(variance_tail(1, M2, Mp, 1.0) <= variance_tail_bound(1, M2, Mp, 1.0));
    }
  CHECK(variance_tail(1, 30, 1, 1.0) > variance_tail_bound(1, 30, 1, 1.0));
  CHECK(variance_tail(1, 100, 50, inf) == 0.0);
  CHECK(variance_tail(1, 10, 10, 1.0) == 0.0);
  CHECK_THROWS_AS(variance_tail(2, 10, 1, 1.0), DomainError);
}

TEST_CASE("backend comparison and resource limits") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const int M = 1 + trial % 4;
    std::uniform_int_distribution<int> pd(-2 * M, 2 * M);
    const auto st = states()[trial % 3];
    const auto cmp = exact_vs_wick(pd(rng), pd(rng), ModeWindow(M), st);
    CHECK(std::abs(cmp.matrix - cmp.wick) < 1e-12);
  }
  CHECK_THROWS_AS(exact_vs_wick(1, 1, ModeWindow(7), QuasiFreeState::zero_temperature()), ResourceError);
  CHECK_THROWS_AS(build_current(1, ModeWindow(13), QuasiFreeState::zero_temperature()), ResourceError);
}
