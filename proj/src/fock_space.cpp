#include "hall_edge/fock_space.hpp"

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "hall_edge/errors.hpp"

namespace hall_edge::fock_space {

namespace {

using Triplet = Eigen::Triplet<cplx>;
using Basis = std::uint32_t;

constexpr int kMaxModesForMatrices = 25;

Basis dimension(const ModeWindow& w) {
  if (w.size() > kMaxModesForMatrices)
    throw ResourceError("Fock matrices limited to " + std::to_string(kMaxModesForMatrices) +
                        " modes; window has " + std::to_string(w.size()));
  return Basis{1} << w.size();
}

// (-1)^(number of occupied modes below `bit`)
double jw_sign(Basis state, int bit) {
  const Basis below = state & ((Basis{1} << bit) - 1);
  return (std::popcount(below) % 2 == 0) ? 1.0 : -1.0;
}

FockOperator from_triplets(const ModeWindow& w, const std::vector<Triplet>& t) {
  const auto d = static_cast<Eigen::Index>(dimension(w));
  SparseMatrix m(d, d);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return {w, std::move(m)};
}

void require_same_window(const FockOperator& x, const FockOperator& y) {
  if (x.window.M() != y.window.M()) throw DomainError("Fock operators live on different windows");
}

// Matrix of a^*_c a_a with Jordan-Wigner signs, appended scaled by `coef`.
void append_hopping(const ModeWindow& w, int c, int a, double coef, std::vector<Triplet>& out) {
  const Basis d = dimension(w);
  const int bc = w.bit(c), ba = w.bit(a);
  for (Basis s = 0; s < d; ++s) {
    if (!(s & (Basis{1} << ba))) continue;
    const double sa = jw_sign(s, ba);
    const Basis mid = s ^ (Basis{1} << ba);
    if (mid & (Basis{1} << bc)) continue;
    const double sc = jw_sign(mid, bc);
    const Basis out_state = mid | (Basis{1} << bc);
    out.emplace_back(static_cast<int>(out_state), static_cast<int>(s), coef * sa * sc);
  }
}

}  // namespace

ModeWindow::ModeWindow(int M) : M_(M) {
  if (M < 1) throw DomainError("ModeWindow: M must be >= 1");
}

QuasiFreeState QuasiFreeState::kms(double beta) {
  if (!(beta > 0.0)) throw DomainError("QuasiFreeState: beta must be positive");
  return QuasiFreeState(beta);
}

double QuasiFreeState::occupation(int m) const {
  if (m == 0) return 0.5;
  if (beta_ == inf) return m < 0 ? 1.0 : 0.0;
  const double x = beta_ * m;
  if (x > 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

FockOperator FockOperator::adjoint() const {
  SparseMatrix m = matrix.adjoint();
  m.makeCompressed();
  return {window, std::move(m)};
}

FockOperator operator*(const FockOperator& x, const FockOperator& y) {
  require_same_window(x, y);
  SparseMatrix m = x.matrix * y.matrix;
  m.prune(cplx{0.0, 0.0});
  return {x.window, std::move(m)};
}

FockOperator operator+(const FockOperator& x, const FockOperator& y) {
  require_same_window(x, y);
  SparseMatrix m = x.matrix + y.matrix;
  m.prune(cplx{0.0, 0.0});
  return {x.window, std::move(m)};
}

FockOperator operator-(const FockOperator& x, const FockOperator& y) {
  require_same_window(x, y);
  SparseMatrix m = x.matrix - y.matrix;
  m.prune(cplx{0.0, 0.0});
  return {x.window, std::move(m)};
}

FockOperator commutator(const FockOperator& x, const FockOperator& y) { return x * y - y * x; }
FockOperator anticommutator(const FockOperator& x, const FockOperator& y) { return x * y + y * x; }

FockOperator identity(const ModeWindow& window) {
  const auto d = static_cast<Eigen::Index>(dimension(window));
  SparseMatrix m(d, d);
  m.setIdentity();
  return {window, std::move(m)};
}

FockOperator build_mode_operator(ModeKind kind, int m, const ModeWindow& window) {
  if (!window.contains(m))
    throw IndexError("build_mode_operator: mode " + std::to_string(m) + " outside window [-" +
                     std::to_string(window.M()) + ", " + std::to_string(window.M()) + "]");
  const Basis d = dimension(window);
  const int bit = window.bit(m);
  std::vector<Triplet> t;
  t.reserve(d / 2);
  for (Basis s = 0; s < d; ++s) {
    if (!(s & (Basis{1} << bit))) continue;
    // a_m maps s -> s without m; a_m^* is its transpose.
    const Basis lowered = s ^ (Basis{1} << bit);
    const double sign = jw_sign(s, bit);
    if (kind == ModeKind::annihilate)
      t.emplace_back(static_cast<int>(lowered), static_cast<int>(s), sign);
    else
      t.emplace_back(static_cast<int>(s), static_cast<int>(lowered), sign);
  }
  return from_triplets(window, t);
}

FockOperator build_current(int p, const ModeWindow& window, const QuasiFreeState& state) {
  std::vector<Triplet> t;
  const int M = window.M();
  if (std::abs(p) <= 2 * M) {
    double offset = 0.0;
    for (int n = -M; n <= M; ++n) {
      if (!window.contains(n + p)) continue;
      append_hopping(window, n + p, n, 1.0, t);
      if (p == 0) offset += state.occupation(n);
    }
    if (p == 0) {
      const Basis d = dimension(window);
      for (Basis s = 0; s < d; ++s) t.emplace_back(static_cast<int>(s), static_cast<int>(s), -offset);
    }
  }
  FockOperator op = from_triplets(window, t);
  op.matrix.prune(cplx{0.0, 0.0});
  return op;
}

cplx matrix_expectation(const FockOperator& op, const QuasiFreeState& state) {
  const ModeWindow& w = op.window;
  const Basis d = dimension(w);
  ComplexCompensatedSum sum;
  for (Basis s = 0; s < d; ++s) {
    const cplx diag = op.matrix.coeff(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s));
    if (diag == cplx{}) continue;
    double prob = 1.0;
    for (int m = -w.M(); m <= w.M() && prob != 0.0; ++m)
      prob *= (s & (Basis{1} << w.bit(m))) ? state.occupation(m) : state.hole(m);
    if (prob != 0.0) sum.add(prob * diag);
  }
  return sum.value();
}

namespace {

double two_point(int create, int annihilate, const QuasiFreeState& state) {
  return create == annihilate ? state.occupation(create) : 0.0;
}

}  // namespace

cplx wick_expectation(std::span<const Bilinear> product, const QuasiFreeState& state) {
  if (product.empty()) return {1.0, 0.0};
  if (product.size() == 1) {
    const Bilinear& x = product[0];
    return x.normal_ordered ? 0.0 : two_point(x.create, x.annihilate, state);
  }
  if (product.size() == 2) {
    const Bilinear& x = product[0];
    const Bilinear& y = product[1];
    const double gx = two_point(x.create, x.annihilate, state);
    const double gy = two_point(y.create, y.annihilate, state);
    // <a^*_c1 a_a1 a^*_c2 a_a2> = G(c1,a1) G(c2,a2) + <a^*_c1 a_a2> <a_a1 a^*_c2>
    double exchange = 0.0;
    if (x.create == y.annihilate && x.annihilate == y.create)
      exchange = state.occupation(x.create) * state.hole(x.annihilate);
    const double sx = x.normal_ordered ? 1.0 : 0.0;
    const double sy = y.normal_ordered ? 1.0 : 0.0;
    const double disconnected = (1.0 - sx) * (1.0 - sy) * gx * gy;
    return disconnected + exchange;
  }
  throw UnsupportedOrderError("wick_expectation: only products of 1 or 2 bilinears are supported, got " +
                              std::to_string(product.size()));
}

cplx current_two_point(int p, int p_prime, const ModeWindow& window, const QuasiFreeState& state) {
  const int M = window.M();
  if (std::abs(p) > 2 * M || std::abs(p_prime) > 2 * M)
    throw DomainError("current_two_point: |p|, |p'| must not exceed 2M");
  // <:a^*_{n+p} a_n: :a^*_m a_{m+p'}:> vanishes unless m = n and p = p',
  // so one index suffices.
  ComplexCompensatedSum sum;
  for (int n = -M; n <= M; ++n) {
    const int m = n;
    if (!window.contains(n + p) || !window.contains(m + p_prime)) continue;
    const Bilinear prod[2] = {{n + p, n, true}, {m, m + p_prime, true}};
    sum.add(wick_expectation(prod, state));
  }
  return sum.value();
}

cplx commutator_central_term(int p, int p_prime, const ModeWindow& window,
                             const QuasiFreeState& state) {
  const int M = window.M();
  if (std::abs(p) > M || std::abs(p_prime) > M)
    throw DomainError("commutator_central_term: |p|, |p'| must not exceed M");
  ComplexCompensatedSum sum;
  for (int n = -M; n <= M; ++n) {
    const double w = window.weight(n) * window.weight(n + p + p_prime) *
                     (window.weight(n + p_prime) - window.weight(n + p));
    if (w == 0.0) continue;
    const Bilinear term[1] = {{n + p + p_prime, n, false}};
    sum.add(w * wick_expectation(term, state));
  }
  return sum.value();
}

double double_commutator_coefficient(int p, int p_prime, int k, const ModeWindow& window) {
  return window.weight(k) * window.weight(k + p + p_prime) *
         (window.weight(k + p_prime) - window.weight(k + p));
}

double double_commutator_norm(int p, int p_prime, int k, const ModeWindow& window) {
  return std::abs(double_commutator_coefficient(p, p_prime, k, window));
}

namespace {

QuasiFreeState state_for(double beta) {
  if (beta == inf) return QuasiFreeState::zero_temperature();
  return QuasiFreeState::kms(beta);
}

void check_tail_args(int p, int M, int M_prime, double beta) {
  if (M_prime < std::abs(p) || M < M_prime)
    throw DomainError("variance_tail: requires M >= M' >= |p|");
  if (M < 1) throw DomainError("variance_tail: M must be >= 1");
  if (!(beta > 0.0)) throw DomainError("variance_tail: beta must be positive or inf");
}

}  // namespace

double variance_tail(int p, int M, int M_prime, double beta) {
  check_tail_args(p, M, M_prime, beta);
  if (M == M_prime) return 0.0;
  const QuasiFreeState state = state_for(beta);
  auto in_window = [](int K, int a, int b) { return (std::abs(a) <= K && std::abs(b) <= K) ? 1.0 : 0.0; };
  CompensatedSum sum;
  for (int n = -M - std::abs(p); n <= M + std::abs(p); ++n) {
    const double r = in_window(M, n + p, n) - in_window(M_prime, n + p, n);
    if (r == 0.0) continue;
    const Bilinear prod[2] = {{n + p, n, true}, {n, n + p, true}};
    sum.add(r * r * wick_expectation(prod, state).real());
  }
  return sum.value();
}

double variance_tail_bound(int p, int M, int M_prime, double beta) {
  check_tail_args(p, M, M_prime, beta);
  const QuasiFreeState state = state_for(beta);
  CompensatedSum sum;
  for (int n = M_prime - std::abs(p); n <= M - std::abs(p); ++n)
    sum.add(state.hole(n) * state.occupation(n + p));
  return sum.value();
}

BackendComparison exact_vs_wick(int p, int p_prime, const ModeWindow& window,
                                const QuasiFreeState& state) {
  const int M = window.M();
  if (M > kMaxMatrixWindow)
    throw ResourceError("exact_vs_wick: matrix backend limited to M <= " + std::to_string(kMaxMatrixWindow));
  if (std::abs(p) > 2 * M || std::abs(p_prime) > 2 * M)
    throw DomainError("exact_vs_wick: |p|, |p'| must not exceed 2M");

  const FockOperator jp = build_current(p, window, state);
  const FockOperator jq = build_current(p_prime, window, state);
  const cplx from_matrix = matrix_expectation(jp * jq, state);

  ComplexCompensatedSum sum;
  for (int n = -M; n <= M; ++n) {
    if (!window.contains(n + p)) continue;
    for (int m = -M; m <= M; ++m) {
      if (!window.contains(m + p_prime)) continue;
      const Bilinear prod[2] = {{n + p, n, true}, {m + p_prime, m, true}};
      sum.add(wick_expectation(prod, state));
    }
  }
  return {from_matrix, sum.value()};
}

}  // namespace hall_edge::fock_space
