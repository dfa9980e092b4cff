#pragma once

#include <Eigen/SparseCore>
#include <span>

#include "hall_edge/numerics.hpp"

// Truncated fermionic mode algebra on the window {-M, ..., M}.
//
// Two evaluation backends share one set of conventions:
//   * the matrix backend realises a_m, a_m^* as sparse matrices on the
//     2^(2M+1)-dimensional occupation basis (Jordan-Wigner, modes ordered
//     -M < ... < M, mode m stored in bit m + M of the basis index);
//   * the Wick backend evaluates expectations in quasi-free states directly
//     from the occupation function and never builds a Fock matrix.
//
// Window weights are sharp: a mode belongs to the window iff |m| <= M. The
// half-weight Theta(0) = 1/2 enters only through the occupation of mode 0.
namespace hall_edge::fock_space {

class ModeWindow {
 public:
  explicit ModeWindow(int M);
  int M() const { return M_; }
  int size() const { return 2 * M_ + 1; }
  bool contains(int m) const { return m >= -M_ && m <= M_; }
  // Sharp indicator Theta(M - |m|) of the window.
  double weight(int m) const { return contains(m) ? 1.0 : 0.0; }
  int bit(int m) const { return m + M_; }

 private:
  int M_;
};

// Gauge-invariant quasi-free state <a_m^* a_n> = delta_mn occupation(m).
// Zero temperature: occupation(m) = Theta(-m), Theta(0) = 1/2.
// KMS at inverse temperature beta: occupation(m) = 1 / (1 + e^{beta m}).
class QuasiFreeState {
 public:
  static QuasiFreeState zero_temperature() { return QuasiFreeState(inf); }
  static QuasiFreeState kms(double beta);

  double beta() const { return beta_; }
  bool is_zero_temperature() const { return beta_ == inf; }
  double occupation(int m) const;
  // 1 - occupation(m), computed without cancellation.
  double hole(int m) const { return occupation(-m); }

 private:
  explicit QuasiFreeState(double beta) : beta_(beta) {}
  double beta_;
};

using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

struct FockOperator {
  ModeWindow window;
  SparseMatrix matrix;

  int dim() const { return static_cast<int>(matrix.rows()); }
  FockOperator adjoint() const;
};

FockOperator operator*(const FockOperator& x, const FockOperator& y);
FockOperator operator+(const FockOperator& x, const FockOperator& y);
FockOperator operator-(const FockOperator& x, const FockOperator& y);
FockOperator commutator(const FockOperator& x, const FockOperator& y);
FockOperator anticommutator(const FockOperator& x, const FockOperator& y);
FockOperator identity(const ModeWindow& window);

enum class ModeKind { annihilate, create };

// Throws IndexError if m lies outside the window.
FockOperator build_mode_operator(ModeKind kind, int m, const ModeWindow& window);

// j_{p,M} = sum_n (a^*_{n+p} a_n - delta_{p0} occupation(n)) over |n|, |n+p| <= M.
// |p| > 2M yields the zero operator.
FockOperator build_current(int p, const ModeWindow& window, const QuasiFreeState& state);

// Expectation Tr(rho X) in the quasi-free state; rho is the product density
// matrix, which at zero temperature is the equal mixture of the two Slater
// states with mode 0 empty and filled.
cplx matrix_expectation(const FockOperator& op, const QuasiFreeState& state);

// a^*_create a_annihilate, optionally normal ordered (:X: = X - <X>).
struct Bilinear {
  int create;
  int annihilate;
  bool normal_ordered = false;
};

// Wick evaluation of <X_1 ... X_k> for k = 1 or 2 bilinears (two- and
// four-point functions). Longer products throw UnsupportedOrderError.
cplx wick_expectation(std::span<const Bilinear> product, const QuasiFreeState& state);

// <j_{p,M} j_{-p',M}> via Wick contractions. Requires |p|, |p'| <= 2M.
cplx current_two_point(int p, int p_prime, const ModeWindow& window, const QuasiFreeState& state);

// <[j_{p,M}, j_{p',M}]> summed from the explicit commutator
//   sum_n a^*_{n+p+p'} a_n W(n) W(n+p+p') [W(n+p') - W(n+p)].
// Requires |p|, |p'| <= M.
cplx commutator_central_term(int p, int p_prime, const ModeWindow& window,
                             const QuasiFreeState& state);

// || [[j_{p,M}, j_{p',M}], a_k^*] ||. The double commutator equals
// coefficient * a^*_{k+p+p'}, so the norm is |coefficient|.
double double_commutator_coefficient(int p, int p_prime, int k, const ModeWindow& window);
double double_commutator_norm(int p, int p_prime, int k, const ModeWindow& window);

// <D D^*> with D = j_{p,M} - j_{p,M'} in the KMS state at beta (inf allowed),
// i.e. the squared norm of D^* applied to the thermal vector. Requires
// M >= M' >= |p|.
double variance_tail(int p, int M, int M_prime, double beta);

// sum_{n=M'-|p|}^{M-|p|} 1/(1+e^{-beta n}) * 1/(1+e^{beta(n+p)})
double variance_tail_bound(int p, int M, int M_prime, double beta);

struct BackendComparison {
  cplx matrix;
  cplx wick;
};

inline constexpr int kMaxMatrixWindow = 6;

// <j_{p,M} j_{p',M}> from explicit sparse matrices and from Wick sums.
// Throws ResourceError for M > kMaxMatrixWindow.
BackendComparison exact_vs_wick(int p, int p_prime, const ModeWindow& window,
                                const QuasiFreeState& state);

}  // namespace hall_edge::fock_space
