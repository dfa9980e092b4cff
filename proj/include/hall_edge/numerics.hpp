#pragma once

#include <complex>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace hall_edge {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double inf = std::numeric_limits<double>::infinity();

// Neumaier compensated summation. Results depend only on the order of add()
// calls, so sequential reductions are bit-stable across runs.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class ComplexCompensatedSum {
 public:
  void add(cplx z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  cplx value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_, im_;
};

// Complex number stored as (log|z|, arg z). Zero is log_abs = -inf.
struct LogComplex {
  double log_abs = -inf;
  double arg = 0.0;

  static LogComplex from(cplx z);
  static LogComplex one() { return {0.0, 0.0}; }
  cplx value() const;
  bool is_zero() const { return log_abs == -inf; }

  LogComplex& operator*=(const LogComplex& o) {
    log_abs += o.log_abs;
    arg = std::remainder(arg + o.arg, 2.0 * pi);
    return *this;
  }
  LogComplex& operator/=(const LogComplex& o) {
    log_abs -= o.log_abs;
    arg = std::remainder(arg - o.arg, 2.0 * pi);
    return *this;
  }
  LogComplex pow(int k) const {
    if (k == 0) return one();
    return {log_abs * k, std::remainder(arg * k, 2.0 * pi)};
  }
};

// Indices that sort `values` ascending (stable), plus the inversion count of
// the original order. Products of pairwise differences evaluated in this
// order have a magnitude independent of how the inputs were permuted; the
// parity supplies the sign.
struct Ordering {
  std::vector<std::size_t> index;
  long inversions = 0;
};
Ordering ascending_order(std::span<const double> values);

// 1 - exp(w), accurate when w is close to 0.
cplx one_minus_exp(cplx w);

// log(sinh(u)) without overflow for large |Re u|; principal value up to a
// multiple of 2*pi*i.
cplx log_sinh(cplx u);

// Integer power by repeated squaring; exact sign bookkeeping for integer k.
cplx ipow(cplx z, int k);

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  std::size_t max_intervals = 20000;
};

struct QuadratureResult {
  cplx value;
  double error = 0.0;  // estimated absolute error
  std::size_t evaluations = 0;
  std::size_t intervals = 0;
  bool converged = false;
  bool roundoff = false;  // an interval shrank to machine resolution
};

using ComplexIntegrand = std::function<cplx(double)>;

// Globally adaptive 7/15-point Gauss-Kronrod on [a, b].
QuadratureResult integrate_adaptive(const ComplexIntegrand& f, double a, double b,
                                    const QuadratureOptions& opts = {});

// Integral over the whole real line via y = center + scale*tan(t). The
// integrand must decay at least like 1/y^2.
QuadratureResult integrate_real_line(const ComplexIntegrand& f, double center, double scale,
                                     const QuadratureOptions& opts = {});

}  // namespace hall_edge
