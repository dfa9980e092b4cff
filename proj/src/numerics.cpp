#include "hall_edge/numerics.hpp"

#include <algorithm>
#include <array>
#include <queue>
#include <vector>

#include "hall_edge/errors.hpp"

namespace hall_edge {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::config: return "config";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::accuracy: return "accuracy";
    case ErrorKind::resource: return "resource";
    case ErrorKind::internal: return "internal";
  }
  return "internal";
}

LogComplex LogComplex::from(cplx z) {
  if (z == cplx{}) return {};
  return {std::log(std::abs(z)), std::arg(z)};
}

cplx LogComplex::value() const {
  if (is_zero()) return {};
  return std::polar(std::exp(log_abs), arg);
}

Ordering ascending_order(std::span<const double> values) {
  Ordering o;
  o.index.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) o.index[i] = i;
  std::stable_sort(o.index.begin(), o.index.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j)
      if (values[i] > values[j]) ++o.inversions;
  return o;
}

cplx one_minus_exp(cplx w) {
  // e^w - 1 = expm1(x) cos y - 2 sin^2(y/2) + i e^x sin y
  const double x = w.real(), y = w.imag();
  const double s = std::sin(0.5 * y);
  const double re = std::expm1(x) * std::cos(y) - 2.0 * s * s;
  const double im = std::exp(x) * std::sin(y);
  return {-re, -im};
}

cplx log_sinh(cplx u) {
  if (std::abs(u.real()) < 1.0) return std::log(std::sinh(u));
  if (u.real() > 0.0) {
    // sinh u = e^u (1 - e^{-2u}) / 2
    return u + std::log(one_minus_exp(-2.0 * u)) - std::log(2.0);
  }
  // sinh u = -sinh(-u)
  return log_sinh(-u) + cplx{0.0, pi};
}

cplx ipow(cplx z, int k) {
  if (k < 0) return 1.0 / ipow(z, -k);
  cplx result{1.0, 0.0};
  cplx base = z;
  while (k > 0) {
    if (k & 1) result *= base;
    base *= base;
    k >>= 1;
  }
  return result;
}

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd Kronrod nodes kXgk[1], [3], [5], [7].
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
  double a, b;
  cplx value;
  double error;
  bool operator<(const Interval& o) const { return error < o.error; }
};

Interval gauss_kronrod(const ComplexIntegrand& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  cplx kronrod = kWgk[7] * f(c);
  cplx gauss = kWg[3] * (kronrod / kWgk[7]);
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const cplx fsum = f(c - dx) + f(c + dx);
    kronrod += kWgk[j] * fsum;
    if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
  }
  kronrod *= h;
  gauss *= h;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate_adaptive(const ComplexIntegrand& f, double a, double b,
                                    const QuadratureOptions& opts) {
  QuadratureResult res;
  std::priority_queue<Interval> work;
  work.push(gauss_kronrod(f, a, b));
  res.evaluations = 15;
  ComplexCompensatedSum total;
  CompensatedSum total_err;
  total.add(work.top().value);
  total_err.add(work.top().error);

  // Full re-summation in ascending-a order; removes incremental drift.
  auto resum = [&work]() {
    auto copy = work;
    std::vector<Interval> all;
    all.reserve(copy.size());
    while (!copy.empty()) {
      all.push_back(copy.top());
      copy.pop();
    }
    std::sort(all.begin(), all.end(), [](const Interval& x, const Interval& y) { return x.a < y.a; });
    std::pair<ComplexCompensatedSum, CompensatedSum> sums;
    for (const auto& iv : all) {
      sums.first.add(iv.value);
      sums.second.add(iv.error);
    }
    return sums;
  };

  while (true) {
    double target = std::max(opts.abs_tol, opts.rel_tol * std::abs(total.value()));
    if (total_err.value() <= target) {
      auto sums = resum();
      total = sums.first;
      total_err = sums.second;
      target = std::max(opts.abs_tol, opts.rel_tol * std::abs(total.value()));
      if (total_err.value() <= target) {
        res.converged = true;
        break;
      }
    }
    if (work.size() >= opts.max_intervals) break;
    const Interval worst = work.top();
    const double mid = 0.5 * (worst.a + worst.b);
    const double scale = std::max({1.0, std::abs(worst.a), std::abs(worst.b)});
    if (worst.b - worst.a < 64.0 * std::numeric_limits<double>::epsilon() * scale) {
      res.roundoff = true;
      break;
    }
    work.pop();
    const Interval left = gauss_kronrod(f, worst.a, mid);
    const Interval right = gauss_kronrod(f, mid, worst.b);
    res.evaluations += 30;
    total.add(-worst.value);
    total.add(left.value);
    total.add(right.value);
    total_err.add(-worst.error);
    total_err.add(left.error);
    total_err.add(right.error);
    work.push(left);
    work.push(right);
  }
  auto sums = resum();
  res.value = sums.first.value();
  res.error = sums.second.value();
  res.intervals = work.size();
  return res;
}

QuadratureResult integrate_real_line(const ComplexIntegrand& f, double center, double scale,
                                     const QuadratureOptions& opts) {
  if (!(scale > 0.0)) throw DomainError("integrate_real_line: scale must be positive");
  auto mapped = [&](double t) -> cplx {
    const double c = std::cos(t);
    if (c <= 0.0) return {};
    const double y = center + scale * std::tan(t);
    return f(y) * (scale / (c * c));
  };
  return integrate_adaptive(mapped, -0.5 * pi, 0.5 * pi, opts);
}

}  // namespace hall_edge
