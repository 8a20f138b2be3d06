#include "staticmass/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

#include "staticmass/errors.hpp"

namespace staticmass::numerics {

namespace {

// Kronrod abscissae on [0, 1); entries 1, 3, 5 and 7 are the Gauss nodes.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod_15(const std::function<double(double)>& fn, double a,
                         double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_center = fn(center);
  double kronrod = f_center * kKronrodWeights[7];
  double gauss = f_center * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double pair = fn(center - dx) + fn(center + dx);
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& fn, double a,
                           double b, const QuadratureOptions& opts) {
  if (a == b) return {};
  if (b < a) {
    auto r = integrate(fn, b, a, opts);
    r.value = -r.value;
    return r;
  }
  std::priority_queue<Segment> heap;
  heap.push(gauss_kronrod_15(fn, a, b));
  int evaluations = 15;
  double total = heap.top().value;
  double error = heap.top().error;

  auto tolerance = [&] {
    return std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
  };

  while (error > tolerance() && static_cast<int>(heap.size()) < opts.max_intervals) {
    const Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval at machine resolution
    heap.pop();
    const Segment left = gauss_kronrod_15(fn, worst.a, mid);
    const Segment right = gauss_kronrod_15(fn, mid, worst.b);
    evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum to drop the accumulated update round-off.
  double value = 0.0;
  double err = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  if (!std::isfinite(value)) {
    throw ConvergenceError("quadrature produced a non-finite value");
  }
  const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(value));
  if (err > 1e4 * tol && err > 1e-6 * std::abs(value)) {
    throw ConvergenceError("quadrature did not reach tolerance");
  }
  return {value, err, evaluations};
}

QuadratureResult integrate_piecewise(const std::function<double(double)>& fn,
                                     std::span<const double> breaks,
                                     const QuadratureOptions& opts) {
  QuadratureResult sum;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const auto part = integrate(fn, breaks[i], breaks[i + 1], opts);
    sum.value += part.value;
    sum.error_estimate += part.error_estimate;
    sum.evaluations += part.evaluations;
  }
  return sum;
}

double bisect(const std::function<double(double)>& fn, double lo, double hi,
              double x_tol, int max_iter) {
  double f_lo = fn(lo);
  const double f_hi = fn(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    throw ConvergenceError("bisection: no sign change on the bracket");
  }
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= x_tol || mid <= lo || mid >= hi) return mid;
    const double f_mid = fn(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  throw ConvergenceError("bisection: iteration limit reached");
}

double bisect_expanding(const std::function<double(double)>& fn, double lo,
                        double hi, double x_tol) {
  const double f_lo = fn(lo);
  for (int k = 0; k < 200; ++k) {
    const double f_hi = fn(hi);
    if ((f_lo > 0.0) != (f_hi > 0.0) || f_hi == 0.0) {
      return bisect(fn, lo, hi, x_tol);
    }
    hi = lo + 2.0 * (hi - lo);
  }
  throw ConvergenceError("bisection: could not bracket a root");
}

std::vector<double> solve_ode(const std::function<double(double, double)>& rhs,
                              double t0, double y0,
                              std::span<const double> output_times,
                              const OdeOptions& opts, OdeStats* stats) {
  // Dormand-Prince 5(4) tableau.
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                   a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                   a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                   b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  std::vector<double> out;
  out.reserve(output_times.size());
  if (output_times.empty()) return out;

  const double t_end = output_times.back();
  double t = t0;
  double y = y0;
  double h = opts.initial_step > 0.0 ? opts.initial_step
                                     : std::max((t_end - t0) * 1e-3, 1e-12);
  double k1 = rhs(t, y);
  long steps = 0;
  OdeStats local;

  for (double target : output_times) {
    if (target < t0) throw DomainError("solve_ode: output time before t0");
    while (t < target) {
      if (++steps > opts.max_steps) {
        throw ConvergenceError("solve_ode: step limit reached");
      }
      const bool last = t + h >= target;
      const double step = last ? target - t : h;
      const double k2 = rhs(t + c2 * step, y + step * a21 * k1);
      const double k3 = rhs(t + c3 * step, y + step * (a31 * k1 + a32 * k2));
      const double k4 =
          rhs(t + c4 * step, y + step * (a41 * k1 + a42 * k2 + a43 * k3));
      const double k5 = rhs(
          t + c5 * step, y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const double k6 =
          rhs(t + step, y + step * (a61 * k1 + a62 * k2 + a63 * k3 +
                                    a64 * k4 + a65 * k5));
      const double y_new =
          y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const double k7 = rhs(t + step, y_new);
      const double err_abs = std::abs(
          step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7));
      const double scale =
          opts.abs_tol + opts.rel_tol * std::max(std::abs(y), std::abs(y_new));
      const double err = err_abs / scale;

      if (!std::isfinite(y_new) || !std::isfinite(err)) {
        h = 0.25 * step;
        ++local.rejected;
        if (h < 1e-14 * std::max(1.0, std::abs(t))) {
          throw ConvergenceError("solve_ode: non-finite state (blow-up)");
        }
        continue;
      }
      const double factor =
          err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      if (err <= 1.0) {
        t = last ? target : t + step;
        y = y_new;
        k1 = k7;
        ++local.accepted;
        // Keep the controller's step unless the clamp to the target shrank it.
        h = last ? std::max(h, step * factor) : step * factor;
      } else {
        ++local.rejected;
        h = step * factor;
        if (h < 1e-14 * std::max(1.0, std::abs(t))) {
          throw ConvergenceError("solve_ode: step size underflow");
        }
      }
    }
    out.push_back(y);
  }
  if (stats) *stats = local;
  return out;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DomainError("fit_line: need at least two paired samples");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("fit_line: degenerate abscissae");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

LineFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw DomainError("fit_power_law: samples must be positive");
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  return fit_line(lx, ly);
}

std::vector<double> linspace(double a, double b, std::size_t count) {
  std::vector<double> v(count);
  if (count == 1) {
    v[0] = a;
    return v;
  }
  for (std::size_t i = 0; i < count; ++i) {
    v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  if (count > 0) v.back() = b;
  return v;
}

std::vector<double> logspace(double a, double b, std::size_t count) {
  auto v = linspace(std::log(a), std::log(b), count);
  for (auto& x : v) x = std::exp(x);
  if (count > 0) {
    v.front() = a;
    v.back() = b;
  }
  return v;
}

}  // namespace staticmass::numerics
