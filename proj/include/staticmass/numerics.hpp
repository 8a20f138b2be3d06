#pragma once

// Small numerical toolbox shared by the geometry modules: adaptive
// Gauss-Kronrod quadrature, bracketing root finders, an embedded
// Dormand-Prince integrator for scalar ODEs and a least-squares line fit.

#include <functional>
#include <span>
#include <vector>

namespace staticmass::numerics {

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_intervals = 2000;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature on [a, b]. The
/// integrand is never evaluated at the endpoints, so integrable endpoint
/// singularities that have been regularised by a substitution are fine.
/// Throws ConvergenceError if the interval budget is exhausted before the
/// tolerance is met and the estimate is still far from it.
QuadratureResult integrate(const std::function<double(double)>& fn, double a,
                           double b, const QuadratureOptions& opts = {});

/// Integrates across the given interior break points (kinks, jumps) so that
/// each piece is smooth.
QuadratureResult integrate_piecewise(const std::function<double(double)>& fn,
                                     std::span<const double> breaks,
                                     const QuadratureOptions& opts = {});

/// Bisection for a sign change of fn on [lo, hi]. Stops once the bracket is
/// narrower than x_tol.
double bisect(const std::function<double(double)>& fn, double lo, double hi,
              double x_tol = 1e-14, int max_iter = 400);

/// Finds a bracket by expanding hi geometrically, then bisects.
double bisect_expanding(const std::function<double(double)>& fn, double lo,
                        double hi, double x_tol = 1e-14);

struct OdeOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  double initial_step = 0.0;  // 0 picks a step from the interval length
  long max_steps = 1'000'000;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
};

/// Adaptive Dormand-Prince 5(4) for y' = rhs(t, y), y(t0) = y0. Returns y at
/// each requested output time (ascending, all >= t0). Throws
/// ConvergenceError on step-size underflow or a non-finite state.
std::vector<double> solve_ode(const std::function<double(double, double)>& rhs,
                              double t0, double y0,
                              std::span<const double> output_times,
                              const OdeOptions& opts = {},
                              OdeStats* stats = nullptr);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares y = slope * x + intercept.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Least-squares slope of log(y) against log(x).
LineFit fit_power_law(std::span<const double> x, std::span<const double> y);

std::vector<double> linspace(double a, double b, std::size_t count);
std::vector<double> logspace(double a, double b, std::size_t count);

}  // namespace staticmass::numerics
