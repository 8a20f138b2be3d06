#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/numeric/odeint.hpp>
#include <gtest/gtest.h>

#include "staticmass/errors.hpp"
#include "staticmass/numerics.hpp"

using namespace staticmass;
using namespace staticmass::numerics;

TEST(Quadrature, PolynomialIsExact) {
  const auto r = integrate([](double x) { return 3 * x * x - 2 * x + 1; }, -1.0, 2.0);
  EXPECT_NEAR(r.value, 9.0 - 3.0 + 3.0, 1e-13);
}

TEST(Quadrature, MatchesTanhSinhOnEndpointSingularity) {
  // Integrable 1/sqrt singularity at the left endpoint.
  const auto fn = [](double x) { return std::cos(x) / std::sqrt(x); };
  boost::math::quadrature::tanh_sinh<double> ts;
  const double expected = ts.integrate(fn, 0.0, 2.0);
  const auto r = integrate(fn, 0.0, 2.0, {1e-12, 1e-12, 4000});
  EXPECT_NEAR(r.value, expected, 1e-9);
}

TEST(Quadrature, SubstitutionRemovesSingularity) {
  // int_0^1 1/sqrt(1-x^2) dx = pi/2 with x = 1 - u^2.
  const auto fn = [](double u) {
    const double x = 1 - u * u;
    return 2 * u / std::sqrt(1 - x * x);
  };
  EXPECT_NEAR(integrate(fn, 0.0, 1.0).value, std::numbers::pi / 2, 1e-12);
}

TEST(Quadrature, PiecewiseAcrossKink) {
  const double breaks[] = {-1.0, 0.3, 2.0};
  const auto r = integrate_piecewise([](double x) { return std::abs(x - 0.3); }, breaks);
  EXPECT_NEAR(r.value, 0.5 * 1.3 * 1.3 + 0.5 * 1.7 * 1.7, 1e-13);
}

TEST(Quadrature, NonIntegrableSingularityThrows) {
  EXPECT_THROW(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, {1e-12, 1e-12, 200}),
               ConvergenceError);
}

TEST(Bisection, FindsRoot) {
  const double r = bisect([](double x) { return x * x * x - 2; }, 0.0, 2.0);
  EXPECT_NEAR(r, std::cbrt(2.0), 1e-13);
}

TEST(Bisection, ExpandingBracket) {
  const double r = bisect_expanding([](double x) { return std::log(x) - 5; }, 1.0, 2.0);
  EXPECT_NEAR(r, std::exp(5.0), 1e-10);
}

TEST(Ode, MatchesOdeintDopri5) {
  // y' = y^{3/4} + sin(t), nonlinear with no closed form.
  const auto rhs = [](double t, double y) { return std::pow(y, 0.75) + std::sin(t); };
  const std::vector<double> times{0.5, 1.0, 2.0, 4.0};
  const auto ours = solve_ode(rhs, 0.0, 1.0, times, {1e-10, 1e-13});

  using namespace boost::numeric::odeint;
  using state = std::vector<double>;
  auto stepper = make_dense_output(1e-13, 1e-12, runge_kutta_dopri5<state>());
  state y{1.0};
  const std::vector<double> grid{0.0, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> reference;
  integrate_times(
      stepper, [&](const state& x, state& dx, double t) { dx[0] = rhs(t, x[0]); }, y,
      grid.begin(), grid.end(), 1e-3,
      [&](const state& x, double t) {
        if (t > 0) reference.push_back(x[0]);
      });
  ASSERT_EQ(reference.size(), ours.size());
  for (std::size_t i = 0; i < ours.size(); ++i) {
    EXPECT_NEAR(ours[i], reference[i], 1e-8 * std::abs(reference[i]));
  }
}

TEST(Ode, ClosedFormLogistic) {
  const auto rhs = [](double, double y) { return y * (1 - y); };
  const std::vector<double> times{1.0, 3.0, 10.0};
  const auto ys = solve_ode(rhs, 0.0, 0.1, times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double exact = 1.0 / (1.0 + 9.0 * std::exp(-times[i]));
    EXPECT_NEAR(ys[i], exact, 1e-8);
  }
}

TEST(Ode, OutputAtStartReturnsInitialValue) {
  const std::vector<double> times{0.0, 1.0};
  const auto ys = solve_ode([](double, double y) { return -y; }, 0.0, 2.0, times);
  EXPECT_EQ(ys[0], 2.0);
  EXPECT_NEAR(ys[1], 2.0 * std::exp(-1.0), 1e-8);
}

TEST(Ode, BlowUpThrows) {
  const std::vector<double> times{2.0};
  EXPECT_THROW(solve_ode([](double, double y) { return y * y; }, 0.0, 1.0, times),
               ConvergenceError);
}

TEST(Fit, RecoversPowerLaw) {
  std::vector<double> x, y;
  for (int i = 1; i <= 8; ++i) {
    x.push_back(std::pow(2.0, -i));
    y.push_back(3.0 * std::pow(x.back(), 0.5));
  }
  const auto fit = fit_power_law(x, y);
  EXPECT_NEAR(fit.slope, 0.5, 1e-12);
  EXPECT_NEAR(fit.intercept, std::log(3.0), 1e-12);
}

TEST(Fit, RejectsNonPositive) {
  const std::vector<double> x{1.0, 0.0}, y{1.0, 1.0};
  EXPECT_THROW(fit_power_law(x, y), DomainError);
}

TEST(Grids, LinspaceAndLogspace) {
  const auto a = linspace(0.0, 1.0, 5);
  ASSERT_EQ(a.size(), 5u);
  EXPECT_EQ(a.front(), 0.0);
  EXPECT_EQ(a.back(), 1.0);
  EXPECT_DOUBLE_EQ(a[2], 0.5);
  const auto b = logspace(1e-3, 1.0, 4);
  EXPECT_NEAR(b[1], 1e-2, 1e-15);
  EXPECT_DOUBLE_EQ(b.back(), 1.0);
}
