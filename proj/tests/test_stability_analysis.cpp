#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/numeric/odeint.hpp>
#include <gtest/gtest.h>

#include "oracles.hpp"
#include "staticmass/errors.hpp"
#include "staticmass/quasilocal_energy.hpp"
#include "staticmass/stability_analysis.hpp"

using namespace staticmass;

namespace {

// int_{r_a}^{r_b} A r^2 / V dr for n = 3 in closed form.
double base_volume_oracle(const ReferenceSpace& space, double r_a, double r_b) {
  const auto antiderivative = [&](double r) {
    if (space.epsilon() == 0) return r * r / 2;
    // eps = 1: (r sqrt(r^2+1) - asinh r) / 2
    return (r * std::sqrt(r * r + 1) - std::asinh(r)) / 2;
  };
  return space.cross_section_volume() * (antiderivative(r_b) - antiderivative(r_a));
}

struct Draw {
  ReferenceSpace space;
  double mu;
  double r_outer;
};

// Kottler-Schwarzschild draws; eps = -1 horizons in [sqrt 2, sqrt 2 e^{1/2}].
Draw draw(std::mt19937_64& rng, int eps, int n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const ReferenceSpace space(eps, n);
  double mu;
  if (eps == -1) {
    const double r0 = kHyperbolicAdmissibleHorizon * std::exp(0.5 * unit(rng));
    mu = 0.5 * (r0 * r0 - 1) * std::pow(r0, n - 2);
  } else {
    mu = std::pow(10.0, -3.0 + 3.0 * unit(rng));
  }
  const double r0 = horizon_radius(space, mu);
  return {space, mu, r0 + 0.3 + 3.0 * unit(rng)};
}

}  // namespace

TEST(StabilityConstants, Preconditions) {
  const auto flat = build_constant_graph(ReferenceSpace(1, 3), 0.5, 2.0, 0.0);
  EXPECT_THROW(stability_constants(flat), PreconditionError);
  const auto graph = build_kottler_schwarzschild_graph(ReferenceSpace(1, 3), 0.2, 2.0);
  StabilityOptions options;
  options.xi = 0.5;
  EXPECT_THROW(stability_constants(graph, options), PreconditionError);
  const auto small = build_kottler_schwarzschild_graph(ReferenceSpace(-1, 3), 0.1, 3.0);
  EXPECT_THROW(stability_constants(small), ConstraintError);
}

TEST(StabilityConstants, ClosedForms) {
  const auto graph = build_kottler_schwarzschild_graph(ReferenceSpace(1, 3), 1.0, 2.0);
  const auto c = stability_constants(graph);
  const double m = 10.0 - 4.0 * std::sqrt(5.0);
  const double area_unit = 4 * std::numbers::pi;
  EXPECT_NEAR(c.mass, m, 1e-12);
  EXPECT_EQ(c.n_eps, 0.5);
  EXPECT_EQ(c.c_eps, 1.0);
  EXPECT_NEAR(c.threshold_area, 8 * area_unit * 4 * m * m, 1e-11);
  EXPECT_NEAR(c.dne, 3 * std::sqrt(3.0) * 2.0 / 2.0, 1e-14);
  EXPECT_NEAR(c.growth_coefficient, 8 * area_unit * m / (3 * std::sqrt(3.0)), 1e-12);
  // Threshold above |Sigma| = 16 pi: the whole graph lies below it.
  EXPECT_DOUBLE_EQ(critical_height(graph, c), graph.max_height());
  EXPECT_THROW(comparison_profile(graph, c), PreconditionError);
}

TEST(CriticalHeight, MatchesThresholdRadiusOracle) {
  for (int eps : {1, 0, -1}) {
    for (int n : {3, 4}) {
      const double mu = eps == -1 ? 2.0 : 0.05;
      const ReferenceSpace space(eps, n);
      SCOPED_TRACE(testing::Message() << "eps " << eps << " n " << n);
      const auto graph = build_kottler_schwarzschild_graph(space, mu, 20.0);
      const auto c = stability_constants(graph);
      const double h_o = critical_height(graph, c);
      ASSERT_GT(h_o, graph.min_height());
      ASSERT_LT(h_o, graph.max_height());
      // Height of the level set of area T by tanh-sinh on the closed-form slope.
      const oracle::KottlerSchwarzschild ks{eps, n, mu};
      const double r_t = std::pow(c.threshold_area / space.cross_section_volume(),
                                  1.0 / (n - 1));
      boost::math::quadrature::tanh_sinh<double> ts;
      const double r0 = graph.r_inner();
      const double expected = ts.integrate(
          [&](double u) { return ks.height_derivative_in_offset(r0, u); }, 0.0,
          std::sqrt(r_t - r0));
      EXPECT_NEAR(h_o, expected, 1e-9 * (1 + expected));
      EXPECT_NEAR(level_area(graph, h_o), c.threshold_area, 1e-8 * c.threshold_area);
    }
  }
}

TEST(VolumeGrowth, PositiveAboveThreshold) {
  const ReferenceSpace space(0, 3);
  const auto graph = build_kottler_schwarzschild_graph(space, 0.5, 4.0);
  const auto c = stability_constants(graph);
  const double r_floor = std::sqrt(2.0 * c.mass / c.c_eps * 2.0 * c.mass / c.c_eps);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    const double r = r_floor + (graph.r_outer() - r_floor) * (1e-6 + unit(rng));
    EXPECT_GT(volume_growth_residual(graph, c, graph.height(std::min(r, graph.r_outer()))),
              0.0);
  }
  // Regular level set below the floor radius 2m/c.
  ASSERT_GT(r_floor, 1.001);
  EXPECT_THROW(volume_growth_residual(graph, c, graph.height(1.001)), PreconditionError);
}

TEST(VolumeGrowth, PositiveOnRandomDraws) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    const auto d = draw(rng, 1 - k % 3, 3 + k % 2);
    const auto graph = build_kottler_schwarzschild_graph(d.space, d.mu, d.r_outer);
    const auto c = stability_constants(graph);
    const double floor_area = d.space.cross_section_volume() *
                              std::pow(2.0 * c.mass / c.c_eps, 1.0 / c.n_eps);
    const double r_floor =
        std::max(graph.r_inner(),
                 std::pow(floor_area / d.space.cross_section_volume(),
                          1.0 / (d.space.dimension() - 1)));
    if (!(r_floor < graph.r_outer())) continue;
    for (int j = 0; j < 10; ++j) {
      const double r = r_floor + (graph.r_outer() - r_floor) * (1e-6 + (1 - 1e-6) * unit(rng));
      EXPECT_GT(volume_growth_residual(graph, c, graph.height(r)), 0.0);
    }
  }
}

// For n_eps = 1/2: h - h_o = 2 D m [sqrt p - 1/sqrt p] from p(h_o) to p(h).
TEST(ComparisonProfile, ClosedFormForHalfExponent) {
  const ReferenceSpace space(0, 3);
  const auto graph = build_kottler_schwarzschild_graph(space, 0.05, 3.0);
  const auto c = stability_constants(graph);
  const auto profile = comparison_profile(graph, c, 50);
  ASSERT_EQ(profile.heights.size(), 50u);
  EXPECT_TRUE(profile.dominated);
  EXPECT_TRUE(profile.p_non_decreasing);
  const double p0 = profile.p.front();
  EXPECT_NEAR(p0, std::sqrt(2.0) * (1 + c.xi) - 1, 1e-12);
  EXPECT_GE(p0, c.xi);
  const auto g = [](double p) { return std::sqrt(p) - 1 / std::sqrt(p); };
  for (std::size_t k = 1; k < profile.p.size(); ++k) {
    const double rise = 2 * c.dne * c.mass * (g(profile.p[k]) - g(p0));
    EXPECT_NEAR(profile.heights[k] - profile.heights.front(), rise, 1e-7 * (1 + rise));
  }
}

TEST(ComparisonProfile, MatchesOdeintForGeneralExponent) {
  const ReferenceSpace space(1, 4);
  const auto graph = build_kottler_schwarzschild_graph(space, 0.01, 2.0);
  const auto c = stability_constants(graph);
  const auto profile = comparison_profile(graph, c, 20);
  EXPECT_TRUE(profile.dominated);
  EXPECT_NEAR(profile.p.front(), std::pow(2.0, c.n_eps) * (1 + c.xi) - 1, 1e-12);

  using namespace boost::numeric::odeint;
  using state = std::vector<double>;
  const double area_unit = space.cross_section_volume();
  auto rhs = [&](const state& y, state& dy, double) {
    const double p = c.c_eps / (2 * c.mass) * std::pow(y[0] / area_unit, c.n_eps) - 1;
    dy[0] = c.growth_coefficient * std::pow(std::max(0.0, p), 1.5);
  };
  state y{c.threshold_area};
  std::vector<double> reference;
  integrate_times(make_dense_output(1e-14, 1e-12, runge_kutta_dopri5<state>()), rhs, y,
                  profile.heights.begin(), profile.heights.end(), 1e-4,
                  [&](const state& x, double) { reference.push_back(x[0]); });
  ASSERT_EQ(reference.size(), profile.y.size());
  for (std::size_t k = 0; k < reference.size(); ++k) {
    EXPECT_NEAR(profile.y[k], reference[k], 1e-7 * reference[k]);
  }
}

TEST(ComparisonProfile, StepHalvingSelfConsistent) {
  for (int eps : {1, 0, -1}) {
    const ReferenceSpace space(eps, 3);
    const auto graph = build_kottler_schwarzschild_graph(space, eps == -1 ? 2.0 : 0.05, 12.0);
    const auto c = stability_constants(graph);
    ASSERT_LT(critical_height(graph, c), graph.max_height());
    const double coarse = comparison_profile(graph, c, 2, 1e-8).y.back();
    const double fine = comparison_profile(graph, c, 2, 5e-9).y.back();
    EXPECT_LT(std::abs(coarse - fine), 1e-6 * fine);
  }
}

TEST(ComparisonProfile, DominatedOnRandomDraws) {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 30; ++k) {
    const auto d = draw(rng, 1 - k % 3, 3 + (k / 3) % 2);
    const auto graph = build_kottler_schwarzschild_graph(d.space, d.mu, d.r_outer);
    const auto c = stability_constants(graph);
    if (!(critical_height(graph, c) < graph.max_height())) continue;
    const auto profile = comparison_profile(graph, c, 40);
    EXPECT_TRUE(profile.dominated) << "draw " << k;
    EXPECT_TRUE(profile.p_non_decreasing) << "draw " << k;
  }
}

class StabilityDraws : public ::testing::TestWithParam<std::tuple<int, int>> {};

TEST_P(StabilityDraws, HeightAndVolumeEstimatesHold) {
  const auto [eps, n] = GetParam();
  std::mt19937_64 rng(1000 + 10 * (eps + 1) + n);
  for (int k = 0; k < 50; ++k) {
    const auto d = draw(rng, eps, n);
    const auto graph = build_kottler_schwarzschild_graph(d.space, d.mu, d.r_outer);
    const auto c = stability_constants(graph);
    const auto hb = height_bound_check(graph, c);
    const auto ve = volume_estimate_check(graph, c);
    EXPECT_TRUE(hb.holds) << "mu " << d.mu << " R " << d.r_outer << " gap " << hb.gap
                          << " rhs " << hb.rhs;
    EXPECT_TRUE(ve.holds) << "mu " << d.mu << " R " << d.r_outer << " lhs " << ve.lhs
                          << " rhs " << ve.rhs;
    EXPECT_EQ(hb.logarithmic, c.n_eps != 0.5);
  }
}

INSTANTIATE_TEST_SUITE_P(AllSpaces, StabilityDraws,
                         ::testing::Combine(::testing::Values(1, 0, -1),
                                            ::testing::Values(3, 4)));

TEST(VolumeEstimate, MassFunctionFamilies) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 12; ++k) {
    const ReferenceSpace space(1 - k % 3, 3 + k % 2);
    const double a = space.epsilon() == -1 ? 2.0 + unit(rng) : 0.01 + 0.3 * unit(rng);
    const double b = 0.1 * a * unit(rng);
    const auto mu = [=](double r) { return a + b * r; };
    const double r0 = horizon_radius(space, mu);
    const GraphManifold graph(
        space, SlopeProfile::mass_function(space, mu, [=](double) { return b; },
                                           r0 + 0.5 + 2 * unit(rng)));
    const auto c = stability_constants(graph);
    EXPECT_TRUE(height_bound_check(graph, c).holds) << k;
    EXPECT_TRUE(volume_estimate_check(graph, c).holds) << k;
  }
}

// Layer-cake form of the B masses: int vol_b(U_h) dh below h_o and
// int (vol_b(U) - vol_b(U_h)) dh above it.
TEST(FlatDecomposition, MassesMatchLayerCakeOracle) {
  for (int eps : {1, 0}) {
    const ReferenceSpace space(eps, 3);
    const auto graph = build_kottler_schwarzschild_graph(space, 0.02, 2.5);
    const auto c = stability_constants(graph);
    const double h_o = critical_height(graph, c);
    ASSERT_GT(h_o, graph.min_height());
    ASSERT_LT(h_o, graph.max_height());
    const double r0 = graph.r_inner();
    const double total = base_volume_oracle(space, r0, graph.r_outer());
    const auto sub = [&](double h) {
      return base_volume_oracle(space, r0, graph.radius_at_height(h));
    };
    using gk = boost::math::quadrature::gauss_kronrod<double, 31>;
    const double b_minus = gk::integrate(sub, graph.min_height(), h_o, 6, 1e-11);
    const double b_plus = gk::integrate([&](double h) { return total - sub(h); }, h_o,
                                        graph.max_height(), 6, 1e-11);
    const auto flat = flat_distance_decomposition(graph, c);
    EXPECT_NEAR(flat.mass_b_minus, b_minus, 1e-8 * (1 + b_minus));
    EXPECT_NEAR(flat.mass_b_plus, b_plus, 1e-8 * (1 + b_plus));
    EXPECT_NEAR(flat.mass_a_minus, (h_o - graph.min_height()) * slice_area(space, r0),
                1e-12);
    EXPECT_NEAR(flat.mass_a_plus,
                (graph.max_height() - h_o) * slice_area(space, graph.r_outer()), 1e-12);
    EXPECT_TRUE(flat.holds);
    EXPECT_GE(flat.proof_bound, flat.flat_bound);

    const auto flat_static = flat_distance_decomposition(graph, c, MassMeasure::Static);
    EXPECT_GT(flat_static.flat_bound, flat.flat_bound);
    EXPECT_TRUE(flat_static.holds);
  }
}

TEST(FlatDecomposition, NoAreaBelowThreshold) {
  // h_o = max f: the above-h_o masses vanish.
  const auto graph = build_kottler_schwarzschild_graph(ReferenceSpace(1, 3), 1.0, 2.0);
  const auto c = stability_constants(graph);
  const auto flat = flat_distance_decomposition(graph, c);
  EXPECT_EQ(flat.mass_a_plus, 0.0);
  EXPECT_NEAR(flat.mass_b_plus, 0.0, 1e-15);
  EXPECT_GT(flat.mass_a_minus, 0.0);
  EXPECT_GT(flat.mass_b_minus, 0.0);
}

TEST(FlatDecomposition, GammaTheory) {
  EXPECT_EQ(gamma_theory(1, 3), 0.5);
  EXPECT_EQ(gamma_theory(0, 5), 0.5);
  EXPECT_EQ(gamma_theory(-1, 4), 0.5);
  EXPECT_EQ(gamma_theory(1, 4), 0.5);
  EXPECT_NEAR(gamma_theory(1, 5), 1.0 / 3.0, 1e-15);
}

TEST(MassMeasure, Parsing) {
  EXPECT_EQ(parse_mass_measure("product"), MassMeasure::Product);
  EXPECT_EQ(parse_mass_measure("static"), MassMeasure::Static);
  EXPECT_THROW(parse_mass_measure("volume"), ConfigError);
  EXPECT_EQ(to_string(MassMeasure::Static), "static");
}

TEST(StabilityReport, JsonHasBothMeasures) {
  const auto graph = build_kottler_schwarzschild_graph(ReferenceSpace(0, 3), 0.05, 3.0);
  const auto report = analyze_stability(graph);
  EXPECT_EQ(report.flat.measure, MassMeasure::Product);
  EXPECT_EQ(report.flat_other.measure, MassMeasure::Static);
  const auto json = to_json(report);
  EXPECT_NE(json.find("\"measure\": \"product\""), std::string::npos);
  EXPECT_NE(json.find("\"alternate_measure\""), std::string::npos);
  EXPECT_NE(json.find("\"measure\": \"static\""), std::string::npos);
  EXPECT_EQ(json, to_json(analyze_stability(graph)));
}

TEST(Sweep, RejectsBadSequences) {
  const ReferenceSpace space(1, 3);
  EXPECT_THROW(convergence_experiment(space, 2.0, {}), ConstraintError);
  EXPECT_THROW(convergence_experiment(space, 2.0, {0.1, 0.2}), ConstraintError);
  EXPECT_THROW(convergence_experiment(space, 2.0, {0.1, -0.1}), ConstraintError);
  EXPECT_THROW(convergence_experiment(space, 0.5, {0.5}), ConstraintError);
  EXPECT_THROW(convergence_experiment(ReferenceSpace(-1, 3), 5.0, {0.2}), ConstraintError);
}

class SweepFixture : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    std::vector<double> mus;
    for (int i = 1; i <= 12; ++i) mus.push_back(std::ldexp(1.0, -i));
    sweep_ = new SweepResult(convergence_experiment(ReferenceSpace(1, 3), 2.0, mus));
  }
  static void TearDownTestSuite() { delete sweep_; }
  static SweepResult* sweep_;
};

SweepResult* SweepFixture::sweep_ = nullptr;

TEST_F(SweepFixture, FrozenValues) {
  const auto& rows = sweep_->rows;
  ASSERT_EQ(rows.size(), 12u);
  // Independent scipy sweep with the factored horizon polynomial, frozen.
  struct Expected {
    double mass, flat_bound, vol_gap;
  };
  const Expected expected[] = {
      {0.51316701949486332, 5.150423624853719, 4.7954715882832062},
      {0.015637226142072264, 15.251037647551222, 0.1120048744241835},
      {0.00024414360530622414, 2.6167682466671476, 0.0016966680391554689},
  };
  const int index[] = {0, 5, 11};
  for (int k = 0; k < 3; ++k) {
    const auto& row = rows[index[k]];
    EXPECT_NEAR(row.mass, expected[k].mass, 1e-9 * expected[k].mass);
    EXPECT_NEAR(row.flat_bound, expected[k].flat_bound, 1e-7 * expected[k].flat_bound);
    EXPECT_NEAR(row.vol_gap, expected[k].vol_gap, 1e-7 * expected[k].vol_gap);
  }
  EXPECT_NEAR(sweep_->gamma_fit, 0.45808244461888414, 1e-6);
  EXPECT_EQ(sweep_->gamma_theory, 0.5);
}

TEST_F(SweepFixture, MassAndVolumeGapDecrease) {
  const auto& rows = sweep_->rows;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LT(rows[i].mass, rows[i - 1].mass);
    EXPECT_LT(rows[i].vol_gap, rows[i - 1].vol_gap);
    // Small mu: m ~ mu.
  }
  EXPECT_NEAR(rows.back().mass / rows.back().mu, 1.0, 1e-3);
  EXPECT_LT(rows.back().mass, 1e-3);
  EXPECT_LT(rows.back().vol_gap, 1e-2);
}

TEST_F(SweepFixture, TranslatedSoCriticalSliceIsZero) {
  for (const auto& row : sweep_->rows) {
    EXPECT_GE(row.height_gap, 0.0);
    EXPECT_GE(row.mass_a_plus, 0.0);
    EXPECT_GE(row.mass_a_minus, 0.0);
    EXPECT_GE(row.mass_b_plus, 0.0);
    EXPECT_GE(row.mass_b_minus, 0.0);
    EXPECT_NEAR(row.flat_bound,
                row.mass_a_plus + row.mass_a_minus + row.mass_b_plus + row.mass_b_minus,
                1e-12 * row.flat_bound);
  }
}

TEST_F(SweepFixture, CsvLayout) {
  const auto csv = to_csv(*sweep_);
  EXPECT_EQ(csv.rfind("i,mu,mass,h_o,height_gap,vol_gap,mass_A_plus,mass_A_minus,"
                      "mass_B_plus,mass_B_minus,flat_bound,gamma_fit,vol_gap_fixed\n",
                      0),
            0u);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  std::vector<std::string> lines;
  std::size_t start = 0;
  for (std::size_t pos; (pos = csv.find('\n', start)) != std::string::npos; start = pos + 1) {
    lines.push_back(csv.substr(start, pos - start));
  }
  ASSERT_EQ(lines.size(), 13u);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto commas = std::count(lines[k].begin(), lines[k].end(), ',');
    EXPECT_EQ(commas, 12);
    // gamma_fit only on the last row.
    const bool empty_gamma = lines[k].find(",,") != std::string::npos;
    EXPECT_EQ(empty_gamma, k + 1 != lines.size());
  }
  EXPECT_EQ(lines[1].substr(0, 6), "1,0.5,");
}
