#include "staticmass/stability_analysis.hpp"

#include <algorithm>
#include <cmath>

#include "staticmass/errors.hpp"
#include "staticmass/json_writer.hpp"
#include "staticmass/numerics.hpp"
#include "staticmass/quasilocal_energy.hpp"

namespace staticmass {

std::string to_string(MassMeasure measure) {
  return measure == MassMeasure::Product ? "product" : "static";
}

MassMeasure parse_mass_measure(const std::string& text) {
  if (text == "product") return MassMeasure::Product;
  if (text == "static") return MassMeasure::Static;
  throw ConfigError("unknown mass measure '" + text + "' (expected product|static)");
}

namespace {

constexpr numerics::QuadratureOptions kMassQuadrature{1e-12, 1e-10, 4000};

double dimension_exponent(const GraphManifold& graph) {
  const int n = graph.space().dimension();
  return static_cast<double>(n) / (n - 1);
}

// Radius of the level set at h_o: the threshold radius clamped to the annulus.
double critical_radius(const GraphManifold& graph, const StabilityConstants& c) {
  const auto& space = graph.space();
  const double r_t = std::pow(c.threshold_area / space.cross_section_volume(),
                              1.0 / (space.dimension() - 1));
  return std::clamp(r_t, graph.r_inner(), graph.r_outer());
}

// 2 C_iso 4^{n/(n-1)} (1+xi)^{n/(n_eps(n-1))} A^{n/(n-1)} (2m/c)^{n/(n_eps(n-1))}
double lower_region_constant(const GraphManifold& graph, const StabilityConstants& c) {
  const double q = dimension_exponent(graph);
  return 2.0 * c.ciso * std::pow(4.0, q) * std::pow(1.0 + c.xi, q / c.n_eps) *
         std::pow(graph.space().cross_section_volume(), q) *
         std::pow(2.0 * c.mass / c.c_eps, q / c.n_eps);
}

double isoperimetric_ratio(const GraphManifold& graph, int samples) {
  const auto& space = graph.space();
  const double q = dimension_exponent(graph);
  const double r0 = graph.r_inner();
  const double inner_area = slice_area(space, r0);
  const double span = graph.r_outer() - r0;
  double best = 0.0;
  double volume = 0.0;
  double r_prev = r0;
  for (int k = 1; k <= samples; ++k) {
    const double t = static_cast<double>(k) / samples;
    const double r = r0 + span * t * t;
    volume += base_volume_between(space, r_prev, r);
    r_prev = r;
    best = std::max(best, volume / std::pow(inner_area + slice_area(space, r), q));
  }
  return best;
}

double y_at_max(const GraphManifold& graph, const StabilityConstants& c, double h_o,
                double rel_tol) {
  const double top = graph.max_height();
  if (!(h_o < top)) return c.threshold_area;
  const auto rhs = [&](double, double y) {
    return c.growth_coefficient * std::pow(std::max(0.0, comparison_p(graph, c, y)), 1.5);
  };
  const double target[] = {top};
  return numerics::solve_ode(rhs, h_o, c.threshold_area, target,
                             {rel_tol, 1e-12 * c.threshold_area})
      .back();
}

}  // namespace

StabilityConstants stability_constants(const GraphManifold& graph,
                                       const StabilityOptions& options) {
  if (!(options.xi >= 1.0)) throw PreconditionError("xi must be >= 1");
  const auto& space = graph.space();
  const int n = space.dimension();
  StabilityConstants c;
  c.xi = options.xi;
  c.mass = brown_york_energy(graph);
  if (!(c.mass > 0.0)) throw PreconditionError("stability analysis needs m > 0");
  const auto penrose = penrose_constants(space, graph.r_inner());
  if (!penrose.admissible) {
    throw ConstraintError("inner radius below the admissible eps = -1 range");
  }
  c.n_eps = penrose.n_eps;
  c.c_eps = penrose.c_eps;
  c.dne = 3.0 * std::sqrt(3.0) * std::pow(2.0, (1.0 - c.n_eps) / c.n_eps) /
          (2.0 * (n - 1) * c.n_eps * std::pow(c.c_eps, 1.0 / c.n_eps));
  const double area_unit = space.cross_section_volume();
  c.threshold_area = 2.0 * std::pow(1.0 + c.xi, 1.0 / c.n_eps) * area_unit *
                     std::pow(2.0 * c.mass / c.c_eps, 1.0 / c.n_eps);
  c.growth_coefficient = 4.0 * (n - 1) * area_unit * c.mass / (3.0 * std::sqrt(3.0));
  c.ciso = isoperimetric_ratio(graph, options.isoperimetric_samples);
  return c;
}

double level_area(const GraphManifold& graph, double h) {
  return slice_area(graph.space(), graph.radius_at_height(h));
}

double critical_height(const GraphManifold& graph, const StabilityConstants& constants) {
  if (!(constants.mass > 0.0)) throw PreconditionError("critical height needs m > 0");
  const double r = critical_radius(graph, constants);
  if (r <= graph.r_inner()) return graph.min_height();
  if (r >= graph.r_outer()) return graph.max_height();
  return graph.height(r);
}

double comparison_p(const GraphManifold& graph, const StabilityConstants& c, double y) {
  return c.c_eps / (2.0 * c.mass) *
             std::pow(y / graph.space().cross_section_volume(), c.n_eps) -
         1.0;
}

double volume_growth_residual(const GraphManifold& graph,
                              const StabilityConstants& constants, double h) {
  const auto& space = graph.space();
  const auto data = level_set(graph, h);
  const double floor_area = space.cross_section_volume() *
                            std::pow(2.0 * constants.mass / constants.c_eps,
                                     1.0 / constants.n_eps);
  if (data.area < floor_area * (1.0 - 1e-12)) {
    throw PreconditionError("level set below the volume-growth threshold");
  }
  // Coarea: V'(h) = int H_ring / |Df| dA with |Df| = s / V.
  const double v = static_potential(space, data.radius);
  const double growth = data.ambient_mean_curvature * data.area * v / data.slope;
  const double p = std::max(0.0, comparison_p(graph, constants, data.area));
  return growth - constants.growth_coefficient * std::pow(p, 1.5);
}

ComparisonProfile comparison_profile(const GraphManifold& graph,
                                     const StabilityConstants& constants, int samples,
                                     double ode_rel_tol) {
  const double h_o = critical_height(graph, constants);
  const double top = graph.max_height();
  if (!(h_o < top)) throw PreconditionError("h_o = max f: empty comparison interval");
  if (samples < 2) throw DomainError("comparison profile needs >= 2 samples");

  ComparisonProfile out;
  out.heights = numerics::linspace(h_o, top, static_cast<std::size_t>(samples));
  const auto rhs = [&](double, double y) {
    return constants.growth_coefficient *
           std::pow(std::max(0.0, comparison_p(graph, constants, y)), 1.5);
  };
  const std::span<const double> later(out.heights.data() + 1, out.heights.size() - 1);
  out.y.push_back(constants.threshold_area);
  const auto ys = numerics::solve_ode(rhs, h_o, constants.threshold_area, later,
                                      {ode_rel_tol, 1e-12 * constants.threshold_area});
  out.y.insert(out.y.end(), ys.begin(), ys.end());

  out.dominated = true;
  out.p_non_decreasing = true;
  for (std::size_t k = 0; k < out.heights.size(); ++k) {
    out.volume.push_back(level_area(graph, out.heights[k]));
    out.p.push_back(comparison_p(graph, constants, out.y[k]));
    if (out.volume[k] < out.y[k] * (1.0 - 1e-8)) out.dominated = false;
    if (k > 0 && out.p[k] < out.p[k - 1]) out.p_non_decreasing = false;
  }
  return out;
}

HeightBound height_bound_check(const GraphManifold& graph,
                               const StabilityConstants& constants, double ode_rel_tol) {
  const auto& space = graph.space();
  const int n = space.dimension();
  const double h_o = critical_height(graph, constants);
  HeightBound out;
  out.gap = graph.max_height() - h_o;
  if (constants.n_eps == 0.5) {
    const double outer_area = slice_area(space, graph.r_outer());
    out.cne = 4.0 * constants.c_eps * constants.dne /
              std::pow(4.0 * space.cross_section_volume(), 0.25) *
              std::pow(outer_area, 0.25);
    out.rhs = out.cne * std::sqrt(constants.mass);
  } else {
    out.logarithmic = true;
    const double p_top =
        comparison_p(graph, constants, y_at_max(graph, constants, h_o, ode_rel_tol));
    out.cne = 6.0 * constants.dne * std::log1p(p_top);
    out.rhs = out.cne * std::pow(constants.mass, 1.0 / (n - 2));
  }
  out.holds = out.gap <= out.rhs;
  return out;
}

VolumeEstimate volume_estimate_check(const GraphManifold& graph,
                                     const StabilityConstants& constants,
                                     double ode_rel_tol) {
  const auto& space = graph.space();
  const double h_o = critical_height(graph, constants);
  VolumeEstimate out;
  out.vol_omega = graph_volume(graph);
  out.vol_base = base_volume(graph);
  out.lhs = out.vol_omega - out.vol_base;
  out.vmax = static_potential(space, critical_radius(graph, constants));
  const auto height = height_bound_check(graph, constants, ode_rel_tol);
  out.rhs = lower_region_constant(graph, constants) +
            out.vmax * (h_o - graph.min_height()) * constants.threshold_area +
            slice_area(space, graph.r_outer()) * height.rhs;
  out.holds = out.lhs <= out.rhs;
  return out;
}

double gamma_theory(int epsilon, int dimension) {
  if (epsilon != 1 || dimension == 3) return 0.5;
  return std::min(0.5, 1.0 / (dimension - 2));
}

FlatDecomposition flat_distance_decomposition(const GraphManifold& graph,
                                              const StabilityConstants& constants,
                                              MassMeasure measure, double ode_rel_tol) {
  const auto& space = graph.space();
  const int n = space.dimension();
  const double area_unit = space.cross_section_volume();
  const bool is_static = measure == MassMeasure::Static;
  const double h_o = critical_height(graph, constants);
  const double r_o = critical_radius(graph, constants);
  const double r0 = graph.r_inner();
  const double big_r = graph.r_outer();

  // Vertical extent |h_o - f| over the base, with base volume r^{n-1}/V dr
  // and an extra V under the static measure. Integrated in u = sqrt(r - r0).
  const auto region_mass = [&](double r_a, double r_b) {
    if (!(r_b > r_a)) return 0.0;
    const auto integrand = [&](double u) {
      const double r = r0 + u * u;
      const double weight = is_static ? 1.0 : 1.0 / static_potential(space, r);
      return 2.0 * u * std::abs(graph.height(r) - h_o) * std::pow(r, n - 1) * weight;
    };
    std::vector<double> breaks{std::sqrt(r_a - r0)};
    for (double rb : graph.profile().break_points()) {
      if (rb > r_a && rb < r_b) breaks.push_back(std::sqrt(rb - r0));
    }
    breaks.push_back(std::sqrt(r_b - r0));
    return area_unit * numerics::integrate_piecewise(integrand, breaks, kMassQuadrature).value;
  };

  FlatDecomposition out;
  out.measure = measure;
  out.mass_b_minus = region_mass(r0, r_o);
  out.mass_b_plus = region_mass(r_o, big_r);
  const double inner_area = slice_area(space, r0);
  const double outer_area = slice_area(space, big_r);
  const double below = h_o - graph.min_height();
  const double above = graph.max_height() - h_o;
  out.mass_a_minus = below * inner_area * (is_static ? static_potential(space, r0) : 1.0);
  out.mass_a_plus = above * outer_area * (is_static ? static_potential(space, big_r) : 1.0);
  out.flat_bound = out.mass_a_plus + out.mass_a_minus + out.mass_b_plus + out.mass_b_minus;

  const double height_rhs = height_bound_check(graph, constants, ode_rel_tol).rhs;
  const double penrose_area =
      area_unit * std::pow(2.0 * constants.mass / constants.c_eps, 1.0 / constants.n_eps);
  double proof = below * lower_region_constant(graph, constants) +
                 height_rhs * base_volume(graph) + below * penrose_area +
                 height_rhs * outer_area;
  // Vertical lengths carry at most the factor max V = V(R).
  if (is_static) proof *= static_potential(space, big_r);
  out.proof_bound = proof;
  out.gamma_theory = gamma_theory(space.epsilon(), n);
  out.holds = out.flat_bound <= out.proof_bound * (1.0 + 1e-10);
  return out;
}

StabilityReport analyze_stability(const GraphManifold& graph,
                                  const StabilityOptions& options) {
  StabilityReport out;
  out.constants = stability_constants(graph, options);
  out.h_o = critical_height(graph, out.constants);
  const auto height = height_bound_check(graph, out.constants, options.ode_rel_tol);
  out.height_gap = height.gap;
  out.height_bound_rhs = height.rhs;
  const auto volume = volume_estimate_check(graph, out.constants, options.ode_rel_tol);
  out.vol_omega = volume.vol_omega;
  out.vol_base = volume.vol_base;
  out.vol_estimate_rhs = volume.rhs;
  out.vmax = volume.vmax;
  const MassMeasure other = options.measure == MassMeasure::Product
                                ? MassMeasure::Static
                                : MassMeasure::Product;
  out.flat = flat_distance_decomposition(graph, out.constants, options.measure,
                                         options.ode_rel_tol);
  out.flat_other =
      flat_distance_decomposition(graph, out.constants, other, options.ode_rel_tol);
  out.flat_distance_bound = out.flat.flat_bound;
  return out;
}

namespace {

std::string flat_json(const FlatDecomposition& flat, int indent) {
  return JsonObjectWriter()
      .field("measure", to_string(flat.measure))
      .field("mass_A_plus", flat.mass_a_plus)
      .field("mass_A_minus", flat.mass_a_minus)
      .field("mass_B_plus", flat.mass_b_plus)
      .field("mass_B_minus", flat.mass_b_minus)
      .field("flat_distance_bound", flat.flat_bound)
      .field("proof_bound", flat.proof_bound)
      .field("holds", flat.holds)
      .str(indent);
}

}  // namespace

std::string to_json(const StabilityReport& report) {
  const auto& c = report.constants;
  const std::string constants = JsonObjectWriter()
                                    .field("xi", c.xi)
                                    .field("mass", c.mass)
                                    .field("n_eps", c.n_eps)
                                    .field("c_eps", c.c_eps)
                                    .field("Dne", c.dne)
                                    .field("Ciso", c.ciso)
                                    .field("Vmax", report.vmax)
                                    .field("threshold_area", c.threshold_area)
                                    .field("growth_coefficient", c.growth_coefficient)
                                    .str(1);
  return JsonObjectWriter()
             .field("h_o", report.h_o)
             .field("height_gap", report.height_gap)
             .field("height_bound_rhs", report.height_bound_rhs)
             .field("vol_omega", report.vol_omega)
             .field("vol_base", report.vol_base)
             .field("vol_estimate_rhs", report.vol_estimate_rhs)
             .field("measure", to_string(report.flat.measure))
             .field("mass_A_plus", report.flat.mass_a_plus)
             .field("mass_A_minus", report.flat.mass_a_minus)
             .field("mass_B_plus", report.flat.mass_b_plus)
             .field("mass_B_minus", report.flat.mass_b_minus)
             .field("flat_distance_bound", report.flat_distance_bound)
             .field("proof_bound", report.flat.proof_bound)
             .field("gamma", report.gamma)
             .field("gamma_theory", report.flat.gamma_theory)
             .raw("constants", constants)
             .raw("alternate_measure", flat_json(report.flat_other, 1))
             .str() +
         "\n";
}

SweepResult convergence_experiment(const ReferenceSpace& space, double r_outer,
                                   const std::vector<double>& mus,
                                   const StabilityOptions& options) {
  if (mus.empty()) throw ConstraintError("empty mass-parameter sequence");
  for (std::size_t i = 0; i < mus.size(); ++i) {
    if (!(mus[i] > 0.0)) throw ConstraintError("mass parameters must be positive");
    if (i > 0 && !(mus[i] < mus[i - 1])) {
      throw ConstraintError("mass parameters must be strictly decreasing");
    }
  }
  std::vector<double> horizons;
  for (double mu : mus) {
    const double r0 = horizon_radius(space, mu);
    if (!(r0 < r_outer)) throw ConstraintError("horizon outside the outer radius");
    if (!penrose_constants(space, r0).admissible) {
      throw ConstraintError("horizon below the admissible eps = -1 range");
    }
    horizons.push_back(r0);
  }
  const double fixed_base = base_volume_between(space, horizons.back(), r_outer);

  SweepResult out;
  out.gamma_theory = gamma_theory(space.epsilon(), space.dimension());
  for (std::size_t i = 0; i < mus.size(); ++i) {
    const auto profile = SlopeProfile::kottler_schwarzschild(space, mus[i], r_outer);
    const GraphManifold raw(space, profile);
    const auto constants = stability_constants(raw, options);
    const double h_o = critical_height(raw, constants);
    // Vertical translation putting the h_o-slice at t = 0.
    const GraphManifold graph(space, profile, -h_o);
    const auto flat = flat_distance_decomposition(graph, constants, options.measure,
                                                  options.ode_rel_tol);
    SweepRow row;
    row.index = static_cast<int>(i) + 1;
    row.mu = mus[i];
    row.mass = constants.mass;
    row.h_o = h_o;
    row.height_gap = graph.max_height() - critical_height(graph, constants);
    const double vol_omega = graph_volume(graph);
    row.vol_gap = vol_omega - base_volume(graph);
    row.vol_gap_fixed = vol_omega - fixed_base;
    row.mass_a_plus = flat.mass_a_plus;
    row.mass_a_minus = flat.mass_a_minus;
    row.mass_b_plus = flat.mass_b_plus;
    row.mass_b_minus = flat.mass_b_minus;
    row.flat_bound = flat.flat_bound;
    out.rows.push_back(row);
  }

  const std::size_t window = std::min<std::size_t>(5, out.rows.size());
  if (window >= 2) {
    std::vector<double> m;
    std::vector<double> d;
    for (std::size_t i = out.rows.size() - window; i < out.rows.size(); ++i) {
      m.push_back(out.rows[i].mass);
      d.push_back(out.rows[i].flat_bound);
    }
    const auto fit = numerics::fit_power_law(m, d);
    out.gamma_fit = fit.slope;
    out.fit_intercept = fit.intercept;
  } else {
    out.gamma_fit = std::nan("");
    out.fit_intercept = std::nan("");
  }
  return out;
}

std::string to_csv(const SweepResult& sweep) {
  std::string out =
      "i,mu,mass,h_o,height_gap,vol_gap,mass_A_plus,mass_A_minus,mass_B_plus,"
      "mass_B_minus,flat_bound,gamma_fit,vol_gap_fixed\n";
  for (std::size_t k = 0; k < sweep.rows.size(); ++k) {
    const auto& r = sweep.rows[k];
    const bool last = k + 1 == sweep.rows.size();
    out += std::to_string(r.index);
    for (double v : {r.mu, r.mass, r.h_o, r.height_gap, r.vol_gap, r.mass_a_plus,
                     r.mass_a_minus, r.mass_b_plus, r.mass_b_minus, r.flat_bound}) {
      out += ',' + format_csv_number(v);
    }
    out += ',' + (last ? format_csv_number(sweep.gamma_fit) : std::string());
    out += ',' + format_csv_number(r.vol_gap_fixed) + '\n';
  }
  return out;
}

}  // namespace staticmass
