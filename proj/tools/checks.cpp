#include "checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "staticmass/errors.hpp"
#include "staticmass/quasilocal_energy.hpp"
#include "staticmass/reference_geometry.hpp"

namespace staticmass::cli {

CheckContext::CheckContext(const ExperimentConfig& config, std::uint64_t seed)
    : config_(config), space_(make_space(config)), graph_(make_graph(config)), seed_(seed) {}

double CheckContext::tolerance(double fallback) const {
  return config_.tolerance.value_or(fallback);
}

const SweepResult& CheckContext::sweep() const {
  if (!sweep_) {
    sweep_ = convergence_experiment(space_, config_.family.r_outer,
                                    config_.family.sweep.mus, config_.stability);
  }
  return *sweep_;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

CheckResult make(bool passed, double residual, std::string detail) {
  CheckResult out;
  out.passed = passed;
  out.residual = residual;
  out.detail = std::move(detail);
  return out;
}

// Least radius at which the reference data is defined inside the annulus.
double lowest_radius(const CheckContext& ctx) {
  return std::max(ctx.graph().r_inner(), ctx.space().r_min());
}

CheckResult static_equation(const CheckContext& ctx) {
  const auto& space = ctx.space();
  const int n = space.dimension();
  const double tol = ctx.tolerance(1e-8);
  const double lo = lowest_radius(ctx);
  const double hi = ctx.graph().r_outer();
  double worst = 0.0;
  constexpr int kRadii = 100;
  for (int k = 0; k < kRadii; ++k) {
    const double r = lo + (hi - lo) * (k + 0.5) / kRadii;
    const auto res = static_equation_residual(space, r);
    const double scalar = std::abs(curvature_tensors(space, r).scalar + n * (n - 1.0));
    worst = std::max({worst, res.tensor, res.laplace, scalar});
  }
  return make(worst <= tol, worst,
              fmt::format("max residual over {} radii {:.3e} (tol {:.1e})", kRadii, worst, tol));
}

CheckResult eq6_mean_curvature(const CheckContext& ctx) {
  const auto& graph = ctx.graph();
  const double tol = ctx.tolerance(1e-5);
  UniformStream rng(ctx.seed());
  const double span = graph.r_outer() - graph.r_inner();
  double worst = 0.0;
  constexpr int kSamples = 50;
  for (int k = 0; k < kSamples; ++k) {
    const double r = rng.next(graph.r_inner() + 0.01 * span, graph.r_outer());
    const double expected = level_set_at_radius(graph, r).mean_curvature;
    worst = std::max(worst, std::abs(embedding_mean_curvature_fd(graph, r) - expected));
  }
  return make(worst <= tol, worst,
              fmt::format("max |H_fd - H| over {} radii {:.3e} (tol {:.1e})", kSamples, worst,
                          tol));
}

CheckResult eq4_divergence_identity(const CheckContext& ctx) {
  const auto& graph = ctx.graph();
  const double tol = ctx.tolerance(1e-6);
  UniformStream rng(ctx.seed() + 1);
  double worst = 0.0;
  constexpr int kPairs = 20;
  const double lo_h = graph.min_height();
  const double hi_h = graph.max_height();
  for (int k = 0; k < kPairs; ++k) {
    DivergenceIdentity id;
    if (hi_h > lo_h) {
      // Stay off the minimal boundary, which is not a regular value.
      double h1 = rng.next(lo_h + 1e-3 * (hi_h - lo_h), hi_h);
      double h2 = rng.next(lo_h + 1e-3 * (hi_h - lo_h), hi_h);
      if (h1 > h2) std::swap(h1, h2);
      if (h1 == h2) continue;
      id = divergence_identity(graph, h1, h2);
    } else {
      double r1 = rng.next(graph.r_inner(), graph.r_outer());
      double r2 = rng.next(graph.r_inner(), graph.r_outer());
      if (r1 > r2) std::swap(r1, r2);
      id = divergence_identity_radii(graph, r1, r2);
    }
    worst = std::max(worst, id.residual);
  }
  return make(worst <= tol, worst,
              fmt::format("max |volume - boundary| over {} pairs {:.3e} (tol {:.1e})", kPairs,
                          worst, tol));
}

CheckResult lemma21_lower_bound(const CheckContext& ctx) {
  const auto& graph = ctx.graph();
  UniformStream rng(ctx.seed() + 2);
  double margin = std::numeric_limits<double>::infinity();
  const double span = graph.r_outer() - graph.r_inner();
  for (int k = 0; k <= 20; ++k) {
    const double r = k == 0 ? graph.r_outer()
                            : rng.next(graph.r_inner() + 1e-3 * span, graph.r_outer());
    const double mass = brown_york_energy_at(graph, r);
    const double bound = energy_lower_bound_at(graph, r);
    margin = std::min({margin, mass - bound, bound});
  }
  const double tol = 1e-12;
  return make(margin >= -tol, margin,
              fmt::format("min of (m - bound, bound) {:.3e}; outer m = {:.17g}", margin,
                          brown_york_energy(graph)));
}

CheckResult lemma22_penrose(const CheckContext& ctx) {
  const auto report = penrose_gap(ctx.graph());
  const bool admissible = report.constants.admissible;
  const bool ok = admissible && report.gap >= -1e-9;
  return make(ok, report.gap,
              fmt::format("m = {:.17g}, rhs = {:.17g}, gap = {:.3e}{}", report.mass, report.rhs,
                          report.gap, admissible ? "" : " (horizon below the admissible range)"));
}

CheckResult minkowski_inequality(const CheckContext& ctx) {
  const auto& space = ctx.space();
  const double lo = lowest_radius(ctx);
  const double hi = ctx.graph().r_outer();
  bool ok = true;
  double margin = std::numeric_limits<double>::infinity();
  constexpr int kRadii = 20;
  for (int k = 0; k < kRadii; ++k) {
    const double r = lo + (hi - lo) * (k + 0.5) / kRadii;
    const auto m = minkowski_check(space, r);
    ok = ok && m.weighted_holds && m.unweighted_strict.value_or(true);
    margin = std::min(margin, m.functional - m.weighted_bound);
  }
  return make(ok, margin,
              fmt::format("min weighted margin over {} slices {:.3e}", kRadii, margin));
}

CheckResult volume_growth(const CheckContext& ctx) {
  const auto& graph = ctx.graph();
  const auto& space = ctx.space();
  const auto constants = stability_constants(graph, ctx.config().stability);
  const double floor_area =
      space.cross_section_volume() *
      std::pow(2.0 * constants.mass / constants.c_eps, 1.0 / constants.n_eps);
  const double r_floor = std::max(
      graph.r_inner(), std::pow(floor_area / space.cross_section_volume(),
                                1.0 / (space.dimension() - 1)));
  if (!(r_floor < graph.r_outer())) {
    return make(true, kNaN, "no level set above the growth threshold");
  }
  UniformStream rng(ctx.seed() + 3);
  double worst = std::numeric_limits<double>::infinity();
  constexpr int kHeights = 10;
  for (int k = 0; k < kHeights; ++k) {
    const double r = rng.next(r_floor + 1e-6 * (graph.r_outer() - r_floor), graph.r_outer());
    worst = std::min(worst, volume_growth_residual(graph, constants, graph.height(r)));
  }
  return make(worst > 0.0, worst,
              fmt::format("min residual over {} heights {:.3e}", kHeights, worst));
}

CheckResult comparison_check(const CheckContext& ctx) {
  const auto& graph = ctx.graph();
  const auto constants = stability_constants(graph, ctx.config().stability);
  const double h_o = critical_height(graph, constants);
  if (!(h_o < graph.max_height())) return make(true, kNaN, "h_o = max f, empty interval");
  const auto profile =
      comparison_profile(graph, constants, 200, ctx.config().stability.ode_rel_tol);
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < profile.y.size(); ++k) {
    margin = std::min(margin, (profile.volume[k] - profile.y[k]) / profile.y[k]);
  }
  // Y(h_o) substituted into p.
  const double p_start = std::pow(2.0, constants.n_eps) * (1.0 + constants.xi) - 1.0;
  const bool start_ok = std::abs(profile.p.front() - p_start) <= 1e-12 * p_start &&
                        profile.p.front() >= constants.xi;
  const bool ok = profile.dominated && profile.p_non_decreasing && start_ok;
  return make(ok, margin,
              fmt::format("min relative (V - Y)/Y {:.3e}; p non-decreasing: {}; p(h_o) = {:.17g}",
                          margin, profile.p_non_decreasing, profile.p.front()));
}

CheckResult lemma32_height_bound(const CheckContext& ctx) {
  const auto constants = stability_constants(ctx.graph(), ctx.config().stability);
  const auto hb =
      height_bound_check(ctx.graph(), constants, ctx.config().stability.ode_rel_tol);
  return make(hb.holds, hb.rhs - hb.gap,
              fmt::format("max f - h_o = {:.6g} <= {:.6g}{}", hb.gap, hb.rhs,
                          hb.logarithmic ? " (logarithmic form)" : ""));
}

CheckResult lemma33_volume_estimate(const CheckContext& ctx) {
  const auto constants = stability_constants(ctx.graph(), ctx.config().stability);
  const auto ve =
      volume_estimate_check(ctx.graph(), constants, ctx.config().stability.ode_rel_tol);
  return make(ve.holds, ve.rhs - ve.lhs,
              fmt::format("vol gap = {:.6g} <= {:.6g}", ve.lhs, ve.rhs));
}

CheckResult theorem42_flat_bound(const CheckContext& ctx) {
  const auto& options = ctx.config().stability;
  const auto constants = stability_constants(ctx.graph(), options);
  const auto flat = flat_distance_decomposition(ctx.graph(), constants, options.measure,
                                                options.ode_rel_tol);
  return make(flat.holds, flat.proof_bound - flat.flat_bound,
              fmt::format("{} measure: masses sum {:.6g} <= assembled bound {:.6g}",
                          to_string(flat.measure), flat.flat_bound, flat.proof_bound));
}

CheckResult theorem13_convergence(const CheckContext& ctx) {
  const auto& sweep = ctx.sweep();
  const auto& rows = sweep.rows;
  bool mass_down = true;
  bool flat_down = true;
  bool vol_down = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    mass_down = mass_down && rows[i].mass < rows[i - 1].mass;
    flat_down = flat_down && rows[i].flat_bound < rows[i - 1].flat_bound;
    vol_down = vol_down && rows[i].vol_gap < rows[i - 1].vol_gap;
  }
  const auto& last = rows.back();
  const bool mass_small = last.mass < 1e-3;
  const bool flat_small = last.flat_bound < 1e-1;
  const bool vol_small = last.vol_gap < 1e-2;
  const bool gamma_ok = sweep.gamma_fit >= 0.40 && sweep.gamma_fit <= 0.60;
  std::string failures;
  const auto note = [&](bool ok, const char* what) {
    if (!ok) failures += failures.empty() ? what : std::string(", ") + what;
  };
  note(mass_down, "mass not strictly decreasing");
  note(mass_small, "final mass >= 1e-3");
  note(flat_down, "flat bound not strictly decreasing");
  note(flat_small, "final flat bound >= 1e-1");
  note(vol_down, "volume gap not decreasing");
  note(vol_small, "final volume gap >= 1e-2");
  note(gamma_ok, "gamma_fit outside [0.40, 0.60]");
  const bool ok = failures.empty();
  return make(ok, last.flat_bound,
              fmt::format("m_last = {:.3e}, d_last = {:.3e}, vol_gap_last = {:.3e}, "
                          "gamma_fit = {:.4f}{}{}",
                          last.mass, last.flat_bound, last.vol_gap, sweep.gamma_fit,
                          ok ? "" : "; ", failures));
}

}  // namespace

const std::vector<CheckInfo>& check_registry() {
  static const std::vector<CheckInfo> registry = [] {
    std::vector<CheckInfo> r{
        {"comparison_profile", "",
         "level-set area dominates the comparison ODE solution Y(h) above h_o",
         comparison_check},
        {"eq4_divergence_identity", "eq4",
         "scalar-curvature volume integral equals the boundary functional difference",
         eq4_divergence_identity},
        {"eq6_mean_curvature", "eq6",
         "finite-difference mean curvature of level sets matches H_ring/sqrt(1+s^2)",
         eq6_mean_curvature},
        {"lemma21_lower_bound", "lemma21",
         "Brown-York energy dominates the tilt lower bound, which is non-negative",
         lemma21_lower_bound},
        {"lemma22_penrose", "lemma22",
         "quasi-local Penrose inequality against the horizon area", lemma22_penrose},
        {"lemma32_height_bound", "", "height gap max f - h_o within the explicit bound",
         lemma32_height_bound},
        {"lemma33_volume_estimate", "",
         "graph volume minus base volume within the explicit bound", lemma33_volume_estimate},
        {"minkowski_inequality", "",
         "weighted Minkowski inequality on slices (strict unweighted form for eps = +1)",
         minkowski_inequality},
        {"static_equation", "static_eq",
         "static equation, Laplace equation and scalar curvature of the reference",
         static_equation},
        {"theorem13_convergence", "",
         "mass sweep mu_i -> 0: mass, flat bound and volume gap decay; fitted exponent",
         theorem13_convergence},
        {"theorem42_flat_bound", "",
         "masses of the comparison regions within the assembled bound", theorem42_flat_bound},
        {"volume_growth", "", "level-set area growth rate exceeds the comparison rate",
         volume_growth},
    };
    std::sort(r.begin(), r.end(),
              [](const CheckInfo& a, const CheckInfo& b) { return a.name < b.name; });
    return r;
  }();
  return registry;
}

std::string canonical_check_name(const std::string& name) {
  for (const auto& info : check_registry()) {
    if (info.name == name || (!info.alias.empty() && info.alias == name)) return info.name;
  }
  throw ConfigError("unknown check '" + name + "'");
}

CheckResult run_check(const std::string& name, const CheckContext& context) {
  const auto canonical = canonical_check_name(name);
  for (const auto& info : check_registry()) {
    if (info.name != canonical) continue;
    CheckResult result;
    try {
      result = info.run(context);
    } catch (const ConfigError&) {
      throw;
    } catch (const IoError&) {
      throw;
    } catch (const Error& e) {
      result = make(false, kNaN, std::string("error: ") + e.what());
    }
    result.name = canonical;
    return result;
  }
  throw ConfigError("unknown check '" + name + "'");
}

}  // namespace staticmass::cli
