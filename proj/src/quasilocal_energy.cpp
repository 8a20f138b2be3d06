#include "staticmass/quasilocal_energy.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "staticmass/errors.hpp"
#include "staticmass/json_writer.hpp"
#include "staticmass/numerics.hpp"

namespace staticmass {

PenroseConstants penrose_constants(const ReferenceSpace& space, double r0) {
  const int n = space.dimension();
  PenroseConstants out;
  switch (space.epsilon()) {
    case 1:
      out.c_eps = 1.0;
      out.n_eps = static_cast<double>(n - 2) / (n - 1);
      break;
    case 0:
      out.c_eps = std::pow(r0, 0.5 * (n + 1));
      out.n_eps = 0.5;
      break;
    default:
      if (!(r0 > 1.0)) throw ConstraintError("eps = -1 requires an inner radius > 1");
      out.c_eps = std::sqrt(r0 * r0 - 1.0) * std::pow(r0, 0.5 * (n - 3));
      out.n_eps = 0.5;
      out.admissible = r0 * r0 - 1.0 >= 1.0 - 1e-12;
      break;
  }
  return out;
}

double brown_york_energy_at(const GraphManifold& graph, double r) {
  if (graph.profile().minimal_inner_boundary() && r <= graph.r_inner()) {
    throw SingularValueError("Brown-York energy of the minimal inner boundary");
  }
  if (!(r >= graph.r_inner()) || !(r <= graph.r_outer())) {
    throw DomainError("Brown-York energy: radius outside the annulus");
  }
  const auto& space = graph.space();
  const int n = space.dimension();
  const double v2 = static_potential_squared(space, r);
  const double v = std::sqrt(v2);
  const double w = std::sqrt(graph.profile().warp_squared(r));
  // r^{n-1} V (H_ring - H) / (n-1) = r^{n-2} V (V - W), with
  // V - W = V^2 s^2/(1+s^2) / (V + W) to avoid cancellation.
  const double v_minus_w = v2 * graph.profile().tilt_fraction(r) / (v + w);
  return std::pow(r, n - 2) * v * v_minus_w;
}

double brown_york_energy(const GraphManifold& graph) {
  return brown_york_energy_at(graph, graph.r_outer());
}

double boundary_functional(const GraphManifold& graph, double r) {
  const auto& space = graph.space();
  const auto data = level_set_at_radius(graph, r);
  const double v = static_potential(space, r);
  return v * graph.profile().tilt_fraction(r) * data.ambient_mean_curvature * data.area;
}

double energy_lower_bound_at(const GraphManifold& graph, double r) {
  const auto& space = graph.space();
  const double scale = 2.0 * (space.dimension() - 1) * space.cross_section_volume();
  return boundary_functional(graph, r) / scale;
}

double energy_lower_bound(const GraphManifold& graph) {
  return energy_lower_bound_at(graph, graph.r_outer());
}

DivergenceIdentity divergence_identity_radii(const GraphManifold& graph, double r1,
                                             double r2) {
  if (!(r1 >= graph.r_inner()) || !(r2 <= graph.r_outer()) || !(r1 <= r2)) {
    throw DomainError("divergence identity: need r_inner <= r1 <= r2 <= r_outer");
  }
  const auto& space = graph.space();
  const auto& p = graph.profile();
  const int n = space.dimension();
  const double area_unit = space.cross_section_volume();
  const double shift = static_cast<double>(n) * (n - 1);

  // V (R + n(n-1)) / sqrt(1+s^2) dV_g, with dV_g = sqrt(1+s^2)/V r^{n-1} A dr.
  const auto integrand = [&](double r) {
    const double v = static_potential(space, r);
    const double w2 = p.warp_squared(r);
    const double scalar =
        warped_product_curvature(n, space.epsilon(), r, w2, p.warp_squared_derivative(r))
            .scalar;
    const double inverse_tilt = v / std::sqrt(w2);  // sqrt(1 + s^2)
    const double volume_density = inverse_tilt / v * std::pow(r, n - 1) * area_unit;
    return v * (scalar + shift) / inverse_tilt * volume_density;
  };
  std::vector<double> breaks{r1};
  for (double rb : p.break_points()) {
    if (rb > r1 && rb < r2) breaks.push_back(rb);
  }
  breaks.push_back(r2);
  DivergenceIdentity out;
  out.volume_side =
      numerics::integrate_piecewise(integrand, breaks, {1e-12, 1e-11, 4000}).value;
  out.boundary_side = boundary_functional(graph, r2) - boundary_functional(graph, r1);
  out.residual = std::abs(out.volume_side - out.boundary_side);
  return out;
}

DivergenceIdentity divergence_identity(const GraphManifold& graph, double h1,
                                       double h2) {
  if (!(h1 < h2)) throw DomainError("divergence identity needs h1 < h2");
  double r1 = 0.0;
  double r2 = 0.0;
  try {
    r1 = level_set(graph, h1).radius;
    r2 = level_set(graph, h2).radius;
  } catch (const SingularValueError& e) {
    throw DomainError(std::string("non-regular height: ") + e.what());
  }
  return divergence_identity_radii(graph, r1, r2);
}

double divergence_identity_residual(const GraphManifold& graph, double h1, double h2) {
  return divergence_identity(graph, h1, h2).residual;
}

MinkowskiCheck minkowski_check(const ReferenceSpace& space, double r) {
  const int n = space.dimension();
  const double area_unit = space.cross_section_volume();
  const double area = slice_area(space, r);
  const double v = static_potential(space, r);
  const double mean = ambient_sphere_mean_curvature(space, r);
  const double x = area / area_unit;

  MinkowskiCheck out;
  out.functional = v * mean * area;
  out.weighted_bound =
      (n - 1) * area_unit *
      (std::pow(x, static_cast<double>(n) / (n - 1)) +
       space.epsilon() * std::pow(x, static_cast<double>(n - 2) / (n - 1)));
  out.weighted_holds =
      out.functional >= out.weighted_bound - 1e-12 * std::abs(out.weighted_bound);
  out.unweighted_integral = mean * area;
  out.unweighted_bound = (n - 1) * area;
  if (space.epsilon() == 1) {
    out.unweighted_strict = out.unweighted_integral > out.unweighted_bound;
  }
  return out;
}

PenroseReport penrose_gap(const GraphManifold& graph) {
  if (!graph.profile().minimal_inner_boundary()) {
    throw PreconditionError("Penrose inequality needs a minimal inner boundary");
  }
  const auto& space = graph.space();
  PenroseReport out;
  out.constants = penrose_constants(space, graph.r_inner());
  out.mass = brown_york_energy(graph);
  const double x = slice_area(space, graph.r_inner()) / space.cross_section_volume();
  out.rhs = 0.5 * out.constants.c_eps * std::pow(x, out.constants.n_eps);
  out.gap = out.mass - out.rhs;
  return out;
}

double inner_minkowski_functional(const GraphManifold& graph) {
  const auto& space = graph.space();
  const double r0 = graph.r_inner();
  return static_potential(space, r0) * ambient_sphere_mean_curvature(space, r0) *
         slice_area(space, r0);
}

EnergyReport energy_report(const GraphManifold& graph) {
  const auto& space = graph.space();
  EnergyReport out;
  out.mass = brown_york_energy(graph);
  out.lower_bound = energy_lower_bound(graph);
  out.minkowski_functional = minkowski_check(space, graph.r_outer()).functional;
  if (space.epsilon() != -1 || graph.r_inner() > 1.0) {
    const auto constants = penrose_constants(space, graph.r_inner());
    out.c_eps = constants.c_eps;
    out.n_eps = constants.n_eps;
  }
  if (graph.profile().minimal_inner_boundary()) out.penrose_rhs = penrose_gap(graph).rhs;
  const double r_quarter = graph.r_inner() + 0.25 * (graph.r_outer() - graph.r_inner());
  out.divergence_residual =
      divergence_identity_radii(graph, r_quarter, graph.r_outer()).residual;
  return out;
}

std::string to_json(const EnergyReport& report) {
  return JsonObjectWriter()
      .field("mass", report.mass)
      .field("lower_bound", report.lower_bound)
      .field("minkowski_functional", report.minkowski_functional)
      .field("penrose_rhs", report.penrose_rhs)
      .field("divergence_residual", report.divergence_residual)
      .field("c_eps", report.c_eps)
      .field("n_eps", report.n_eps)
      .str() +
         "\n";
}

}  // namespace staticmass
