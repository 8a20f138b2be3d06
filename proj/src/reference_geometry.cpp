#include "staticmass/reference_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "staticmass/errors.hpp"

namespace staticmass {

double unit_sphere_volume(int k) {
  // |S^k| = 2 pi^{(k+1)/2} / Gamma((k+1)/2)
  const double half = 0.5 * (k + 1);
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

ReferenceSpace::ReferenceSpace(int epsilon, int dimension,
                               std::optional<double> cross_section_volume,
                               std::optional<double> r_min)
    : epsilon_(epsilon), dimension_(dimension) {
  if (epsilon != 1 && epsilon != 0 && epsilon != -1) {
    throw DomainError("epsilon must be one of +1, 0, -1 (got " +
                      std::to_string(epsilon) + ")");
  }
  if (dimension < 3) {
    throw DomainError("dimension must be at least 3 (got " +
                      std::to_string(dimension) + ")");
  }
  if (epsilon == 1) {
    const double sphere = unit_sphere_volume(dimension - 1);
    if (cross_section_volume &&
        std::abs(*cross_section_volume - sphere) > 1e-12 * sphere) {
      throw DomainError("eps = +1 cross-sections are round unit spheres; "
                        "the volume is not user-selectable");
    }
    cross_section_volume_ = sphere;
  } else {
    const double fallback = epsilon == 0 ? 1.0 : 4.0 * std::numbers::pi;
    cross_section_volume_ = cross_section_volume.value_or(fallback);
    if (!(cross_section_volume_ > 0.0) || !std::isfinite(cross_section_volume_)) {
      throw DomainError("cross-section volume must be positive");
    }
  }
  r_min_ = r_min.value_or(epsilon == -1 ? 1.0 + 1e-6 : 1e-6);
  if (!(r_min_ > 0.0) || (epsilon == -1 && !(r_min_ > 1.0))) {
    throw DomainError("r_min must be positive (and > 1 for eps = -1)");
  }
}

void ReferenceSpace::require_radius(double r) const {
  if (!(r > 0.0) || !(r * r + epsilon_ > 0.0) || !std::isfinite(r)) {
    throw DomainError("radius " + std::to_string(r) +
                      " outside the Kottler chart (need r > 0, r^2 + eps > 0)");
  }
}

double static_potential_squared(const ReferenceSpace& space, double r) {
  space.require_radius(r);
  return r * r + space.epsilon();
}

double static_potential(const ReferenceSpace& space, double r) {
  return std::sqrt(static_potential_squared(space, r));
}

CurvatureSample warped_product_curvature(int dimension, int epsilon, double r,
                                         double w2, double dw2_dr) {
  // g = drho^2 + r(rho)^2 h with r' = W, r'' = W dW/dr = dw2/2.
  const double k = dimension - 1;
  const double accel = 0.5 * dw2_dr / r;  // r''/r
  const double tangential_sectional = (epsilon - w2) / (r * r);
  CurvatureSample out;
  out.r = r;
  out.ricci_radial = -k * accel;
  out.ricci_tangential = -accel + (k - 1.0) * tangential_sectional;
  out.scalar = out.ricci_radial + k * out.ricci_tangential;
  return out;
}

CurvatureSample curvature_tensors(const ReferenceSpace& space, double r) {
  const double v2 = static_potential_squared(space, r);
  return warped_product_curvature(space.dimension(), space.epsilon(), r, v2,
                                  2.0 * r);
}

StaticResidual static_equation_residual(const ReferenceSpace& space, double r) {
  const double v2 = static_potential_squared(space, r);
  const double v = std::sqrt(v2);
  const double n = space.dimension();
  // V as a function of the proper radial distance rho (d/drho = V d/dr).
  const double dv_dr = r / v;
  const double d2v_dr2 = space.epsilon() / (v2 * v);
  const double dw2_dr = 2.0 * r;
  const double hess_radial = 0.5 * dw2_dr * dv_dr + v2 * d2v_dr2;
  const double hess_tangential = v2 * dv_dr / r;
  const double laplacian = hess_radial + (n - 1.0) * hess_tangential;

  const auto ric = curvature_tensors(space, r);
  StaticResidual res;
  res.tensor = std::max(std::abs(laplacian - hess_radial + v * ric.ricci_radial),
                        std::abs(laplacian - hess_tangential + v * ric.ricci_tangential));
  res.laplace = std::abs(laplacian + space.cosmological_constant() * v);
  return res;
}

double ambient_sphere_mean_curvature(const ReferenceSpace& space, double r) {
  return (space.dimension() - 1) * static_potential(space, r) / r;
}

double slice_area(const ReferenceSpace& space, double r) {
  space.require_radius(r);
  return std::pow(r, space.dimension() - 1) * space.cross_section_volume();
}

}  // namespace staticmass
