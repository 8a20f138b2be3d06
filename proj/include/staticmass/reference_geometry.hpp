#pragma once

#include <optional>

namespace staticmass {

/// Kottler reference space (M_eps, b_eps) with
///   b_eps = V^{-2} dr^2 + r^2 h_eps,   V = sqrt(r^2 + eps),
/// where h_eps is an (n-1)-dimensional space form of sectional curvature eps
/// (round sphere, flat torus, or compact hyperbolic surface/manifold).
/// Cross-sections are never meshed; only their volume and Ricci curvature
/// enter the formulas.
class ReferenceSpace {
 public:
  /// eps in {+1, 0, -1}, dimension n >= 3. The cross-section volume is fixed
  /// to the round unit-sphere volume for eps = +1 and defaults to 1 (eps = 0)
  /// or 4*pi (eps = -1) otherwise. Throws DomainError on invalid input.
  ReferenceSpace(int epsilon, int dimension,
                 std::optional<double> cross_section_volume = std::nullopt,
                 std::optional<double> r_min = std::nullopt);

  int epsilon() const { return epsilon_; }
  int dimension() const { return dimension_; }
  double cross_section_volume() const { return cross_section_volume_; }
  /// Least radius accepted when building graphs.
  double r_min() const { return r_min_; }
  /// Cosmological constant for which V solves Delta V + Lambda V = 0.
  double cosmological_constant() const { return -static_cast<double>(dimension_); }

  /// Throws DomainError unless r > 0 and r^2 + eps > 0.
  void require_radius(double r) const;

 private:
  int epsilon_;
  int dimension_;
  double cross_section_volume_;
  double r_min_;
};

/// Volume of the round unit sphere S^{k}.
double unit_sphere_volume(int k);

/// Orthonormal-frame Ricci components and scalar curvature at radius r.
struct CurvatureSample {
  double r = 0.0;
  double ricci_radial = 0.0;
  double ricci_tangential = 0.0;
  double scalar = 0.0;
};

struct StaticResidual {
  double tensor = 0.0;   // max |(Delta V) b - Hess V + V Ric| over frame components
  double laplace = 0.0;  // |Delta V + Lambda V|
};

/// Curvature of the warped product  A(r) dr^2 + r^2 h_eps  written through the
/// radial warp w2 = 1/A = (dr/drho)^2 and its r-derivative.
CurvatureSample warped_product_curvature(int dimension, int epsilon, double r,
                                         double w2, double dw2_dr);

double static_potential(const ReferenceSpace& space, double r);
double static_potential_squared(const ReferenceSpace& space, double r);
CurvatureSample curvature_tensors(const ReferenceSpace& space, double r);
StaticResidual static_equation_residual(const ReferenceSpace& space, double r);
/// Mean curvature (n-1) V / r of the r-slice with respect to the outward normal.
double ambient_sphere_mean_curvature(const ReferenceSpace& space, double r);
/// r^{n-1} times the cross-section volume.
double slice_area(const ReferenceSpace& space, double r);

}  // namespace staticmass
