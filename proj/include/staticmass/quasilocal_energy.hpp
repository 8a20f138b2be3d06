#pragma once

#include <optional>
#include <string>

#include "staticmass/graph_manifold.hpp"

namespace staticmass {

/// Constants of the quasi-local Penrose inequality
///   m >= (c_eps / 2) (|Sigma_o| / A)^{n_eps}.
struct PenroseConstants {
  double c_eps = 0.0;
  double n_eps = 0.0;
  /// For eps = -1 the constant c_{-1} = sqrt(r0^2 - 1) r0^{(n-3)/2} only
  /// bounds the Minkowski functional when r0^2 - 1 >= 1; smaller horizons are
  /// outside the admissible family.
  bool admissible = true;
};

/// c_eps and n_eps for inner radius r0 (the largest r-slice inside U_o).
PenroseConstants penrose_constants(const ReferenceSpace& space, double r0);

/// Least horizon radius for which the eps = -1 constant is admissible.
inline constexpr double kHyperbolicAdmissibleHorizon = 1.4142135623730951;

/// Static Brown-York energy (1/((n-1)A)) int_Sigma V (H_0 - H) dA of the
/// level set through radius r (the outer boundary by default). For r-slices
/// the isometric embedding into the reference is the slice itself, so
/// H_0 is the ambient mean curvature.
double brown_york_energy(const GraphManifold& graph);
double brown_york_energy_at(const GraphManifold& graph, double r);

/// int_{Sigma_r} V s^2/(1+s^2) H_ring dA, the boundary term of the
/// divergence identity.
double boundary_functional(const GraphManifold& graph, double r);

/// (1/(2(n-1)A)) int_Sigma V s^2/(1+s^2) H_ring dA on the outer boundary.
double energy_lower_bound(const GraphManifold& graph);
double energy_lower_bound_at(const GraphManifold& graph, double r);

struct DivergenceIdentity {
  double volume_side = 0.0;    // int V (R(g) + n(n-1)) / sqrt(1+s^2) dV_g
  double boundary_side = 0.0;  // [boundary_functional] between the two level sets
  double residual = 0.0;
};

/// Both sides of the divergence identity between regular values h1 < h2.
/// The volume side is a quadrature of the scalar curvature excess, the
/// boundary side is the difference of two pointwise slice evaluations.
DivergenceIdentity divergence_identity(const GraphManifold& graph, double h1,
                                       double h2);
double divergence_identity_residual(const GraphManifold& graph, double h1, double h2);
/// Same identity between the level sets through radii r1 <= r2. Needed for
/// graphs whose level sets are not separated by height (constant graphs).
DivergenceIdentity divergence_identity_radii(const GraphManifold& graph, double r1,
                                             double r2);

struct MinkowskiCheck {
  double functional = 0.0;       // int V H_ring dA
  double weighted_bound = 0.0;   // (n-1)A [x^{n/(n-1)} + eps x^{(n-2)/(n-1)}], x = |S|/A
  double unweighted_integral = 0.0;  // int H_ring dA
  double unweighted_bound = 0.0;     // (n-1) |S|  (kappa = 1)
  /// Strict unweighted inequality, evaluated for eps = +1 only.
  std::optional<bool> unweighted_strict;
  bool weighted_holds = false;
};

MinkowskiCheck minkowski_check(const ReferenceSpace& space, double r);

struct PenroseReport {
  double mass = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  PenroseConstants constants;
};

/// m_BY(Sigma) - (c_eps/2)(|Sigma_o|/A)^{n_eps}. Throws PreconditionError if
/// the inner boundary is not minimal.
PenroseReport penrose_gap(const GraphManifold& graph);

/// Limit of boundary_functional as the level set approaches a minimal
/// inner boundary: int_{Sigma_o} V H_ring dA.
double inner_minkowski_functional(const GraphManifold& graph);

struct EnergyReport {
  double mass = 0.0;
  double lower_bound = 0.0;
  double minkowski_functional = 0.0;
  std::optional<double> penrose_rhs;
  double divergence_residual = 0.0;
  std::optional<double> c_eps;
  std::optional<double> n_eps;
};

/// Collects the energy quantities of the outer boundary. The divergence
/// residual is taken between the level sets through the quarter radius and
/// the outer boundary.
EnergyReport energy_report(const GraphManifold& graph);

/// Flat JSON record with the fixed field order
/// mass, lower_bound, minkowski_functional, penrose_rhs,
/// divergence_residual, c_eps, n_eps.
std::string to_json(const EnergyReport& report);

}  // namespace staticmass
