#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "staticmass/reference_geometry.hpp"

namespace staticmass {

namespace detail {
class SlopeModel;
}

/// Rotationally symmetric slope profile s(r) = V |Df| of a graph t = f(r)
/// over the annulus [r_inner, r_outer] of a Kottler space.
///
/// Besides s itself every profile exposes the squared radial warp
///   W^2 = V^2 / (1 + s^2),
/// which is the inverse of g_rr for the induced metric. For the
/// Kottler-Schwarzschild and mass-function families W^2 is evaluated in
/// closed form, which keeps the horizon region free of cancellation.
class SlopeProfile {
 public:
  enum class Kind { Constant, KottlerSchwarzschild, Custom };

  /// s = 0 on [r_inner, r_outer].
  static SlopeProfile constant(const ReferenceSpace& space, double r_inner,
                               double r_outer);

  /// s^2 = 2 mu r^{2-n} / (r^2 + eps - 2 mu r^{2-n}); r_inner is the horizon.
  static SlopeProfile kottler_schwarzschild(const ReferenceSpace& space,
                                            double mu, double r_outer);

  /// Generalised Kottler-Schwarzschild profile with a radius-dependent mass
  /// function: W^2 = r^2 + eps - 2 mu(r) r^{2-n}. A non-decreasing mu gives
  /// scalar curvature >= -n(n-1). Reported as Kind::Custom.
  static SlopeProfile mass_function(const ReferenceSpace& space,
                                    std::function<double(double)> mu,
                                    std::function<double(double)> mu_derivative,
                                    double r_outer);

  /// Closed-form custom profile. `minimal_inner` declares s -> inf at r_inner.
  static SlopeProfile analytic(const ReferenceSpace& space,
                               std::function<double(double)> slope,
                               std::function<double(double)> slope_derivative,
                               double r_inner, double r_outer,
                               bool minimal_inner = false);

  /// Tabulated (r, s) samples, strictly increasing r, linear interpolation.
  /// A non-finite first sample marks a minimal inner boundary; the first
  /// interval is then extended by the power law fitted through the next two
  /// samples.
  static SlopeProfile tabulated(const ReferenceSpace& space,
                                std::vector<double> radii,
                                std::vector<double> slopes);

  /// Two-column whitespace/comma separated text table; '#' starts a comment.
  static SlopeProfile read_table(const ReferenceSpace& space,
                                 const std::filesystem::path& path);

  Kind kind() const;
  double r_inner() const;
  double r_outer() const;
  bool minimal_inner_boundary() const;
  /// Mass parameter of the Kottler-Schwarzschild family; nullopt otherwise.
  std::optional<double> mass_parameter() const;

  double slope(double r) const;
  double slope_derivative(double r) const;
  double warp_squared(double r) const;
  double warp_squared_derivative(double r) const;
  /// s^2 / (1 + s^2), i.e. 1 - W^2/V^2.
  double tilt_fraction(double r) const;
  /// Interior radii where the profile is only piecewise smooth.
  std::vector<double> break_points() const;
  /// Exponent a of s ~ (r - r_inner)^{-a} at a minimal inner boundary when
  /// it is known (tabulated profiles); 1/2 for the closed-form families.
  std::optional<double> inner_singularity_exponent() const;

 private:
  explicit SlopeProfile(std::shared_ptr<const detail::SlopeModel> model);
  std::shared_ptr<const detail::SlopeModel> model_;
};

/// Horizon radius: root of r^2 + eps - 2 mu(r) r^{2-n} = 0, found by bisection.
/// Returns the smallest bracketing radius at which the expression is >= 0.
double horizon_radius(const ReferenceSpace& space,
                      const std::function<double(double)>& mu);
double horizon_radius(const ReferenceSpace& space, double mu);

struct HeightTable {
  std::vector<double> radii;
  std::vector<double> heights;
};

struct LevelSetData {
  double height = 0.0;
  double radius = 0.0;
  double area = 0.0;                    // r^{n-1} times the cross-section volume
  double ambient_mean_curvature = 0.0;  // in (M_eps, b_eps)
  double mean_curvature = 0.0;          // in (Omega, g)
  double slope = 0.0;
};

/// Graph t = f(r) over [r_inner, r_outer] inside (R x M_eps, V^2 dt^2 + b_eps).
/// Immutable after construction; the height function is tabulated on a grid
/// uniform in u = sqrt(r - r_inner) and refined by local quadrature on demand.
class GraphManifold {
 public:
  static constexpr int kDefaultGridIntervals = 2048;

  /// Throws DivergenceError if the height integral does not converge.
  GraphManifold(ReferenceSpace space, SlopeProfile profile,
                double base_height = 0.0,
                int grid_intervals = kDefaultGridIntervals);

  const ReferenceSpace& space() const { return space_; }
  const SlopeProfile& profile() const { return profile_; }
  double r_inner() const { return profile_.r_inner(); }
  double r_outer() const { return profile_.r_outer(); }

  double min_height() const { return heights_.front(); }
  double max_height() const { return heights_.back(); }

  /// f(r) for r in [r_inner, r_outer].
  double height(double r) const;
  /// Monotone inversion h -> r by bisection (to 1e-12 in r). For a flat
  /// stretch of f the outermost radius is returned.
  double radius_at_height(double h) const;

  const std::vector<double>& node_radii() const { return radii_; }
  const std::vector<double>& node_heights() const { return heights_; }

  /// Rigidity reference (constant graph).
  bool is_rigidity_reference() const;
  bool satisfies_definition() const { return satisfies_definition_; }
  bool scalar_curvature_bound_ok() const { return scalar_bound_ok_; }
  bool outer_minimizing() const { return outer_minimizing_; }
  bool mean_convex() const { return mean_convex_; }

 private:
  double u_of(double r) const;
  double r_of(double u) const;
  double height_increment(double u_lo, double u_hi) const;

  ReferenceSpace space_;
  SlopeProfile profile_;
  std::vector<double> nodes_u_;
  std::vector<double> radii_;
  std::vector<double> heights_;
  bool satisfies_definition_ = false;
  bool scalar_bound_ok_ = false;
  bool outer_minimizing_ = false;
  bool mean_convex_ = false;
};

GraphManifold build_constant_graph(const ReferenceSpace& space, double r_inner,
                                   double r_outer, double height);
GraphManifold build_kottler_schwarzschild_graph(const ReferenceSpace& space,
                                                double mu, double r_outer);

HeightTable recover_height(const GraphManifold& graph);
LevelSetData level_set(const GraphManifold& graph, double h);
LevelSetData level_set_at_radius(const GraphManifold& graph, double r);

/// Scalar curvature of g = V^{-2}(1 + s^2) dr^2 + r^2 h_eps.
double graph_scalar_curvature(const GraphManifold& graph, double r);

/// Mean curvature of the level set through r recomputed from the embedding:
/// the induced g_rr = V^{-2} + V^2 f'^2 with f' and the area growth taken by
/// finite differences of the recovered height function.
double embedding_mean_curvature_fd(const GraphManifold& graph, double r);

/// vol(Omega) = A * int sqrt(1 + s^2) r^{n-1} / V dr.
double graph_volume(const GraphManifold& graph);
/// vol(closure(U) \ U_o) = A * int r^{n-1} / V dr over the whole annulus.
double base_volume(const GraphManifold& graph);
/// Base volume of the sub-annulus [r_a, r_b].
double base_volume_between(const ReferenceSpace& space, double r_a, double r_b);

}  // namespace staticmass
