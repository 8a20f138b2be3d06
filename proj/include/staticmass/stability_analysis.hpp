#pragma once

#include <optional>
#include <string>
#include <vector>

#include "staticmass/graph_manifold.hpp"

namespace staticmass {

/// Measure used for vertical (t-direction) extents when computing masses of
/// the comparison regions. Product: dt^2 + b. Static: V^2 dt^2 + b.
enum class MassMeasure { Product, Static };

std::string to_string(MassMeasure measure);
MassMeasure parse_mass_measure(const std::string& text);

struct StabilityOptions {
  double xi = 1.0;
  MassMeasure measure = MassMeasure::Product;
  double ode_rel_tol = 1e-8;
  /// Radial samples for the isoperimetric ratio sup.
  int isoperimetric_samples = 512;
};

struct StabilityConstants {
  double xi = 1.0;
  double mass = 0.0;
  double n_eps = 0.0;
  double c_eps = 0.0;
  /// 3 sqrt(3) 2^{(1-n_eps)/n_eps} / (2 (n-1) n_eps c_eps^{1/n_eps})
  double dne = 0.0;
  /// sup_h vol(U_h) / (|Sigma_o| + V(h))^{n/(n-1)} over the radial grid.
  double ciso = 0.0;
  /// 2 (1+xi)^{1/n_eps} A (2m/c_eps)^{1/n_eps}
  double threshold_area = 0.0;
  /// 4 (n-1) A m / (3 sqrt 3)
  double growth_coefficient = 0.0;
};

/// Throws PreconditionError if m <= 0 or xi < 1, ConstraintError for an
/// inadmissible eps = -1 inner radius.
StabilityConstants stability_constants(const GraphManifold& graph,
                                       const StabilityOptions& options = {});

/// Level-set area as a function of height, A r(h)^{n-1}.
double level_area(const GraphManifold& graph, double h);

/// sup{h : V(h) <= threshold}; min f when no level set is that small.
double critical_height(const GraphManifold& graph, const StabilityConstants& constants);

/// V'(h) - K p(V(h))^{3/2} with V'(h) = int H_ring / |Df| dA.
/// Throws PreconditionError if V(h) is below A (2m/c)^{1/n_eps}.
double volume_growth_residual(const GraphManifold& graph,
                              const StabilityConstants& constants, double h);

/// p(Y) = (c/(2m)) (Y/A)^{n_eps} - 1.
double comparison_p(const GraphManifold& graph, const StabilityConstants& constants,
                    double y);

struct ComparisonProfile {
  std::vector<double> heights;
  std::vector<double> y;
  std::vector<double> volume;  // level-set area at each height
  std::vector<double> p;
  bool dominated = false;      // V >= Y (1 - 1e-8) everywhere
  bool p_non_decreasing = false;
};

/// Integrates Y' = K p(Y)^{3/2}, Y(h_o) = threshold on [h_o, max f] and
/// samples it on `samples` equally spaced heights. Throws PreconditionError
/// if h_o = max f.
ComparisonProfile comparison_profile(const GraphManifold& graph,
                                     const StabilityConstants& constants,
                                     int samples = 200, double ode_rel_tol = 1e-8);

struct HeightBound {
  double gap = 0.0;  // max f - h_o
  double rhs = 0.0;
  double cne = 0.0;  // rhs = cne * m^{1/2} or cne * m^{1/(n-2)}
  bool logarithmic = false;
  bool holds = false;
};

HeightBound height_bound_check(const GraphManifold& graph,
                               const StabilityConstants& constants,
                               double ode_rel_tol = 1e-8);

struct VolumeEstimate {
  double lhs = 0.0;  // vol(Omega) - vol(U \ U_o)
  double rhs = 0.0;
  double vol_omega = 0.0;
  double vol_base = 0.0;
  double vmax = 0.0;  // max_{h <= h_o} V
  bool holds = false;
};

VolumeEstimate volume_estimate_check(const GraphManifold& graph,
                                     const StabilityConstants& constants,
                                     double ode_rel_tol = 1e-8);

struct FlatDecomposition {
  MassMeasure measure = MassMeasure::Product;
  double mass_a_plus = 0.0;
  double mass_a_minus = 0.0;
  double mass_b_plus = 0.0;
  double mass_b_minus = 0.0;
  double flat_bound = 0.0;
  /// Sum of the proof-level upper bounds of the four masses.
  double proof_bound = 0.0;
  double gamma_theory = 0.0;
  bool holds = false;
};

/// Masses of the regions between the graph and the slice {h_o} x (U \ U_o).
FlatDecomposition flat_distance_decomposition(const GraphManifold& graph,
                                              const StabilityConstants& constants,
                                              MassMeasure measure = MassMeasure::Product,
                                              double ode_rel_tol = 1e-8);

/// Exponent of m in the assembled flat-distance bound.
double gamma_theory(int epsilon, int dimension);

struct StabilityReport {
  StabilityConstants constants;
  double h_o = 0.0;
  double height_gap = 0.0;
  double height_bound_rhs = 0.0;
  double vol_omega = 0.0;
  double vol_base = 0.0;
  double vol_estimate_rhs = 0.0;
  double vmax = 0.0;
  FlatDecomposition flat;        // selected measure
  FlatDecomposition flat_other;  // the other measure, side by side
  double flat_distance_bound = 0.0;
  std::optional<double> gamma;
};

StabilityReport analyze_stability(const GraphManifold& graph,
                                  const StabilityOptions& options = {});

std::string to_json(const StabilityReport& report);

struct SweepRow {
  int index = 0;
  double mu = 0.0;
  double mass = 0.0;
  double h_o = 0.0;
  double height_gap = 0.0;
  double vol_gap = 0.0;
  double mass_a_plus = 0.0;
  double mass_a_minus = 0.0;
  double mass_b_plus = 0.0;
  double mass_b_minus = 0.0;
  double flat_bound = 0.0;
  /// vol(Omega_i) minus the base volume of the limiting annulus [r0(mu_last), R].
  double vol_gap_fixed = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double gamma_fit = 0.0;
  /// Intercept of the fitted line log d = gamma_fit log m + fit_intercept.
  double fit_intercept = 0.0;
  double gamma_theory = 0.0;
};

/// Kottler-Schwarzschild family over [r0(mu_i), r_outer], translated so the
/// h_o-slice sits at t = 0. gamma_fit is the log-log slope of flat_bound
/// against mass over the last five rows. Throws ConstraintError unless the
/// mu_i are positive, strictly decreasing and admissible.
SweepResult convergence_experiment(const ReferenceSpace& space, double r_outer,
                                   const std::vector<double>& mus,
                                   const StabilityOptions& options = {});

/// Header line plus one row per sweep point, LF line endings.
std::string to_csv(const SweepResult& sweep);

}  // namespace staticmass
