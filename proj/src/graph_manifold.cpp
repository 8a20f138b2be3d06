#include "staticmass/graph_manifold.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "staticmass/errors.hpp"
#include "staticmass/numerics.hpp"

namespace staticmass {

namespace detail {

class SlopeModel {
 public:
  SlopeModel(ReferenceSpace space, double r_inner, double r_outer)
      : space_(std::move(space)), r_inner_(r_inner), r_outer_(r_outer) {}
  virtual ~SlopeModel() = default;

  virtual SlopeProfile::Kind kind() const = 0;
  virtual bool minimal_inner() const = 0;
  virtual double slope(double r) const = 0;
  virtual double slope_derivative(double r) const = 0;

  virtual double warp_squared(double r) const {
    const double s = slope(r);
    if (!std::isfinite(s)) return 0.0;
    return static_potential_squared(space_, r) / (1.0 + s * s);
  }
  virtual double warp_squared_derivative(double r) const {
    const double s = slope(r);
    if (!std::isfinite(s)) return std::numeric_limits<double>::infinity();
    const double q = 1.0 + s * s;
    const double v2 = static_potential_squared(space_, r);
    return 2.0 * r / q - 2.0 * v2 * s * slope_derivative(r) / (q * q);
  }
  virtual double tilt_fraction(double r) const {
    const double s = slope(r);
    if (!std::isfinite(s)) return 1.0;
    return s * s / (1.0 + s * s);
  }
  virtual std::vector<double> break_points() const { return {}; }
  virtual std::optional<double> mass_parameter() const { return std::nullopt; }
  virtual std::optional<double> inner_exponent() const { return std::nullopt; }

  const ReferenceSpace& space() const { return space_; }
  double r_inner() const { return r_inner_; }
  double r_outer() const { return r_outer_; }

 protected:
  ReferenceSpace space_;
  double r_inner_;
  double r_outer_;
};

namespace {

class ConstantModel final : public SlopeModel {
 public:
  using SlopeModel::SlopeModel;
  SlopeProfile::Kind kind() const override { return SlopeProfile::Kind::Constant; }
  bool minimal_inner() const override { return false; }
  double slope(double) const override { return 0.0; }
  double slope_derivative(double) const override { return 0.0; }
  double warp_squared(double r) const override {
    return static_potential_squared(space_, r);
  }
  double warp_squared_derivative(double r) const override { return 2.0 * r; }
  double tilt_fraction(double) const override { return 0.0; }
};

// W^2 = r^2 + eps - 2 mu(r) r^{2-n}; a constant mu is Kottler-Schwarzschild.
class MassFunctionModel final : public SlopeModel {
 public:
  MassFunctionModel(ReferenceSpace space, double r_inner, double r_outer,
                    std::function<double(double)> mu,
                    std::function<double(double)> mu_derivative,
                    std::optional<double> constant_mu)
      : SlopeModel(std::move(space), r_inner, r_outer),
        mu_(std::move(mu)),
        mu_derivative_(std::move(mu_derivative)),
        constant_mu_(constant_mu) {}

  SlopeProfile::Kind kind() const override {
    return constant_mu_ ? SlopeProfile::Kind::KottlerSchwarzschild
                        : SlopeProfile::Kind::Custom;
  }
  bool minimal_inner() const override { return true; }

  double mass_term(double r) const {
    return 2.0 * mu_(r) * std::pow(r, 2 - space_.dimension());
  }
  double mass_term_derivative(double r) const {
    const int n = space_.dimension();
    return 2.0 * mu_derivative_(r) * std::pow(r, 2 - n) +
           2.0 * (2 - n) * mu_(r) * std::pow(r, 1 - n);
  }

  double warp_squared(double r) const override {
    return std::max(0.0, static_potential_squared(space_, r) - mass_term(r));
  }
  double warp_squared_derivative(double r) const override {
    return 2.0 * r - mass_term_derivative(r);
  }
  double tilt_fraction(double r) const override {
    return std::min(1.0, mass_term(r) / static_potential_squared(space_, r));
  }
  double slope(double r) const override {
    const double w2 = warp_squared(r);
    if (!(w2 > 0.0)) return std::numeric_limits<double>::infinity();
    return std::sqrt(mass_term(r) / w2);
  }
  double slope_derivative(double r) const override {
    const double w2 = warp_squared(r);
    const double s = slope(r);
    if (!std::isfinite(s)) return -std::numeric_limits<double>::infinity();
    if (s == 0.0) return 0.0;
    const double p = mass_term(r);
    const double ds2 =
        (mass_term_derivative(r) * w2 - p * warp_squared_derivative(r)) / (w2 * w2);
    return ds2 / (2.0 * s);
  }
  std::optional<double> mass_parameter() const override { return constant_mu_; }
  std::optional<double> inner_exponent() const override { return 0.5; }

 private:
  std::function<double(double)> mu_;
  std::function<double(double)> mu_derivative_;
  std::optional<double> constant_mu_;
};

class AnalyticModel final : public SlopeModel {
 public:
  AnalyticModel(ReferenceSpace space, double r_inner, double r_outer,
                std::function<double(double)> slope,
                std::function<double(double)> slope_derivative, bool minimal)
      : SlopeModel(std::move(space), r_inner, r_outer),
        slope_(std::move(slope)),
        slope_derivative_(std::move(slope_derivative)),
        minimal_(minimal) {}
  SlopeProfile::Kind kind() const override { return SlopeProfile::Kind::Custom; }
  bool minimal_inner() const override { return minimal_; }
  double slope(double r) const override {
    if (minimal_ && r <= r_inner_) return std::numeric_limits<double>::infinity();
    return slope_(r);
  }
  double slope_derivative(double r) const override { return slope_derivative_(r); }

 private:
  std::function<double(double)> slope_;
  std::function<double(double)> slope_derivative_;
  bool minimal_;
};

class TabulatedModel final : public SlopeModel {
 public:
  TabulatedModel(ReferenceSpace space, std::vector<double> radii,
                 std::vector<double> slopes)
      : SlopeModel(std::move(space), radii.front(), radii.back()),
        r_(std::move(radii)),
        s_(std::move(slopes)) {
    minimal_ = !std::isfinite(s_.front());
    if (minimal_) {
      if (r_.size() < 3) {
        throw DomainError("a singular tabulated profile needs at least three samples");
      }
      const double d1 = r_[1] - r_[0];
      const double d2 = r_[2] - r_[0];
      if (!(s_[1] > s_[2]) || !(s_[2] > 0.0)) {
        throw DomainError("a singular tabulated profile must decrease away from the "
                          "inner boundary");
      }
      exponent_ = std::log(s_[1] / s_[2]) / std::log(d2 / d1);
    }
  }

  SlopeProfile::Kind kind() const override { return SlopeProfile::Kind::Custom; }
  bool minimal_inner() const override { return minimal_; }

  double slope(double r) const override {
    if (minimal_ && r < r_[1]) {
      if (r <= r_[0]) return std::numeric_limits<double>::infinity();
      return s_[1] * std::pow((r - r_[0]) / (r_[1] - r_[0]), -exponent_);
    }
    const std::size_t j = segment(r);
    const double t = (r - r_[j]) / (r_[j + 1] - r_[j]);
    return s_[j] + t * (s_[j + 1] - s_[j]);
  }
  double slope_derivative(double r) const override {
    if (minimal_ && r < r_[1]) {
      if (r <= r_[0]) return -std::numeric_limits<double>::infinity();
      return -exponent_ * slope(r) / (r - r_[0]);
    }
    const std::size_t j = segment(r);
    return (s_[j + 1] - s_[j]) / (r_[j + 1] - r_[j]);
  }
  std::vector<double> break_points() const override {
    return {r_.begin() + 1, r_.end() - 1};
  }
  std::optional<double> inner_exponent() const override {
    if (!minimal_) return std::nullopt;
    return exponent_;
  }

 private:
  std::size_t segment(double r) const {
    const auto it = std::upper_bound(r_.begin(), r_.end(), r);
    const auto j = static_cast<std::size_t>(std::max<std::ptrdiff_t>(
        0, std::distance(r_.begin(), it) - 1));
    return std::min(j, r_.size() - 2);
  }

  std::vector<double> r_;
  std::vector<double> s_;
  bool minimal_ = false;
  double exponent_ = 0.0;
};

void require_annulus(const ReferenceSpace& space, double r_inner, double r_outer) {
  if (!(r_inner >= space.r_min()) || !(r_outer > r_inner) || !std::isfinite(r_outer)) {
    throw DomainError("annulus must satisfy r_min <= r_inner < r_outer");
  }
  space.require_radius(r_inner);
}

}  // namespace
}  // namespace detail

// ---------------------------------------------------------------------------
// SlopeProfile

SlopeProfile::SlopeProfile(std::shared_ptr<const detail::SlopeModel> model)
    : model_(std::move(model)) {}

SlopeProfile SlopeProfile::constant(const ReferenceSpace& space, double r_inner,
                                    double r_outer) {
  detail::require_annulus(space, r_inner, r_outer);
  return SlopeProfile(
      std::make_shared<detail::ConstantModel>(space, r_inner, r_outer));
}

double horizon_radius(const ReferenceSpace& space,
                      const std::function<double(double)>& mu) {
  const int n = space.dimension();
  const auto lapse = [&](double r) {
    return r * r + space.epsilon() - 2.0 * mu(r) * std::pow(r, 2 - n);
  };
  double lo = space.epsilon() == -1 ? 1.0 : 1e-3;
  for (int k = 0; lapse(lo) >= 0.0; ++k) {
    if (space.epsilon() == -1 || k > 2000) {
      throw ConvergenceError("horizon: no inner point with negative lapse");
    }
    lo *= 0.5;
  }
  double hi = std::max(2.0 * lo, 1.0);
  for (int k = 0; lapse(hi) < 0.0; ++k) {
    if (k > 2000) throw ConvergenceError("horizon: lapse never becomes positive");
    hi *= 2.0;
  }
  // Keep lapse(lo) < 0 <= lapse(hi) and shrink to machine resolution.
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) return hi;
    if (lapse(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw ConvergenceError("horizon: bisection did not terminate");
}

double horizon_radius(const ReferenceSpace& space, double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw DomainError("mass parameter must be positive");
  }
  return horizon_radius(space, [mu](double) { return mu; });
}

SlopeProfile SlopeProfile::kottler_schwarzschild(const ReferenceSpace& space,
                                                 double mu, double r_outer) {
  const double r0 = horizon_radius(space, mu);
  if (!(r_outer > r0)) {
    throw DomainError("outer radius must exceed the horizon radius " +
                      std::to_string(r0));
  }
  return SlopeProfile(std::make_shared<detail::MassFunctionModel>(
      space, r0, r_outer, [mu](double) { return mu; }, [](double) { return 0.0; },
      mu));
}

SlopeProfile SlopeProfile::mass_function(const ReferenceSpace& space,
                                         std::function<double(double)> mu,
                                         std::function<double(double)> mu_derivative,
                                         double r_outer) {
  const double r0 = horizon_radius(space, mu);
  if (!(r_outer > r0)) {
    throw DomainError("outer radius must exceed the horizon radius");
  }
  auto model = std::make_shared<detail::MassFunctionModel>(
      space, r0, r_outer, std::move(mu), std::move(mu_derivative), std::nullopt);
  for (double r : numerics::linspace(r0, r_outer, 4097)) {
    if (r == r0) continue;
    if (!(model->warp_squared(r) > 0.0)) {
      throw ConstraintError("mass function produces a second horizon inside the annulus");
    }
  }
  return SlopeProfile(std::move(model));
}

SlopeProfile SlopeProfile::analytic(const ReferenceSpace& space,
                                    std::function<double(double)> slope,
                                    std::function<double(double)> slope_derivative,
                                    double r_inner, double r_outer,
                                    bool minimal_inner) {
  detail::require_annulus(space, r_inner, r_outer);
  return SlopeProfile(std::make_shared<detail::AnalyticModel>(
      space, r_inner, r_outer, std::move(slope), std::move(slope_derivative),
      minimal_inner));
}

SlopeProfile SlopeProfile::tabulated(const ReferenceSpace& space,
                                     std::vector<double> radii,
                                     std::vector<double> slopes) {
  if (radii.size() != slopes.size() || radii.size() < 2) {
    throw DomainError("tabulated profile needs at least two (r, s) rows");
  }
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (i > 0 && !(radii[i] > radii[i - 1])) {
      throw DomainError("tabulated radii must be strictly increasing");
    }
    const bool first = i == 0;
    if (std::isnan(slopes[i]) || slopes[i] < 0.0 ||
        (!first && !std::isfinite(slopes[i]))) {
      throw DomainError("tabulated slopes must be finite and non-negative "
                        "(only the first sample may be inf)");
    }
  }
  detail::require_annulus(space, radii.front(), radii.back());
  return SlopeProfile(std::make_shared<detail::TabulatedModel>(
      space, std::move(radii), std::move(slopes)));
}

SlopeProfile SlopeProfile::read_table(const ReferenceSpace& space,
                                      const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open profile table " + path.string());
  std::vector<double> radii, slopes;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a)) continue;
    if (!(fields >> b) || (fields >> extra)) {
      throw DomainError(path.string() + ":" + std::to_string(line_no) +
                        ": expected two columns");
    }
    try {
      radii.push_back(std::stod(a));
      slopes.push_back(std::stod(b));
    } catch (const std::exception&) {
      throw DomainError(path.string() + ":" + std::to_string(line_no) +
                        ": not a number");
    }
  }
  return tabulated(space, std::move(radii), std::move(slopes));
}

SlopeProfile::Kind SlopeProfile::kind() const { return model_->kind(); }
double SlopeProfile::r_inner() const { return model_->r_inner(); }
double SlopeProfile::r_outer() const { return model_->r_outer(); }
bool SlopeProfile::minimal_inner_boundary() const { return model_->minimal_inner(); }
std::optional<double> SlopeProfile::mass_parameter() const {
  return model_->mass_parameter();
}
double SlopeProfile::slope(double r) const { return model_->slope(r); }
double SlopeProfile::slope_derivative(double r) const {
  return model_->slope_derivative(r);
}
double SlopeProfile::warp_squared(double r) const { return model_->warp_squared(r); }
double SlopeProfile::warp_squared_derivative(double r) const {
  return model_->warp_squared_derivative(r);
}
double SlopeProfile::tilt_fraction(double r) const { return model_->tilt_fraction(r); }
std::vector<double> SlopeProfile::break_points() const { return model_->break_points(); }
std::optional<double> SlopeProfile::inner_singularity_exponent() const {
  return model_->inner_exponent();
}

// ---------------------------------------------------------------------------
// GraphManifold

namespace {

constexpr numerics::QuadratureOptions kHeightQuadrature{1e-14, 1e-12, 4000};
constexpr numerics::QuadratureOptions kVolumeQuadrature{1e-12, 1e-11, 4000};

// s(r_inner + u^2). Below u^2 = 1e-10 r_inner the radius no longer resolves
// the horizon offset, so the slope follows its leading power law instead.
double slope_in_u(const SlopeProfile& p, double u) {
  const double r0 = p.r_inner();
  const double delta = 1e-10 * std::max(1.0, r0);
  if (!p.minimal_inner_boundary() || u * u >= delta) return p.slope(r0 + u * u);
  const double a = p.inner_singularity_exponent().value_or(0.5);
  return p.slope(r0 + delta) * std::pow(u * u / delta, -a);
}

}  // namespace

GraphManifold::GraphManifold(ReferenceSpace space, SlopeProfile profile,
                             double base_height, int grid_intervals)
    : space_(std::move(space)), profile_(std::move(profile)) {
  if (grid_intervals < 8) throw DomainError("height grid too coarse");
  if (const auto a = profile_.inner_singularity_exponent(); a && *a >= 1.0) {
    throw DivergenceError("slope blows up like (r - r_inner)^-" + std::to_string(*a) +
                          "; the height function has infinite range");
  }

  const double u_max = std::sqrt(r_outer() - r_inner());
  nodes_u_ = numerics::linspace(0.0, u_max, static_cast<std::size_t>(grid_intervals) + 1);
  for (double rb : profile_.break_points()) nodes_u_.push_back(u_of(rb));
  std::sort(nodes_u_.begin(), nodes_u_.end());
  nodes_u_.erase(std::unique(nodes_u_.begin(), nodes_u_.end()), nodes_u_.end());

  radii_.resize(nodes_u_.size());
  heights_.resize(nodes_u_.size());
  heights_[0] = base_height;
  radii_[0] = r_inner();
  try {
    for (std::size_t j = 1; j < nodes_u_.size(); ++j) {
      radii_[j] = r_of(nodes_u_[j]);
      heights_[j] = heights_[j - 1] + height_increment(nodes_u_[j - 1], nodes_u_[j]);
    }
  } catch (const ConvergenceError&) {
    throw DivergenceError("height integral does not converge near the inner boundary");
  }
  radii_.back() = r_outer();
  if (!std::isfinite(heights_.back())) {
    throw DivergenceError("height function has infinite range");
  }

  // Sampled certification of the structural hypotheses.
  const int n = space_.dimension();
  const double bound = -static_cast<double>(n) * (n - 1);
  scalar_bound_ok_ = true;
  mean_convex_ = true;
  outer_minimizing_ = true;
  double previous_area = 0.0;
  constexpr int kSamples = 512;
  for (int k = 0; k < kSamples; ++k) {
    const double r = r_of(u_max * (k + 0.5) / kSamples);
    const double scalar = graph_scalar_curvature(*this, r);
    if (!(scalar >= bound - 1e-8 * std::abs(bound))) scalar_bound_ok_ = false;
    if (!(profile_.warp_squared(r) > 0.0)) mean_convex_ = false;
    const double area = slice_area(space_, r);
    if (!(area > previous_area)) outer_minimizing_ = false;
    previous_area = area;
  }
  satisfies_definition_ = profile_.minimal_inner_boundary() && mean_convex_ &&
                          outer_minimizing_ && std::isfinite(max_height());
}

double GraphManifold::u_of(double r) const {
  return std::sqrt(std::max(0.0, r - r_inner()));
}

double GraphManifold::r_of(double u) const { return r_inner() + u * u; }

double GraphManifold::height_increment(double u_lo, double u_hi) const {
  if (profile_.kind() == SlopeProfile::Kind::Constant || u_hi <= u_lo) return 0.0;
  // f' = s / V^2 in r; with r = r_inner + u^2 the endpoint blow-up of s is
  // absorbed by the Jacobian 2u.
  const auto integrand = [this](double u) {
    return 2.0 * u * slope_in_u(profile_, u) / static_potential_squared(space_, r_of(u));
  };
  return numerics::integrate(integrand, u_lo, u_hi, kHeightQuadrature).value;
}

double GraphManifold::height(double r) const {
  if (!(r >= r_inner() - 1e-14 * std::abs(r_inner())) ||
      !(r <= r_outer() + 1e-14 * std::abs(r_outer()))) {
    throw DomainError("height: radius outside the annulus");
  }
  const double u = std::min(u_of(r), nodes_u_.back());
  const auto it = std::upper_bound(nodes_u_.begin(), nodes_u_.end(), u);
  const auto j = static_cast<std::size_t>(std::distance(nodes_u_.begin(), it)) - 1;
  if (j + 1 >= nodes_u_.size()) return heights_.back();
  return heights_[j] + height_increment(nodes_u_[j], u);
}

double GraphManifold::radius_at_height(double h) const {
  const double scale = std::max(1.0, std::abs(max_height()));
  if (!(h >= min_height() - 1e-12 * scale) || !(h <= max_height() + 1e-12 * scale)) {
    throw DomainError("height outside [min f, max f]");
  }
  // Last node with F <= h.
  const auto it = std::upper_bound(heights_.begin(), heights_.end(), h);
  if (it == heights_.end()) return r_outer();
  if (it == heights_.begin()) return r_inner();
  const auto j = static_cast<std::size_t>(std::distance(heights_.begin(), it)) - 1;
  double lo = nodes_u_[j];
  double hi = nodes_u_[j + 1];
  for (int iter = 0; iter < 200 && r_of(hi) - r_of(lo) > 1e-12; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (heights_[j] + height_increment(nodes_u_[j], mid) <= h) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return r_of(0.5 * (lo + hi));
}

bool GraphManifold::is_rigidity_reference() const {
  return profile_.kind() == SlopeProfile::Kind::Constant;
}

GraphManifold build_constant_graph(const ReferenceSpace& space, double r_inner,
                                   double r_outer, double height) {
  return GraphManifold(space, SlopeProfile::constant(space, r_inner, r_outer), height);
}

GraphManifold build_kottler_schwarzschild_graph(const ReferenceSpace& space,
                                                double mu, double r_outer) {
  return GraphManifold(space, SlopeProfile::kottler_schwarzschild(space, mu, r_outer));
}

HeightTable recover_height(const GraphManifold& graph) {
  return {graph.node_radii(), graph.node_heights()};
}

LevelSetData level_set_at_radius(const GraphManifold& graph, double r) {
  if (!(r >= graph.r_inner()) || !(r <= graph.r_outer())) {
    throw DomainError("level set radius outside the annulus");
  }
  if (graph.profile().minimal_inner_boundary() && r <= graph.r_inner()) {
    throw SingularValueError("the minimal inner boundary is not a regular level set");
  }
  const auto& space = graph.space();
  LevelSetData out;
  out.radius = r;
  out.height = graph.height(r);
  out.area = slice_area(space, r);
  out.ambient_mean_curvature = ambient_sphere_mean_curvature(space, r);
  out.slope = graph.profile().slope(r);
  const double tilt =
      std::sqrt(graph.profile().warp_squared(r) / static_potential_squared(space, r));
  out.mean_curvature = out.ambient_mean_curvature * tilt;
  return out;
}

LevelSetData level_set(const GraphManifold& graph, double h) {
  const double r = graph.radius_at_height(h);
  if (graph.profile().minimal_inner_boundary() && r <= graph.r_inner() + 1e-12) {
    throw SingularValueError("height at the minimal inner boundary is not regular");
  }
  auto data = level_set_at_radius(graph, r);
  data.height = h;
  return data;
}

double graph_scalar_curvature(const GraphManifold& graph, double r) {
  if (!(r > graph.r_inner()) || !(r <= graph.r_outer())) {
    throw DomainError("scalar curvature: need r_inner < r <= r_outer");
  }
  const auto& p = graph.profile();
  return warped_product_curvature(graph.space().dimension(), graph.space().epsilon(),
                                  r, p.warp_squared(r), p.warp_squared_derivative(r))
      .scalar;
}

namespace {

// Fourth-order first derivative; central when possible, backward at the
// outer edge.
double fd_derivative(const std::function<double(double)>& fn, double x, double step,
                     bool backward) {
  if (!backward) {
    return (-fn(x + 2 * step) + 8 * fn(x + step) - 8 * fn(x - step) +
            fn(x - 2 * step)) /
           (12 * step);
  }
  return (25 * fn(x) - 48 * fn(x - step) + 36 * fn(x - 2 * step) -
          16 * fn(x - 3 * step) + 3 * fn(x - 4 * step)) /
         (12 * step);
}

}  // namespace

double embedding_mean_curvature_fd(const GraphManifold& graph, double r) {
  if (!(r > graph.r_inner()) || !(r <= graph.r_outer())) {
    throw DomainError("embedding mean curvature: need r_inner < r <= r_outer");
  }
  const auto& space = graph.space();
  const double step = std::min(1e-3 * r, 0.02 * (r - graph.r_inner()));
  const bool backward = r + 2 * step > graph.r_outer();
  const auto f = [&](double x) { return graph.height(x); };
  const auto log_area = [&](double x) { return std::log(slice_area(space, x)); };
  const double df = fd_derivative(f, r, step, backward);
  const double dlog_area = fd_derivative(log_area, r, step, backward);
  const double v2 = static_potential_squared(space, r);
  const double g_rr = 1.0 / v2 + v2 * df * df;
  return dlog_area / std::sqrt(g_rr);
}

double graph_volume(const GraphManifold& graph) {
  const auto& space = graph.space();
  const auto& p = graph.profile();
  const double r0 = graph.r_inner();
  const int n = space.dimension();
  // sqrt(1 + s^2) r^{n-1} / V, integrated in u = sqrt(r - r0).
  const auto integrand = [&](double u) {
    const double r = r0 + u * u;
    return 2.0 * u * std::hypot(1.0, slope_in_u(p, u)) * std::pow(r, n - 1) /
           static_potential(space, r);
  };
  std::vector<double> breaks{0.0};
  for (double rb : p.break_points()) breaks.push_back(std::sqrt(rb - r0));
  breaks.push_back(std::sqrt(graph.r_outer() - r0));
  try {
    return space.cross_section_volume() *
           numerics::integrate_piecewise(integrand, breaks, kVolumeQuadrature).value;
  } catch (const ConvergenceError&) {
    throw DivergenceError("graph volume integral does not converge");
  }
}

double base_volume_between(const ReferenceSpace& space, double r_a, double r_b) {
  if (r_b <= r_a) return 0.0;
  space.require_radius(r_a);
  const int n = space.dimension();
  const auto integrand = [&](double u) {
    const double r = r_a + u * u;
    return 2.0 * u * std::pow(r, n - 1) / static_potential(space, r);
  };
  return space.cross_section_volume() *
         numerics::integrate(integrand, 0.0, std::sqrt(r_b - r_a), kVolumeQuadrature)
             .value;
}

double base_volume(const GraphManifold& graph) {
  return base_volume_between(graph.space(), graph.r_inner(), graph.r_outer());
}

}  // namespace staticmass
