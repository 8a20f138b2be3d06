#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "config.hpp"

namespace staticmass::cli {

struct CheckResult {
  std::string name;
  bool passed = false;
  /// Worst residual or margin observed; NaN when the check is boolean.
  double residual = 0.0;
  std::string detail;
};

class CheckContext {
 public:
  CheckContext(const ExperimentConfig& config, std::uint64_t seed);

  const ExperimentConfig& config() const { return config_; }
  const ReferenceSpace& space() const { return space_; }
  const GraphManifold& graph() const { return graph_; }
  std::uint64_t seed() const { return seed_; }
  /// Residual tolerance: the configured override or `fallback`.
  double tolerance(double fallback) const;
  /// Sweep over config.family.sweep, computed once.
  const SweepResult& sweep() const;

 private:
  ExperimentConfig config_;
  ReferenceSpace space_;
  GraphManifold graph_;
  std::uint64_t seed_;
  mutable std::optional<SweepResult> sweep_;
};

struct CheckInfo {
  std::string name;
  std::string alias;  // empty when none
  std::string description;
  std::function<CheckResult(const CheckContext&)> run;
};

/// Registered checks, alphabetised by canonical name.
const std::vector<CheckInfo>& check_registry();

/// Canonical name for a name or alias; throws ConfigError if unknown.
std::string canonical_check_name(const std::string& name);

/// Runs one check, converting library errors into a failed result.
CheckResult run_check(const std::string& name, const CheckContext& context);

/// Uniform doubles in [0, 1). std::mt19937_64 output is fixed by the
/// standard; the mapping to doubles is done here so draws do not depend on
/// the library's distribution implementation.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double next(double lo, double hi) { return lo + (hi - lo) * next(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace staticmass::cli
