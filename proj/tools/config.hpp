#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "staticmass/graph_manifold.hpp"
#include "staticmass/stability_analysis.hpp"

namespace staticmass::cli {

enum class FamilyKind { KottlerSchwarzschild, Constant, Tabulated };

struct SpaceConfig {
  int epsilon = 1;
  int n = 3;
  std::optional<double> cross_section_volume;
};

struct SweepConfig {
  std::vector<double> mus;
};

struct FamilyConfig {
  FamilyKind kind = FamilyKind::KottlerSchwarzschild;
  double r_outer = 2.0;
  std::optional<double> mu;
  std::optional<double> r_inner;  // constant graphs
  double height = 0.0;            // constant graphs
  std::optional<std::filesystem::path> profile;  // tabulated slope table
  SweepConfig sweep;
};

struct OutputConfig {
  std::filesystem::path directory = "staticmass-out";
  bool json = true;
  bool csv = true;
  bool svg = false;
};

struct ExperimentConfig {
  SpaceConfig space;
  FamilyConfig family;
  StabilityOptions stability;
  std::vector<std::string> checks;  // canonical names, declared order
  OutputConfig output;
  std::optional<double> tolerance;
  std::string source_text;          // normalised echo of the parsed config
};

/// Parses and validates a version-1 JSON configuration. Relative profile
/// paths are resolved against the config file's directory. Throws
/// ConfigError on malformed or unknown fields, IoError if unreadable.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text,
                              const std::filesystem::path& base_dir = {});

ReferenceSpace make_space(const ExperimentConfig& config);
GraphManifold make_graph(const ExperimentConfig& config);

/// Default mass-parameter sequence mu_i = 2^{-i}, i = 1..12.
std::vector<double> default_sweep();

/// STATICMASS_SEED, or 1 when unset. Throws ConfigError if malformed.
std::uint64_t seed_from_environment();

}  // namespace staticmass::cli
