#include "config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "checks.hpp"
#include "staticmass/errors.hpp"

namespace staticmass::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw ConfigError("unknown field '" + item.key() + "' in " + where);
    }
  }
}

double number(const json& obj, const std::string& key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + "." + key + " must be finite");
  return x;
}

int integer(const json& obj, const std::string& key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
  return v.get<int>();
}

std::string text(const json& obj, const std::string& key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + " must be a string");
  return v.get<std::string>();
}

SpaceConfig parse_space(const json& j) {
  reject_unknown(j, "space", {"epsilon", "n", "crossSectionVolume"});
  SpaceConfig out;
  if (!j.contains("epsilon") || !j.contains("n")) {
    throw ConfigError("space needs epsilon and n");
  }
  out.epsilon = integer(j, "epsilon", "space");
  out.n = integer(j, "n", "space");
  if (out.epsilon < -1 || out.epsilon > 1) throw ConfigError("space.epsilon must be -1, 0 or 1");
  if (out.n < 3) throw ConfigError("space.n must be >= 3");
  if (j.contains("crossSectionVolume")) {
    const double a = number(j, "crossSectionVolume", "space");
    if (!(a > 0.0)) throw ConfigError("space.crossSectionVolume must be positive");
    out.cross_section_volume = a;
  }
  return out;
}

SweepConfig parse_sweep(const json& j) {
  reject_unknown(j, "family.sweep", {"mus", "muBase", "count"});
  SweepConfig out;
  if (j.contains("mus")) {
    if (j.contains("muBase") || j.contains("count")) {
      throw ConfigError("family.sweep takes either mus or muBase/count");
    }
    if (!j.at("mus").is_array()) throw ConfigError("family.sweep.mus must be an array");
    for (const auto& v : j.at("mus")) {
      if (!v.is_number()) throw ConfigError("family.sweep.mus entries must be numbers");
      out.mus.push_back(v.get<double>());
    }
  } else {
    const double base = j.contains("muBase") ? number(j, "muBase", "family.sweep") : 0.5;
    const int count = j.contains("count") ? integer(j, "count", "family.sweep") : 12;
    if (!(base > 0.0 && base < 1.0)) throw ConfigError("family.sweep.muBase must be in (0, 1)");
    if (count < 1 || count > 60) throw ConfigError("family.sweep.count must be in [1, 60]");
    for (int i = 1; i <= count; ++i) out.mus.push_back(std::pow(base, i));
  }
  if (out.mus.empty()) throw ConfigError("family.sweep is empty");
  return out;
}

FamilyConfig parse_family(const json& j, const std::filesystem::path& base_dir) {
  reject_unknown(j, "family", {"kind", "rOuter", "mu", "rInner", "height", "profile", "sweep"});
  FamilyConfig out;
  const std::string kind = j.contains("kind") ? text(j, "kind", "family")
                                              : "kottler_schwarzschild";
  if (kind == "kottler_schwarzschild") {
    out.kind = FamilyKind::KottlerSchwarzschild;
  } else if (kind == "constant") {
    out.kind = FamilyKind::Constant;
  } else if (kind == "tabulated") {
    out.kind = FamilyKind::Tabulated;
  } else {
    throw ConfigError("unknown family.kind '" + kind + "'");
  }
  if (j.contains("rOuter")) out.r_outer = number(j, "rOuter", "family");
  if (j.contains("mu")) out.mu = number(j, "mu", "family");
  if (j.contains("rInner")) out.r_inner = number(j, "rInner", "family");
  if (j.contains("height")) out.height = number(j, "height", "family");
  if (j.contains("profile")) {
    std::filesystem::path p = text(j, "profile", "family");
    out.profile = p.is_relative() ? base_dir / p : p;
  }
  out.sweep.mus = default_sweep();
  if (j.contains("sweep")) out.sweep = parse_sweep(j.at("sweep"));

  switch (out.kind) {
    case FamilyKind::KottlerSchwarzschild:
      if (!out.mu) throw ConfigError("family.mu is required for kottler_schwarzschild");
      if (!(*out.mu > 0.0)) throw ConfigError("family.mu must be positive");
      break;
    case FamilyKind::Constant:
      if (!out.r_inner) throw ConfigError("family.rInner is required for constant");
      break;
    case FamilyKind::Tabulated:
      if (!out.profile) throw ConfigError("family.profile is required for tabulated");
      break;
  }
  return out;
}

StabilityOptions parse_constants(const json& j) {
  reject_unknown(j, "constants", {"xi", "measure"});
  StabilityOptions out;
  if (j.contains("xi")) out.xi = number(j, "xi", "constants");
  if (!(out.xi >= 1.0)) throw ConfigError("constants.xi must be >= 1");
  if (j.contains("measure")) out.measure = parse_mass_measure(text(j, "measure", "constants"));
  return out;
}

OutputConfig parse_output(const json& j) {
  reject_unknown(j, "output", {"directory", "formats"});
  OutputConfig out;
  if (j.contains("directory")) out.directory = text(j, "directory", "output");
  if (j.contains("formats")) {
    if (!j.at("formats").is_array()) throw ConfigError("output.formats must be an array");
    out.json = out.csv = out.svg = false;
    for (const auto& v : j.at("formats")) {
      if (!v.is_string()) throw ConfigError("output.formats entries must be strings");
      const auto f = v.get<std::string>();
      if (f == "json") {
        out.json = true;
      } else if (f == "csv") {
        out.csv = true;
      } else if (f == "svg") {
        out.svg = true;
      } else {
        throw ConfigError("unknown output format '" + f + "'");
      }
    }
  }
  return out;
}

}  // namespace

std::vector<double> default_sweep() {
  std::vector<double> mus;
  for (int i = 1; i <= 12; ++i) mus.push_back(std::ldexp(1.0, -i));
  return mus;
}

ExperimentConfig parse_config(const std::string& source,
                              const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(source);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  reject_unknown(j, "config", {"v", "space", "family", "constants", "checks", "output",
                               "tolerance"});
  if (!j.contains("v") || !j.at("v").is_number_integer() || j.at("v").get<int>() != 1) {
    throw ConfigError("config needs schema version \"v\": 1");
  }
  if (!j.contains("space")) throw ConfigError("config needs a space section");
  if (!j.contains("family")) throw ConfigError("config needs a family section");

  ExperimentConfig out;
  try {
    out.space = parse_space(j.at("space"));
    out.family = parse_family(j.at("family"), base_dir);
    if (j.contains("constants")) out.stability = parse_constants(j.at("constants"));
    if (j.contains("output")) out.output = parse_output(j.at("output"));
    if (j.contains("tolerance")) {
      const double tol = number(j, "tolerance", "config");
      if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
      out.tolerance = tol;
    }
    if (j.contains("checks")) {
      if (!j.at("checks").is_array()) throw ConfigError("checks must be an array");
      std::set<std::string> seen;
      for (const auto& v : j.at("checks")) {
        if (!v.is_string()) throw ConfigError("check names must be strings");
        const auto name = canonical_check_name(v.get<std::string>());
        if (!seen.insert(name).second) throw ConfigError("duplicate check '" + name + "'");
        out.checks.push_back(name);
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  out.source_text = j.dump(2);
  return out;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.parent_path());
}

ReferenceSpace make_space(const ExperimentConfig& config) {
  try {
    return ReferenceSpace(config.space.epsilon, config.space.n,
                          config.space.cross_section_volume);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid space: ") + e.what());
  }
}

GraphManifold make_graph(const ExperimentConfig& config) {
  const auto space = make_space(config);
  const auto& family = config.family;
  try {
    switch (family.kind) {
      case FamilyKind::KottlerSchwarzschild:
        return build_kottler_schwarzschild_graph(space, *family.mu, family.r_outer);
      case FamilyKind::Constant:
        return build_constant_graph(space, *family.r_inner, family.r_outer, family.height);
      case FamilyKind::Tabulated:
        return GraphManifold(space, SlopeProfile::read_table(space, *family.profile));
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid family: ") + e.what());
  } catch (const ConstraintError& e) {
    throw ConfigError(std::string("invalid family: ") + e.what());
  }
  throw ConfigError("unsupported family");
}

std::uint64_t seed_from_environment() {
  const char* raw = std::getenv("STATICMASS_SEED");
  if (raw == nullptr || *raw == '\0') return 1;
  errno = 0;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(raw, &end, 10);
  if (errno != 0 || *end != '\0' || *raw == '-') {
    throw ConfigError(std::string("STATICMASS_SEED must be a non-negative integer, got '") +
                      raw + "'");
  }
  return value;
}

}  // namespace staticmass::cli
