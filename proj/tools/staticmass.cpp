// staticmass: batch verification of static quasi-local energy and stability
// estimates for graphs over Kottler spaces.

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "checks.hpp"
#include "config.hpp"
#include "staticmass/errors.hpp"
#include "staticmass/json_writer.hpp"
#include "staticmass/quasilocal_energy.hpp"
#include "staticmass/stability_analysis.hpp"

namespace fs = std::filesystem;
using namespace staticmass;
using namespace staticmass::cli;

namespace {

constexpr const char* kVersion = "1.0.0";

enum ExitCode { kOk = 0, kCheckFailure = 1, kConfigFailure = 2, kIoFailure = 3 };

struct Overrides {
  std::optional<std::string> output_dir;
  std::optional<std::string> measure;
  std::optional<double> xi;
  std::optional<double> tolerance;
};

std::string utc_timestamp(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void apply_overrides(ExperimentConfig& config, const Overrides& o) {
  if (o.output_dir) config.output.directory = *o.output_dir;
  if (o.measure) config.stability.measure = parse_mass_measure(*o.measure);
  if (o.xi) {
    if (!(*o.xi >= 1.0)) throw ConfigError("--xi must be >= 1");
    config.stability.xi = *o.xi;
  }
  if (o.tolerance) {
    if (!(*o.tolerance > 0.0)) throw ConfigError("--tolerance must be positive");
    config.tolerance = *o.tolerance;
  }
}

// Log-log plot of flat bound against mass with the fitted line.
std::string sweep_svg(const SweepResult& sweep) {
  constexpr double kW = 640, kH = 480, kPad = 60;
  std::vector<double> xs, ys;
  for (const auto& r : sweep.rows) {
    if (r.mass > 0 && r.flat_bound > 0) {
      xs.push_back(std::log10(r.mass));
      ys.push_back(std::log10(r.flat_bound));
    }
  }
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!xs.empty()) {
    x0 = std::floor(*std::min_element(xs.begin(), xs.end()));
    x1 = std::ceil(*std::max_element(xs.begin(), xs.end()));
    y0 = std::floor(*std::min_element(ys.begin(), ys.end()));
    y1 = std::ceil(*std::max_element(ys.begin(), ys.end()));
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1;
  }
  const auto px = [&](double x) { return kPad + (x - x0) / (x1 - x0) * (kW - 2 * kPad); };
  const auto py = [&](double y) { return kH - kPad - (y - y0) / (y1 - y0) * (kH - 2 * kPad); };
  std::string s = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<rect x=\"{2}\" y=\"{2}\" width=\"{3}\" height=\"{4}\" fill=\"none\" stroke=\"black\"/>\n",
      kW, kH, kPad, kW - 2 * kPad, kH - 2 * kPad);
  for (double t = x0; t <= x1 + 0.5; t += 1) {
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\" "
                     "text-anchor=\"middle\">1e{}</text>\n",
                     px(t), kH - kPad + 18, static_cast<int>(t));
  }
  for (double t = y0; t <= y1 + 0.5; t += 1) {
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\" "
                     "text-anchor=\"end\">1e{}</text>\n",
                     kPad - 6, py(t) + 4, static_cast<int>(t));
  }
  s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"14\" "
                   "text-anchor=\"middle\">Brown-York energy m</text>\n",
                   kW / 2, kH - 14);
  s += fmt::format("<text x=\"16\" y=\"{:.2f}\" font-size=\"14\" text-anchor=\"middle\" "
                   "transform=\"rotate(-90 16 {:.2f})\">flat distance bound</text>\n",
                   kH / 2, kH / 2);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    s += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"4\" fill=\"steelblue\"/>\n",
                     px(xs[k]), py(ys[k]));
  }
  if (std::isfinite(sweep.gamma_fit) && xs.size() >= 2) {
    const std::size_t first = xs.size() >= 5 ? xs.size() - 5 : 0;
    const double xa = xs[first];
    const double xb = xs.back();
    const double b = sweep.fit_intercept / std::log(10.0);
    s += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" "
                     "stroke=\"firebrick\" stroke-width=\"2\"/>\n",
                     px(xa), py(sweep.gamma_fit * xa + b), px(xb),
                     py(sweep.gamma_fit * xb + b));
    s += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"14\">fitted slope {:.4f}"
                     "</text>\n",
                     kPad + 10, kPad + 20, sweep.gamma_fit);
  }
  s += "</svg>\n";
  return s;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

int run(const std::string& mode, const fs::path& config_path, const Overrides& overrides) {
  const auto started = std::chrono::system_clock::now();
  const auto t0 = std::chrono::steady_clock::now();

  auto config = load_config(config_path);
  apply_overrides(config, overrides);
  const auto seed = seed_from_environment();
  const CheckContext context(config, seed);

  // Artifacts are collected in memory and written together at the end.
  std::map<std::string, std::string> artifacts;
  std::vector<CheckResult> results;
  std::vector<double> seconds;
  for (const auto& name : config.checks) {
    const auto c0 = std::chrono::steady_clock::now();
    results.push_back(run_check(name, context));
    seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - c0).count());
  }

  const auto& graph = context.graph();
  if (mode == "verify" && config.output.json) {
    artifacts["energy.json"] = to_json(energy_report(graph));
    try {
      artifacts["stability.json"] = to_json(analyze_stability(graph, config.stability));
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      artifacts["stability.json"] =
          JsonObjectWriter().field("available", false).field("reason", e.what()).str() + "\n";
    }
  }
  const bool want_sweep =
      mode == "sweep" || std::find(config.checks.begin(), config.checks.end(),
                                   "theorem13_convergence") != config.checks.end();
  if (want_sweep) {
    const auto& sweep = context.sweep();
    if (config.output.csv) artifacts["sweep.csv"] = to_csv(sweep);
    if (config.output.svg) artifacts["sweep.svg"] = sweep_svg(sweep);
  }

  bool all_passed = true;
  std::vector<std::string> check_json;
  for (std::size_t k = 0; k < results.size(); ++k) {
    const auto& r = results[k];
    all_passed = all_passed && r.passed;
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    check_json.push_back(JsonObjectWriter()
                             .field("name", r.name)
                             .field("passed", r.passed)
                             .field("residual", r.residual)
                             .field("detail", r.detail)
                             .field("seconds", seconds[k])
                             .str(2));
  }

  const auto finished = std::chrono::system_clock::now();
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::vector<std::string> artifact_names;
  for (const auto& [name, content] : artifacts) artifact_names.push_back(json_string(name));
  artifact_names.push_back(json_string("run_summary.json"));

  std::string config_echo;
  for (char c : config.source_text) {
    config_echo += c;
    if (c == '\n') config_echo += "  ";
  }
  const std::string summary = JsonObjectWriter()
                                  .field("tool", "staticmass")
                                  .field("version", kVersion)
                                  .field("command", mode)
                                  .field("config_path", config_path.string())
                                  .field("seed", std::to_string(seed))
                                  .field("started_at", utc_timestamp(started))
                                  .field("finished_at", utc_timestamp(finished))
                                  .field("wall_clock_seconds", wall)
                                  .field("passed", all_passed)
                                  .raw("checks", json_array(check_json, 1))
                                  .raw("artifacts", json_array(artifact_names, 1))
                                  .raw("config", config_echo)
                                  .str() +
                              "\n";
  artifacts["run_summary.json"] = summary;

  std::error_code ec;
  fs::create_directories(config.output.directory, ec);
  if (ec) throw IoError("cannot create " + config.output.directory.string() + ": " + ec.message());
  for (const auto& [name, content] : artifacts) {
    write_file(config.output.directory / name, content);
  }
  std::cout << (all_passed ? "all checks passed" : "some checks failed") << " ("
            << results.size() << " run); artifacts in " << config.output.directory.string()
            << "\n";
  return all_passed ? kOk : kCheckFailure;
}

void list_checks() {
  for (const auto& info : check_registry()) {
    std::string name = info.name;
    if (!info.alias.empty()) name += " (" + info.alias + ")";
    std::cout << fmt::format("{:<38} {}\n", name, info.description);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Static Brown-York energy and stability checks for Kottler graphs"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Overrides overrides;
  std::string output_dir, measure;
  double xi = 1.0, tolerance = 0.0;
  auto* opt_out = app.add_option("--output-dir", output_dir, "Directory for artifacts");
  auto* opt_measure = app.add_option("--measure", measure, "Mass measure: product|static");
  auto* opt_xi = app.add_option("--xi", xi, "Threshold parameter xi >= 1");
  auto* opt_tol = app.add_option("--tolerance", tolerance, "Override residual tolerances");

  fs::path config_path;
  auto* verify = app.add_subcommand("verify", "Run the configured checks on one graph");
  verify->add_option("config", config_path, "Experiment configuration (JSON)")->required();
  auto* sweep = app.add_subcommand("sweep", "Run the mass-parameter convergence sweep");
  sweep->add_option("config", config_path, "Experiment configuration (JSON)")->required();
  auto* list = app.add_subcommand("list-checks", "List the available checks");
  for (auto* sub : {verify, sweep}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigFailure;
  }
  if (*opt_out) overrides.output_dir = output_dir;
  if (*opt_measure) overrides.measure = measure;
  if (*opt_xi) overrides.xi = xi;
  if (*opt_tol) overrides.tolerance = tolerance;

  try {
    if (*list) {
      list_checks();
      return kOk;
    }
    return run(*verify ? "verify" : "sweep", config_path, overrides);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfigFailure;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIoFailure;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailure;
  }
}
