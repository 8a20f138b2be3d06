#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace staticmass {

/// Fixed 17-significant-digit rendering used for every number written to
/// JSON and CSV artifacts. Non-finite values render as `null` in JSON and
/// `nan`/`inf` in CSV.
std::string format_number(double value);
std::string format_csv_number(double value);

/// Ordered JSON object builder. Keys keep insertion order so that identical
/// inputs always serialise to identical bytes.
class JsonObjectWriter {
 public:
  JsonObjectWriter& field(std::string_view key, double value);
  JsonObjectWriter& field(std::string_view key, std::optional<double> value);
  JsonObjectWriter& field(std::string_view key, bool value);
  JsonObjectWriter& field(std::string_view key, int value);
  JsonObjectWriter& field(std::string_view key, long value);
  JsonObjectWriter& field(std::string_view key, std::string_view value);
  JsonObjectWriter& field(std::string_view key, const char* value);
  /// Inserts an already serialised JSON value (object, array, ...).
  JsonObjectWriter& raw(std::string_view key, std::string_view json);

  /// Pretty-printed with two-space indentation, nested at `indent` levels.
  std::string str(int indent = 0) const;

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

std::string json_string(std::string_view text);
std::string json_array(const std::vector<std::string>& serialised_items, int indent = 0);

}  // namespace staticmass
