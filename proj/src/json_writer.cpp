#include "staticmass/json_writer.hpp"

#include <cmath>

#include <fmt/format.h>

namespace staticmass {

std::string format_number(double value) {
  if (!std::isfinite(value)) return "null";
  if (value == 0.0) return "0";  // also folds -0
  return fmt::format("{:.17g}", value);
}

std::string format_csv_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  return fmt::format("{:.17g}", value);
}

std::string json_string(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          out += fmt::format("\\u{:04x}", static_cast<int>(c));
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

JsonObjectWriter& JsonObjectWriter::field(std::string_view key, double value) {
  fields_.emplace_back(std::string(key), format_number(value));
  return *this;
}

JsonObjectWriter& JsonObjectWriter::field(std::string_view key,
                                          std::optional<double> value) {
  fields_.emplace_back(std::string(key), value ? format_number(*value) : "null");
  return *this;
}

JsonObjectWriter& JsonObjectWriter::field(std::string_view key, bool value) {
  fields_.emplace_back(std::string(key), value ? "true" : "false");
  return *this;
}

JsonObjectWriter& JsonObjectWriter::field(std::string_view key, int value) {
  fields_.emplace_back(std::string(key), std::to_string(value));
  return *this;
}

JsonObjectWriter& JsonObjectWriter::field(std::string_view key, long value) {
  fields_.emplace_back(std::string(key), std::to_string(value));
  return *this;
}

JsonObjectWriter& JsonObjectWriter::field(std::string_view key,
                                          std::string_view value) {
  fields_.emplace_back(std::string(key), json_string(value));
  return *this;
}

JsonObjectWriter& JsonObjectWriter::field(std::string_view key, const char* value) {
  return field(key, std::string_view(value));
}

JsonObjectWriter& JsonObjectWriter::raw(std::string_view key, std::string_view json) {
  fields_.emplace_back(std::string(key), std::string(json));
  return *this;
}

std::string JsonObjectWriter::str(int indent) const {
  if (fields_.empty()) return "{}";
  const std::string pad(static_cast<std::size_t>(2 * (indent + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * indent), ' ');
  std::string out = "{\n";
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    out += pad + json_string(fields_[i].first) + ": " + fields_[i].second;
    out += i + 1 < fields_.size() ? ",\n" : "\n";
  }
  out += close + "}";
  return out;
}

std::string json_array(const std::vector<std::string>& items, int indent) {
  if (items.empty()) return "[]";
  const std::string pad(static_cast<std::size_t>(2 * (indent + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * indent), ' ');
  std::string out = "[\n";
  for (std::size_t i = 0; i < items.size(); ++i) {
    out += pad + items[i];
    out += i + 1 < items.size() ? ",\n" : "\n";
  }
  out += close + "]";
  return out;
}

}  // namespace staticmass
