#include "acbc/json.hpp"

#include <cmath>

#include <fmt/format.h>

namespace acbc::json {

std::string number(double v) {
  if (!std::isfinite(v)) return "null";
  return fmt::format("{:.17g}", v);
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
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

std::string Object::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    if (i) out += ", ";
    out += quote(fields_[i].first);
    out += ": ";
    out += fields_[i].second;
  }
  out += "}";
  return out;
}

std::string array(const std::vector<double>& values) {
  std::vector<std::string> rendered;
  rendered.reserve(values.size());
  for (double v : values) rendered.push_back(number(v));
  return array_raw(rendered);
}

std::string array_raw(const std::vector<std::string>& rendered, std::string_view separator) {
  std::string out = "[";
  for (std::size_t i = 0; i < rendered.size(); ++i) {
    if (i) out += separator;
    out += rendered[i];
  }
  out += "]";
  return out;
}

}  // namespace acbc::json
