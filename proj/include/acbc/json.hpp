#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace acbc::json {

// Number with 17 significant digits; null for NaN/inf.
std::string number(double v);
std::string quote(std::string_view s);

// Ordered JSON object. Values are stored pre-rendered so nested objects and
// arrays can be added with raw().
class Object {
 public:
  Object& add(std::string_view key, double v) { return raw(key, number(v)); }
  Object& add(std::string_view key, std::int64_t v) { return raw(key, std::to_string(v)); }
  Object& add(std::string_view key, std::uint64_t v) { return raw(key, std::to_string(v)); }
  Object& add(std::string_view key, int v) { return raw(key, std::to_string(v)); }
  Object& add(std::string_view key, bool v) { return raw(key, v ? "true" : "false"); }
  Object& add(std::string_view key, const char* v) { return raw(key, quote(v)); }
  Object& add(std::string_view key, const std::string& v) { return raw(key, quote(v)); }
  Object& add_null(std::string_view key) { return raw(key, "null"); }
  Object& raw(std::string_view key, std::string rendered) {
    fields_.emplace_back(std::string(key), std::move(rendered));
    return *this;
  }

  std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

std::string array(const std::vector<double>& values);
std::string array_raw(const std::vector<std::string>& rendered, std::string_view separator = ", ");

}  // namespace acbc::json
