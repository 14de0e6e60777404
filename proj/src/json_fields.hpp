#pragma once

// Field-by-field reading of JSON documents with path-qualified errors.

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace ethrisk::detail {

using nlohmann::json;

// Parses `text`, reporting syntax errors as ParseError with line and column.
json parse_json(std::string_view text, const std::string& source);

// Reads the members of one JSON object. Every accessor throws ValidationError
// naming the full field path; finish() rejects members nobody asked for.
class FieldReader {
 public:
  FieldReader(const json& object, std::string path);

  const std::string& path() const { return path_; }
  std::string field(const std::string& key) const { return path_ + "." + key; }
  bool has(const std::string& key) const;

  double number(const std::string& key, std::optional<double> fallback = std::nullopt);
  double positive(const std::string& key, std::optional<double> fallback = std::nullopt);
  double non_negative(const std::string& key, std::optional<double> fallback = std::nullopt);
  std::int64_t integer(const std::string& key, std::optional<std::int64_t> fallback = std::nullopt);
  bool boolean(const std::string& key, std::optional<bool> fallback = std::nullopt);
  std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt);

  // Raw member access; marks the key as consumed.
  const json& child(const std::string& key);
  const json* optional_child(const std::string& key);

  void finish() const;

 private:
  const json* lookup(const std::string& key);

  const json& object_;
  std::string path_;
  std::set<std::string> seen_;
};

[[noreturn]] void fail(const std::string& path, const std::string& message);

}  // namespace ethrisk::detail
