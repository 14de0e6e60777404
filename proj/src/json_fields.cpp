#include "json_fields.hpp"

#include <algorithm>
#include <cmath>

#include "ethrisk/errors.hpp"

namespace ethrisk::detail {

json parse_json(std::string_view text, const std::string& source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    const auto prefix = text.substr(0, end);
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(prefix.begin(), prefix.end(), '\n'));
    const std::size_t last_newline = prefix.rfind('\n');
    const std::size_t column = last_newline == std::string_view::npos ? end + 1 : end - last_newline;
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                     ": invalid JSON");
  }
}

void fail(const std::string& path, const std::string& message) {
  throw ValidationError(path + ": " + message);
}

FieldReader::FieldReader(const json& object, std::string path)
    : object_(object), path_(std::move(path)) {
  if (!object_.is_object()) fail(path_, "must be an object");
}

bool FieldReader::has(const std::string& key) const { return object_.contains(key); }

const json* FieldReader::lookup(const std::string& key) {
  seen_.insert(key);
  const auto it = object_.find(key);
  return it == object_.end() ? nullptr : &*it;
}

double FieldReader::number(const std::string& key, std::optional<double> fallback) {
  const json* v = lookup(key);
  if (v == nullptr) {
    if (fallback) return *fallback;
    fail(field(key), "required field is missing");
  }
  if (!v->is_number()) fail(field(key), "must be a number");
  const double x = v->get<double>();
  if (!std::isfinite(x)) fail(field(key), "must be finite");
  return x;
}

double FieldReader::positive(const std::string& key, std::optional<double> fallback) {
  const double x = number(key, fallback);
  if (!(x > 0.0)) fail(field(key), "must be a positive number");
  return x;
}

double FieldReader::non_negative(const std::string& key, std::optional<double> fallback) {
  const double x = number(key, fallback);
  if (!(x >= 0.0)) fail(field(key), "must be a non-negative number");
  return x;
}

std::int64_t FieldReader::integer(const std::string& key, std::optional<std::int64_t> fallback) {
  const json* v = lookup(key);
  if (v == nullptr) {
    if (fallback) return *fallback;
    fail(field(key), "required field is missing");
  }
  if (!v->is_number_integer()) fail(field(key), "must be an integer");
  return v->get<std::int64_t>();
}

bool FieldReader::boolean(const std::string& key, std::optional<bool> fallback) {
  const json* v = lookup(key);
  if (v == nullptr) {
    if (fallback) return *fallback;
    fail(field(key), "required field is missing");
  }
  if (!v->is_boolean()) fail(field(key), "must be true or false");
  return v->get<bool>();
}

std::string FieldReader::string(const std::string& key, std::optional<std::string> fallback) {
  const json* v = lookup(key);
  if (v == nullptr) {
    if (fallback) return *fallback;
    fail(field(key), "required field is missing");
  }
  if (!v->is_string()) fail(field(key), "must be a string");
  return v->get<std::string>();
}

const json& FieldReader::child(const std::string& key) {
  const json* v = lookup(key);
  if (v == nullptr) fail(field(key), "required field is missing");
  return *v;
}

const json* FieldReader::optional_child(const std::string& key) { return lookup(key); }

void FieldReader::finish() const {
  for (const auto& [key, value] : object_.items()) {
    if (!seen_.contains(key)) fail(path_ + "." + key, "unknown field");
  }
}

}  // namespace ethrisk::detail
