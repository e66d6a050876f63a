#pragma once

// Private helpers shared by the JSON readers/writers.

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "sidekick/errors.hpp"

namespace sidekick::detail {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

// Parses `text`, mapping parser failures to ParseError with a line number.
json parse_json(const std::string& text, const std::string& what);

const json& require(const json& doc, const std::string& field);
double require_number(const json& doc, const std::string& field);
std::int64_t require_integer(const json& doc, const std::string& field);

template <class T>
T value_or(const json& doc, const std::string& field, T fallback) {
  auto it = doc.find(field);
  if (it == doc.end() || it->is_null()) {
    return fallback;
  }
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw SchemaError("field '" + field + "' has the wrong type", field);
  }
}

} // namespace sidekick::detail
