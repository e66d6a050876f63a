#include "json_util.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace sidekick::detail {

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  }
  out << text;
  if (!out) {
    throw std::runtime_error("write failed for '" + path.string() + "'");
  }
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const std::size_t line =
      1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(end), '\n'));
    throw ParseError(what + ": parse error at line " + std::to_string(line) + ": " + e.what(), line);
  }
}

const json& require(const json& doc, const std::string& field) {
  if (!doc.is_object()) {
    throw SchemaError("expected an object containing '" + field + "'", field);
  }
  auto it = doc.find(field);
  if (it == doc.end()) {
    throw SchemaError("missing required field '" + field + "'", field);
  }
  return *it;
}

double require_number(const json& doc, const std::string& field) {
  const json& v = require(doc, field);
  if (!v.is_number()) {
    throw SchemaError("field '" + field + "' must be a number", field);
  }
  return v.get<double>();
}

std::int64_t require_integer(const json& doc, const std::string& field) {
  const json& v = require(doc, field);
  if (!v.is_number_integer()) {
    throw SchemaError("field '" + field + "' must be an integer", field);
  }
  return v.get<std::int64_t>();
}

} // namespace sidekick::detail
