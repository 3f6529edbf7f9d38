#include "json_util.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "edgesplit/errors.hpp"

namespace edgesplit::detail {

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t offset = e.byte == 0 ? 0 : e.byte - 1;
    offset = std::min(offset, text.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t k = 0; k < offset; ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw DocumentError(fmt::format("line {}, column {}", line, column), "parse error: " + std::string(e.what()));
  }
}

std::string join_path(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

std::string index_path(const std::string& parent, std::size_t index) {
  return fmt::format("{}[{}]", parent, index);
}

void require_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> accepted) {
  if (!obj.is_object()) throw DocumentError(path, "expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (auto a : accepted) known = known || a == key;
    if (!known) {
      throw DocumentError(join_path(path, key),
                          fmt::format("unknown key '{}'; accepted keys: {}", key, fmt::join(accepted, ", ")));
    }
  }
}

const json& require_field(const json& obj, const std::string& path, std::string_view key) {
  auto it = obj.find(std::string(key));
  if (it == obj.end()) throw DocumentError(join_path(path, std::string(key)), "missing required field");
  return *it;
}

double get_number(const json& value, const std::string& path) {
  if (!value.is_number()) throw DocumentError(path, "expected a number");
  double v = value.get<double>();
  if (!std::isfinite(v)) throw DocumentError(path, "expected a finite number");
  return v;
}

std::int64_t get_integer(const json& value, const std::string& path) {
  if (!value.is_number_integer()) throw DocumentError(path, "expected an integer");
  return value.get<std::int64_t>();
}

std::string get_string(const json& value, const std::string& path) {
  if (!value.is_string()) throw DocumentError(path, "expected a string");
  return value.get<std::string>();
}

bool get_bool(const json& value, const std::string& path) {
  if (!value.is_boolean()) throw DocumentError(path, "expected true or false");
  return value.get<bool>();
}

const json& get_array(const json& value, const std::string& path) {
  if (!value.is_array()) throw DocumentError(path, "expected an array");
  return value;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DocumentError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace edgesplit::detail
