#pragma once

// Small helpers shared by the profile and scenario loaders.

#include <initializer_list>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace edgesplit::detail {

using nlohmann::json;

/// Parses JSON, mapping syntax errors to DocumentError("line L, column C").
json parse_json(std::string_view text);

std::string join_path(const std::string& parent, const std::string& key);
std::string index_path(const std::string& parent, std::size_t index);

/// Throws DocumentError if `obj` is not an object or has keys outside `accepted`.
void require_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> accepted);

const json& require_field(const json& obj, const std::string& path, std::string_view key);

double get_number(const json& value, const std::string& path);
std::int64_t get_integer(const json& value, const std::string& path);
std::string get_string(const json& value, const std::string& path);
bool get_bool(const json& value, const std::string& path);
const json& get_array(const json& value, const std::string& path);

std::string read_file(const std::string& path);

}  // namespace edgesplit::detail
