#pragma once

#include <map>
#include <string>
#include <vector>

namespace fsilab {

// Flat key-value configuration text: one `key = value` per line, dotted
// sections in the key, '#' comments.
std::map<std::string, std::string> parse_flat_config(const std::string& text);
std::string write_flat_config(const std::map<std::string, std::string>& values);

// Closest known key by edit distance (for unknown-key diagnostics).
std::string nearest_key(const std::string& key, const std::vector<std::string>& known);

double parse_double_value(const std::string& key, const std::string& value);
int parse_int_value(const std::string& key, const std::string& value);
bool parse_bool_value(const std::string& key, const std::string& value);

}  // namespace fsilab
