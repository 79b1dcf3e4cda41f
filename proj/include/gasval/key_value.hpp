#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace gasval {

// Flat "key = value" parameter files, one pair per line, '#' comments.
// Doubles are written with enough digits to round-trip exactly.
using KeyValueMap = std::map<std::string, std::string>;

KeyValueMap read_key_value_file(const std::string& path);
KeyValueMap parse_key_values(const std::string& text);
void write_key_value_file(const std::string& path,
                          const std::vector<std::pair<std::string, std::string>>& pairs);

std::string format_double(double v);

double get_double(const KeyValueMap& kv, const std::string& key);
double get_double_or(const KeyValueMap& kv, const std::string& key, double fallback);
int get_int(const KeyValueMap& kv, const std::string& key);
int get_int_or(const KeyValueMap& kv, const std::string& key, int fallback);
std::string get_string_or(const KeyValueMap& kv, const std::string& key,
                          const std::string& fallback);

} // namespace gasval
