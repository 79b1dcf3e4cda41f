#include "gasval/key_value.hpp"

#include "gasval/errors.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace gasval {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos)
        return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

KeyValueMap parse_key_values(const std::string& text) {
    KeyValueMap kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        size_t eq = t.find('=');
        GASVAL_REQUIRE(eq != std::string::npos, ErrorKind::parse,
                       "line " << lineno << ": expected 'key = value', got '" << t << "'");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        GASVAL_REQUIRE(!key.empty(), ErrorKind::parse, "line " << lineno << ": empty key");
        kv[key] = val;
    }
    return kv;
}

KeyValueMap read_key_value_file(const std::string& path) {
    std::ifstream in(path);
    GASVAL_REQUIRE(in.good(), ErrorKind::io, "cannot open '" << path << "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_key_values(ss.str());
}

void write_key_value_file(const std::string& path,
                          const std::vector<std::pair<std::string, std::string>>& pairs) {
    std::ofstream out(path);
    GASVAL_REQUIRE(out.good(), ErrorKind::io, "cannot write '" << path << "'");
    for (const auto& [k, v] : pairs)
        out << k << " = " << v << "\n";
    GASVAL_REQUIRE(out.good(), ErrorKind::io, "write failed for '" << path << "'");
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {
const std::string& require_key(const KeyValueMap& kv, const std::string& key) {
    auto it = kv.find(key);
    GASVAL_REQUIRE(it != kv.end(), ErrorKind::config, "missing key '" << key << "'");
    return it->second;
}

double to_double(const std::string& key, const std::string& s) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    GASVAL_REQUIRE(end == s.c_str() + s.size() && !s.empty(), ErrorKind::parse,
                   "key '" << key << "': bad number '" << s << "'");
    return v;
}
} // namespace

double get_double(const KeyValueMap& kv, const std::string& key) {
    return to_double(key, require_key(kv, key));
}

double get_double_or(const KeyValueMap& kv, const std::string& key, double fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : to_double(key, it->second);
}

int get_int(const KeyValueMap& kv, const std::string& key) {
    double v = get_double(kv, key);
    int i = static_cast<int>(v);
    GASVAL_REQUIRE(static_cast<double>(i) == v, ErrorKind::parse,
                   "key '" << key << "': expected integer");
    return i;
}

int get_int_or(const KeyValueMap& kv, const std::string& key, int fallback) {
    auto it = kv.find(key);
    if (it == kv.end())
        return fallback;
    double v = to_double(key, it->second);
    int i = static_cast<int>(v);
    GASVAL_REQUIRE(static_cast<double>(i) == v, ErrorKind::parse,
                   "key '" << key << "': expected integer");
    return i;
}

std::string get_string_or(const KeyValueMap& kv, const std::string& key,
                          const std::string& fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
}

} // namespace gasval
