#include "raman/io/toml.hpp"

#include <fstream>
#include <sstream>

#include "raman/errors.hpp"

namespace raman::io {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& s) {
    bool in_string = false;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_string = !in_string;
        if (s[i] == '#' && !in_string) return s.substr(0, i);
    }
    return s;
}

}  // namespace

TomlFile TomlFile::parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("toml: cannot open: " + path);
    std::stringstream buf;
    buf << is.rdbuf();
    return parse_string(buf.str());
}

TomlFile TomlFile::parse_string(const std::string& text) {
    TomlFile out;
    std::istringstream is(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw FormatError("toml: bad section header at line " + std::to_string(lineno));
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw FormatError("toml: expected key = value at line " + std::to_string(lineno));
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw FormatError("toml: empty key or value at line " + std::to_string(lineno));
        }
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            value = value.substr(1, value.size() - 2);
        }
        out.values_[section.empty() ? key : section + "." + key] = value;
    }
    return out;
}

std::string TomlFile::get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double TomlFile::get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw FormatError("toml: '" + key + "' is not a number");
    }
}

int64_t TomlFile::get_int(const std::string& key, int64_t fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        return std::stoll(it->second);
    } catch (const std::exception&) {
        throw FormatError("toml: '" + key + "' is not an integer");
    }
}

bool TomlFile::get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true") return true;
    if (it->second == "false") return false;
    throw FormatError("toml: '" + key + "' is not a boolean");
}

}  // namespace raman::io
