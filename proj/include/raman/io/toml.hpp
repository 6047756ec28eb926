#pragma once

#include <map>
#include <string>

namespace raman::io {

// Flat TOML subset used by the run configs: comments, [section] headers, and
// key = value lines (string, integer, float, boolean). Keys are returned as
// "section.key"; top-level keys are unprefixed.
class TomlFile {
  public:
    static TomlFile parse_file(const std::string& path);
    static TomlFile parse_string(const std::string& text);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int64_t get_int(const std::string& key, int64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    const std::map<std::string, std::string>& raw() const { return values_; }

  private:
    std::map<std::string, std::string> values_;
};

}  // namespace raman::io
