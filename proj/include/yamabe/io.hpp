// Line-oriented key=value configuration with [section] headers, fail-closed
// key validation, and the output-file conventions (tool version + config
// hash embedded in every artifact).
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>

#include "yamabe/grid.hpp"

namespace yamabe::io {

struct ConfigError : Error {
    using Error::Error;
};

class Config {
  public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    std::string require(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key,
                      double fallback) const;
    int get_int(const std::string& section, const std::string& key,
                int fallback) const;
    bool get_bool(const std::string& section, const std::string& key,
                  bool fallback) const;

    // Rejects unknown sections or keys (fail-closed).
    void validate_keys(
        const std::map<std::string, std::set<std::string>>& allowed) const;

    std::uint64_t hash() const;  // FNV-1a over the canonicalized content

    const std::map<std::string, std::map<std::string, std::string>>& sections()
        const {
        return sections_;
    }

  private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

// Circle circumference values: a plain number, "T0", or "<factor>*T0"
// (T0 = 2 pi / sqrt(n-2)).
double parse_circumference(const std::string& value, int n);

const char* tool_version();
std::string file_header(std::uint64_t config_hash);  // "# ..." comment line

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace yamabe::io
