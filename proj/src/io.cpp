#include "yamabe/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace yamabe::io {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

Config Config::parse_string(const std::string& text) {
    Config cfg;
    std::istringstream is(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        // strip comments
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": empty section name");
            cfg.sections_[section];
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        if (section.empty())
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": key outside any [section]");
        cfg.sections_[section][key] = val;
    }
    return cfg;
}

Config Config::parse_file(const std::string& path) {
    return parse_string(read_text_file(path));
}

bool Config::has(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string Config::get(const std::string& section, const std::string& key,
                        const std::string& fallback) const {
    auto s = sections_.find(section);
    if (s == sections_.end()) return fallback;
    auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
}

std::string Config::require(const std::string& section,
                            const std::string& key) const {
    if (!has(section, key))
        throw ConfigError("missing required key [" + section + "] " + key);
    return get(section, key, "");
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get(section, key, "");
    try {
        size_t used = 0;
        double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("key [" + section + "] " + key + ": not a number: " + v);
    }
}

int Config::get_int(const std::string& section, const std::string& key,
                    int fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get(section, key, "");
    try {
        size_t used = 0;
        int x = std::stoi(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("key [" + section + "] " + key + ": not an integer: " + v);
    }
}

bool Config::get_bool(const std::string& section, const std::string& key,
                      bool fallback) const {
    if (!has(section, key)) return fallback;
    std::string v = get(section, key, "");
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("key [" + section + "] " + key + ": not a boolean: " + v);
}

void Config::validate_keys(
    const std::map<std::string, std::set<std::string>>& allowed) const {
    for (const auto& [sec, kv] : sections_) {
        auto it = allowed.find(sec);
        if (it == allowed.end())
            throw ConfigError("unknown config section [" + sec + "]");
        for (const auto& [k, v] : kv)
            if (!it->second.count(k))
                throw ConfigError("unknown key [" + sec + "] " + k);
    }
}

std::uint64_t Config::hash() const {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    auto feed = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
        h ^= 0x1f;
        h *= 1099511628211ull;
    };
    for (const auto& [sec, kv] : sections_) {
        feed(sec);
        for (const auto& [k, v] : kv) {
            feed(k);
            feed(v);
        }
    }
    return h;
}

double parse_circumference(const std::string& value, int n) {
    std::string v = value;
    double factor = 1.0;
    size_t star = v.find('*');
    if (star != std::string::npos) {
        factor = std::stod(v.substr(0, star));
        v = v.substr(star + 1);
    }
    if (v == "T0" || v == "t0" || v == "auto-T0" || v == "auto_T0")
        return factor * critical_circumference(n);
    try {
        size_t used = 0;
        double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return factor * x;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse circumference value: " + value);
    }
}

const char* tool_version() { return "1.0.0"; }

std::string file_header(std::uint64_t config_hash) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "# yamabe-lab %s config=%016llx\n",
                  tool_version(), static_cast<unsigned long long>(config_hash));
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open for writing: " + path);
    os << content;
    if (!os) throw Error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open: " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace yamabe::io
