#include "thermoqfi/cli_config.hpp"

#include <fstream>
#include <sstream>

#include "thermoqfi/errors.hpp"

namespace thermoqfi::cli {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string strip_quotes(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

}  // namespace

KeyValueConfig KeyValueConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("config: cannot open " + path);
    KeyValueConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        if (s[0] == '[') continue;  // section header, flattened away
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw Error("config: line " + std::to_string(lineno) + " is not key = value");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        size_t hash = value.find('#');
        if (hash != std::string::npos) value = trim(value.substr(0, hash));
        if (key.empty()) throw Error("config: empty key at line " + std::to_string(lineno));
        cfg.entries_[key] = strip_quotes(value);
    }
    return cfg;
}

void KeyValueConfig::apply_override(const std::string& kv) {
    size_t eq = kv.find('=');
    if (eq == std::string::npos) throw Error("--param expects key=value, got: " + kv);
    entries_[trim(kv.substr(0, eq))] = strip_quotes(trim(kv.substr(eq + 1)));
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
    entries_[key] = value;
}

bool KeyValueConfig::has(const std::string& key) const { return entries_.count(key) > 0; }

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    try {
        size_t pos = 0;
        double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw Error("config: key '" + key + "' is not a number: " + it->second);
    }
}

int KeyValueConfig::get_int(const std::string& key, int fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    try {
        size_t pos = 0;
        int v = std::stoi(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw Error("config: key '" + key + "' is not an integer: " + it->second);
    }
}

uint64_t KeyValueConfig::get_u64(const std::string& key, uint64_t fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    try {
        size_t pos = 0;
        uint64_t v = std::stoull(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument(it->second);
        return v;
    } catch (const std::exception&) {
        throw Error("config: key '" + key + "' is not an unsigned integer: " + it->second);
    }
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

std::vector<double> KeyValueConfig::get_list(const std::string& key,
                                             const std::vector<double>& fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    std::string s = it->second;
    if (!s.empty() && s.front() == '[') s = s.substr(1);
    if (!s.empty() && s.back() == ']') s.pop_back();
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw Error("config: key '" + key + "' has a non-numeric element: " + tok);
        }
    }
    if (out.empty()) throw Error("config: key '" + key + "' is an empty list");
    return out;
}

}  // namespace thermoqfi::cli
