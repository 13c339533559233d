#ifndef THERMOQFI_CLI_CONFIG_HPP
#define THERMOQFI_CLI_CONFIG_HPP

#include <map>
#include <string>
#include <vector>

namespace thermoqfi::cli {

// Flat key = value store: a TOML-style file of scalar assignments plus
// --param overrides.  Section headers are accepted and ignored; keys must be
// unique after flattening.
class KeyValueConfig {
  public:
    static KeyValueConfig from_file(const std::string& path);
    void apply_override(const std::string& key_equals_value);
    void set(const std::string& key, const std::string& value);

    bool has(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    uint64_t get_u64(const std::string& key, uint64_t fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::vector<double> get_list(const std::string& key,
                                 const std::vector<double>& fallback) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

  private:
    std::map<std::string, std::string> entries_;
};

}  // namespace thermoqfi::cli

#endif
