#ifndef ENTROPIC_CONFIG_HPP
#define ENTROPIC_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace entropic {

// Flat key=value file; '#' starts a comment, blank lines are skipped.
struct KeyValueConfig {
    std::map<std::string, std::string> entries;

    bool has(const std::string& key) const { return entries.count(key) > 0; }
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
    // comma-separated list
    std::vector<double> get_doubles(const std::string& key,
                                    const std::vector<double>& fallback) const;
    std::vector<std::uint64_t> get_uints(
        const std::string& key, const std::vector<std::uint64_t>& fallback) const;
};

KeyValueConfig parse_config_file(const std::string& path);
KeyValueConfig parse_config_text(const std::string& text);

}  // namespace entropic

#endif
