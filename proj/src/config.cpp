#include "entropic/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "entropic/errors.hpp"

namespace entropic {

namespace {

std::string trim(const std::string& s) {
    const std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& raw) {
    const char* begin = raw.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + raw.size() || raw.empty())
        throw ParseError("config key '" + key + "': not a number: '" + raw + "'");
    return v;
}

}  // namespace

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
    auto it = entries.find(key);
    return it == entries.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    auto it = entries.find(key);
    return it == entries.end() ? fallback : parse_double(key, it->second);
}

std::int64_t KeyValueConfig::get_int(const std::string& key,
                                     std::int64_t fallback) const {
    auto it = entries.find(key);
    if (it == entries.end()) return fallback;
    try {
        std::size_t pos = 0;
        const std::int64_t v = std::stoll(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ParseError("config key '" + key + "': not an integer: '" + it->second +
                         "'");
    }
}

std::uint64_t KeyValueConfig::get_uint(const std::string& key,
                                       std::uint64_t fallback) const {
    auto it = entries.find(key);
    if (it == entries.end()) return fallback;
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ParseError("config key '" + key + "': not an unsigned integer: '" +
                         it->second + "'");
    }
}

std::vector<double> KeyValueConfig::get_doubles(
    const std::string& key, const std::vector<double>& fallback) const {
    auto it = entries.find(key);
    if (it == entries.end()) return fallback;
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
    return out;
}

std::vector<std::uint64_t> KeyValueConfig::get_uints(
    const std::string& key, const std::vector<std::uint64_t>& fallback) const {
    auto it = entries.find(key);
    if (it == entries.end()) return fallback;
    std::vector<std::uint64_t> out;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        try {
            std::size_t pos = 0;
            out.push_back(std::stoull(item, &pos));
            if (pos != item.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw ParseError("config key '" + key + "': not an unsigned integer: '" +
                             item + "'");
        }
    }
    return out;
}

KeyValueConfig parse_config_text(const std::string& text) {
    KeyValueConfig cfg;
    std::stringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const std::size_t eq = body.find('=');
        if (eq == std::string::npos)
            throw ParseError("config line " + std::to_string(lineno) +
                             ": expected key = value");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty())
            throw ParseError("config line " + std::to_string(lineno) + ": empty key");
        cfg.entries[key] = value;
    }
    return cfg;
}

KeyValueConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace entropic
