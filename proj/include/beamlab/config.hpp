#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace beamlab {

// Configuration problems map to the CLI's exit status 2, distinct from
// numerical assertion failures.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat `key = value` text with `#` comments; `[command]` headers prefix the
// keys that follow as "command.key". Values stay strings until a typed getter
// pulls them, and every getter failure names the offending key.
class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback) const;

    // Rejects stray keys: every parsed key must appear in `allowed`, else a
    // ConfigError names the first offender. Call with the union of keys the
    // invoked command understands.
    void require_known(const std::vector<std::string>& allowed) const;

    const std::map<std::string, std::string>& entries() const { return values_; }

    // Comma-separated list helper ("0.25, 0.5" -> {"0.25", "0.5"}); empty
    // segments are dropped.
    static std::vector<std::string> split_list(const std::string& value);

private:
    std::map<std::string, std::string> values_;
};

}  // namespace beamlab
