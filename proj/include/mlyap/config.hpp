#pragma once

#include "mlyap/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mlyap {

/// Parse/validation failure with the offending line when known.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_number(line) {}
    int line_number = 0;
};

/// Flat sectioned key-value configuration:
///   [section]
///   key = value            # '#' and ';' start comments
///   grid = 1 2 3.5         # arrays are whitespace-separated
class ConfigFile {
public:
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_text(const std::string& text);

    bool has_section(const std::string& section) const;
    bool has(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& dflt) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key, double dflt) const;
    long get_int(const std::string& section, const std::string& key) const;
    long get_int(const std::string& section, const std::string& key, long dflt) const;
    Vector get_array(const std::string& section, const std::string& key) const;

    /// All keys of a section in file order (empty when absent).
    std::vector<std::string> keys(const std::string& section) const;

    void set(const std::string& section, const std::string& key, const std::string& value);

    /// Re-serialized resolved form, suitable for the run manifest.
    std::string dump() const;

private:
    struct Entry {
        std::string value;
        int line = 0;
    };
    const Entry& lookup(const std::string& section, const std::string& key) const;
    const Entry* find(const std::string& section, const std::string& key) const;

    std::map<std::string, std::map<std::string, Entry>> sections_;
    std::vector<std::pair<std::string, std::vector<std::string>>> order_;
};

}  // namespace mlyap
