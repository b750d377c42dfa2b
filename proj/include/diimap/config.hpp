#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "diimap/synth.hpp"

// Flat TOML configuration: top-level `key = value` pairs plus one level of
// `[section]` tables, addressed here as "section.key". Supported values are
// booleans, integers, floats, basic "..." strings and (possibly nested)
// arrays — the subset the tool reads and writes. Anything else is rejected
// with a line-numbered ConfigError rather than silently misparsed.

namespace diimap {

struct TomlValue {
    enum class Kind { boolean, integer, real, string, array };

    Kind kind = Kind::integer;
    bool b = false;
    std::int64_t i = 0;
    double d = 0.0;
    std::string s;
    std::vector<TomlValue> items;
};

class TomlTable {
public:
    bool contains(const std::string& key) const { return values_.count(key) != 0; }
    const TomlValue* find(const std::string& key) const;

    // Typed lookups; the non-optional forms throw ConfigError when the key is
    // missing, every form throws on a type mismatch (naming the key).
    bool get_bool(const std::string& key) const;
    std::int64_t get_int(const std::string& key) const;
    double get_real(const std::string& key) const;  // accepts integer values
    std::string get_string(const std::string& key) const;
    const std::vector<TomlValue>& get_array(const std::string& key) const;

    std::optional<bool> opt_bool(const std::string& key) const;
    std::optional<std::int64_t> opt_int(const std::string& key) const;
    std::optional<double> opt_real(const std::string& key) const;
    std::optional<std::string> opt_string(const std::string& key) const;

    void set(const std::string& key, TomlValue value) { values_[key] = std::move(value); }
    const std::map<std::string, TomlValue>& values() const { return values_; }

private:
    std::map<std::string, TomlValue> values_;
};

TomlTable parse_toml(const std::string& text, const std::string& origin);
TomlTable parse_toml_file(const std::filesystem::path& path);

// Builds a ScenarioConfig from the [synth] section; shared grid/threshold
// parameters (grid_size, tau, truth_rule) are read from the top level so the
// scenario's planted truth uses the same grid as the analysis pipeline.
ScenarioConfig scenario_config_from_toml(const TomlTable& table);

}  // namespace diimap
