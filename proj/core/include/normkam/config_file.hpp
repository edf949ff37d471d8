#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace normkam {

// TOML files flattened to key/value pairs: numbers, strings, booleans and
// flat arrays of numbers. Keys inside `[section]` tables are stored as
// "section.key".
class ConfigFile {
public:
    using Value = std::variant<double, std::string, bool, std::vector<double>>;

    static ConfigFile parse(const std::string& text, const std::string& origin = "<string>");
    static ConfigFile load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::vector<std::string> keys() const;

    double number(const std::string& key, std::optional<double> fallback = std::nullopt) const;
    int integer(const std::string& key, std::optional<int> fallback = std::nullopt) const;
    std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt) const;
    bool boolean(const std::string& key, std::optional<bool> fallback = std::nullopt) const;
    std::vector<double> numbers(const std::string& key,
                                std::optional<std::vector<double>> fallback = std::nullopt) const;

    const std::string& origin() const { return origin_; }

private:
    std::map<std::string, Value> values_;
    std::string origin_;

    const Value* find(const std::string& key) const;
};

}  // namespace normkam
