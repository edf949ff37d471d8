#include "normkam/config_file.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <toml.hpp>

#include "normkam/errors.hpp"

namespace normkam {

namespace {

void flatten(const toml::table& table, const std::string& prefix, std::map<std::string, ConfigFile::Value>& out,
             const std::string& origin)
{
    for (const auto& [k, node] : table) {
        const std::string key = prefix.empty() ? std::string(k.str()) : prefix + "." + std::string(k.str());
        if (const auto* sub = node.as_table()) {
            flatten(*sub, key, out, origin);
        } else if (const auto v = node.value<double>(); v && (node.is_floating_point() || node.is_integer())) {
            out[key] = *v;
        } else if (const auto* str = node.as_string()) {
            out[key] = str->get();
        } else if (const auto* b = node.as_boolean()) {
            out[key] = b->get();
        } else if (const auto* arr = node.as_array()) {
            std::vector<double> xs;
            for (const auto& item : *arr) {
                const auto x = item.value<double>();
                if (!x || !(item.is_floating_point() || item.is_integer())) {
                    throw ParseError(origin + ": key '" + key + "' must be an array of numbers");
                }
                xs.push_back(*x);
            }
            out[key] = std::move(xs);
        } else {
            throw ParseError(origin + ": key '" + key + "' has an unsupported value type");
        }
    }
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text, const std::string& origin)
{
    ConfigFile cfg;
    cfg.origin_ = origin;
    try {
        const toml::table table = toml::parse(text, origin);
        flatten(table, "", cfg.values_, origin);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << origin << ":" << e.source().begin.line << ": " << e.description();
        throw ParseError(msg.str());
    }
    return cfg;
}

ConfigFile ConfigFile::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

std::vector<std::string> ConfigFile::keys() const
{
    std::vector<std::string> out;
    for (const auto& [k, v] : values_) {
        out.push_back(k);
    }
    return out;
}

const ConfigFile::Value* ConfigFile::find(const std::string& key) const
{
    const auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
}

double ConfigFile::number(const std::string& key, std::optional<double> fallback) const
{
    const Value* v = find(key);
    if (!v) {
        if (fallback) {
            return *fallback;
        }
        throw ParseError(origin_ + ": missing key '" + key + "'");
    }
    if (const auto* d = std::get_if<double>(v)) {
        return *d;
    }
    throw ParseError(origin_ + ": key '" + key + "' is not a number");
}

int ConfigFile::integer(const std::string& key, std::optional<int> fallback) const
{
    if (!has(key) && fallback) {
        return *fallback;
    }
    const double d = number(key);
    if (d != std::floor(d) || std::abs(d) > 2e9) {
        throw ParseError(origin_ + ": key '" + key + "' is not an integer");
    }
    return static_cast<int>(d);
}

std::string ConfigFile::string(const std::string& key, std::optional<std::string> fallback) const
{
    const Value* v = find(key);
    if (!v) {
        if (fallback) {
            return *fallback;
        }
        throw ParseError(origin_ + ": missing key '" + key + "'");
    }
    if (const auto* s = std::get_if<std::string>(v)) {
        return *s;
    }
    throw ParseError(origin_ + ": key '" + key + "' is not a string");
}

bool ConfigFile::boolean(const std::string& key, std::optional<bool> fallback) const
{
    const Value* v = find(key);
    if (!v) {
        if (fallback) {
            return *fallback;
        }
        throw ParseError(origin_ + ": missing key '" + key + "'");
    }
    if (const auto* b = std::get_if<bool>(v)) {
        return *b;
    }
    throw ParseError(origin_ + ": key '" + key + "' is not a boolean");
}

std::vector<double> ConfigFile::numbers(const std::string& key, std::optional<std::vector<double>> fallback) const
{
    const Value* v = find(key);
    if (!v) {
        if (fallback) {
            return *fallback;
        }
        throw ParseError(origin_ + ": missing key '" + key + "'");
    }
    if (const auto* xs = std::get_if<std::vector<double>>(v)) {
        return *xs;
    }
    if (const auto* d = std::get_if<double>(v)) {
        return {*d};
    }
    throw ParseError(origin_ + ": key '" + key + "' is not a number array");
}

}  // namespace normkam
