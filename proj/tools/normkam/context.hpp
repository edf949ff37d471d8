#pragma once

#include <CLI11.hpp>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "normkam/config_file.hpp"
#include "normkam/output.hpp"

namespace normkam::cli {

struct Context {
    Context(std::ostream& o, std::ostream& e) : out(o), err(e) {}

    std::ostream& out;
    std::ostream& err;

    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    int threads = 0;
    std::optional<double> tol_residual;
    std::optional<double> tol_mean;

    ConfigFile config;
    RunRecord record;
    std::chrono::steady_clock::time_point started;
    std::function<void()> action;

    // Tolerance precedence: flag, then --config, then the fallback.
    double residual_tol(double fallback) const;
    double mean_tol(double fallback) const;

    // Writes `contents` to the resolved --out path (or stdout without --out)
    // and records it for the manifest. Returns the path written, if any.
    std::optional<std::filesystem::path> emit(const std::string& default_name, const std::string& contents,
                                              bool to_stdout_without_out = true);
    // Writes a secondary file next to the primary output.
    void emit_sibling(const std::string& name, const std::string& contents);
    void finish();
};

// "lo:hi:step" or a single value.
std::vector<double> parse_range(const std::string& spec);
// Numbers or constant expressions such as "2*pi/3" or "sqrt(2)".
double parse_value(const std::string& text);

void register_diophantine(CLI::App& app, Context& ctx);
void register_normalform(CLI::App& app, Context& ctx);
void register_oscillator(CLI::App& app, Context& ctx);
void register_demo(CLI::App& app, Context& ctx);

}  // namespace normkam::cli
