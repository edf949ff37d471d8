#pragma once

#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace normkam::cli {

// Writes via a temporary sibling and rename, so readers never see a partial file.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

std::uint64_t fnv1a64(const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

// Shortest round-trip decimal form of a double.
std::string format_double(double x);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> columns);
    void row(const std::vector<std::string>& cells);
    std::string str() const { return out_; }

private:
    std::size_t width_;
    std::string out_;
};

// Resolves --out: a path with an extension names the primary output file; any
// other value is a directory receiving `default_name`.
std::filesystem::path resolve_output(const std::string& out, const std::string& default_name);

struct RunRecord {
    std::string command;
    std::vector<std::filesystem::path> inputs;
    std::vector<std::filesystem::path> outputs;
    nlohmann::json tolerances = nlohmann::json::object();
    std::uint64_t seed = 0;
    int threads = 1;
};

// Manifest next to the primary output: <dir>/<stem>.manifest.json.
std::filesystem::path write_manifest(const RunRecord& rec, double wall_seconds);

}  // namespace normkam::cli
