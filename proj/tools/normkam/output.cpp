#include "normkam/output.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "normkam/errors.hpp"

namespace normkam::cli {

namespace fs = std::filesystem;

void write_atomic(const fs::path& path, const std::string& contents)
{
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot write '" + tmp.string() + "'");
        }
        out << contents;
        out.flush();
        if (!out) {
            throw Error("write failed for '" + tmp.string() + "'");
        }
    }
    fs::rename(tmp, path);
}

std::uint64_t fnv1a64(const std::string& bytes)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_double(double x)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> columns) : width_(columns.size())
{
    row(columns);
}

void CsvWriter::row(const std::vector<std::string>& cells)
{
    if (cells.size() != width_) {
        throw std::logic_error("CsvWriter: row width mismatch");
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) {
            out_ += ',';
        }
        out_ += cells[i];
    }
    out_ += '\n';
}

fs::path resolve_output(const std::string& out, const std::string& default_name)
{
    if (out.empty()) {
        return fs::path(default_name);
    }
    const fs::path p(out);
    if (p.has_extension()) {
        return p;
    }
    return p / default_name;
}

fs::path write_manifest(const RunRecord& rec, double wall_seconds)
{
    nlohmann::json inputs = nlohmann::json::array();
    for (const auto& p : rec.inputs) {
        char hex[17];
        std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(read_file(p))));
        inputs.push_back({{"path", p.string()}, {"fnv1a64", hex}});
    }
    nlohmann::json outputs = nlohmann::json::array();
    for (const auto& p : rec.outputs) {
        outputs.push_back(p.string());
    }
    const nlohmann::json doc = {{"tool", "normkam"},
                                {"version", "0.1.0"},
                                {"command", rec.command},
                                {"inputs", inputs},
                                {"outputs", outputs},
                                {"seed", rec.seed},
                                {"threads", rec.threads},
                                {"tolerances", rec.tolerances},
                                {"wall_time_s", wall_seconds}};
    const fs::path& primary = rec.outputs.front();
    fs::path path = primary.parent_path() / (primary.stem().string() + ".manifest.json");
    write_atomic(path, doc.dump(2) + "\n");
    return path;
}

}  // namespace normkam::cli
