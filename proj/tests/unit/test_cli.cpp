#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "normkam/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = normkam::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("normkam_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

const char* arctan_problem = R"toml(
omega = "sqrt(2)"
phi = "0"
f = "0"
g = "atan(x)"
p = "0.1*cos(t)"

[limits]
g_plus = "pi/2"
g_minus = "-pi/2"
)toml";

}  // namespace

TEST_CASE("usage errors exit with 1 and print usage")
{
    const auto r = run({"--bogus"});
    CHECK(r.code == 1);
    CHECK(r.err.find("Usage") != std::string::npos);
    CHECK(run({}).code == 1);
    CHECK(run({"demo", "linearizable", "--nope"}).code == 1);
    CHECK(run({"oscillator", "twist"}).code == 1);  // --problem is required
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("diophantine check reports resonances")
{
    const auto r = run({"diophantine", "check", "--omega", "1", "--gamma0", "2*pi/3", "--kmax", "20"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK_FALSE(doc["passes"].get<bool>());
    CHECK(std::abs(doc["worst_k"][0].get<int>()) == 3);
}

TEST_CASE("demo linearizable writes decay table, report and manifest deterministically")
{
    const fs::path a = scratch("demo_a");
    const fs::path b = scratch("demo_b");
    const auto ra = run({"--out", a.string(), "demo", "linearizable"});
    REQUIRE(ra.code == 0);
    CHECK(ra.out.find("step") != std::string::npos);
    const auto rb = run({"demo", "linearizable", "--out", b.string()});
    REQUIRE(rb.code == 0);
    for (const char* name : {"decay.csv", "demo_linearizable.json", "map.json"}) {
        CHECK(fs::exists(a / name));
        CHECK(slurp(a / name) == slurp(b / name));
    }
    const auto csv = slurp(a / "decay.csv");
    CHECK(csv.rfind("step,order_in,order_out,residual_before,residual_after,d_reference,reversibility_out,"
                    "cleanup_max\n",
                    0) == 0);

    // every output is reachable from the manifest
    const auto manifest = nlohmann::json::parse(slurp(a / "decay.manifest.json"));
    CHECK(manifest["outputs"].size() == 3);
    for (const auto& o : manifest["outputs"]) {
        CHECK(fs::exists(o.get<std::string>()));
    }
    CHECK(manifest["seed"] == 0);
    CHECK(manifest.contains("tolerances"));
}

TEST_CASE("normalform reduce round trip through a map file")
{
    const fs::path dir = scratch("reduce");
    REQUIRE(run({"demo", "linearizable", "--out", dir.string()}).code == 0);
    const fs::path report = dir / "report.json";
    const auto r = run({"normalform", "reduce", "--map", (dir / "map.json").string(), "--out", report.string(),
                        "--seed", "7"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(slurp(report));
    CHECK(doc["stop"] == "max_steps");
    CHECK(doc["steps"].size() == 4);
    CHECK(doc["conjugacy_error"].get<double>() < 1e-9);
    CHECK(doc["transform"].contains("u"));
    const auto manifest = nlohmann::json::parse(slurp(dir / "report.manifest.json"));
    CHECK(manifest["inputs"][0]["fnv1a64"].get<std::string>().size() == 16);
    CHECK(manifest["seed"] == 7);
}

TEST_CASE("obstructions are results, not failures")
{
    const fs::path dir = scratch("obstruction");
    const auto r = run({"demo", "obstruction", "--out", dir.string()});
    CHECK(r.code == 0);
    const auto doc = nlohmann::json::parse(slurp(dir / "demo_obstruction.json"));
    CHECK(doc["stop"] == "obstruction");
    CHECK(doc["obstruction"]["order"] == 3);
}

TEST_CASE("oscillator twist writes at least ten rows and a fit")
{
    const fs::path dir = scratch("twist");
    {
        std::ofstream(dir / "prob.toml") << arctan_problem;
    }
    const fs::path csv = dir / "twist.csv";
    const auto r = run({"oscillator", "twist", "--problem", (dir / "prob.toml").string(), "--lambda", "50:400:10",
                        "--out", csv.string()});
    REQUIRE(r.code == 0);
    const auto text = slurp(csv);
    CHECK(text.rfind("lambda,phase,t_advance,r_return,sigma_advance\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') >= 11);
    const auto fit = nlohmann::json::parse(slurp(dir / "twist_fit.json"));
    CHECK(fit["gamma1_error"].get<double>() < 0.05);
}

TEST_CASE("other oscillator commands")
{
    const fs::path dir = scratch("osc");
    {
        std::ofstream(dir / "prob.toml") << arctan_problem;
    }
    const std::string prob = (dir / "prob.toml").string();
    const auto rot = run({"oscillator", "rotation", "--problem", prob, "--lambda", "50:70:10", "--iterates", "20"});
    REQUIRE(rot.code == 0);
    CHECK(rot.out.rfind("lambda,rotation_number\n", 0) == 0);
    const auto sec = run({"oscillator", "section", "--problem", prob, "--lambda", "50", "--iterates", "3"});
    REQUIRE(sec.code == 0);
    CHECK(std::count(sec.out.begin(), sec.out.end(), '\n') == 4);
    const auto sw = run({"oscillator", "sweep", "--problem", prob, "--amplitudes", "10:20:10", "--tmax", "100"});
    REQUIRE(sw.code == 0);
    CHECK(sw.out.rfind("amplitude,initial_norm,sup_norm,ratio,escaped,t_end\n", 0) == 0);
}

TEST_CASE("bad inputs fail with exit code 2")
{
    const fs::path dir = scratch("bad");
    {
        std::ofstream(dir / "bad.toml") << "omega = \n";
        std::ofstream(dir / "odd.toml") << "omega = 1\nf = \"x\"\n";
    }
    CHECK(run({"oscillator", "twist", "--problem", (dir / "bad.toml").string()}).code == 2);
    CHECK(run({"oscillator", "twist", "--problem", (dir / "odd.toml").string()}).code == 2);
    {
        std::ofstream(dir / "ok.toml") << arctan_problem;
    }
    // fewer than three levels cannot be fitted
    CHECK(run({"oscillator", "twist", "--problem", (dir / "ok.toml").string(), "--lambda", "50:60:10"}).code == 2);
}
