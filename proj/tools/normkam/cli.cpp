#include "normkam/cli.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "normkam/context.hpp"
#include "normkam/diophantine.hpp"
#include "normkam/errors.hpp"
#include "normkam/expression.hpp"
#include "normkam/parallel.hpp"

namespace normkam::cli {

namespace fs = std::filesystem;

double Context::residual_tol(double fallback) const
{
    if (tol_residual) {
        return *tol_residual;
    }
    return config.number("tol_residual", fallback);
}

double Context::mean_tol(double fallback) const
{
    if (tol_mean) {
        return *tol_mean;
    }
    return config.number("tol_mean", fallback);
}

std::optional<fs::path> Context::emit(const std::string& default_name, const std::string& contents,
                                      bool to_stdout_without_out)
{
    if (out_path.empty()) {
        if (to_stdout_without_out) {
            out << contents;
        }
        return std::nullopt;
    }
    const fs::path p = resolve_output(out_path, default_name);
    write_atomic(p, contents);
    record.outputs.push_back(p);
    return p;
}

void Context::emit_sibling(const std::string& name, const std::string& contents)
{
    if (out_path.empty() || record.outputs.empty()) {
        return;
    }
    const fs::path p = record.outputs.front().parent_path() / name;
    write_atomic(p, contents);
    record.outputs.push_back(p);
}

void Context::finish()
{
    if (record.outputs.empty()) {
        return;
    }
    record.seed = seed;
    record.threads = thread_count();
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    const fs::path m = write_manifest(record, wall);
    err << "wrote";
    for (const auto& p : record.outputs) {
        err << ' ' << p.string();
    }
    err << " (manifest " << m.string() << ")\n";
}

std::vector<double> parse_range(const std::string& spec)
{
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) {
        parts.push_back(item);
    }
    if (parts.size() == 1) {
        return {parse_value(parts[0])};
    }
    if (parts.size() != 3) {
        throw CLI::ValidationError("range", "expected lo:hi:step, got '" + spec + "'");
    }
    const double lo = parse_value(parts[0]);
    const double hi = parse_value(parts[1]);
    const double step = parse_value(parts[2]);
    if (!(step > 0.0) || hi < lo) {
        throw CLI::ValidationError("range", "need lo <= hi and step > 0 in '" + spec + "'");
    }
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i) {
        out.push_back(lo + static_cast<double>(i) * step);
    }
    return out;
}

double parse_value(const std::string& text)
{
    return Expression::parse(text)(0.0);
}

void register_diophantine(CLI::App& app, Context& ctx)
{
    auto* dio = app.add_subcommand("diophantine", "Arithmetic (small-divisor) conditions");
    dio->require_subcommand(1);
    auto* check = dio->add_subcommand("check", "Scan |<k,omega> gamma0/2pi - j| >= c0/|k|^sigma");
    struct Opts {
        std::vector<std::string> omega{"1"};
        std::string gamma0 = "2*pi*(sqrt(5)-1)/2";
        double c0 = 1e-3;
        double sigma = 1.0;
        int kmax = 32;
        std::string norm = "linf";
        bool oscillator = false;
    };
    auto o = std::make_shared<Opts>();
    check->add_option("--omega", o->omega, "Frequency vector (numbers or expressions)")->delimiter(',');
    check->add_option("--gamma0", o->gamma0, "Rotation step (number or expression)");
    check->add_option("--c0", o->c0, "Diophantine constant")->check(CLI::PositiveNumber);
    check->add_option("--sigma", o->sigma, "Exponent")->check(CLI::PositiveNumber);
    check->add_option("--kmax", o->kmax, "Scan cutoff")->check(CLI::PositiveNumber);
    check->add_option("--norm", o->norm, "Norm on k")->check(CLI::IsMember({"linf", "l1"}));
    check->add_flag("--oscillator", o->oscillator, "Scan |k/omega - l| for scalar omega instead");
    check->callback([&ctx, o] {
        ctx.action = [&ctx, o] {
            std::vector<double> omega;
            for (const auto& s : o->omega) {
                omega.push_back(parse_value(s));
            }
            DiophantineReport rep;
            if (o->oscillator) {
                if (omega.size() != 1) {
                    throw CLI::ValidationError("--omega", "--oscillator needs a scalar omega");
                }
                rep = check_oscillator_condition(omega[0], o->c0, o->sigma, o->kmax);
            } else {
                DiophantineParams p{omega, parse_value(o->gamma0), o->c0, o->sigma, o->kmax,
                                    o->norm == "l1" ? DivisorNorm::L1 : DivisorNorm::Linf};
                rep = check_condition(p);
            }
            const nlohmann::json doc = {{"passes", rep.passes},
                                        {"worst_k", rep.worst_k},
                                        {"worst_margin", rep.worst_margin},
                                        {"best_c0", rep.best_c0}};
            ctx.emit("diophantine.json", doc.dump(2) + "\n");
        };
    });
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Context ctx(out, err);
    ctx.started = std::chrono::steady_clock::now();

    CLI::App app{"normkam: normal forms of reversible cylinder maps and a resonant oscillator"};
    app.name("normkam");
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--config", ctx.config_path, "Key/value config with tolerances and defaults")
        ->check(CLI::ExistingFile);
    app.add_option("--out", ctx.out_path, "Output file (with extension) or directory");
    app.add_option("--seed", ctx.seed, "Seed for randomized checks");
    app.add_option("--threads", ctx.threads, "Worker threads (default: NORMKAM_THREADS or all cores)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--tol-residual", ctx.tol_residual, "Relative tolerance for leftover low-order terms");
    app.add_option("--tol-mean", ctx.tol_mean, "Relative tolerance for theta-means (obstruction test)");

    register_diophantine(app, ctx);
    register_normalform(app, ctx);
    register_oscillator(app, ctx);
    register_demo(app, ctx);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        ctx.record.command = "normkam";
        for (const auto& a : args) {
            ctx.record.command += " " + a;
        }
        if (!ctx.config_path.empty()) {
            ctx.config = ConfigFile::load(ctx.config_path);
            ctx.record.inputs.push_back(ctx.config_path);
            if (!ctx.threads && ctx.config.has("threads")) {
                ctx.threads = ctx.config.integer("threads");
            }
            if (!app.get_option("--seed")->count() && ctx.config.has("seed")) {
                ctx.seed = static_cast<std::uint64_t>(ctx.config.integer("seed"));
            }
        }
        if (ctx.threads > 0) {
            set_thread_count(ctx.threads);
        }
        if (!ctx.action) {
            err << app.help();
            return 1;
        }
        ctx.action();
        ctx.finish();
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace normkam::cli
