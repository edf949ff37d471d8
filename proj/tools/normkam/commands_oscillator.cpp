#include <cmath>
#include <numbers>

#include "normkam/context.hpp"
#include "normkam/oscillator.hpp"
#include "normkam/parallel.hpp"

namespace normkam::cli {

namespace {

using nlohmann::json;

OscillatorProblem load_problem(Context& ctx, const std::string& path)
{
    ctx.record.inputs.push_back(path);
    OscillatorProblem prob = OscillatorProblem::from_config(ConfigFile::load(path));
    prob.validate();
    return prob;
}

PoincareOptions poincare_options(const Context& ctx)
{
    PoincareOptions opt;
    opt.control.rel_tol = ctx.config.number("integrator.rel_tol", opt.control.rel_tol);
    opt.control.abs_tol = ctx.config.number("integrator.abs_tol", opt.control.abs_tol);
    opt.min_rate = ctx.config.number("integrator.min_rate", opt.min_rate);
    return opt;
}

json control_json(const StepControl& c)
{
    return {{"rel_tol", c.rel_tol}, {"abs_tol", c.abs_tol}, {"initial_step", c.initial_step},
            {"min_step", c.min_step}};
}

}  // namespace

void register_oscillator(CLI::App& app, Context& ctx)
{
    auto* osc = app.add_subcommand("oscillator", "Forced oscillator: twist fits, rotation numbers, probes");
    osc->require_subcommand(1);

    struct Opts {
        std::string problem;
        std::string lambda = "50:400:10";
        int phases = 8;
        bool raw = false;
        std::string probe = "boundedness";
        std::string amplitudes = "10:100:10";
        double t_max = 1e5;
        double bound_factor = 10.0;
        int iterates = 200;
    };
    auto o = std::make_shared<Opts>();

    auto* twist = osc->add_subcommand("twist", "Fit gamma0 + gamma1/lambda to the return-time advance");
    twist->add_option("--problem", o->problem, "Problem file")->required()->check(CLI::ExistingFile);
    twist->add_option("--lambda", o->lambda, "Levels lo:hi:step")->capture_default_str();
    twist->add_option("--phases", o->phases, "Initial phases per level")->capture_default_str()->check(CLI::PositiveNumber);
    twist->add_flag("--raw", o->raw, "Regress raw t-advances instead of transformed ones");
    twist->callback([&ctx, o] {
        ctx.action = [&ctx, o] {
            const OscillatorProblem prob = load_problem(ctx, o->problem);
            TwistFitOptions opt;
            opt.lambdas = parse_range(o->lambda);
            opt.phases = o->phases;
            opt.raw = o->raw;
            opt.poincare = poincare_options(ctx);
            ctx.record.tolerances = control_json(opt.poincare.control);
            const TwistFitReport fit = fit_twist(prob, opt);
            const TwistValues exact = analytic_twist(prob);

            CsvWriter csv({"lambda", "phase", "t_advance", "r_return", "sigma_advance"});
            for (const auto& s : fit.samples) {
                csv.row({format_double(s.lambda), format_double(s.phase), format_double(s.t_advance),
                         format_double(s.r_return), format_double(s.sigma_advance)});
            }
            const double rel = exact.gamma1 != 0.0 ? std::abs(fit.gamma1_hat - exact.gamma1) / std::abs(exact.gamma1)
                                                   : std::abs(fit.gamma1_hat);
            const json doc = {{"gamma0_hat", fit.gamma0_hat},
                              {"gamma1_hat", fit.gamma1_hat},
                              {"gamma0", exact.gamma0},
                              {"gamma1", exact.gamma1},
                              {"gamma1_error", rel},
                              {"lambdas", opt.lambdas},
                              {"residuals", fit.residuals},
                              {"residual_rms", fit.residual_rms},
                              {"phases", opt.phases},
                              {"mode", opt.raw ? "raw" : "transformed"}};
            if (ctx.emit("twist.csv", csv.str())) {
                ctx.emit_sibling("twist_fit.json", doc.dump(2) + "\n");
                ctx.out << "gamma0_hat = " << format_double(fit.gamma0_hat) << " (exact "
                        << format_double(exact.gamma0) << ")\n"
                        << "gamma1_hat = " << format_double(fit.gamma1_hat) << " (exact "
                        << format_double(exact.gamma1) << ")\n";
            }
        };
    });

    auto* sweep = osc->add_subcommand("sweep", "Long-time probes over a family of initial amplitudes");
    sweep->add_option("--problem", o->problem, "Problem file")->required()->check(CLI::ExistingFile);
    sweep->add_option("--probe", o->probe, "Probe kind")->capture_default_str()->check(CLI::IsMember({"boundedness"}));
    sweep->add_option("--amplitudes", o->amplitudes, "x(0) values lo:hi:step (x'(0) = 0)")->capture_default_str();
    sweep->add_option("--tmax", o->t_max, "Time horizon")->capture_default_str()->check(CLI::PositiveNumber);
    sweep->add_option("--bound-factor", o->bound_factor, "Escape threshold relative to the initial norm")->capture_default_str()
        ->check(CLI::Range(1.0, 1e12));
    sweep->callback([&ctx, o] {
        ctx.action = [&ctx, o] {
            const OscillatorProblem prob = load_problem(ctx, o->problem);
            const std::vector<double> amps = parse_range(o->amplitudes);
            const StepControl ctl{ctx.config.number("integrator.rel_tol", 1e-11),
                                  ctx.config.number("integrator.abs_tol", 1e-11), 1e-2, 1e-13};
            ctx.record.tolerances = control_json(ctl);
            std::vector<BoundednessReport> reports(amps.size());
            parallel_for(amps.size(), [&](std::size_t i) {
                const double a = amps[i];
                reports[i] = boundedness_probe(prob, {a, 0.0}, o->t_max, o->bound_factor * std::abs(a), ctl);
            });
            CsvWriter csv({"amplitude", "initial_norm", "sup_norm", "ratio", "escaped", "t_end"});
            for (std::size_t i = 0; i < amps.size(); ++i) {
                const auto& r = reports[i];
                csv.row({format_double(amps[i]), format_double(r.initial_norm), format_double(r.sup_norm),
                         format_double(r.sup_norm / r.initial_norm), r.escaped ? "1" : "0",
                         format_double(r.t_end)});
            }
            ctx.emit("sweep.csv", csv.str());
        };
    });

    auto* rotation = osc->add_subcommand("rotation", "Rotation number of the section map per level");
    rotation->add_option("--problem", o->problem, "Problem file")->required()->check(CLI::ExistingFile);
    rotation->add_option("--lambda", o->lambda, "Levels lo:hi:step")->capture_default_str();
    rotation->add_option("--iterates", o->iterates, "Returns per orbit")->capture_default_str()->check(CLI::PositiveNumber);
    rotation->callback([&ctx, o] {
        ctx.action = [&ctx, o] {
            const OscillatorProblem prob = load_problem(ctx, o->problem);
            const std::vector<double> lambdas = parse_range(o->lambda);
            const PoincareOptions opt = poincare_options(ctx);
            ctx.record.tolerances = control_json(opt.control);
            std::vector<double> rho(lambdas.size());
            parallel_for(lambdas.size(), [&](std::size_t i) {
                rho[i] = rotation_number(prob, {lambdas[i], 0.0, 0.0}, o->iterates, opt);
            });
            CsvWriter csv({"lambda", "rotation_number"});
            for (std::size_t i = 0; i < lambdas.size(); ++i) {
                csv.row({format_double(lambdas[i]), format_double(rho[i])});
            }
            ctx.emit("rotation.csv", csv.str());
        };
    });

    auto* section = osc->add_subcommand("section", "Iterates of the section map (r, t mod 2 pi)");
    section->add_option("--problem", o->problem, "Problem file")->required()->check(CLI::ExistingFile);
    section->add_option("--lambda", o->lambda, "Starting radii lo:hi:step")->capture_default_str();
    section->add_option("--iterates", o->iterates, "Returns per orbit")->capture_default_str()->check(CLI::PositiveNumber);
    section->callback([&ctx, o] {
        ctx.action = [&ctx, o] {
            const OscillatorProblem prob = load_problem(ctx, o->problem);
            const std::vector<double> lambdas = parse_range(o->lambda);
            const PoincareOptions opt = poincare_options(ctx);
            ctx.record.tolerances = control_json(opt.control);
            std::vector<std::vector<PolarState>> orbits(lambdas.size());
            parallel_for(lambdas.size(), [&](std::size_t i) {
                PolarState s{lambdas[i], 0.0, 0.0};
                for (int n = 0; n < o->iterates; ++n) {
                    s = poincare_map(prob, s, opt);
                    orbits[i].push_back(s);
                }
            });
            const double period = 2.0 * std::numbers::pi;
            CsvWriter csv({"orbit", "iterate", "lambda0", "r", "t_mod"});
            for (std::size_t i = 0; i < orbits.size(); ++i) {
                for (std::size_t n = 0; n < orbits[i].size(); ++n) {
                    const double t = std::fmod(orbits[i][n].t, period);
                    csv.row({std::to_string(i), std::to_string(n + 1), format_double(lambdas[i]),
                             format_double(orbits[i][n].r), format_double(t < 0 ? t + period : t)});
                }
            }
            ctx.emit("section.csv", csv.str());
        };
    });
}

}  // namespace normkam::cli
