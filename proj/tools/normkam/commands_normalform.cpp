#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "normkam/context.hpp"
#include "normkam/errors.hpp"
#include "normkam/normalform.hpp"
#include "normkam/series_io.hpp"

namespace normkam::cli {

namespace {

using nlohmann::json;

json step_json(const StepReport& r)
{
    return {{"step", r.step},
            {"order_in", r.order_in},
            {"order_out", r.order_out},
            {"residual_before", r.residual_before},
            {"residual_after", r.residual_after},
            {"mean_norm", r.mean_norm},
            {"reversibility_in", r.reversibility_in},
            {"reversibility_out", r.reversibility_out},
            {"u_norm", r.u_norm},
            {"v_norm", r.v_norm},
            {"du_norm", r.du_norm},
            {"dv_norm", r.dv_norm},
            {"cleanup_max", r.cleanup_max},
            {"parity_residual", r.parity_residual},
            {"truncation_loss", r.truncation_loss},
            {"min_divisor", r.min_divisor},
            {"conjugacy_passes", r.conjugacy_passes},
            {"d_reference", r.d_reference}};
}

json kam_json(const KamResult& res)
{
    json steps = json::array();
    for (const auto& r : res.reports) {
        steps.push_back(step_json(r));
    }
    json obstruction = nullptr;
    if (res.obstruction) {
        obstruction = {{"step", res.obstruction->step},
                       {"order", res.obstruction->order},
                       {"value", res.obstruction->value},
                       {"radial_value", res.obstruction->radial_value}};
    }
    const auto exponent = fit_decay_exponent(res.decay);
    return {{"stop", to_string(res.stop)},
            {"steps", steps},
            {"obstruction", obstruction},
            {"decay", res.decay},
            {"decay_exponent", exponent ? json(*exponent) : json(nullptr)}};
}

std::string decay_csv(const KamResult& res)
{
    CsvWriter csv({"step", "order_in", "order_out", "residual_before", "residual_after", "d_reference",
                   "reversibility_out", "cleanup_max"});
    for (const auto& r : res.reports) {
        csv.row({std::to_string(r.step), std::to_string(r.order_in), std::to_string(r.order_out),
                 format_double(r.residual_before), format_double(r.residual_after), format_double(r.d_reference),
                 format_double(r.reversibility_out), format_double(r.cleanup_max)});
    }
    return csv.str();
}

void print_table(std::ostream& out, const KamResult& res)
{
    char line[200];
    std::snprintf(line, sizeof line, "%4s %5s %5s %13s %13s %13s %11s\n", "step", "s", "out", "before", "after",
                  "d_ref", "revers.");
    out << line;
    for (const auto& r : res.reports) {
        std::snprintf(line, sizeof line, "%4d %5d %5d %13.4e %13.4e %13.4e %11.2e\n", r.step, r.order_in,
                      r.order_out, r.residual_before, r.residual_after, r.d_reference, r.reversibility_out);
        out << line;
    }
    out << "stop: " << to_string(res.stop);
    if (res.obstruction) {
        out << " (order " << res.obstruction->order << ", mean " << res.obstruction->value << ")";
    }
    out << "\n";
    if (const auto e = fit_decay_exponent(res.decay)) {
        out << "log-log decay exponent: " << *e << "\n";
    }
}

// Largest |M o T - T o M_final| over random points with |r| <= rho.
double conjugacy_error(const ReversibleCylinderMap& m, const NearIdentityTransform& t,
                       const ReversibleCylinderMap& final_map, double rho, std::uint64_t seed, int points)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> radius(-rho, rho);
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
        const double th = angle(rng);
        const double r = radius(rng);
        const auto [a1, b1] = t(th, r);
        const auto lhs = m(a1, b1);
        const auto [a2, b2] = final_map(th, r);
        const auto rhs = t(a2, b2);
        worst = std::max({worst, std::abs(lhs.first - rhs.first), std::abs(lhs.second - rhs.second)});
    }
    return worst;
}

KamSchedule schedule_from(const ConfigFile& cfg)
{
    KamSchedule s;
    s.alpha = cfg.integer("alpha", s.alpha);
    s.t0 = cfg.number("t0", s.t0);
    s.rho0 = cfg.number("rho0", s.rho0);
    s.d0 = cfg.number("d0", s.d0);
    s.n_max = cfg.integer("n_max", s.n_max);
    s.validate();
    return s;
}

json tolerance_json(const Tolerances& t)
{
    return {{"residual", t.residual}, {"mean", t.mean}, {"parity", t.parity}, {"min_divisor", t.min_divisor},
            {"floor", t.floor}};
}

}  // namespace

void register_normalform(CLI::App& app, Context& ctx)
{
    auto* nf = app.add_subcommand("normalform", "Normal-form reduction of reversible cylinder maps");
    nf->require_subcommand(1);
    auto* reduce = nf->add_subcommand("reduce", "Birkhoff stages up to s0, then the KAM iteration");
    struct Opts {
        std::string map;
        std::string schedule;
        int check_points = 200;
    };
    auto o = std::make_shared<Opts>();
    reduce->add_option("--map", o->map, "Map JSON {gamma0, f, g}")->required()->check(CLI::ExistingFile);
    reduce->add_option("--schedule", o->schedule, "Schedule and Diophantine data (key = value)")
        ->check(CLI::ExistingFile);
    reduce->add_option("--check-points", o->check_points, "Random points for the conjugacy check");
    reduce->callback([&ctx, o] {
        ctx.action = [&ctx, o] {
            const ReversibleCylinderMap m = map_from_json(json::parse(read_file(o->map)));
            ctx.record.inputs.push_back(o->map);
            ConfigFile sched = ctx.config;
            if (!o->schedule.empty()) {
                sched = ConfigFile::load(o->schedule);
                ctx.record.inputs.push_back(o->schedule);
            }
            const KamSchedule schedule = schedule_from(sched);
            DiophantineParams dioph{{m.f.freq().begin(), m.f.freq().end()}, m.gamma0, sched.number("c0", 1e-3),
                                    sched.number("sigma", 1.0), sched.integer("kmax", m.f.cutoff())};
            Tolerances tol;
            tol.residual = ctx.residual_tol(sched.number("tol_residual", tol.residual));
            tol.mean = ctx.mean_tol(sched.number("tol_mean", tol.mean));
            tol.parity = sched.number("tol_parity", tol.parity);
            tol.min_divisor = sched.number("min_divisor", 0.0);
            ctx.record.tolerances = tolerance_json(tol);

            json doc = {{"gamma0", m.gamma0},
                        {"order_max", m.f.order_max()},
                        {"cutoff", m.f.cutoff()},
                        {"schedule",
                         {{"alpha", schedule.alpha},
                          {"t0", schedule.t0},
                          {"rho0", schedule.rho0},
                          {"d0", schedule.d0},
                          {"n_max", schedule.n_max}}},
                        {"diophantine", {{"c0", dioph.c0}, {"sigma", dioph.sigma}, {"kmax", dioph.scan_cutoff}}},
                        {"tolerances", ctx.record.tolerances}};

            // Bring the residual up to order s0 first.
            ReversibleCylinderMap start = m;
            NearIdentityTransform pre = NearIdentityTransform::identity(m.f);
            const int s0 = std::min(schedule.s(0), m.f.order_max());
            const auto order = m.residual_order();
            json birkhoff = nullptr;
            if (order && *order < s0) {
                const BirkhoffResult br = birkhoff_reduce(m, s0, dioph, {true, tol.min_divisor});
                json stages = json::array();
                for (const auto& st : br.stages) {
                    stages.push_back({{"order", st.order},
                                      {"kind", st.kind},
                                      {"mean", st.mean},
                                      {"generator_norm", st.generator_norm}});
                }
                birkhoff = {{"target_order", s0}, {"gammas", br.gammas}, {"stages", stages},
                            {"leftover", br.leftover}};
                const double scale = coefficient_norm(m.f) + coefficient_norm(m.g);
                for (std::size_t k = 0; k < br.gammas.size(); ++k) {
                    if (std::abs(br.gammas[k]) > tol.mean * scale + tol.floor) {
                        doc["birkhoff"] = birkhoff;
                        doc["stop"] = "obstruction";
                        doc["obstruction"] = {{"step", -1}, {"order", static_cast<int>(k) + 1},
                                              {"value", br.gammas[k]}, {"radial_value", 0.0}};
                        ctx.emit("report.json", doc.dump(2) + "\n");
                        ctx.err << "obstruction: Birkhoff constant gamma_" << k + 1 << " = " << br.gammas[k]
                                << "\n";
                        return;
                    }
                }
                start = {m.gamma0, truncate_orders(br.map.f, s0, m.f.order_max()), br.map.g};
                pre = br.transform;
            }
            doc["birkhoff"] = birkhoff;

            const KamResult res = kam_iterate(start, schedule, dioph, tol);
            doc.update(kam_json(res));
            const NearIdentityTransform total = compose_transforms(pre, res.transform);
            doc["conjugacy_error"] =
                conjugacy_error(m, total, res.map, schedule.rho(schedule.n_max), ctx.seed, o->check_points);
            doc["transform"] = transform_to_json(total);
            doc["final_map"] = map_to_json(res.map);
            ctx.emit("report.json", doc.dump(2) + "\n");
            if (!ctx.out_path.empty()) {
                print_table(ctx.out, res);
            }
        };
    });
}

void register_demo(CLI::App& app, Context& ctx)
{
    auto* demo = app.add_subcommand("demo", "Synthetic end-to-end runs");
    demo->require_subcommand(1);
    struct Opts {
        int order_max = 40;
        int cutoff = 32;
        double eps = 1e-3;
        int steps = 4;
        std::string gamma0 = "pi*(sqrt(5)-1)";
        double delta = 1e-4;
        int twist_order = 3;
    };
    auto o = std::make_shared<Opts>();
    auto* lin = demo->add_subcommand("linearizable", "KAM reduction of a synthetic reversible map (s = 3)");
    auto* obs = demo->add_subcommand("obstruction", "Detect a planted Birkhoff-type twist term");
    for (auto* sub : {lin, obs}) {
        sub->add_option("--order-max", o->order_max, "Truncation order N")->check(CLI::Range(4, 200));
        sub->add_option("--cutoff", o->cutoff, "Fourier cutoff K")->check(CLI::Range(2, 512));
        sub->add_option("--eps", o->eps, "Generator size");
        sub->add_option("--steps", o->steps, "Maximum KAM steps")->check(CLI::NonNegativeNumber);
        sub->add_option("--gamma0", o->gamma0, "Rotation step (number or expression)");
    }
    obs->add_option("--delta", o->delta, "Planted twist coefficient");
    obs->add_option("--twist-order", o->twist_order, "Order of the planted term")->check(CLI::Range(3, 64));

    auto run_demo = [&ctx, o](bool obstructed) {
        const double gamma0 = parse_value(o->gamma0);
        const SyntheticSpec spec{{1.0}, gamma0, o->eps, 3, o->order_max, o->cutoff};
        const ReversibleCylinderMap m =
            obstructed ? make_obstructed_map(spec, o->delta, o->twist_order) : make_linearizable_map(spec);
        KamSchedule schedule;
        schedule.n_max = o->steps;
        const DiophantineParams dioph{{1.0}, gamma0, 0.38, 1.0, o->cutoff};
        Tolerances tol;
        tol.residual = ctx.residual_tol(tol.residual);
        tol.mean = ctx.mean_tol(tol.mean);
        ctx.record.tolerances = tolerance_json(tol);
        const KamResult res = kam_iterate(m, schedule, dioph, tol);

        print_table(ctx.out, res);
        json doc = kam_json(res);
        doc["spec"] = {{"gamma0", gamma0}, {"eps", o->eps}, {"order", 3}, {"order_max", o->order_max},
                       {"cutoff", o->cutoff}};
        if (obstructed) {
            doc["planted"] = {{"delta", o->delta}, {"order", o->twist_order}};
        }
        if (ctx.emit("decay.csv", decay_csv(res), false)) {
            ctx.emit_sibling(obstructed ? "demo_obstruction.json" : "demo_linearizable.json", doc.dump(2) + "\n");
            ctx.emit_sibling("map.json", map_to_json(m).dump(2) + "\n");
        }
    };
    lin->callback([&ctx, run_demo] { ctx.action = [run_demo] { run_demo(false); }; });
    obs->callback([&ctx, run_demo] { ctx.action = [run_demo] { run_demo(true); }; });
}

}  // namespace normkam::cli
