// Command-line front end: coefficient tables, either solve engine on the
// built-in examples or user configs, engine comparison and period reports.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "rootflow/dynamics.hpp"
#include "rootflow/experiment.hpp"

namespace {

using namespace rootflow;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonArgs {
    std::string example_id;
    std::string config_path;
    std::string engine = "algebraic";
    double t_end = -1.0;
    double dt = -1.0;
    std::string out;
    std::string format;
    double tol_root = -1.0;
    double tol_period = -1.0;
    std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_engine = true) {
    auto* ex = cmd->add_option("--example", args.example_id, "built-in example id");
    auto* cf = cmd->add_option("--config", args.config_path, "JSON experiment config");
    ex->excludes(cf);
    if (with_engine)
        cmd->add_option("--engine", args.engine, "algebraic | direct | both")
            ->check(CLI::IsMember({"algebraic", "direct", "both"}));
    cmd->add_option("--t-end", args.t_end, "override end time")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--dt", args.dt, "override sample step")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", args.out, "output path (default stdout)");
    cmd->add_option("--format", args.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--tol-root", args.tol_root, "root-tracking residual tolerance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tol-period", args.tol_period, "period recurrence tolerance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", args.seed, "seed for randomized consistency spot checks");
}

ExperimentConfig make_config(const CommonArgs& args) {
    ExperimentConfig cfg;
    if (!args.example_id.empty()) {
        cfg = example_config(args.example_id);
    } else if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) throw config_error("cannot open config file " + args.config_path);
        std::stringstream buffer;
        buffer << in.rdbuf();
        cfg = parse_config_json(buffer.str());
    } else {
        throw config_error("either --example or --config is required");
    }
    if (args.t_end > 0) cfg.ivp.t_end = args.t_end;
    if (args.dt > 0) cfg.ivp.sample_dt = args.dt;
    if (!args.out.empty()) cfg.out_path = args.out;
    if (args.format == "csv") cfg.format = OutputFormat::Csv;
    if (args.format == "json") cfg.format = OutputFormat::Json;
    if (args.tol_root > 0) cfg.options.tol_root = args.tol_root;
    if (args.tol_period > 0) cfg.options.tol_period = args.tol_period;
    if (args.engine == "algebraic") cfg.engine = EngineChoice::Algebraic;
    if (args.engine == "direct") cfg.engine = EngineChoice::Direct;
    if (args.engine == "both") cfg.engine = EngineChoice::Both;
    return cfg;
}

std::string render(const ExperimentConfig& cfg, const Trajectory& traj) {
    if (cfg.format == OutputFormat::Json) return trajectory_to_json(traj);
    std::ostringstream os;
    write_trajectory_csv(os, traj);
    return os.str();
}

// all-or-nothing file output: stage next to the target, rename on success
void emit(const std::string& path, const std::string& payload) {
    if (path.empty()) {
        std::cout << payload;
        return;
    }
    const std::filesystem::path target(path);
    const std::filesystem::path staged = target.string() + ".tmp";
    {
        std::ofstream out(staged, std::ios::trunc);
        if (!out) throw config_error("cannot write to " + staged.string());
        out << payload;
        if (!out) throw config_error("write failed for " + staged.string());
    }
    std::filesystem::rename(staged, target);
}

double rel_deviation(const Trajectory& a, const Trajectory& b, std::vector<double>* per_coord) {
    const int n = std::min(a.samples(), b.samples());
    double amp = 0.0;
    std::vector<double> dev(a.n_roots, 0.0);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < a.n_roots; ++c) {
            dev[c] = std::max(dev[c], std::abs(a.states[i][c] - b.states[i][c]));
            amp = std::max(amp, std::abs(a.states[i][c]));
        }
    if (per_coord) *per_coord = dev;
    double overall = 0.0;
    for (double d : dev) overall = std::max(overall, d);
    return overall / (1.0 + amp);
}

void spot_check_identities(const ExperimentConfig& cfg, const Trajectory& traj,
                           std::uint64_t seed) {
    if (traj.velocities.empty()) return;
    const auto tables = CoefficientTables::get(traj.n_roots, traj.m1);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, traj.samples() - 1);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        const int i = pick(rng);
        RootState rs{traj.states[i], traj.velocities[i], traj.m1};
        const CoeffState cs = coeff_state_from_roots(rs, traj.times[i]);
        const CVec f = model_rhs(cfg.ivp.model, cs.t, cs.y, cs.ydot);
        const double scale = coefficient_scale(rs.x, rs.m1);
        const Complex r1 = remark_residual_first(rs.x, rs.xdot, cs.y, cs.ydot, *tables);
        const Complex r2 =
            remark_residual_second(rs.x, rs.xdot, cs.y, cs.ydot, f, *tables);
        worst = std::max(worst, std::max(std::abs(r1), std::abs(r2)) / scale);
    }
    std::printf("  identity spot checks (5 random samples): max relative residual %.3e\n",
                worst);
}

int cmd_tables(int n, int m1, const std::string& out) {
    const auto tables = CoefficientTables::get(n, m1);
    emit(out, tables_to_json(*tables) + "\n");
    return 0;
}

int cmd_solve(const CommonArgs& args) {
    ExperimentConfig cfg = make_config(args);
    if (cfg.engine != EngineChoice::Direct) {
        const Trajectory traj = solve_algebraic(cfg.ivp, cfg.options);
        emit(cfg.out_path, render(cfg, traj));
        if (cfg.engine == EngineChoice::Both) {
            const Trajectory direct = integrate_direct(cfg.ivp, cfg.options);
            const std::string direct_path =
                cfg.out_path.empty() ? "" : cfg.out_path + ".direct";
            emit(direct_path, render(cfg, direct));
            std::fprintf(stderr, "engines agree to %.3e relative\n",
                         rel_deviation(traj, direct, nullptr));
        }
    } else {
        const Trajectory traj = integrate_direct(cfg.ivp, cfg.options);
        emit(cfg.out_path, render(cfg, traj));
    }
    return 0;
}

int compare_one(const CommonArgs& args, const std::string& id) {
    CommonArgs local = args;
    if (!id.empty()) {
        local.example_id = id;
        local.config_path.clear();
    }
    ExperimentConfig cfg = make_config(local);
    const Trajectory alg = solve_algebraic(cfg.ivp, cfg.options);
    const Trajectory dir = integrate_direct(cfg.ivp, cfg.options);
    std::vector<double> per_coord;
    const double rel = rel_deviation(alg, dir, &per_coord);
    const double tol = 1e-3;
    std::printf("%s over [%g, %g] at dt=%g:\n",
                cfg.example_id.empty() ? "config" : cfg.example_id.c_str(), cfg.ivp.t0,
                cfg.ivp.t_end, cfg.ivp.sample_dt);
    for (std::size_t c = 0; c < per_coord.size(); ++c)
        std::printf("  x%zu max deviation %.6e\n", c + 1, per_coord[c]);
    std::printf("  overall %.6e relative -> %s (tolerance %.1e)\n", rel,
                rel <= tol ? "PASS" : "FAIL", tol);
    spot_check_identities(cfg, alg, args.seed);
    return rel <= tol ? 0 : kExitNumerical;
}

int cmd_compare(const CommonArgs& args, bool all) {
    if (!all) return compare_one(args, "");
    int rc = 0;
    for (const ExampleInfo& info : list_examples())
        rc = std::max(rc, compare_one(args, info.id));
    return rc;
}

int cmd_period(const CommonArgs& args) {
    ExperimentConfig cfg = make_config(args);
    const auto period = model_period(cfg.ivp.model);
    if (!period)
        throw config_error("the model has no registered period to use as a candidate");
    const double candidate = period->period;

    // span: four candidates for the multiple-branch recurrences, plus the
    // transient for asymptotic models
    double t_end = cfg.ivp.t0 + 5.0 * candidate;
    if (period->asymptotic && cfg.ivp.model.damping > 0.0)
        t_end = cfg.ivp.t0 + std::log(1e5) / cfg.ivp.model.damping + 4.0 * candidate;
    if (args.t_end > 0) t_end = args.t_end;
    cfg.ivp.t_end = t_end;

    const Trajectory traj = solve_algebraic(cfg.ivp, cfg.options);
    std::printf("%s: candidate period %g (%s), span [%g, %g]\n",
                cfg.example_id.empty() ? "config" : cfg.example_id.c_str(), candidate,
                period->asymptotic ? "asymptotic" : "exact", cfg.ivp.t0, cfg.ivp.t_end);
    for (int c = 0; c < traj.n_roots; ++c) {
        const PeriodEstimate est =
            estimate_period(traj, candidate, c, cfg.options.tol_period);
        switch (est.verdict) {
            case PeriodVerdict::Periodic:
                std::printf("  x%d: periodic, T = %g (defect %.3e)\n", c + 1, est.period,
                            est.defect);
                break;
            case PeriodVerdict::Asymptotic:
                std::printf("  x%d: asymptotically periodic, T = %g (final defect %.3e)\n",
                            c + 1, est.period, est.defect);
                break;
            case PeriodVerdict::Aperiodic:
                std::printf("  x%d: no recurrence found (best defect %.3e)\n", c + 1,
                            est.defect);
                break;
        }
    }
    return 0;
}

int cmd_examples() {
    for (const ExampleInfo& info : list_examples())
        std::printf("%-6s N=%d m1=%-3d %s\n", info.id.c_str(), info.n_roots, info.m1,
                    info.description.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"solvable N-body systems driven by polynomial coefficient flows"};
    app.require_subcommand(1);

    int tables_n = 0, tables_m1 = 0;
    std::string tables_out;
    auto* tables = app.add_subcommand("tables", "emit the exact coefficient tables as JSON");
    tables->add_option("--n", tables_n, "number of distinct roots N")->required();
    tables->add_option("--m1", tables_m1, "extra multiplicity m1 of the first root")
        ->required();
    tables->add_option("--out", tables_out, "output path (default stdout)");

    CommonArgs solve_args;
    auto* solve = app.add_subcommand("solve", "solve an initial value problem");
    add_common(solve, solve_args);

    CommonArgs compare_args;
    bool compare_all = false;
    auto* compare = app.add_subcommand("compare", "run both engines and report deviations");
    add_common(compare, compare_args, /*with_engine=*/false);
    compare->add_flag("--all", compare_all, "compare every built-in example");

    CommonArgs period_args;
    auto* period = app.add_subcommand("period", "estimate per-coordinate periods");
    add_common(period, period_args, /*with_engine=*/false);

    auto* examples = app.add_subcommand("examples", "list the built-in examples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (tables->parsed()) return cmd_tables(tables_n, tables_m1, tables_out);
        if (solve->parsed()) return cmd_solve(solve_args);
        if (compare->parsed()) return cmd_compare(compare_args, compare_all);
        if (period->parsed()) return cmd_period(period_args);
        if (examples->parsed()) return cmd_examples();
    } catch (const config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const solve_error& e) {
        if (std::isnan(e.time()))
            std::fprintf(stderr, "numerical failure: %s\n", e.what());
        else
            std::fprintf(stderr, "numerical failure at t=%.6f: %s\n", e.time(), e.what());
        return kExitNumerical;
    } catch (const collision_error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    }
    return 0;
}
