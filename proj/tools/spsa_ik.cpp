// Command-line front end: solve built-in or file scenarios, sweep seeds, compare against
// a particle swarm baseline and render figures.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "spsaik/artifacts.hpp"
#include "spsaik/errors.hpp"
#include "spsaik/experiment.hpp"
#include "spsaik/scenarios.hpp"

namespace fs = std::filesystem;
using namespace spsaik;

namespace {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kScenario = 3,
    kIo = 4,
    kFault = 5,
};

struct CommonOptions {
    std::string scenario = "1.1";
    std::string out = ".";
    SolverParams params;
    std::string variant = "nlspsa";
    std::optional<double> w_jmc;
    std::optional<double> w_ee;
    std::size_t trace_every = 1;
    std::optional<double> stop_loss;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--scenario", o.scenario, "Built-in id (1.1 .. 2.3) or scenario JSON path");
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_option("--n-max", o.params.n_max, "Iteration budget")->check(CLI::PositiveNumber);
    cmd->add_option("--a", o.params.a, "Step gain a");
    cmd->add_option("--A", o.params.A, "Stability constant A");
    cmd->add_option("--c", o.params.c, "Perturbation gain c");
    cmd->add_option("--alpha", o.params.alpha, "Step decay exponent");
    cmd->add_option("--gamma", o.params.gamma, "Perturbation decay exponent");
    cmd->add_option("--d", o.params.d, "Per-joint step bound (degrees)");
    cmd->add_option("--variant", o.variant, "nlspsa or spsa")->check(CLI::IsMember({"nlspsa", "spsa"}));
    cmd->add_option("--w-jmc", o.w_jmc, "Joint motion cost weight");
    cmd->add_option("--w-ee", o.w_ee, "End-effector accuracy weight");
    cmd->add_option("--trace-every", o.trace_every, "Record the loss every m iterations")->check(CLI::PositiveNumber);
    cmd->add_option("--stop-loss", o.stop_loss, "Stop once a recorded loss falls to this value");
}

Scenario load(const CommonOptions& o) {
    Scenario s = resolve_scenario(o.scenario);
    if (o.w_jmc) s.spec.w_jmc = *o.w_jmc;
    if (o.w_ee) s.spec.w_ee = *o.w_ee;
    s.spec.validate(s.chain);
    return s;
}

SolverParams params_of(const CommonOptions& o) {
    SolverParams p = o.params;
    p.variant = o.variant == "spsa" ? Variant::Plain : Variant::NormLimited;
    p.validate();
    return p;
}

RunOptions run_options(const CommonOptions& o) {
    RunOptions r;
    r.trace_every = o.trace_every;
    r.stop_loss = o.stop_loss;
    return r;
}

fs::path prepare_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir);
    return fs::path(dir);
}

std::string vec_str(const Eigen::VectorXd& v) {
    std::ostringstream ss;
    ss.precision(4);
    ss << std::fixed << '[';
    for (Eigen::Index i = 0; i < v.size(); ++i) ss << (i ? " " : "") << v[i];
    ss << ']';
    return ss.str();
}

int cmd_run(const CommonOptions& o, std::uint64_t seed) {
    const Scenario s = load(o);
    SolverParams p = params_of(o);
    p.seed = seed;
    const fs::path dir = prepare_dir(o.out);

    const RunRecord rec = solve(s.spec, s.chain, p, run_options(o));

    std::ostringstream trace;
    write_trace_csv(rec.loss_trace, trace);
    write_text(dir / "trace.csv", trace.str());
    write_text(dir / "result.json", result_json(s, rec));

    std::printf("scenario %s seed %llu: initial loss %.4f  final loss %.4e  pose [%.4f %.4f %.4f deg]  "
                "iterations %zu  %.1f ms\n",
                s.id.c_str(), static_cast<unsigned long long>(seed), rec.initial_loss, rec.final_loss,
                rec.final_pose.x, rec.final_pose.y, rec.final_pose.theta, rec.iterations, rec.wall_ms);
    std::printf("  q = %s deg\n", vec_str(rec.final_iterate).c_str());
    return kOk;
}

int cmd_sweep(const CommonOptions& o, std::size_t seeds, std::size_t jobs, bool omit_timing) {
    const Scenario s = load(o);
    const SolverParams p = params_of(o);
    const fs::path dir = prepare_dir(o.out);

    auto runs = solve_seeds(s, p, seeds, jobs == 0 ? default_jobs() : jobs, run_options(o));
    if (omit_timing) {
        for (auto& r : runs)
            if (r.record) r.record->wall_ms = 0.0;
    }
    const SweepReport rep = summarize_sweep(s, runs);

    std::ostringstream csv;
    write_sweep_csv(rep, csv);
    write_text(dir / "sweep.csv", csv.str());
    write_text(dir / "sweep.json", sweep_summary_json(rep));

    std::printf("scenario %s, %zu seeds (%zu ok): final loss median %.4e  min %.4e  max %.4e  |dq1| median %.4f deg\n",
                s.id.c_str(), rep.runs.size(), rep.succeeded(), rep.final_loss.median, rep.final_loss.min,
                rep.final_loss.max, rep.median_dq.empty() ? 0.0 : rep.median_dq[0]);
    for (const auto& f : rep.failures) std::fprintf(stderr, "failed: %s\n", f.c_str());
    return rep.failures.empty() ? kOk : kFault;
}

int cmd_compare(const CommonOptions& o, std::size_t seeds, std::size_t jobs, PsoParams pso) {
    const Scenario s = load(o);
    const SolverParams p = params_of(o);
    const fs::path dir = prepare_dir(o.out);

    const ComparisonReport rep = compare_solvers(s, p, pso, seeds, jobs == 0 ? default_jobs() : jobs);

    std::ostringstream csv;
    write_compare_csv(rep, csv);
    write_text(dir / "compare.csv", csv.str());
    write_text(dir / "compare.json", compare_summary_json(rep));

    std::printf("scenario %s, budget %zu evaluations, %zu seeds: NLSPSA median %.4e  PSO median %.4e  winner %s\n",
                s.id.c_str(), rep.eval_budget, rep.rows.size(), rep.nlspsa_median, rep.pso_median,
                rep.winner().c_str());
    for (const auto& f : rep.failures) std::fprintf(stderr, "failed: %s\n", f.c_str());
    return rep.failures.empty() ? kOk : kFault;
}

int cmd_plot(const std::string& run_dir, std::string out) {
    const fs::path dir(run_dir);
    const RunArtifact art = parse_result_json(read_text(dir / "result.json"));
    std::istringstream trace_in(read_text(dir / "trace.csv"));
    const auto trace = read_trace_csv(trace_in);
    const fs::path target = prepare_dir(out.empty() ? run_dir : out);

    write_text(target / "posture.svg", posture_svg(art.scenario.chain, art.record.initial_iterate,
                                                   art.record.final_iterate, art.scenario.spec.target));
    write_text(target / "convergence.svg", convergence_svg(trace));
    std::printf("wrote %s and %s\n", (target / "posture.svg").string().c_str(),
                (target / "convergence.svg").string().c_str());
    return kOk;
}

int cmd_export(const std::string& scenario, const std::string& path) {
    const Scenario s = resolve_scenario(scenario);
    if (path.empty() || path == "-") {
        std::cout << scenario_to_json(s);
    } else {
        save_scenario(s, path);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gradient-free inverse kinematics for planar redundant arms (SPSA with a norm-limited step)"};
    app.require_subcommand(1);

    CommonOptions run_opts;
    std::uint64_t seed = 0;
    auto* run = app.add_subcommand("run", "Solve one scenario with one seed");
    add_common(run, run_opts);
    run->add_option("--seed", seed, "PRNG seed");

    CommonOptions sweep_opts;
    std::size_t sweep_seeds = 20;
    std::size_t sweep_jobs = 0;
    bool omit_timing = false;
    auto* sweep = app.add_subcommand("sweep", "Solve one scenario for seeds 0..N-1");
    add_common(sweep, sweep_opts);
    sweep->add_option("--seeds", sweep_seeds, "Number of seeds")->check(CLI::PositiveNumber);
    sweep->add_option("--jobs", sweep_jobs, "Worker threads (0 = all cores)");
    sweep->add_flag("--omit-timing", omit_timing, "Write wall_ms as 0 so the CSV is byte-reproducible");

    CommonOptions cmp_opts;
    std::size_t cmp_seeds = 20;
    std::size_t cmp_jobs = 0;
    PsoParams pso;
    auto* compare = app.add_subcommand("compare", "Budget-matched NLSPSA vs particle swarm");
    add_common(compare, cmp_opts);
    compare->add_option("--seeds", cmp_seeds, "Number of seeds")->check(CLI::PositiveNumber);
    compare->add_option("--jobs", cmp_jobs, "Worker threads (0 = all cores)");
    compare->add_option("--budget", pso.eval_budget, "Loss evaluations per solver")->check(CLI::PositiveNumber);
    compare->add_option("--population", pso.population, "Swarm size");
    compare->add_option("--inertia", pso.inertia, "Swarm inertia");
    compare->add_option("--init-spread", pso.init_spread, "Initial swarm half-width (degrees)");

    std::string plot_run;
    std::string plot_out;
    auto* plot = app.add_subcommand("plot", "Render posture and convergence SVGs from a run directory");
    plot->add_option("--run", plot_run, "Directory holding result.json and trace.csv")->required();
    plot->add_option("--out", plot_out, "Output directory (defaults to the run directory)");

    std::string export_id = "1.1";
    std::string export_path;
    auto* exp = app.add_subcommand("export", "Write a scenario as JSON");
    exp->add_option("--scenario", export_id, "Built-in id or scenario path");
    exp->add_option("--out", export_path, "Output file (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*run) return cmd_run(run_opts, seed);
        if (*sweep) return cmd_sweep(sweep_opts, sweep_seeds, sweep_jobs, omit_timing);
        if (*compare) return cmd_compare(cmp_opts, cmp_seeds, cmp_jobs, pso);
        if (*plot) return cmd_plot(plot_run, plot_out);
        if (*exp) return cmd_export(export_id, export_path);
    } catch (const ScenarioError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kScenario;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kScenario;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kIo;
    } catch (const SolverFault& e) {
        std::fprintf(stderr, "solver fault: %s\n", e.what());
        return kFault;
    } catch (const ContractError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    }
    return kUsage;
}
