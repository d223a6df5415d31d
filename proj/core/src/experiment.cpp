#include "spsaik/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "spsaik/errors.hpp"

namespace spsaik {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
    jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(count, 1));
    std::vector<std::exception_ptr> errors(count);
    if (jobs == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (std::size_t w = 0; w < jobs; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::size_t default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

std::vector<SeedRun> solve_seeds(const Scenario& scenario, const SolverParams& params, std::size_t n_seeds,
                                 std::size_t jobs, const RunOptions& options, std::uint64_t first_seed) {
    if (n_seeds < 1) throw ContractError("at least one seed is required");
    params.validate();
    std::vector<SeedRun> runs(n_seeds);
    parallel_for(n_seeds, jobs, [&](std::size_t i) {
        SolverParams p = params;
        p.seed = first_seed + i;
        runs[i].seed = p.seed;
        try {
            runs[i].record = solve(scenario.spec, scenario.chain, p, options);
        } catch (const SolverFault& e) {
            runs[i].error = e.what();
        }
    });
    return runs;
}

bool SeedOutcome::ok() const { return std::isfinite(final_loss); }

double median(std::vector<double> values) {
    if (values.empty()) throw ContractError("median of an empty sample");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

Spread spread_of(const std::vector<double>& values) {
    if (values.empty()) return {kNaN, kNaN, kNaN};
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return {median(values), *lo, *hi};
}

std::size_t SweepReport::succeeded() const {
    return static_cast<std::size_t>(std::count_if(runs.begin(), runs.end(), [](const auto& r) { return r.ok(); }));
}

SeedOutcome outcome_of(const Scenario& scenario, const RunRecord& record) {
    SeedOutcome o;
    o.seed = record.seed;
    o.final_loss = record.final_loss;
    const Pose& t = scenario.spec.target;
    o.pos_err = std::hypot(t.x - record.final_pose.x, t.y - record.final_pose.y);
    o.theta_err = std::abs(t.theta - record.final_pose.theta);
    o.wall_ms = record.wall_ms;
    const Eigen::VectorXd dq = (record.final_iterate - record.initial_iterate).cwiseAbs();
    o.dq.assign(dq.data(), dq.data() + dq.size());
    return o;
}

SweepReport summarize_sweep(std::string scenario_id, std::size_t joints, std::vector<SeedOutcome> runs,
                            std::vector<std::string> failures) {
    SweepReport rep;
    rep.scenario_id = std::move(scenario_id);
    rep.joints = joints;
    rep.runs = std::move(runs);
    rep.failures = std::move(failures);

    std::vector<double> loss, wall, pos, theta;
    std::vector<std::vector<double>> dq(joints);
    for (const auto& r : rep.runs) {
        if (!r.ok()) continue;
        loss.push_back(r.final_loss);
        wall.push_back(r.wall_ms);
        pos.push_back(r.pos_err);
        theta.push_back(r.theta_err);
        for (std::size_t j = 0; j < joints && j < r.dq.size(); ++j) dq[j].push_back(r.dq[j]);
    }
    rep.final_loss = spread_of(loss);
    rep.wall_ms = spread_of(wall);
    rep.median_pos_err = pos.empty() ? kNaN : median(pos);
    rep.median_theta_err = theta.empty() ? kNaN : median(theta);
    rep.median_dq.reserve(joints);
    for (const auto& column : dq) rep.median_dq.push_back(column.empty() ? kNaN : median(column));
    return rep;
}

SweepReport summarize_sweep(const Scenario& scenario, const std::vector<SeedRun>& runs) {
    const std::size_t n = scenario.chain.joints();
    std::vector<SeedOutcome> rows;
    std::vector<std::string> failures;
    rows.reserve(runs.size());
    for (const auto& run : runs) {
        if (run.record) {
            rows.push_back(outcome_of(scenario, *run.record));
            continue;
        }
        SeedOutcome failed;
        failed.seed = run.seed;
        failed.final_loss = failed.pos_err = failed.theta_err = failed.wall_ms = kNaN;
        failed.dq.assign(n, kNaN);
        rows.push_back(std::move(failed));
        failures.push_back("seed " + std::to_string(run.seed) + ": " + run.error);
    }
    return summarize_sweep(scenario.id, n, std::move(rows), std::move(failures));
}

std::string ComparisonReport::winner() const {
    if (nlspsa_median < pso_median) return "nlspsa";
    if (pso_median < nlspsa_median) return "pso";
    return "tie";
}

ComparisonReport compare_solvers(const Scenario& scenario, const SolverParams& params, const PsoParams& pso,
                                 std::size_t n_seeds, std::size_t jobs, std::uint64_t first_seed) {
    if (n_seeds < 1) throw ContractError("at least one seed is required");
    pso.validate();
    SolverParams spsa = params;
    spsa.n_max = pso.eval_budget / 2;
    spsa.validate();

    // only the final loss matters here; skip the per-iteration trace
    RunOptions options;
    options.trace_every = std::max<std::size_t>(spsa.n_max, 1);

    ComparisonReport rep;
    rep.scenario_id = scenario.id;
    rep.eval_budget = pso.eval_budget;
    rep.population = pso.population;
    rep.rows.resize(n_seeds);
    std::vector<std::string> errors(n_seeds);

    parallel_for(n_seeds, jobs, [&](std::size_t i) {
        ComparisonRow& row = rep.rows[i];
        row.seed = first_seed + i;
        SolverParams sp = spsa;
        sp.seed = row.seed;
        PsoParams pp = pso;
        pp.seed = row.seed;
        row.nlspsa_loss = row.pso_loss = kNaN;
        try {
            row.nlspsa_loss = solve(scenario.spec, scenario.chain, sp, options).final_loss;
            row.pso_loss = pso_solve(scenario.spec, scenario.chain, pp).final_loss;
        } catch (const SolverFault& e) {
            errors[i] = "seed " + std::to_string(row.seed) + ": " + e.what();
        }
    });

    std::vector<double> spsa_losses, pso_losses;
    for (std::size_t i = 0; i < n_seeds; ++i) {
        if (!errors[i].empty()) rep.failures.push_back(errors[i]);
        if (std::isfinite(rep.rows[i].nlspsa_loss)) spsa_losses.push_back(rep.rows[i].nlspsa_loss);
        if (std::isfinite(rep.rows[i].pso_loss)) pso_losses.push_back(rep.rows[i].pso_loss);
    }
    rep.nlspsa_median = spsa_losses.empty() ? kNaN : median(spsa_losses);
    rep.pso_median = pso_losses.empty() ? kNaN : median(pso_losses);
    return rep;
}

}  // namespace spsaik
