#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spsaik/optimizer.hpp"
#include "spsaik/pso.hpp"
#include "spsaik/scenarios.hpp"

namespace spsaik {

/// Runs fn(0) .. fn(count - 1) on up to @p jobs threads. Exceptions escape from the
/// lowest failing index after all workers have joined.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn);

/// Hardware concurrency, at least 1.
std::size_t default_jobs();

struct SeedRun {
    std::uint64_t seed = 0;
    std::optional<RunRecord> record;  ///< empty when the solve faulted
    std::string error;
};

/// Solves @p scenario once per seed in [first_seed, first_seed + n_seeds). Faults are captured per seed.
std::vector<SeedRun> solve_seeds(const Scenario& scenario, const SolverParams& params, std::size_t n_seeds,
                                 std::size_t jobs, const RunOptions& options = {}, std::uint64_t first_seed = 0);

/// One row of a sweep. Failed seeds carry NaN metrics.
struct SeedOutcome {
    std::uint64_t seed = 0;
    double final_loss = 0.0;
    double pos_err = 0.0;    ///< Euclidean distance between final and target position
    double theta_err = 0.0;  ///< |theta* - theta|, unwrapped degrees
    double wall_ms = 0.0;
    std::vector<double> dq;  ///< |q_i - q0_i| per joint, degrees

    bool ok() const;
};

struct Spread {
    double median = 0.0;
    double min = 0.0;
    double max = 0.0;
};

/// Median of a non-empty sample (mean of the middle pair for even sizes).
double median(std::vector<double> values);
Spread spread_of(const std::vector<double>& values);

struct SweepReport {
    std::string scenario_id;
    std::size_t joints = 0;
    std::vector<SeedOutcome> runs;
    std::vector<std::string> failures;  ///< "seed N: message"

    // over successful seeds only; NaN when none succeeded
    Spread final_loss;
    Spread wall_ms;
    double median_pos_err = 0.0;
    double median_theta_err = 0.0;
    std::vector<double> median_dq;

    std::size_t succeeded() const;
};

SeedOutcome outcome_of(const Scenario& scenario, const RunRecord& record);

/// Builds the report from per-seed rows; statistics are recomputed from @p runs.
SweepReport summarize_sweep(std::string scenario_id, std::size_t joints, std::vector<SeedOutcome> runs,
                            std::vector<std::string> failures = {});
SweepReport summarize_sweep(const Scenario& scenario, const std::vector<SeedRun>& runs);

struct ComparisonRow {
    std::uint64_t seed = 0;
    double nlspsa_loss = 0.0;  ///< J at the last SPSA iterate
    double pso_loss = 0.0;     ///< best loss found by the swarm
};

struct ComparisonReport {
    std::string scenario_id;
    std::size_t eval_budget = 0;
    std::size_t population = 0;
    std::vector<ComparisonRow> rows;
    std::vector<std::string> failures;
    double nlspsa_median = 0.0;
    double pso_median = 0.0;

    /// "nlspsa", "pso" or "tie".
    std::string winner() const;
};

/**
 * Budget-matched comparison: for every seed, SPSA runs eval_budget / 2 iterations (two loss
 * calls each) and PSO spends eval_budget loss calls. Other SPSA settings come from @p params.
 */
ComparisonReport compare_solvers(const Scenario& scenario, const SolverParams& params, const PsoParams& pso,
                                 std::size_t n_seeds, std::size_t jobs, std::uint64_t first_seed = 0);

}  // namespace spsaik
