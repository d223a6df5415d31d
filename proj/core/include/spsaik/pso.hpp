#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Core>

#include "spsaik/kinematics.hpp"
#include "spsaik/objective.hpp"
#include "spsaik/optimizer.hpp"

namespace spsaik {

/// Global-best particle swarm settings. Coefficients are the usual constriction values.
struct PsoParams {
    std::size_t population = 100;
    std::size_t eval_budget = 50000;
    double inertia = 0.7298;
    double cognitive = 1.49618;
    double social = 1.49618;
    double init_spread = 20.0;  ///< particles start at start +/- uniform(0, spread), degrees
    std::uint64_t seed = 0;

    void validate() const;
};

/**
 * Global-best PSO on an arbitrary loss.
 *
 * Spends exactly eval_budget loss calls; the last generation is truncated when the budget
 * does not divide evenly. Every particle starts at start + uniform(-spread, spread) per
 * component. Velocities start at zero and are clamped to +/- 2 * init_spread per component
 * (no clamp when init_spread is zero). The global best is refreshed once per generation.
 *
 * The record carries best-so-far semantics: final_iterate is the global best and loss_trace
 * holds the global-best loss after each generation, indexed by evaluations spent so far.
 * initial_loss is J(start), measured as a diagnostic outside the budget.
 */
RunRecord pso_minimize(const LossFunction& loss, const Eigen::VectorXd& start, const PsoParams& params,
                       const std::optional<JointLimits>& limits = std::nullopt);

/// PSO on the IK objective, seeded around spec.reference.
RunRecord pso_solve(const ObjectiveSpec& spec, const ChainModel& chain, const PsoParams& params);

}  // namespace spsaik
