#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "spsaik/kinematics.hpp"
#include "spsaik/objective.hpp"

namespace spsaik {

enum class Variant {
    NormLimited,  ///< phi <- phi - sat(a_k g)
    Plain,        ///< phi <- phi - a_k g
};

/// Gains and budget for the SPSA iteration. Defaults are the standard IK settings.
struct SolverParams {
    double a = 3.0e3;
    double A = 10.0;
    double c = 0.1;
    double alpha = 0.602;
    double gamma = 0.101;
    double d = 0.03;  ///< per-joint step bound, degrees
    std::size_t n_max = 25000;
    std::uint64_t seed = 0;
    Variant variant = Variant::NormLimited;

    void validate() const;
};

struct RunOptions {
    /// Record J(phi_k) every this many iterations (the initial and final values are always kept).
    std::size_t trace_every = 1;
    /// Stop as soon as a traced loss is at or below this value. Off when empty.
    std::optional<double> stop_loss;
};

struct TracePoint {
    std::size_t iteration = 0;  ///< 0 is the starting point
    double loss = 0.0;

    friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

/// Outcome of one optimizer run. Shared by the SPSA solver and the PSO baseline.
struct RunRecord {
    JointVector initial_iterate;
    JointVector final_iterate;
    Pose final_pose;
    double initial_loss = 0.0;
    double final_loss = 0.0;
    std::vector<TracePoint> loss_trace;

    // diagnostics
    JointVector best_iterate;
    double best_loss = 0.0;
    double max_step = 0.0;  ///< largest infinity-norm of an applied update (clamped moves measured directly)

    std::size_t iterations = 0;
    std::size_t evaluations = 0;             ///< loss calls spent by the optimizer itself
    std::size_t diagnostic_evaluations = 0;  ///< trace bookkeeping, outside the budget
    std::uint64_t seed = 0;
    double wall_ms = 0.0;
};

/// True when every field except the wall time is bitwise equal.
bool same_outcome(const RunRecord& a, const RunRecord& b);

using LossFunction = std::function<double(const Eigen::VectorXd&)>;
using Rng = std::mt19937_64;

/// a / (A + k)^alpha, k >= 1.
double gain_a(const SolverParams& params, std::size_t k);
/// c / k^gamma, k >= 1.
double gain_c(const SolverParams& params, std::size_t k);

/// Independent symmetric Bernoulli +/-1 components.
Eigen::VectorXd sample_perturbation(std::size_t n, Rng& rng);

/**
 * Two-sided simultaneous-perturbation gradient estimate:
 *   g_i = [L(phi + c delta) - L(phi - c delta)] / (2 c) * (1 / delta_i)
 * Calls @p loss exactly twice. A non-finite measurement raises SolverFault tagged with
 * @p iteration.
 */
Eigen::VectorXd spsa_gradient(const LossFunction& loss, const Eigen::VectorXd& phi, double c_k,
                              const Eigen::VectorXd& delta, std::size_t iteration = 0);

/// Componentwise sgn(x_i) * min(|x_i|, d).
Eigen::VectorXd sat(const Eigen::VectorXd& x, double d);

/// The vector subtracted from phi: sat(a_k g) for the norm-limited variant, a_k g otherwise.
Eigen::VectorXd update_vector(const Eigen::VectorXd& g_hat, double a_k, const SolverParams& params);

/// One update of phi from a gradient estimate, bounded or not depending on params.variant.
Eigen::VectorXd step(const Eigen::VectorXd& phi, const Eigen::VectorXd& g_hat, double a_k,
                     const SolverParams& params);

Eigen::VectorXd clamp_to_limits(const Eigen::VectorXd& phi, const std::optional<JointLimits>& limits);

/// Runs the SPSA loop on an arbitrary loss. final_pose is left default.
RunRecord minimize(const LossFunction& loss, const Eigen::VectorXd& start, const SolverParams& params,
                   const std::optional<JointLimits>& limits = std::nullopt, const RunOptions& options = {});

/// IK solve: starts at spec.reference, minimizes combined_loss, returns the last iterate.
RunRecord solve(const ObjectiveSpec& spec, const ChainModel& chain, const SolverParams& params,
                const RunOptions& options = {});

}  // namespace spsaik
