#include "spsaik/pso.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <vector>

#include "spsaik/errors.hpp"

namespace spsaik {

void PsoParams::validate() const {
    if (population < 2) throw ContractError("PSO population must be at least 2");
    if (eval_budget < population) throw ContractError("PSO budget must cover one full generation");
    if (!std::isfinite(inertia)) throw ContractError("PSO inertia must be finite");
    if (!std::isfinite(cognitive) || cognitive <= 0.0) throw ContractError("PSO cognitive weight must be positive");
    if (!std::isfinite(social) || social <= 0.0) throw ContractError("PSO social weight must be positive");
    if (!std::isfinite(init_spread) || init_spread < 0.0) throw ContractError("PSO init spread must be nonnegative");
}

namespace {

struct Particle {
    Eigen::VectorXd position;
    Eigen::VectorXd velocity;
    Eigen::VectorXd best_position;
    double best_loss = 0.0;
};

}  // namespace

RunRecord pso_minimize(const LossFunction& loss, const Eigen::VectorXd& start, const PsoParams& params,
                       const std::optional<JointLimits>& limits) {
    params.validate();
    if (start.size() == 0 || !start.allFinite()) throw ContractError("start point must be non-empty and finite");

    const auto t0 = std::chrono::steady_clock::now();
    const Eigen::Index n = start.size();
    const double vmax = 2.0 * params.init_spread;

    Rng rng(params.seed);
    std::uniform_real_distribution<double> offset(-params.init_spread, params.init_spread);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    RunRecord rec;
    rec.seed = params.seed;
    rec.initial_iterate = start;
    rec.diagnostic_evaluations = 1;
    rec.initial_loss = loss(start);

    std::size_t evals = 0;
    std::size_t generation = 0;
    auto measure = [&](const Eigen::VectorXd& x) {
        ++evals;
        const double value = loss(x);
        if (!std::isfinite(value)) throw SolverFault("non-finite loss in particle swarm", generation);
        return value;
    };

    std::vector<Particle> swarm(params.population);
    for (auto& p : swarm) {
        p.position = clamp_to_limits(start.unaryExpr([&](double v) { return v + offset(rng); }), limits);
        p.velocity = Eigen::VectorXd::Zero(n);
    }
    for (auto& p : swarm) {
        p.best_position = p.position;
        p.best_loss = measure(p.position);
    }

    std::size_t best = 0;
    auto refresh_global = [&] {
        for (std::size_t i = 0; i < swarm.size(); ++i) {
            if (swarm[i].best_loss < swarm[best].best_loss) best = i;
        }
        rec.loss_trace.push_back({evals, swarm[best].best_loss});
    };
    refresh_global();

    while (evals < params.eval_budget) {
        ++generation;
        const Eigen::VectorXd global = swarm[best].best_position;
        for (auto& p : swarm) {
            if (evals == params.eval_budget) break;
            for (Eigen::Index j = 0; j < n; ++j) {
                const double r1 = unit(rng);
                const double r2 = unit(rng);
                double v = params.inertia * p.velocity[j] +
                           params.cognitive * r1 * (p.best_position[j] - p.position[j]) +
                           params.social * r2 * (global[j] - p.position[j]);
                if (vmax > 0.0) v = std::clamp(v, -vmax, vmax);
                p.velocity[j] = v;
            }
            p.position = clamp_to_limits(p.position + p.velocity, limits);
            const double value = measure(p.position);
            if (value < p.best_loss) {
                p.best_loss = value;
                p.best_position = p.position;
            }
        }
        refresh_global();
    }

    rec.iterations = generation;
    rec.evaluations = evals;
    rec.final_iterate = swarm[best].best_position;
    rec.final_loss = swarm[best].best_loss;
    rec.best_iterate = rec.final_iterate;
    rec.best_loss = rec.final_loss;
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

RunRecord pso_solve(const ObjectiveSpec& spec, const ChainModel& chain, const PsoParams& params) {
    spec.validate(chain);
    const LossFunction loss = [&](const Eigen::VectorXd& q) { return combined_loss(spec, chain, q); };
    RunRecord rec = pso_minimize(loss, spec.reference, params, chain.limits());
    rec.final_pose = forward_kinematics(chain, rec.final_iterate);
    return rec;
}

}  // namespace spsaik
