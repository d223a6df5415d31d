#include "spsaik/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "spsaik/errors.hpp"

namespace spsaik {

void SolverParams::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(a)) throw ContractError("gain a must be positive");
    if (!std::isfinite(A) || A < 0.0) throw ContractError("stability constant A must be nonnegative");
    if (!positive(c)) throw ContractError("perturbation size c must be positive");
    if (!positive(alpha)) throw ContractError("alpha must be positive");
    if (!positive(gamma)) throw ContractError("gamma must be positive");
    if (!positive(d)) throw ContractError("step bound d must be positive");
    if (n_max < 1) throw ContractError("n_max must be at least 1");
}

bool same_outcome(const RunRecord& a, const RunRecord& b) {
    return same_values(a.initial_iterate, b.initial_iterate) && same_values(a.final_iterate, b.final_iterate) &&
           a.final_pose == b.final_pose && a.initial_loss == b.initial_loss && a.final_loss == b.final_loss &&
           a.loss_trace == b.loss_trace && same_values(a.best_iterate, b.best_iterate) &&
           a.best_loss == b.best_loss && a.max_step == b.max_step && a.iterations == b.iterations &&
           a.evaluations == b.evaluations && a.diagnostic_evaluations == b.diagnostic_evaluations &&
           a.seed == b.seed;
}

double gain_a(const SolverParams& params, std::size_t k) {
    if (k < 1) throw ContractError("gain index k starts at 1");
    return params.a / std::pow(params.A + static_cast<double>(k), params.alpha);
}

double gain_c(const SolverParams& params, std::size_t k) {
    if (k < 1) throw ContractError("gain index k starts at 1");
    return params.c / std::pow(static_cast<double>(k), params.gamma);
}

Eigen::VectorXd sample_perturbation(std::size_t n, Rng& rng) {
    Eigen::VectorXd delta(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < delta.size(); ++i) {
        delta[i] = (rng() >> 63) != 0 ? 1.0 : -1.0;
    }
    return delta;
}

Eigen::VectorXd spsa_gradient(const LossFunction& loss, const Eigen::VectorXd& phi, double c_k,
                              const Eigen::VectorXd& delta, std::size_t iteration) {
    if (!(c_k > 0.0)) throw ContractError("spsa_gradient: c_k must be positive");
    if (delta.size() != phi.size()) throw ContractError("spsa_gradient: perturbation size mismatch");
    if ((delta.array() == 0.0).any()) throw ContractError("spsa_gradient: zero perturbation component");

    const double plus = loss(phi + c_k * delta);
    const double minus = loss(phi - c_k * delta);
    if (!std::isfinite(plus) || !std::isfinite(minus)) {
        throw SolverFault("non-finite loss measurement", iteration);
    }
    const double scale = (plus - minus) / (2.0 * c_k);
    return scale * delta.cwiseInverse();
}

Eigen::VectorXd sat(const Eigen::VectorXd& x, double d) {
    if (!(d > 0.0)) throw ContractError("sat: bound must be positive");
    return x.unaryExpr([d](double v) { return std::copysign(std::min(std::abs(v), d), v); });
}

Eigen::VectorXd update_vector(const Eigen::VectorXd& g_hat, double a_k, const SolverParams& params) {
    if (!g_hat.allFinite()) throw SolverFault("non-finite gradient estimate", 0);
    Eigen::VectorXd raw = a_k * g_hat;
    if (params.variant == Variant::Plain) return raw;
    return sat(raw, params.d);
}

Eigen::VectorXd step(const Eigen::VectorXd& phi, const Eigen::VectorXd& g_hat, double a_k,
                     const SolverParams& params) {
    if (phi.size() != g_hat.size()) throw ContractError("step: gradient size mismatch");
    return phi - update_vector(g_hat, a_k, params);
}

Eigen::VectorXd clamp_to_limits(const Eigen::VectorXd& phi, const std::optional<JointLimits>& limits) {
    if (!limits) return phi;
    if (limits->lower.size() != phi.size() || limits->upper.size() != phi.size()) {
        throw ContractError("clamp_to_limits: limit size mismatch");
    }
    return phi.cwiseMin(limits->upper).cwiseMax(limits->lower);
}

RunRecord minimize(const LossFunction& loss, const Eigen::VectorXd& start, const SolverParams& params,
                   const std::optional<JointLimits>& limits, const RunOptions& options) {
    params.validate();
    if (options.trace_every < 1) throw ContractError("trace_every must be at least 1");
    if (start.size() == 0 || !start.allFinite()) throw ContractError("start point must be non-empty and finite");

    const auto t0 = std::chrono::steady_clock::now();

    RunRecord rec;
    rec.seed = params.seed;
    rec.initial_iterate = start;

    std::size_t budget_calls = 0;
    const LossFunction counted = [&](const Eigen::VectorXd& x) {
        ++budget_calls;
        return loss(x);
    };
    auto observe = [&](const Eigen::VectorXd& x, std::size_t k) {
        ++rec.diagnostic_evaluations;
        const double value = loss(x);
        if (!std::isfinite(value)) throw SolverFault("non-finite loss at iterate", k);
        rec.loss_trace.push_back({k, value});
        if (rec.loss_trace.size() == 1 || value < rec.best_loss) {
            rec.best_loss = value;
            rec.best_iterate = x;
        }
        return value;
    };

    Rng rng(params.seed);
    Eigen::VectorXd phi = start;
    rec.initial_loss = observe(phi, 0);

    std::size_t k = 1;
    bool stopped = false;
    for (; k <= params.n_max && !stopped; ++k) {
        const double a_k = gain_a(params, k);
        const double c_k = gain_c(params, k);
        const Eigen::VectorXd delta = sample_perturbation(static_cast<std::size_t>(phi.size()), rng);
        const Eigen::VectorXd g_hat = spsa_gradient(counted, phi, c_k, delta, k);
        if (!g_hat.allFinite()) throw SolverFault("non-finite gradient estimate", k);

        const Eigen::VectorXd update = update_vector(g_hat, a_k, params);
        const Eigen::VectorXd unclamped = phi - update;
        Eigen::VectorXd next = clamp_to_limits(unclamped, limits);
        if (!next.allFinite()) throw SolverFault("non-finite iterate", k);
        // unclamped components moved by exactly the update; a float difference of iterates
        // would add rounding
        for (Eigen::Index i = 0; i < phi.size(); ++i) {
            const double moved = next[i] == unclamped[i] ? std::abs(update[i]) : std::abs(next[i] - phi[i]);
            rec.max_step = std::max(rec.max_step, moved);
        }
        phi = std::move(next);

        const bool last = k == params.n_max;
        if (k % options.trace_every == 0 || last) {
            const double value = observe(phi, k);
            if (options.stop_loss && value <= *options.stop_loss) stopped = true;
        }
    }
    rec.iterations = k - 1;
    rec.evaluations = budget_calls;
    rec.final_iterate = phi;
    rec.final_loss = rec.loss_trace.back().loss;
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

RunRecord solve(const ObjectiveSpec& spec, const ChainModel& chain, const SolverParams& params,
                const RunOptions& options) {
    spec.validate(chain);
    const LossFunction loss = [&](const Eigen::VectorXd& q) { return combined_loss(spec, chain, q); };
    RunRecord rec = minimize(loss, spec.reference, params, chain.limits(), options);
    rec.final_pose = forward_kinematics(chain, rec.final_iterate);
    return rec;
}

}  // namespace spsaik
