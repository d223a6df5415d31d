#include <cmath>
#include <vector>

#include <doctest.h>

#include "spsaik/errors.hpp"
#include "spsaik/experiment.hpp"
#include "spsaik/pso.hpp"
#include "spsaik/scenarios.hpp"

using namespace spsaik;

TEST_CASE("pso parameter validation") {
    PsoParams p;
    CHECK_NOTHROW(p.validate());
    p.population = 1;
    CHECK_THROWS_AS(p.validate(), ContractError);
    p = {};
    p.eval_budget = p.population - 1;
    CHECK_THROWS_AS(p.validate(), ContractError);
}

TEST_CASE("pso solves a 2-D sphere") {
    const LossFunction sphere = [](const Eigen::VectorXd& x) { return x.squaredNorm(); };
    PsoParams p;
    p.population = 20;
    p.eval_budget = 10000;
    p.init_spread = 5.0;
    std::vector<double> best;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        p.seed = seed;
        best.push_back(pso_minimize(sphere, Eigen::Vector2d(3, -2), p).final_loss);
    }
    CHECK(median(best) <= 1e-6);
}

TEST_CASE("pso budget accounting and best-so-far trace") {
    const LossFunction sphere = [](const Eigen::VectorXd& x) { return x.squaredNorm(); };
    PsoParams p;
    p.population = 30;
    p.eval_budget = 1000;  // not a multiple of the population: the last generation is cut short
    p.init_spread = 4.0;
    p.seed = 5;

    std::size_t calls = 0;
    const LossFunction counted = [&](const Eigen::VectorXd& x) {
        ++calls;
        return sphere(x);
    };
    const auto rec = pso_minimize(counted, Eigen::VectorXd::Constant(4, 1.0), p);
    CHECK(rec.evaluations == p.eval_budget);
    CHECK(calls == p.eval_budget + rec.diagnostic_evaluations);
    CHECK(rec.loss_trace.back().iteration == p.eval_budget);
    for (std::size_t i = 1; i < rec.loss_trace.size(); ++i) {
        REQUIRE(rec.loss_trace[i].loss <= rec.loss_trace[i - 1].loss);
    }
    CHECK(rec.final_loss == rec.loss_trace.back().loss);
    CHECK(sphere(rec.final_iterate) == rec.final_loss);
    CHECK(rec.initial_loss == 4.0);
}

TEST_CASE("budget equal to population returns the best initial particle") {
    const LossFunction sphere = [](const Eigen::VectorXd& x) { return x.squaredNorm(); };
    PsoParams p;
    p.population = 10;
    p.eval_budget = 10;
    p.seed = 1;

    std::vector<double> seen;
    const LossFunction spy = [&](const Eigen::VectorXd& x) {
        seen.push_back(sphere(x));
        return seen.back();
    };
    const auto rec = pso_minimize(spy, Eigen::Vector3d(1, 2, 3), p);
    REQUIRE(seen.size() == 11);  // one diagnostic + ten particles
    const double best = *std::min_element(seen.begin() + 1, seen.end());
    CHECK(rec.final_loss == best);
    CHECK(rec.iterations == 0);
    CHECK(rec.loss_trace.size() == 1);
}

TEST_CASE("initial swarm stays inside the spread") {
    const Eigen::VectorXd start = Eigen::VectorXd::LinSpaced(5, -10, 10);
    PsoParams p;
    p.population = 50;
    p.eval_budget = 50;
    p.init_spread = 20.0;
    std::size_t checked = 0;
    const LossFunction probe = [&](const Eigen::VectorXd& x) {
        if (checked++ > 0) {
            REQUIRE((x - start).cwiseAbs().maxCoeff() <= 20.0);
        }
        return 1.0;
    };
    pso_minimize(probe, start, p);
    CHECK(checked == 51);
}

TEST_CASE("pso on the 20-joint tabulated problem improves on the start") {
    const auto s = builtin("2.1");
    PsoParams p;
    p.eval_budget = 5000;
    const auto rec = pso_solve(s.spec, s.chain, p);
    CHECK(rec.evaluations == 5000);
    CHECK(rec.final_loss < rec.initial_loss);
    CHECK(std::abs(rec.initial_loss - 4.2489) < 5e-5);
}

TEST_CASE("pso is deterministic per seed") {
    const auto s = builtin("2.3");
    PsoParams p;
    p.eval_budget = 2000;
    p.seed = 4;
    CHECK(same_outcome(pso_solve(s.spec, s.chain, p), pso_solve(s.spec, s.chain, p)));
}

TEST_CASE("pso faults on non-finite losses") {
    const LossFunction bad = [](const Eigen::VectorXd& x) { return x[0] > 0 ? NAN : 1.0; };
    PsoParams p;
    p.population = 4;
    p.eval_budget = 100;
    CHECK_THROWS_AS(pso_minimize(bad, Eigen::Vector2d(0, 0), p), SolverFault);
}
