#include <atomic>
#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "spsaik/errors.hpp"
#include "spsaik/experiment.hpp"

using namespace spsaik;

TEST_CASE("median and spread") {
    CHECK(median({3, 1, 2}) == 2);
    CHECK(median({4, 1, 3, 2}) == 2.5);
    CHECK(median({7}) == 7);
    CHECK_THROWS_AS(median({}), ContractError);
    const auto s = spread_of({5, 1, 9, 3});
    CHECK(s.median == 4);
    CHECK(s.min == 1);
    CHECK(s.max == 9);
    CHECK(std::isnan(spread_of({}).median));
}

TEST_CASE("parallel_for visits every index once and rethrows") {
    for (std::size_t jobs : {1, 3, 8}) {
        std::vector<std::atomic<int>> hits(50);
        parallel_for(50, jobs, [&](std::size_t i) { ++hits[i]; });
        for (auto& h : hits) REQUIRE(h.load() == 1);
    }
    CHECK_THROWS_AS(parallel_for(10, 4, [](std::size_t i) { if (i == 6) throw std::runtime_error("x"); }),
                    std::runtime_error);
}

TEST_CASE("sweep statistics recompute from the rows") {
    std::vector<SeedOutcome> rows;
    for (int i = 0; i < 5; ++i) {
        SeedOutcome o;
        o.seed = static_cast<std::uint64_t>(i);
        o.final_loss = 0.1 * (i + 1);
        o.pos_err = i;
        o.theta_err = 2.0 * i;
        o.wall_ms = 10.0 + i;
        o.dq = {double(i), 1.0};
        rows.push_back(o);
    }
    SeedOutcome failed;
    failed.seed = 5;
    failed.final_loss = failed.pos_err = failed.theta_err = failed.wall_ms = NAN;
    failed.dq = {NAN, NAN};
    rows.push_back(failed);

    const auto rep = summarize_sweep("x", 2, rows, {"seed 5: boom"});
    CHECK(rep.succeeded() == 5);
    CHECK(rep.final_loss.median == doctest::Approx(0.3));
    CHECK(rep.final_loss.min == doctest::Approx(0.1));
    CHECK(rep.final_loss.max == doctest::Approx(0.5));
    CHECK(rep.median_pos_err == 2);
    CHECK(rep.median_theta_err == 4);
    CHECK(rep.median_dq == std::vector<double>{2, 1});
    CHECK(rep.wall_ms.median == 12);
}

TEST_CASE("one-seed sweep equals a single run") {
    const auto s = builtin("1.2");
    SolverParams p;
    p.n_max = 3000;
    const auto runs = solve_seeds(s, p, 1, 1);
    REQUIRE(runs.size() == 1);
    REQUIRE(runs[0].record);
    const auto single = solve(s.spec, s.chain, p);  // seed 0
    CHECK(same_outcome(*runs[0].record, single));

    const auto rep = summarize_sweep(s, runs);
    CHECK(rep.final_loss.median == single.final_loss);
    CHECK(rep.runs[0].dq[0] == std::abs(single.final_iterate[0] - s.spec.reference[0]));
}

TEST_CASE("sweeps are deterministic regardless of thread count") {
    const auto s = builtin("1.4");
    SolverParams p;
    p.n_max = 1500;
    const auto serial = solve_seeds(s, p, 6, 1);
    const auto threaded = solve_seeds(s, p, 6, 4);
    for (std::size_t i = 0; i < 6; ++i) {
        REQUIRE(serial[i].seed == i);
        REQUIRE(same_outcome(*serial[i].record, *threaded[i].record));
    }
}

TEST_CASE("faulting seeds are marked, not fatal") {
    auto s = builtin("1.1");
    SolverParams p;
    p.n_max = 50;
    p.variant = Variant::Plain;
    p.a = 1e308;  // the first unbounded step overflows
    const auto runs = solve_seeds(s, p, 3, 2);
    const auto rep = summarize_sweep(s, runs);
    CHECK(rep.failures.size() == 3);
    CHECK(rep.succeeded() == 0);
    CHECK(std::isnan(rep.final_loss.median));
}

TEST_CASE("budget-matched comparison") {
    const auto s = builtin("2.3");
    PsoParams pso;
    pso.eval_budget = 4000;
    const auto rep = compare_solvers(s, SolverParams{}, pso, 3, 2);
    CHECK(rep.rows.size() == 3);
    CHECK(rep.eval_budget == 4000);
    CHECK(rep.failures.empty());
    for (const auto& r : rep.rows) {
        CHECK(std::isfinite(r.nlspsa_loss));
        CHECK(std::isfinite(r.pso_loss));
    }
    CHECK((rep.winner() == "nlspsa" || rep.winner() == "pso"));

    PsoParams tiny;
    tiny.eval_budget = tiny.population;
    const auto minimal = compare_solvers(s, SolverParams{}, tiny, 2, 1);
    CHECK(minimal.rows.size() == 2);
    CHECK(std::isfinite(minimal.pso_median));
}
