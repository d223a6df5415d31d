#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "spsaik/errors.hpp"
#include "spsaik/objective.hpp"
#include "spsaik/scenarios.hpp"
#include "test_util.hpp"

using namespace spsaik;

namespace {

// Frozen with an independent 30-digit evaluation of the quadratic forms.
constexpr double kDegSqRef = 3.04617419786708599e-4;          // (2 pi / 360)^2
constexpr double kJeeOrientation60 = 0.783301936594393541;     // 5 (2 pi/360)^2 3600 / 7
constexpr double kJjmcHeavyFirst = 2.67208262970797017e-4;    // (50/57) (2 pi/360)^2

ObjectiveSpec spec_8(Pose target, double first_weight = 1.0) {
    ObjectiveSpec s;
    s.target = target;
    s.reference = JointVector::Zero(8);
    s.reference[4] = 90;
    s.reference[7] = 90;
    Eigen::VectorXd w = Eigen::VectorXd::Ones(8);
    w[0] = first_weight;
    s.q_jmc = (kDegSq / w.sum() * w).asDiagonal();
    return s;
}

}  // namespace

TEST_CASE("degree conversion constant") { CHECK(kDegSq == doctest::Approx(kDegSqRef).epsilon(1e-15)); }

TEST_CASE("default end-effector weight") {
    const auto r = ObjectiveSpec::default_r_ee();
    CHECK(r(0, 0) == doctest::Approx(1.0 / 7));
    CHECK(r(1, 1) == doctest::Approx(1.0 / 7));
    CHECK(r(2, 2) == doctest::Approx(5 * std::pow(std::numbers::pi / 180, 2) / 7).epsilon(1e-14));
    CHECK(r(0, 1) == 0);
}

TEST_CASE("j_ee examples") {
    const auto chain = ChainModel::unit(8);
    auto spec = spec_8({4, 3, 180});
    CHECK(j_ee(spec, chain, spec.reference) == doctest::Approx(1.0 / 7).epsilon(1e-12));

    spec.target = {3, 3, 240};
    CHECK(j_ee(spec, chain, spec.reference) == doctest::Approx(kJeeOrientation60).epsilon(1e-12));

    spec.target = {3, 3, 180};
    CHECK(j_ee(spec, chain, spec.reference) < 1e-28);
}

TEST_CASE("j_jmc examples") {
    auto spec = spec_8({4, 3, 180});
    CHECK(j_jmc(spec, spec.reference) == 0);
    CHECK(j_jmc(spec, spec.reference + JointVector::Ones(8)) == doctest::Approx(kDegSqRef).epsilon(1e-13));

    auto heavy = spec_8({2, 4, 240}, 50.0);
    JointVector q = heavy.reference;
    q[0] += 1;
    CHECK(j_jmc(heavy, q) == doctest::Approx(kJjmcHeavyFirst).epsilon(1e-13));

    CHECK_THROWS_AS(j_jmc(spec, JointVector::Zero(3)), ContractError);
}

TEST_CASE("combined loss at the start of the tabulated problems") {
    const auto chain = ChainModel::unit(8);
    const auto spec = spec_8({4, 3, 180});
    CHECK(combined_loss(spec, chain, spec.reference) == doctest::Approx(50.0 / 51 / 7).epsilon(1e-12));
    CHECK(std::round(combined_loss(spec, chain, spec.reference) * 1e4) / 1e4 == 0.1401);

    const auto s23 = builtin("2.3");
    CHECK(std::abs(combined_loss(s23.spec, s23.chain, s23.spec.reference) - 29.5636) < 5e-5);

    auto zero = spec;
    zero.target = forward_kinematics(chain, zero.reference);
    CHECK(combined_loss(zero, chain, zero.reference) == 0);
}

TEST_CASE("objective spec validation") {
    const auto chain = ChainModel::unit(8);
    auto spec = spec_8({4, 3, 180});
    CHECK_NOTHROW(spec.validate(chain));

    auto bad = spec;
    bad.w_ee = 0;
    CHECK_THROWS_AS(bad.validate(chain), ContractError);
    bad = spec;
    bad.w_jmc = -1;
    CHECK_THROWS_AS(bad.validate(chain), ContractError);
    bad = spec;
    bad.w_jmc = 0;
    CHECK_NOTHROW(bad.validate(chain));
    bad = spec;
    bad.q_jmc(3, 3) = 0;
    CHECK_THROWS_AS(bad.validate(chain), ContractError);
    bad = spec;
    bad.q_jmc(0, 1) = 1e-3;  // asymmetric
    CHECK_THROWS_AS(bad.validate(chain), ContractError);
    bad = spec;
    bad.r_ee(2, 2) = -1;
    CHECK_THROWS_AS(bad.validate(chain), ContractError);
    bad = spec;
    bad.reference = JointVector::Zero(7);
    CHECK_THROWS_AS(bad.validate(chain), ContractError);
    CHECK_THROWS_AS(spec.validate(ChainModel::unit(20)), ContractError);
}

TEST_CASE("full symmetric weight matrices are accepted") {
    Eigen::MatrixXd m(2, 2);
    m << 2, 1, 1, 2;
    CHECK(is_symmetric_positive_definite(m));
    m << 1, 2, 2, 1;  // indefinite
    CHECK_FALSE(is_symmetric_positive_definite(m));
}

TEST_CASE("combined loss properties") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> w(0.01, 100.0);
    std::uniform_real_distribution<double> pos(-6, 6);
    std::uniform_real_distribution<double> th(0, 360);
    const auto chain = ChainModel::unit(8);
    for (int trial = 0; trial < 300; ++trial) {
        auto spec = spec_8({pos(rng), pos(rng), th(rng)});
        spec.w_jmc = w(rng);
        spec.w_ee = w(rng);
        const JointVector q = test::random_angles(rng, 8, 180);

        const double j = combined_loss(spec, chain, q);
        REQUIRE(j >= 0.0);

        auto scaled = spec;
        const double factor = w(rng);
        scaled.w_jmc *= factor;
        scaled.w_ee *= factor;
        REQUIRE(std::abs(combined_loss(scaled, chain, q) - j) <= 1e-12 * std::max(1.0, j));

        // J_ee == 0 exactly when the pose error vanishes
        auto reached = spec;
        reached.target = forward_kinematics(chain, q);
        REQUIRE(j_ee(reached, chain, q) == 0.0);
        REQUIRE(pose_error(reached.target, forward_kinematics(chain, q)).isZero(0.0));
    }
}
