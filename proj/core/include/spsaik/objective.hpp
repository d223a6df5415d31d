#pragma once

#include <Eigen/Core>

#include "spsaik/kinematics.hpp"

namespace spsaik {

/// (2*pi/360)^2: converts a squared degree error into squared radians.
inline constexpr double kDegSq = (2.0 * 3.14159265358979323846 / 360.0) * (2.0 * 3.14159265358979323846 / 360.0);

/**
 * @brief Penalty-combined IK objective.
 *
 * J(q) = [w_jmc * J_jmc(q) + w_ee * J_ee(q)] / (w_jmc + w_ee) with
 *   J_ee(q)  = e^T R_ee e,   e = target - FK(q)
 *   J_jmc(q) = (q - q0)^T Q_jmc (q - q0)
 * Position errors are in length units; orientation and joint errors in degrees.
 */
struct ObjectiveSpec {
    Pose target;
    JointVector reference;
    Eigen::Matrix3d r_ee = default_r_ee();
    Eigen::MatrixXd q_jmc;
    double w_jmc = 1.0;
    double w_ee = 50.0;

    /// diag{1, 1, 5 (2pi/360)^2} / 7
    static Eigen::Matrix3d default_r_ee();

    /// Throws ContractError on a non-SPD weight, bad scalar weight or size mismatch.
    void validate(const ChainModel& chain) const;

    friend bool operator==(const ObjectiveSpec& a, const ObjectiveSpec& b);
};

/// True when m is symmetric and admits a Cholesky factorization.
bool is_symmetric_positive_definite(const Eigen::MatrixXd& m);

double j_ee(const ObjectiveSpec& spec, const ChainModel& chain, const JointVector& q);
double j_jmc(const ObjectiveSpec& spec, const JointVector& q);
double combined_loss(const ObjectiveSpec& spec, const ChainModel& chain, const JointVector& q);

}  // namespace spsaik
