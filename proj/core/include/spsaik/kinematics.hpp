#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

namespace spsaik {

/// Joint angles in degrees, base joint first.
using JointVector = Eigen::VectorXd;

/// Size-aware exact equality; Eigen's operator== asserts on mismatched sizes.
bool same_values(const Eigen::VectorXd& a, const Eigen::VectorXd& b) noexcept;
bool same_values(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) noexcept;

/// Per-joint bounds in degrees.
struct JointLimits {
    JointVector lower;
    JointVector upper;

    friend bool operator==(const JointLimits& a, const JointLimits& b);
};

/// End-effector pose of a planar chain. theta is in degrees, in [0, 360).
struct Pose {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;

    friend bool operator==(const Pose&, const Pose&) = default;
};

/**
 * @brief Planar serial chain of revolute joints.
 *
 * Link p hangs off joint p; its absolute heading is the sum of joints 1..p.
 * Construction validates the geometry, so any live instance is well formed.
 */
class ChainModel {
public:
    explicit ChainModel(std::vector<double> link_lengths,
                        std::optional<JointLimits> limits = std::nullopt);

    /// n unit-length links, no limits.
    static ChainModel unit(std::size_t n);

    std::size_t joints() const noexcept { return link_lengths_.size(); }
    const std::vector<double>& link_lengths() const noexcept { return link_lengths_; }
    const std::optional<JointLimits>& limits() const noexcept { return limits_; }
    double reach() const noexcept;

    friend bool operator==(const ChainModel&, const ChainModel&) = default;

private:
    std::vector<double> link_lengths_;
    std::optional<JointLimits> limits_;
};

/// alpha - beta * floor(alpha / beta); result in [0, beta).
double mod_floor(double alpha, double beta);

double deg_to_rad(double deg) noexcept;

/// Throws ContractError unless q has chain.joints() finite entries.
void check_joint_vector(const ChainModel& chain, const JointVector& q);

Pose forward_kinematics(const ChainModel& chain, const JointVector& q);

/// Base point followed by every joint/tip position; n + 1 points.
std::vector<Eigen::Vector2d> joint_positions(const ChainModel& chain, const JointVector& q);

/// target - current, componentwise. The orientation term is a raw degree difference.
Eigen::Vector3d pose_error(const Pose& target, const Pose& current);

}  // namespace spsaik
