#include "spsaik/kinematics.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "spsaik/errors.hpp"

namespace spsaik {

bool same_values(const Eigen::VectorXd& a, const Eigen::VectorXd& b) noexcept {
    return a.size() == b.size() && (a.array() == b.array()).all();
}

bool same_values(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) noexcept {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

bool operator==(const JointLimits& a, const JointLimits& b) {
    return same_values(a.lower, b.lower) && same_values(a.upper, b.upper);
}

ChainModel::ChainModel(std::vector<double> link_lengths, std::optional<JointLimits> limits)
    : link_lengths_(std::move(link_lengths)), limits_(std::move(limits)) {
    if (link_lengths_.empty()) {
        throw ContractError("chain needs at least one link");
    }
    for (std::size_t i = 0; i < link_lengths_.size(); ++i) {
        const double len = link_lengths_[i];
        if (!std::isfinite(len) || len <= 0.0) {
            throw ContractError("link " + std::to_string(i + 1) + " length must be positive and finite");
        }
    }
    if (limits_) {
        const auto n = static_cast<Eigen::Index>(link_lengths_.size());
        if (limits_->lower.size() != n || limits_->upper.size() != n) {
            throw ContractError("joint limits must have one entry per joint");
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::isnan(limits_->lower[i]) || std::isnan(limits_->upper[i]) ||
                limits_->lower[i] > limits_->upper[i]) {
                throw ContractError("joint " + std::to_string(i + 1) + " has lower limit above upper limit");
            }
        }
    }
}

ChainModel ChainModel::unit(std::size_t n) { return ChainModel(std::vector<double>(n, 1.0)); }

double ChainModel::reach() const noexcept {
    return std::accumulate(link_lengths_.begin(), link_lengths_.end(), 0.0);
}

double mod_floor(double alpha, double beta) {
    if (!std::isfinite(alpha)) {
        throw ContractError("mod_floor: non-finite argument");
    }
    if (!(beta > 0.0)) {
        throw ContractError("mod_floor: modulus must be positive");
    }
    double r = alpha - beta * std::floor(alpha / beta);
    // floor rounding can land exactly on beta for tiny negative alpha
    if (r >= beta || r < 0.0) {
        r = 0.0;
    }
    return r;
}

double deg_to_rad(double deg) noexcept { return deg * (std::numbers::pi / 180.0); }

void check_joint_vector(const ChainModel& chain, const JointVector& q) {
    if (static_cast<std::size_t>(q.size()) != chain.joints()) {
        throw ContractError("joint vector has " + std::to_string(q.size()) + " entries, chain has " +
                            std::to_string(chain.joints()) + " joints");
    }
    if (!q.allFinite()) {
        throw ContractError("joint vector contains non-finite entries");
    }
}

Pose forward_kinematics(const ChainModel& chain, const JointVector& q) {
    check_joint_vector(chain, q);
    const auto& lengths = chain.link_lengths();
    double heading = 0.0;
    double x = 0.0;
    double y = 0.0;
    for (std::size_t p = 0; p < lengths.size(); ++p) {
        heading += q[static_cast<Eigen::Index>(p)];
        const double rad = deg_to_rad(heading);
        x += lengths[p] * std::cos(rad);
        y += lengths[p] * std::sin(rad);
    }
    return Pose{x, y, mod_floor(heading, 360.0)};
}

std::vector<Eigen::Vector2d> joint_positions(const ChainModel& chain, const JointVector& q) {
    check_joint_vector(chain, q);
    const auto& lengths = chain.link_lengths();
    std::vector<Eigen::Vector2d> points;
    points.reserve(lengths.size() + 1);
    Eigen::Vector2d at = Eigen::Vector2d::Zero();
    points.push_back(at);
    double heading = 0.0;
    for (std::size_t p = 0; p < lengths.size(); ++p) {
        heading += q[static_cast<Eigen::Index>(p)];
        const double rad = deg_to_rad(heading);
        at += lengths[p] * Eigen::Vector2d(std::cos(rad), std::sin(rad));
        points.push_back(at);
    }
    return points;
}

Eigen::Vector3d pose_error(const Pose& target, const Pose& current) {
    for (const Pose* p : {&target, &current}) {
        if (!std::isfinite(p->x) || !std::isfinite(p->y) || !std::isfinite(p->theta)) {
            throw ContractError("pose_error: non-finite pose");
        }
    }
    return {target.x - current.x, target.y - current.y, target.theta - current.theta};
}

}  // namespace spsaik
