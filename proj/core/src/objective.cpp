#include "spsaik/objective.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>

#include "spsaik/errors.hpp"

namespace spsaik {

Eigen::Matrix3d ObjectiveSpec::default_r_ee() {
    Eigen::Matrix3d r = Eigen::Matrix3d::Zero();
    r(0, 0) = 1.0 / 7.0;
    r(1, 1) = 1.0 / 7.0;
    r(2, 2) = 5.0 * kDegSq / 7.0;
    return r;
}

bool is_symmetric_positive_definite(const Eigen::MatrixXd& m) {
    if (m.rows() == 0 || m.rows() != m.cols() || !m.allFinite()) {
        return false;
    }
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        return false;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    return llt.info() == Eigen::Success;
}

void ObjectiveSpec::validate(const ChainModel& chain) const {
    const auto n = static_cast<Eigen::Index>(chain.joints());
    if (reference.size() != n) {
        throw ContractError("reference configuration has " + std::to_string(reference.size()) +
                            " entries, chain has " + std::to_string(n) + " joints");
    }
    if (!reference.allFinite()) {
        throw ContractError("reference configuration contains non-finite entries");
    }
    if (q_jmc.rows() != n || q_jmc.cols() != n) {
        throw ContractError("Q_jmc must be " + std::to_string(n) + "x" + std::to_string(n));
    }
    if (!is_symmetric_positive_definite(q_jmc)) {
        throw ContractError("Q_jmc must be symmetric positive-definite");
    }
    if (!is_symmetric_positive_definite(r_ee)) {
        throw ContractError("R_ee must be symmetric positive-definite");
    }
    if (!std::isfinite(w_ee) || w_ee <= 0.0) {
        throw ContractError("w_ee must be strictly positive");
    }
    if (!std::isfinite(w_jmc) || w_jmc < 0.0) {
        throw ContractError("w_jmc must be nonnegative");
    }
    if (!std::isfinite(target.x) || !std::isfinite(target.y) || !std::isfinite(target.theta)) {
        throw ContractError("target pose must be finite");
    }
}

bool operator==(const ObjectiveSpec& a, const ObjectiveSpec& b) {
    return a.target == b.target && same_values(a.reference, b.reference) &&
           same_values(Eigen::MatrixXd(a.r_ee), Eigen::MatrixXd(b.r_ee)) &&
           same_values(a.q_jmc, b.q_jmc) && a.w_jmc == b.w_jmc && a.w_ee == b.w_ee;
}

namespace {

double ee_term(const ObjectiveSpec& spec, const Pose& reached) {
    const Eigen::Vector3d e = pose_error(spec.target, reached);
    return e.dot(spec.r_ee * e);
}

double jmc_term(const ObjectiveSpec& spec, const JointVector& q) {
    const Eigen::VectorXd dq = q - spec.reference;
    return dq.dot(spec.q_jmc * dq);
}

}  // namespace

double j_ee(const ObjectiveSpec& spec, const ChainModel& chain, const JointVector& q) {
    return ee_term(spec, forward_kinematics(chain, q));
}

double j_jmc(const ObjectiveSpec& spec, const JointVector& q) {
    if (q.size() != spec.reference.size() || spec.q_jmc.rows() != q.size() || spec.q_jmc.cols() != q.size()) {
        throw ContractError("j_jmc: dimension mismatch");
    }
    return jmc_term(spec, q);
}

double combined_loss(const ObjectiveSpec& spec, const ChainModel& chain, const JointVector& q) {
    const Pose reached = forward_kinematics(chain, q);
    if (q.size() != spec.reference.size() || spec.q_jmc.rows() != q.size()) {
        throw ContractError("combined_loss: dimension mismatch");
    }
    const double total = spec.w_jmc + spec.w_ee;
    return (spec.w_jmc * jmc_term(spec, q) + spec.w_ee * ee_term(spec, reached)) / total;
}

}  // namespace spsaik
