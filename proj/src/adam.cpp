#include "sdp/adam.hpp"

#include <cmath>

#include "sdp/error.hpp"

namespace sdp {

AdamState::AdamState(std::size_t size, AdamConfig cfg) : cfg_(cfg) {
    require(cfg.beta1 > 0.0 && cfg.beta1 < 1.0, "bad_argument", "adam: beta1 must lie in (0,1)");
    require(cfg.beta2 > 0.0 && cfg.beta2 < 1.0, "bad_argument", "adam: beta2 must lie in (0,1)");
    require(cfg.epsilon > 0.0, "bad_argument", "adam: epsilon must be positive");
    m_ = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(size));
    v_ = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(size));
}

void AdamState::step(std::span<double> params, std::span<const double> grads, double lr) {
    const std::size_t n = size();
    require(params.size() == n && grads.size() == n, "shape_mismatch",
            "adam: parameter/gradient size does not match optimizer state");

    ++step_count_;
    const double b1 = cfg_.beta1;
    const double b2 = cfg_.beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_count_));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_count_));

    for (std::size_t i = 0; i < n; ++i) {
        const double g = grads[i];
        m_[static_cast<Eigen::Index>(i)] = b1 * m_[static_cast<Eigen::Index>(i)] + (1.0 - b1) * g;
        v_[static_cast<Eigen::Index>(i)] = b2 * v_[static_cast<Eigen::Index>(i)] + (1.0 - b2) * g * g;
        const double mhat = m_[static_cast<Eigen::Index>(i)] / c1;
        const double vhat = v_[static_cast<Eigen::Index>(i)] / c2;
        params[i] -= lr * mhat / (std::sqrt(vhat) + cfg_.epsilon);
    }
}

void AdamState::reset_moments() {
    m_.setZero();
    v_.setZero();
    step_count_ = 0;
}

} // namespace sdp
