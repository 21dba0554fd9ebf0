#ifndef SDP_ADAM_HPP
#define SDP_ADAM_HPP

#include <span>

#include <Eigen/Core>

namespace sdp {

struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

// Bias-corrected Adam over a flat parameter vector. Callers that optimize a
// set of arrays flatten them into one contiguous buffer.
class AdamState {
public:
    explicit AdamState(std::size_t size, AdamConfig cfg = {});

    // In-place update; params and grads must match the state size.
    void step(std::span<double> params, std::span<const double> grads, double lr);

    long step_count() const noexcept { return step_count_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(m_.size()); }
    const Eigen::ArrayXd& first_moment() const noexcept { return m_; }
    const Eigen::ArrayXd& second_moment() const noexcept { return v_; }
    const AdamConfig& config() const noexcept { return cfg_; }

    void reset_moments();

private:
    AdamConfig cfg_;
    Eigen::ArrayXd m_;
    Eigen::ArrayXd v_;
    long step_count_ = 0;
};

} // namespace sdp

#endif
