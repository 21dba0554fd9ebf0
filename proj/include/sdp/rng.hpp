#ifndef SDP_RNG_HPP
#define SDP_RNG_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include <Eigen/Core>

namespace sdp {

// Deterministic seedable stream (xoshiro256++ seeded through splitmix64).
// Streams with equal seeds emit identical sequences. split() derives an
// independent child stream from the construction seed and a label, so the
// result does not depend on how much of the parent has been consumed.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed);

    RngStream split(std::uint64_t label) const;
    RngStream split(std::string_view label) const;

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64();

    // Uniform on [0, 1) with 53 random bits.
    double uniform();

    // Standard normal via Box-Muller; the paired draw is cached.
    double gaussian();

    void fill_gaussian(std::span<double> out);

private:
    std::uint64_t seed_;
    std::array<std::uint64_t, 4> state_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

// rows x cols matrix of i.i.d. standard normal draws, row-major fill order.
Eigen::MatrixXd gaussian_matrix(RngStream& rng, int rows, int cols);

} // namespace sdp

#endif
