#ifndef SDP_SCHEDULE_HPP
#define SDP_SCHEDULE_HPP

#include <vector>

namespace sdp {

// Per-timestep noise levels, 1-based t mapped to index t-1.
struct VarianceSchedule {
    int t_steps = 0;
    std::vector<double> beta;
    std::vector<double> alpha;     // 1 - beta_t
    std::vector<double> alpha_bar; // running product of alpha

    double beta_at(int t) const { return beta[static_cast<std::size_t>(t - 1)]; }
    double alpha_at(int t) const { return alpha[static_cast<std::size_t>(t - 1)]; }
    double alpha_bar_at(int t) const { return alpha_bar[static_cast<std::size_t>(t - 1)]; }
};

// Linear beta schedule from beta_1 (t=1) to beta_T (t=T).
VarianceSchedule make_schedule(int t_steps, double beta_1, double beta_t_final);

} // namespace sdp

#endif
