#include "sdp/schedule.hpp"

#include "sdp/error.hpp"

namespace sdp {

VarianceSchedule make_schedule(int t_steps, double beta_1, double beta_t_final) {
    require(t_steps >= 1, "bad_argument", "make_schedule: T must be >= 1");
    require(beta_1 > 0.0 && beta_1 <= beta_t_final && beta_t_final < 1.0, "bad_argument",
            "make_schedule: need 0 < beta_1 <= beta_T < 1");

    VarianceSchedule s;
    s.t_steps = t_steps;
    s.beta.resize(static_cast<std::size_t>(t_steps));
    s.alpha.resize(static_cast<std::size_t>(t_steps));
    s.alpha_bar.resize(static_cast<std::size_t>(t_steps));

    double prod = 1.0;
    for (int t = 1; t <= t_steps; ++t) {
        const double frac = t_steps == 1 ? 0.0 : static_cast<double>(t - 1) / (t_steps - 1);
        const double b = beta_1 + frac * (beta_t_final - beta_1);
        s.beta[static_cast<std::size_t>(t - 1)] = b;
        s.alpha[static_cast<std::size_t>(t - 1)] = 1.0 - b;
        prod *= 1.0 - b;
        s.alpha_bar[static_cast<std::size_t>(t - 1)] = prod;
    }
    return s;
}

} // namespace sdp
