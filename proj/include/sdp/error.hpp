#ifndef SDP_ERROR_HPP
#define SDP_ERROR_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace sdp {

// Error kinds used across the library: "bad_argument", "shape_mismatch",
// "bad_magic", "truncated_payload", "dimension_overflow", "not_psd",
// "non_finite", "stale_tape", "io", "degenerate_input".
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(msg), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

[[noreturn]] inline void fail(std::string kind, const std::string& msg) {
    throw Error(std::move(kind), msg);
}

inline void require(bool cond, const char* kind, const std::string& msg) {
    if (!cond) fail(kind, msg);
}

} // namespace sdp

#endif
