#ifndef SDP_THREADS_HPP
#define SDP_THREADS_HPP

#include <functional>

namespace sdp {

// Process-wide worker count for data-parallel loops over independent slices
// (disjoint writes only, so results do not depend on the thread count).
void set_threads(int n);
int threads();

void parallel_for(int count, const std::function<void(int)>& fn);

} // namespace sdp

#endif
