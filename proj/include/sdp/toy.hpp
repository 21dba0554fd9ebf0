#ifndef SDP_TOY_HPP
#define SDP_TOY_HPP

#include "sdp/cube.hpp"
#include "sdp/rng.hpp"

namespace sdp {

struct ToySceneConfig {
    int bands = 31;
    int height = 64;
    int width = 32;
    int endmembers = 4;
};

// Synthetic scene built from smooth endmember spectra mixed by smooth
// abundance fields (convex per pixel), so every pixel lies on a known
// low-dimensional spectral manifold and values stay inside [0, 1].
HyperCube make_toy_scene(const ToySceneConfig& cfg, RngStream& rng);

} // namespace sdp

#endif
