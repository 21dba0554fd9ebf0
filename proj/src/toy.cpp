#include "sdp/toy.hpp"

#include <cmath>
#include <vector>

#include "sdp/error.hpp"

namespace sdp {

HyperCube make_toy_scene(const ToySceneConfig& cfg, RngStream& rng) {
    require(cfg.bands >= 1 && cfg.height >= 1 && cfg.width >= 1 && cfg.endmembers >= 1,
            "bad_argument", "make_toy_scene: all dims must be >= 1");

    RngStream rng_spec = rng.split("endmembers");
    RngStream rng_abun = rng.split("abundances");

    // Smooth endmember spectra: a gentle slope plus two Gaussian bumps,
    // squeezed into [0.05, 0.95].
    std::vector<std::vector<double>> endmembers(static_cast<std::size_t>(cfg.endmembers));
    for (auto& e : endmembers) {
        e.resize(static_cast<std::size_t>(cfg.bands));
        const double base = 0.15 + 0.5 * rng_spec.uniform();
        const double slope = (rng_spec.uniform() - 0.5) * 0.5;
        const double c1 = rng_spec.uniform(), w1 = 0.05 + 0.15 * rng_spec.uniform();
        const double c2 = rng_spec.uniform(), w2 = 0.05 + 0.15 * rng_spec.uniform();
        const double a1 = (rng_spec.uniform() - 0.3) * 0.6;
        const double a2 = (rng_spec.uniform() - 0.3) * 0.6;
        for (int b = 0; b < cfg.bands; ++b) {
            const double pos = cfg.bands == 1 ? 0.5 : static_cast<double>(b) / (cfg.bands - 1);
            const double z1 = (pos - c1) / w1, z2 = (pos - c2) / w2;
            double v = base + slope * (pos - 0.5) + a1 * std::exp(-0.5 * z1 * z1) +
                       a2 * std::exp(-0.5 * z2 * z2);
            e[static_cast<std::size_t>(b)] = std::min(0.95, std::max(0.05, v));
        }
    }

    // Smooth abundance fields from Gaussian blobs, normalized to a simplex.
    std::vector<std::vector<double>> fields(static_cast<std::size_t>(cfg.endmembers));
    for (auto& f : fields) {
        f.resize(static_cast<std::size_t>(cfg.height) * cfg.width);
        const double cr = rng_abun.uniform() * cfg.height;
        const double cc = rng_abun.uniform() * cfg.width;
        const double sr = (0.15 + 0.25 * rng_abun.uniform()) * cfg.height;
        const double sc = (0.15 + 0.25 * rng_abun.uniform()) * cfg.width;
        const double floor = 0.05 + 0.1 * rng_abun.uniform();
        for (int r = 0; r < cfg.height; ++r)
            for (int c = 0; c < cfg.width; ++c) {
                const double zr = (r - cr) / sr, zc = (c - cc) / sc;
                f[static_cast<std::size_t>(r) * cfg.width + c] =
                    floor + std::exp(-0.5 * (zr * zr + zc * zc));
            }
    }

    HyperCube cube(cfg.bands, cfg.height, cfg.width);
    for (int r = 0; r < cfg.height; ++r)
        for (int c = 0; c < cfg.width; ++c) {
            const std::size_t pix = static_cast<std::size_t>(r) * cfg.width + c;
            double total = 0.0;
            for (const auto& f : fields) total += f[pix];
            for (int b = 0; b < cfg.bands; ++b) {
                double v = 0.0;
                for (int k = 0; k < cfg.endmembers; ++k)
                    v += fields[static_cast<std::size_t>(k)][pix] / total *
                         endmembers[static_cast<std::size_t>(k)][static_cast<std::size_t>(b)];
                cube.at(b, r, c) = v;
            }
        }
    return cube;
}

} // namespace sdp
