#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "sdp/cube.hpp"
#include "sdp/error.hpp"
#include "sdp/io.hpp"
#include "sdp/rng.hpp"
#include "sdp/toy.hpp"
#include "sdp/wald.hpp"

using namespace sdp;

namespace {

std::string tmp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

// Values exactly representable in binary32 so the f32 container round-trips
// them bit for bit.
HyperCube representable_cube(int b, int h, int w) {
    HyperCube cube(b, h, w);
    for (std::size_t i = 0; i < cube.data.size(); ++i)
        cube.data[i] = static_cast<double>(static_cast<float>(i) * 0.03125f);
    return cube;
}

} // namespace

TEST_CASE("cube save/load round-trips exactly") {
    const HyperCube cube = representable_cube(3, 4, 5);
    const std::string path = tmp_path("sdp_roundtrip.hsc");
    save_cube(cube, path);
    const HyperCube back = load_cube(path);
    CHECK(back.bands == 3);
    CHECK(back.height == 4);
    CHECK(back.width == 5);
    CHECK(back.data == cube.data);
    std::remove(path.c_str());
}

TEST_CASE("cube round-trip holds for single-pixel and single-band cubes") {
    for (auto [b, h, w] : {std::tuple{1, 1, 1}, std::tuple{5, 1, 1}, std::tuple{1, 3, 2}}) {
        const HyperCube cube = representable_cube(b, h, w);
        const std::string path = tmp_path("sdp_edge.hsc");
        save_cube(cube, path);
        CHECK(load_cube(path).data == cube.data);
        std::remove(path.c_str());
    }
}

TEST_CASE("second save/load pass is the identity for arbitrary doubles") {
    RngStream rng(3);
    HyperCube cube(2, 3, 3);
    for (double& v : cube.data) v = rng.uniform();
    const std::string path = tmp_path("sdp_stable.hsc");
    save_cube(cube, path);
    const HyperCube once = load_cube(path);
    save_cube(once, path);
    const HyperCube twice = load_cube(path);
    CHECK(once.data == twice.data);
    std::remove(path.c_str());
}

TEST_CASE("cube loader reports structured failures") {
    const std::string path = tmp_path("sdp_bad.hsc");
    {
        std::ofstream os(path, std::ios::binary);
        os << "XXXX";
        const unsigned char dims[12] = {2, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0};
        os.write(reinterpret_cast<const char*>(dims), 12);
    }
    try {
        load_cube(path);
        FAIL("expected bad magic");
    } catch (const Error& e) {
        CHECK(e.kind() == "bad_magic");
    }

    {
        std::ofstream os(path, std::ios::binary);
        os << "HSC1";
        const unsigned char dims[12] = {2, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0};
        os.write(reinterpret_cast<const char*>(dims), 12);
        const float vals[7] = {0, 1, 2, 3, 4, 5, 6}; // header claims 8
        os.write(reinterpret_cast<const char*>(vals), sizeof(vals));
    }
    try {
        load_cube(path);
        FAIL("expected truncated payload");
    } catch (const Error& e) {
        CHECK(e.kind() == "truncated_payload");
    }

    {
        std::ofstream os(path, std::ios::binary);
        os << "HSC1";
        const unsigned char dims[12] = {0xff, 0xff, 0xff, 0x7f, 0xff, 0xff,
                                        0xff, 0x7f, 0xff, 0xff, 0xff, 0x7f};
        os.write(reinterpret_cast<const char*>(dims), 12);
    }
    try {
        load_cube(path);
        FAIL("expected dimension overflow");
    } catch (const Error& e) {
        CHECK(e.kind() == "dimension_overflow");
    }
    std::remove(path.c_str());
}

TEST_CASE("cube/spectra reshapes follow the row-major pixel order") {
    HyperCube tiny(2, 1, 1);
    tiny.at(0, 0, 0) = 0.2;
    tiny.at(1, 0, 0) = 0.7;
    const SpectrumBatch one = cube_to_spectra(tiny);
    CHECK(one.count == 1);
    CHECK(one.data(0, 0) == 0.2);
    CHECK(one.data(0, 1) == 0.7);

    HyperCube cube(3, 2, 2);
    for (std::size_t i = 0; i < cube.data.size(); ++i) cube.data[i] = static_cast<double>(i);
    const SpectrumBatch batch = cube_to_spectra(cube);
    // Pixel (1, 0) is row 1*width + 0 = 2.
    for (int b = 0; b < 3; ++b) CHECK(batch.data(2, b) == cube.at(b, 1, 0));

    const HyperCube back = spectra_to_cube(batch, 2, 2);
    CHECK(back.data == cube.data);

    const HyperCube big = representable_cube(5, 3, 4);
    CHECK(spectra_to_cube(cube_to_spectra(big), 3, 4).data == big.data);

    CHECK_THROWS_AS(spectra_to_cube(batch, 3, 2), Error);
}

TEST_CASE("spectra csv round-trips values") {
    RngStream rng(5);
    SpectrumBatch batch(4, 3);
    batch.data = gaussian_matrix(rng, 4, 3);
    const std::string path = tmp_path("sdp_spectra.csv");
    save_spectra_csv(batch, path);
    const SpectrumBatch back = load_spectra_csv(path);
    CHECK(back.count == 4);
    CHECK(back.bands == 3);
    CHECK(back.data == batch.data);
    std::remove(path.c_str());
}

TEST_CASE("split and scale helpers") {
    HyperCube cube(1, 4, 2);
    for (std::size_t i = 0; i < cube.data.size(); ++i) cube.data[i] = static_cast<double>(i);
    const auto [top, bottom] = split_top_bottom(cube);
    CHECK(top.height == 2);
    CHECK(top.at(0, 0, 0) == 0.0);
    CHECK(bottom.at(0, 0, 0) == 4.0);

    HyperCube scaled(1, 1, 3);
    scaled.data = {2.0, 4.0, 6.0};
    const auto [lo, hi] = scale_to_unit(scaled);
    CHECK(lo == 2.0);
    CHECK(hi == 6.0);
    CHECK(scaled.data[0] == 0.0);
    CHECK(scaled.data[1] == 0.5);
    CHECK(scaled.data[2] == 1.0);
}

TEST_CASE("toy scenes stay inside [0,1] and are seed-deterministic") {
    RngStream a(9), b(9);
    const HyperCube s1 = make_toy_scene({8, 6, 4, 3}, a);
    const HyperCube s2 = make_toy_scene({8, 6, 4, 3}, b);
    CHECK(s1.data == s2.data);
    for (double v : s1.data) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}
