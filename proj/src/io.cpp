#include "sdp/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "sdp/error.hpp"

namespace sdp {

namespace {

constexpr char kCubeMagic[4] = {'H', 'S', 'C', '1'};
// Dim product bound keeps payload sizes addressable and catches corrupt headers.
constexpr std::uint64_t kMaxElements = 1ull << 31;

void put_u32le(std::ostream& os, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                                static_cast<unsigned char>((v >> 8) & 0xff),
                                static_cast<unsigned char>((v >> 16) & 0xff),
                                static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32le(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    require(is.gcount() == 4, "truncated_payload", "file ends inside header");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f32le(std::ostream& os, float v) {
    const auto bits = std::bit_cast<std::uint32_t>(v);
    put_u32le(os, bits);
}

} // namespace

void save_cube(const HyperCube& cube, const std::string& path) {
    validate_cube(cube);
    std::ofstream os(path, std::ios::binary);
    require(os.good(), "io", "save_cube: cannot open " + path);
    os.write(kCubeMagic, 4);
    put_u32le(os, static_cast<std::uint32_t>(cube.bands));
    put_u32le(os, static_cast<std::uint32_t>(cube.height));
    put_u32le(os, static_cast<std::uint32_t>(cube.width));
    for (double v : cube.data) put_f32le(os, static_cast<float>(v));
    os.flush();
    require(os.good(), "io", "save_cube: write failed for " + path);
}

HyperCube load_cube(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    require(is.good(), "io", "load_cube: cannot open " + path);

    char magic[4];
    is.read(magic, 4);
    require(is.gcount() == 4 && std::memcmp(magic, kCubeMagic, 4) == 0, "bad_magic",
            "load_cube: bad magic in " + path);

    const std::uint32_t b = get_u32le(is);
    const std::uint32_t h = get_u32le(is);
    const std::uint32_t w = get_u32le(is);
    require(b >= 1 && h >= 1 && w >= 1, "bad_argument", "load_cube: zero dimension");
    const std::uint64_t n = static_cast<std::uint64_t>(b) * h * w;
    require(n <= kMaxElements, "dimension_overflow", "load_cube: dims overflow element budget");

    HyperCube cube(static_cast<int>(b), static_cast<int>(h), static_cast<int>(w));
    std::vector<unsigned char> raw(static_cast<std::size_t>(n) * 4);
    is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    require(static_cast<std::size_t>(is.gcount()) == raw.size(), "truncated_payload",
            "load_cube: payload shorter than header claims in " + path);

    for (std::uint64_t i = 0; i < n; ++i) {
        const std::uint32_t bits = static_cast<std::uint32_t>(raw[i * 4]) |
                                   (static_cast<std::uint32_t>(raw[i * 4 + 1]) << 8) |
                                   (static_cast<std::uint32_t>(raw[i * 4 + 2]) << 16) |
                                   (static_cast<std::uint32_t>(raw[i * 4 + 3]) << 24);
        cube.data[static_cast<std::size_t>(i)] = static_cast<double>(std::bit_cast<float>(bits));
    }
    return cube;
}

namespace {

void write_csv_rows(std::ostream& os, const Eigen::MatrixXd& m) {
    os.precision(17);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) os << ',';
            os << m(r, c);
        }
        os << '\n';
    }
}

Eigen::MatrixXd read_csv_rows(std::istream& is, const std::string& path) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        const char* p = line.c_str();
        while (true) {
            char* end = nullptr;
            const double v = std::strtod(p, &end);
            require(end != p, "io", "csv: unparsable number in " + path);
            row.push_back(v);
            while (*end == ' ' || *end == '\t') ++end;
            if (*end == ',') {
                p = end + 1;
            } else {
                require(*end == '\0', "io", "csv: trailing garbage in " + path);
                break;
            }
        }
        if (!rows.empty())
            require(row.size() == rows.front().size(), "shape_mismatch",
                    "csv: ragged rows in " + path);
        rows.push_back(std::move(row));
    }
    require(!rows.empty(), "io", "csv: empty file " + path);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    return m;
}

} // namespace

void save_matrix_csv(const Eigen::MatrixXd& m, const std::string& path) {
    std::ofstream os(path);
    require(os.good(), "io", "save_matrix_csv: cannot open " + path);
    write_csv_rows(os, m);
    os.flush();
    require(os.good(), "io", "save_matrix_csv: write failed for " + path);
}

Eigen::MatrixXd load_matrix_csv(const std::string& path) {
    std::ifstream is(path);
    require(is.good(), "io", "load_matrix_csv: cannot open " + path);
    return read_csv_rows(is, path);
}

void save_spectra_csv(const SpectrumBatch& batch, const std::string& path) {
    save_matrix_csv(batch.data, path);
}

SpectrumBatch load_spectra_csv(const std::string& path) {
    SpectrumBatch batch;
    batch.data = load_matrix_csv(path);
    batch.count = static_cast<int>(batch.data.rows());
    batch.bands = static_cast<int>(batch.data.cols());
    return batch;
}

} // namespace sdp
