#include "sdp/manifest.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "sdp/error.hpp"

namespace sdp {

std::string file_checksum_hex(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    require(is.good(), "io", "checksum: cannot open " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[65536];
    while (is.read(buf, sizeof(buf)) || is.gcount() > 0) {
        const std::streamsize n = is.gcount();
        for (std::streamsize i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (n < static_cast<std::streamsize>(sizeof(buf))) break;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
    std::ofstream os(path);
    require(os.good(), "io", "write_manifest: cannot open " + path);
    os.precision(17);
    os << "command = " << manifest.command << "\n";
    os << "seed = " << manifest.seed << "\n";
    os << "duration_ms = " << manifest.duration_ms << "\n";
    for (const auto& [k, v] : manifest.params) os << "param." << k << " = " << v << "\n";
    for (const auto& [k, v] : manifest.inputs)
        os << "input." << k << " = " << v << " fnv1a64=" << file_checksum_hex(v) << "\n";
    for (const auto& [k, v] : manifest.outputs)
        os << "output." << k << " = " << v << " fnv1a64=" << file_checksum_hex(v) << "\n";
    os.flush();
    require(os.good(), "io", "write_manifest: write failed for " + path);
}

} // namespace sdp
