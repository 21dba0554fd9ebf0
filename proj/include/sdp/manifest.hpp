#ifndef SDP_MANIFEST_HPP
#define SDP_MANIFEST_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace sdp {

// Run record written next to every command's outputs; params plus input
// checksums are enough to re-run the command.
struct RunManifest {
    std::string command;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::pair<std::string, std::string>> inputs;  // name -> path
    std::vector<std::pair<std::string, std::string>> outputs; // name -> path
    double duration_ms = 0.0;
};

std::string file_checksum_hex(const std::string& path); // FNV-1a 64 over bytes

void write_manifest(const RunManifest& manifest, const std::string& path);

} // namespace sdp

#endif
