#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "sdp/denoiser.hpp"
#include "sdp/error.hpp"

namespace sdp {

namespace {

constexpr char kMagic[4] = {'S', 'D', 'M', '1'};

struct BlobDecl {
    std::string name;
    int rows = 0;
    int cols = 0;
};

template <typename Mat>
void write_blob(std::ostream& os, const Mat& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(m(r, c)));
            const unsigned char b[4] = {static_cast<unsigned char>(bits & 0xff),
                                        static_cast<unsigned char>((bits >> 8) & 0xff),
                                        static_cast<unsigned char>((bits >> 16) & 0xff),
                                        static_cast<unsigned char>((bits >> 24) & 0xff)};
            os.write(reinterpret_cast<const char*>(b), 4);
        }
}

template <typename Mat>
void read_blob(std::istream& is, Mat m, const std::string& name) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            unsigned char b[4];
            is.read(reinterpret_cast<char*>(b), 4);
            require(is.gcount() == 4, "truncated_payload",
                    "load_denoiser: blob " + name + " is truncated");
            const std::uint32_t bits =
                static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
                (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
            m(r, c) = static_cast<double>(std::bit_cast<float>(bits));
        }
}

std::vector<BlobDecl> declared_blobs(const DenoiserConfig& cfg) {
    std::vector<BlobDecl> blobs;
    blobs.push_back({"time_proj.weight", cfg.hidden, cfg.embed_dim});
    blobs.push_back({"time_proj.bias", cfg.hidden, 1});
    for (int l = 0; l < cfg.layers; ++l) {
        blobs.push_back({"layer" + std::to_string(l) + ".weight", cfg.hidden,
                         DenoiserParams::layer_input_size(cfg, l)});
        blobs.push_back({"layer" + std::to_string(l) + ".bias", cfg.hidden, 1});
    }
    blobs.push_back({"output.weight", cfg.bands, DenoiserParams::output_input_size(cfg)});
    blobs.push_back({"output.bias", cfg.bands, 1});
    return blobs;
}

} // namespace

void save_denoiser(const DenoiserParams& params, const std::string& path) {
    const DenoiserConfig& cfg = params.config();
    std::ostringstream header;
    header.precision(17);
    header << "format = sdm-denoiser-v1\n"
           << "bands = " << cfg.bands << "\n"
           << "layers = " << cfg.layers << "\n"
           << "hidden = " << cfg.hidden << "\n"
           << "embed_dim = " << cfg.embed_dim << "\n"
           << "t_steps = " << cfg.t_steps << "\n"
           << "beta_1 = " << cfg.beta_1 << "\n"
           << "beta_T = " << cfg.beta_t_final << "\n"
           << "activation = " << to_string(cfg.activation) << "\n"
           << "skip = " << to_string(cfg.skip) << "\n"
           << "dropout = " << cfg.dropout << "\n"
           << "steps_trained = " << params.steps_trained << "\n";
    for (const BlobDecl& b : declared_blobs(cfg))
        header << "blob = " << b.name << " " << b.rows << " " << b.cols << "\n";
    const std::string htext = header.str();

    std::ofstream os(path, std::ios::binary);
    require(os.good(), "io", "save_denoiser: cannot open " + path);
    os.write(kMagic, 4);
    const std::uint32_t hlen = static_cast<std::uint32_t>(htext.size());
    const unsigned char lenb[4] = {static_cast<unsigned char>(hlen & 0xff),
                                   static_cast<unsigned char>((hlen >> 8) & 0xff),
                                   static_cast<unsigned char>((hlen >> 16) & 0xff),
                                   static_cast<unsigned char>((hlen >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(lenb), 4);
    os.write(htext.data(), static_cast<std::streamsize>(htext.size()));

    write_blob(os, params.time_w());
    write_blob(os, params.time_b());
    for (int l = 0; l < cfg.layers; ++l) {
        write_blob(os, params.layer_w(l));
        write_blob(os, params.layer_b(l));
    }
    write_blob(os, params.output_w());
    write_blob(os, params.output_b());
    os.flush();
    require(os.good(), "io", "save_denoiser: write failed for " + path);
}

DenoiserParams load_denoiser(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    require(is.good(), "io", "load_denoiser: cannot open " + path);

    char magic[4];
    is.read(magic, 4);
    require(is.gcount() == 4 && std::memcmp(magic, kMagic, 4) == 0, "bad_magic",
            "load_denoiser: bad magic in " + path);

    unsigned char lenb[4];
    is.read(reinterpret_cast<char*>(lenb), 4);
    require(is.gcount() == 4, "truncated_payload", "load_denoiser: missing header length");
    const std::uint32_t hlen = static_cast<std::uint32_t>(lenb[0]) |
                               (static_cast<std::uint32_t>(lenb[1]) << 8) |
                               (static_cast<std::uint32_t>(lenb[2]) << 16) |
                               (static_cast<std::uint32_t>(lenb[3]) << 24);
    require(hlen > 0 && hlen < (1u << 20), "bad_argument", "load_denoiser: absurd header length");

    std::string htext(hlen, '\0');
    is.read(htext.data(), hlen);
    require(static_cast<std::uint32_t>(is.gcount()) == hlen, "truncated_payload",
            "load_denoiser: header shorter than declared");

    std::map<std::string, std::string> kv;
    std::vector<BlobDecl> blobs;
    std::istringstream hs(htext);
    std::string line;
    while (std::getline(hs, line)) {
        if (line.empty()) continue;
        const auto eq = line.find(" = ");
        require(eq != std::string::npos, "io", "load_denoiser: malformed header line: " + line);
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 3);
        if (key == "blob") {
            std::istringstream bs(val);
            BlobDecl b;
            bs >> b.name >> b.rows >> b.cols;
            require(!bs.fail() && b.rows >= 1 && b.cols >= 1, "io",
                    "load_denoiser: malformed blob declaration: " + val);
            blobs.push_back(b);
        } else {
            kv[key] = val;
        }
    }

    auto get = [&kv, &path](const std::string& key) -> const std::string& {
        auto it = kv.find(key);
        require(it != kv.end(), "io", "load_denoiser: " + path + " missing header key " + key);
        return it->second;
    };
    require(get("format") == "sdm-denoiser-v1", "bad_argument",
            "load_denoiser: unsupported format " + get("format"));

    DenoiserConfig cfg;
    cfg.bands = std::stoi(get("bands"));
    cfg.layers = std::stoi(get("layers"));
    cfg.hidden = std::stoi(get("hidden"));
    cfg.embed_dim = std::stoi(get("embed_dim"));
    cfg.t_steps = std::stoi(get("t_steps"));
    cfg.beta_1 = std::stod(get("beta_1"));
    cfg.beta_t_final = std::stod(get("beta_T"));
    cfg.activation = activation_from_string(get("activation"));
    cfg.skip = skip_mode_from_string(get("skip"));
    cfg.dropout = std::stod(get("dropout"));

    DenoiserParams params(cfg);
    params.steps_trained = std::stol(get("steps_trained"));

    const std::vector<BlobDecl> expected = declared_blobs(cfg);
    require(blobs.size() == expected.size(), "shape_mismatch",
            "load_denoiser: blob count does not match the declared architecture");
    for (std::size_t i = 0; i < blobs.size(); ++i)
        require(blobs[i].name == expected[i].name && blobs[i].rows == expected[i].rows &&
                    blobs[i].cols == expected[i].cols,
                "shape_mismatch", "load_denoiser: blob " + blobs[i].name + " has unexpected shape");

    read_blob(is, params.time_w(), "time_proj.weight");
    read_blob(is, params.time_b(), "time_proj.bias");
    for (int l = 0; l < cfg.layers; ++l) {
        read_blob(is, params.layer_w(l), "layer" + std::to_string(l) + ".weight");
        read_blob(is, params.layer_b(l), "layer" + std::to_string(l) + ".bias");
    }
    read_blob(is, params.output_w(), "output.weight");
    read_blob(is, params.output_b(), "output.bias");
    return params;
}

} // namespace sdp
