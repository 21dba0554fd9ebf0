#ifndef SDP_DENOISER_HPP
#define SDP_DENOISER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sdp/cube.hpp"
#include "sdp/rng.hpp"

namespace sdp {

enum class Activation { Silu, Relu };
enum class SkipMode {
    LayerInput,    // concatenate each layer's output with that layer's input
    OriginalInput, // concatenate each layer's output with the network input
};

std::string to_string(Activation a);
std::string to_string(SkipMode s);
Activation activation_from_string(const std::string& s);
SkipMode skip_mode_from_string(const std::string& s);

struct DenoiserConfig {
    int bands = 0;
    int layers = 4;     // hidden concat layers
    int hidden = 512;   // per-layer output width
    int embed_dim = 64; // sinusoidal embedding width
    int t_steps = 1000; // schedule length the model was trained for
    double beta_1 = 1e-4;
    double beta_t_final = 0.02;
    double dropout = 0.001;
    Activation activation = Activation::Silu;
    SkipMode skip = SkipMode::LayerInput;
};

// Noise-prediction MLP: per hidden layer, affine -> nonlinearity -> dropout
// (training only) -> concatenation skip; the timestep enters as a sinusoidal
// embedding projected to hidden width and added to the first pre-activation;
// a final affine layer maps back to the band count. All weights live in one
// flat buffer so the optimizer and the checkpoint writer see a single span.
class DenoiserParams {
public:
    DenoiserParams() = default;
    explicit DenoiserParams(const DenoiserConfig& cfg); // zero weights

    const DenoiserConfig& config() const noexcept { return cfg_; }

    static int layer_input_size(const DenoiserConfig& cfg, int layer);
    static int output_input_size(const DenoiserConfig& cfg);

    Eigen::Map<Eigen::MatrixXd> time_w();             // hidden x embed_dim
    Eigen::Map<Eigen::VectorXd> time_b();             // hidden
    Eigen::Map<Eigen::MatrixXd> layer_w(int l);       // hidden x in_l
    Eigen::Map<Eigen::VectorXd> layer_b(int l);       // hidden
    Eigen::Map<Eigen::MatrixXd> output_w();           // bands x out_in
    Eigen::Map<Eigen::VectorXd> output_b();           // bands
    Eigen::Map<const Eigen::MatrixXd> time_w() const;
    Eigen::Map<const Eigen::VectorXd> time_b() const;
    Eigen::Map<const Eigen::MatrixXd> layer_w(int l) const;
    Eigen::Map<const Eigen::VectorXd> layer_b(int l) const;
    Eigen::Map<const Eigen::MatrixXd> output_w() const;
    Eigen::Map<const Eigen::VectorXd> output_b() const;

    std::vector<double>& flat() noexcept { return flat_; }
    const std::vector<double>& flat() const noexcept { return flat_; }

    // Bumped whenever weights change in place; tapes carry the value they saw.
    std::uint64_t version = 0;
    long steps_trained = 0;

private:
    DenoiserConfig cfg_;
    std::vector<double> flat_;
    std::size_t off_time_w_ = 0, off_time_b_ = 0;
    std::vector<std::size_t> off_w_, off_b_;
    std::size_t off_out_w_ = 0, off_out_b_ = 0;
};

// Interleaved (sin, cos) pairs with frequencies 10000^(-2i/dim).
Eigen::VectorXd time_embedding(int t, int dim);

// Weights uniform in +-sqrt(1/fan_in), biases zero.
DenoiserParams init_denoiser(const DenoiserConfig& cfg, RngStream& rng);

// Everything the exact backward pass needs from a forward call.
struct ForwardTape {
    int t = 0;
    bool train_mode = false;
    std::uint64_t params_version = 0;
    Eigen::MatrixXd input;              // N x bands
    Eigen::VectorXd embed;              // embed_dim
    std::vector<Eigen::MatrixXd> pre;   // per layer, N x hidden
    std::vector<Eigen::MatrixXd> feat;  // per layer, N x feat_width (post concat)
    std::vector<Eigen::MatrixXd> mask;  // dropout keep masks (scaled); empty in eval
};

// rng is consumed only for dropout, so eval-mode calls may pass nullptr.
SpectrumBatch denoiser_forward(const DenoiserParams& params, const SpectrumBatch& x_t, int t,
                               bool train_mode, RngStream* rng, ForwardTape* tape = nullptr);

struct BackwardResult {
    Eigen::VectorXd param_grads; // congruent with params.flat()
    Eigen::MatrixXd input_grads; // N x bands
};

// Gradients of <upstream, eps_pred> w.r.t. every weight and w.r.t. x_t.
BackwardResult denoiser_backward(const DenoiserParams& params, const ForwardTape& tape,
                                 const Eigen::MatrixXd& upstream);

// Checkpoint container: magic "SDM1", u32 little-endian header length, a
// key = value text header declaring dims and blobs, then the blobs as
// IEEE-754 binary32 little-endian in declared (row-major) order.
void save_denoiser(const DenoiserParams& params, const std::string& path);
DenoiserParams load_denoiser(const std::string& path);

} // namespace sdp

#endif
