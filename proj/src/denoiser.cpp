#include "sdp/denoiser.hpp"

#include <cmath>

#include "sdp/error.hpp"

namespace sdp {

namespace {

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double act_value(Activation a, double x) {
    switch (a) {
        case Activation::Silu: return x * sigmoid(x);
        case Activation::Relu: return x > 0.0 ? x : 0.0;
    }
    return 0.0;
}

double act_deriv(Activation a, double x) {
    switch (a) {
        case Activation::Silu: {
            const double s = sigmoid(x);
            return s * (1.0 + x * (1.0 - s));
        }
        case Activation::Relu: return x > 0.0 ? 1.0 : 0.0;
    }
    return 0.0;
}

void validate_config(const DenoiserConfig& cfg) {
    require(cfg.bands >= 1 && cfg.layers >= 1 && cfg.hidden >= 1 && cfg.embed_dim >= 1,
            "bad_argument", "denoiser: all dims must be >= 1");
    require(cfg.embed_dim % 2 == 0, "bad_argument", "denoiser: embed_dim must be even");
    require(cfg.t_steps >= 1, "bad_argument", "denoiser: t_steps must be >= 1");
    require(cfg.dropout >= 0.0 && cfg.dropout < 1.0, "bad_argument",
            "denoiser: dropout must lie in [0,1)");
}

} // namespace

std::string to_string(Activation a) {
    return a == Activation::Silu ? "silu" : "relu";
}

std::string to_string(SkipMode s) {
    return s == SkipMode::LayerInput ? "layer" : "input";
}

Activation activation_from_string(const std::string& s) {
    if (s == "silu") return Activation::Silu;
    if (s == "relu") return Activation::Relu;
    fail("bad_argument", "unknown activation: " + s);
}

SkipMode skip_mode_from_string(const std::string& s) {
    if (s == "layer") return SkipMode::LayerInput;
    if (s == "input") return SkipMode::OriginalInput;
    fail("bad_argument", "unknown skip mode: " + s);
}

int DenoiserParams::layer_input_size(const DenoiserConfig& cfg, int layer) {
    if (layer == 0) return cfg.bands;
    return cfg.skip == SkipMode::LayerInput ? cfg.bands + layer * cfg.hidden
                                            : cfg.bands + cfg.hidden;
}

int DenoiserParams::output_input_size(const DenoiserConfig& cfg) {
    return cfg.skip == SkipMode::LayerInput ? cfg.bands + cfg.layers * cfg.hidden
                                            : cfg.bands + cfg.hidden;
}

DenoiserParams::DenoiserParams(const DenoiserConfig& cfg) : cfg_(cfg) {
    validate_config(cfg);
    std::size_t off = 0;
    auto claim = [&off](std::size_t n) {
        const std::size_t o = off;
        off += n;
        return o;
    };
    off_time_w_ = claim(static_cast<std::size_t>(cfg.hidden) * cfg.embed_dim);
    off_time_b_ = claim(static_cast<std::size_t>(cfg.hidden));
    off_w_.resize(static_cast<std::size_t>(cfg.layers));
    off_b_.resize(static_cast<std::size_t>(cfg.layers));
    for (int l = 0; l < cfg.layers; ++l) {
        off_w_[static_cast<std::size_t>(l)] =
            claim(static_cast<std::size_t>(cfg.hidden) * layer_input_size(cfg, l));
        off_b_[static_cast<std::size_t>(l)] = claim(static_cast<std::size_t>(cfg.hidden));
    }
    off_out_w_ = claim(static_cast<std::size_t>(cfg.bands) * output_input_size(cfg));
    off_out_b_ = claim(static_cast<std::size_t>(cfg.bands));
    flat_.assign(off, 0.0);
}

Eigen::Map<Eigen::MatrixXd> DenoiserParams::time_w() {
    return {flat_.data() + off_time_w_, cfg_.hidden, cfg_.embed_dim};
}
Eigen::Map<Eigen::VectorXd> DenoiserParams::time_b() {
    return {flat_.data() + off_time_b_, cfg_.hidden};
}
Eigen::Map<Eigen::MatrixXd> DenoiserParams::layer_w(int l) {
    return {flat_.data() + off_w_[static_cast<std::size_t>(l)], cfg_.hidden,
            layer_input_size(cfg_, l)};
}
Eigen::Map<Eigen::VectorXd> DenoiserParams::layer_b(int l) {
    return {flat_.data() + off_b_[static_cast<std::size_t>(l)], cfg_.hidden};
}
Eigen::Map<Eigen::MatrixXd> DenoiserParams::output_w() {
    return {flat_.data() + off_out_w_, cfg_.bands, output_input_size(cfg_)};
}
Eigen::Map<Eigen::VectorXd> DenoiserParams::output_b() {
    return {flat_.data() + off_out_b_, cfg_.bands};
}
Eigen::Map<const Eigen::MatrixXd> DenoiserParams::time_w() const {
    return {flat_.data() + off_time_w_, cfg_.hidden, cfg_.embed_dim};
}
Eigen::Map<const Eigen::VectorXd> DenoiserParams::time_b() const {
    return {flat_.data() + off_time_b_, cfg_.hidden};
}
Eigen::Map<const Eigen::MatrixXd> DenoiserParams::layer_w(int l) const {
    return {flat_.data() + off_w_[static_cast<std::size_t>(l)], cfg_.hidden,
            layer_input_size(cfg_, l)};
}
Eigen::Map<const Eigen::VectorXd> DenoiserParams::layer_b(int l) const {
    return {flat_.data() + off_b_[static_cast<std::size_t>(l)], cfg_.hidden};
}
Eigen::Map<const Eigen::MatrixXd> DenoiserParams::output_w() const {
    return {flat_.data() + off_out_w_, cfg_.bands, output_input_size(cfg_)};
}
Eigen::Map<const Eigen::VectorXd> DenoiserParams::output_b() const {
    return {flat_.data() + off_out_b_, cfg_.bands};
}

Eigen::VectorXd time_embedding(int t, int dim) {
    require(t >= 0, "bad_argument", "time_embedding: t must be >= 0");
    require(dim >= 2 && dim % 2 == 0, "bad_argument", "time_embedding: dim must be even");
    Eigen::VectorXd e(dim);
    const int half = dim / 2;
    for (int i = 0; i < half; ++i) {
        const double omega = std::pow(10000.0, -2.0 * i / dim);
        e[2 * i] = std::sin(t * omega);
        e[2 * i + 1] = std::cos(t * omega);
    }
    return e;
}

DenoiserParams init_denoiser(const DenoiserConfig& cfg, RngStream& rng) {
    DenoiserParams p(cfg);
    auto fill_uniform = [&rng](Eigen::Map<Eigen::MatrixXd> w, int fan_in) {
        const double a = std::sqrt(1.0 / fan_in);
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            for (Eigen::Index c = 0; c < w.cols(); ++c)
                w(r, c) = (2.0 * rng.uniform() - 1.0) * a;
    };
    fill_uniform(p.time_w(), cfg.embed_dim);
    for (int l = 0; l < cfg.layers; ++l)
        fill_uniform(p.layer_w(l), DenoiserParams::layer_input_size(cfg, l));
    fill_uniform(p.output_w(), DenoiserParams::output_input_size(cfg));
    return p;
}

SpectrumBatch denoiser_forward(const DenoiserParams& params, const SpectrumBatch& x_t, int t,
                               bool train_mode, RngStream* rng, ForwardTape* tape) {
    const DenoiserConfig& cfg = params.config();
    require(x_t.bands == cfg.bands, "shape_mismatch",
            "denoiser_forward: input bands do not match the network");
    require(x_t.data.rows() == x_t.count && x_t.data.cols() == x_t.bands, "shape_mismatch",
            "denoiser_forward: batch dims inconsistent");
    require(t >= 1 && t <= cfg.t_steps, "bad_argument", "denoiser_forward: t out of range");
    require(!train_mode || rng != nullptr, "bad_argument",
            "denoiser_forward: train mode needs an rng for dropout");

    const int n = x_t.count;
    const bool use_dropout = train_mode && cfg.dropout > 0.0;

    const Eigen::VectorXd embed = time_embedding(t, cfg.embed_dim);
    const Eigen::VectorXd cond = params.time_w() * embed + params.time_b();

    if (tape) {
        tape->t = t;
        tape->train_mode = train_mode;
        tape->params_version = params.version;
        tape->input = x_t.data;
        tape->embed = embed;
        tape->pre.clear();
        tape->feat.clear();
        tape->mask.clear();
    }

    Eigen::MatrixXd feat = x_t.data; // running concat-feature matrix
    for (int l = 0; l < cfg.layers; ++l) {
        Eigen::MatrixXd pre = feat * params.layer_w(l).transpose();
        pre.rowwise() += params.layer_b(l).transpose();
        if (l == 0) pre.rowwise() += cond.transpose();

        Eigen::MatrixXd hid = pre.unaryExpr(
            [&cfg](double v) { return act_value(cfg.activation, v); });
        if (use_dropout) {
            const double keep = 1.0 - cfg.dropout;
            Eigen::MatrixXd mask(n, cfg.hidden);
            for (Eigen::Index r = 0; r < mask.rows(); ++r)
                for (Eigen::Index c = 0; c < mask.cols(); ++c)
                    mask(r, c) = rng->uniform() < cfg.dropout ? 0.0 : 1.0 / keep;
            hid.array() *= mask.array();
            if (tape) tape->mask.push_back(std::move(mask));
        }

        const Eigen::MatrixXd& skip_src = cfg.skip == SkipMode::LayerInput ? feat : x_t.data;
        Eigen::MatrixXd next(n, cfg.hidden + skip_src.cols());
        next << hid, skip_src;

        if (tape) {
            tape->pre.push_back(std::move(pre));
            tape->feat.push_back(next);
        }
        feat = std::move(next);
    }

    SpectrumBatch out(n, cfg.bands);
    out.data = feat * params.output_w().transpose();
    out.data.rowwise() += params.output_b().transpose();
    return out;
}

BackwardResult denoiser_backward(const DenoiserParams& params, const ForwardTape& tape,
                                 const Eigen::MatrixXd& upstream) {
    const DenoiserConfig& cfg = params.config();
    require(tape.params_version == params.version, "stale_tape",
            "denoiser_backward: tape was built against different weights");
    require(static_cast<int>(tape.feat.size()) == cfg.layers &&
                static_cast<int>(tape.pre.size()) == cfg.layers,
            "stale_tape", "denoiser_backward: tape layer count mismatch");
    require(upstream.rows() == tape.input.rows() && upstream.cols() == cfg.bands,
            "shape_mismatch", "denoiser_backward: upstream shape mismatch");

    DenoiserParams grads(cfg); // zero-filled gradient accumulator
    const Eigen::MatrixXd& x = tape.input;

    // Output layer.
    const Eigen::MatrixXd& last_feat = tape.feat.back();
    grads.output_w() = upstream.transpose() * last_feat;
    grads.output_b() = upstream.colwise().sum();

    Eigen::MatrixXd g_feat = upstream * params.output_w(); // grad w.r.t. feat[L-1]
    Eigen::MatrixXd g_input = Eigen::MatrixXd::Zero(x.rows(), x.cols());

    for (int l = cfg.layers - 1; l >= 0; --l) {
        Eigen::MatrixXd g_hid = g_feat.leftCols(cfg.hidden);
        Eigen::MatrixXd g_skip = g_feat.rightCols(g_feat.cols() - cfg.hidden);

        if (tape.train_mode && cfg.dropout > 0.0)
            g_hid.array() *= tape.mask[static_cast<std::size_t>(l)].array();

        Eigen::MatrixXd g_pre =
            g_hid.array() *
            tape.pre[static_cast<std::size_t>(l)]
                .unaryExpr([&cfg](double v) { return act_deriv(cfg.activation, v); })
                .array();

        const Eigen::MatrixXd& layer_in = l == 0 ? x : tape.feat[static_cast<std::size_t>(l - 1)];
        grads.layer_w(l) = g_pre.transpose() * layer_in;
        grads.layer_b(l) = g_pre.colwise().sum();

        if (l == 0) {
            const Eigen::VectorXd g_cond = g_pre.colwise().sum();
            grads.time_w() = g_cond * tape.embed.transpose();
            grads.time_b() = g_cond;
            g_input += g_pre * params.layer_w(0);
            g_input += g_skip; // the first concat's tail is the input itself
        } else if (cfg.skip == SkipMode::LayerInput) {
            g_feat = g_pre * params.layer_w(l) + g_skip;
        } else {
            g_input += g_skip;
            g_feat = g_pre * params.layer_w(l);
        }
    }

    BackwardResult result;
    result.param_grads =
        Eigen::Map<const Eigen::VectorXd>(grads.flat().data(),
                                          static_cast<Eigen::Index>(grads.flat().size()));
    result.input_grads = std::move(g_input);
    return result;
}

} // namespace sdp
