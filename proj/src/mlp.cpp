#include "dlo/mlp.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "dlo/errors.hpp"
#include "dlo/fileio.hpp"

namespace dlo::nn {

void MlpGrads::zero() {
    for (auto& m : dW) m.zero();
    for (auto& v : db) std::fill(v.begin(), v.end(), 0.0);
}

Mlp::Mlp(std::vector<int> layer_sizes, OutputActivation out_act)
    : sizes_(std::move(layer_sizes)), out_act_(out_act) {
    if (sizes_.size() < 2) throw ConfigError("Mlp needs at least input and output sizes");
    for (int s : sizes_)
        if (s <= 0) throw ConfigError("Mlp layer sizes must be positive");
    layers_.resize(sizes_.size() - 1);
    for (size_t k = 0; k < layers_.size(); ++k) {
        layers_[k].weights.resize(sizes_[k + 1], sizes_[k]);
        layers_[k].bias.assign(sizes_[k + 1], 0.0);
    }
}

void Mlp::init_params(Rng& rng) {
    for (size_t k = 0; k < layers_.size(); ++k) {
        const bool final_layer = (k + 1 == layers_.size());
        const double bound = final_layer ? 3e-3 : 1.0 / std::sqrt(static_cast<double>(sizes_[k]));
        for (double& w : layers_[k].weights.data) w = rng.uniform(-bound, bound);
        for (double& b : layers_[k].bias) b = rng.uniform(-bound, bound);
    }
    cache_valid_ = false;
}

size_t Mlp::param_count() const {
    size_t n = 0;
    for (const auto& l : layers_) n += l.weights.data.size() + l.bias.size();
    return n;
}

bool Mlp::params_finite() const {
    for (const auto& l : layers_) {
        for (double w : l.weights.data)
            if (!std::isfinite(w)) return false;
        for (double b : l.bias)
            if (!std::isfinite(b)) return false;
    }
    return true;
}

std::vector<double> Mlp::forward(std::span<const double> input) const {
    if (static_cast<int>(input.size()) != input_size())
        throw DimensionError("Mlp forward: input size mismatch");
    for (double v : input)
        if (!std::isfinite(v)) throw Error("Mlp forward: non-finite input");

    std::vector<double> cur(input.begin(), input.end());
    std::vector<double> next;
    for (size_t k = 0; k < layers_.size(); ++k) {
        next.assign(layers_[k].bias.size(), 0.0);
        kernels::dense_forward_single(cur.data(), layers_[k].weights, layers_[k].bias,
                                      next.data());
        const bool final_layer = (k + 1 == layers_.size());
        if (!final_layer) {
            for (double& v : next) v = v < 0.0 ? 0.0 : v;
        } else if (out_act_ == OutputActivation::Tanh) {
            for (double& v : next) v = std::tanh(v);
        }
        cur.swap(next);
    }
    return cur;
}

const Mat& Mlp::forward_batch(const Mat& X) {
    if (X.cols != input_size()) throw DimensionError("Mlp forward_batch: input size mismatch");
    input_cache_ = X;
    act_cache_.resize(layers_.size());
    const Mat* cur = &input_cache_;
    for (size_t k = 0; k < layers_.size(); ++k) {
        kernels::dense_forward(*cur, layers_[k].weights, layers_[k].bias, act_cache_[k]);
        const bool final_layer = (k + 1 == layers_.size());
        if (!final_layer)
            kernels::relu_forward(act_cache_[k]);
        else if (out_act_ == OutputActivation::Tanh)
            kernels::tanh_forward(act_cache_[k]);
        cur = &act_cache_[k];
    }
    cache_valid_ = true;
    return act_cache_.back();
}

void Mlp::backward_batch(const Mat& dY, MlpGrads& grads, Mat* dX) {
    if (!cache_valid_ || act_cache_.empty() || dY.rows != input_cache_.rows ||
        dY.cols != output_size())
        throw Error("Mlp backward_batch: no matching forward cache");

    Mat grad = dY;
    if (out_act_ == OutputActivation::Tanh) kernels::tanh_backward(act_cache_.back(), grad);

    Mat grad_prev;
    for (int k = static_cast<int>(layers_.size()) - 1; k >= 0; --k) {
        const Mat& layer_input = (k == 0) ? input_cache_ : act_cache_[k - 1];
        kernels::dense_param_grads(layer_input, grad, grads.dW[k], grads.db[k]);
        if (k == 0) {
            if (dX) kernels::dense_backward_input(grad, layers_[k].weights, *dX);
        } else {
            kernels::dense_backward_input(grad, layers_[k].weights, grad_prev);
            kernels::relu_backward(act_cache_[k - 1], grad_prev);
            grad.data.swap(grad_prev.data);
            std::swap(grad.rows, grad_prev.rows);
            std::swap(grad.cols, grad_prev.cols);
        }
    }
}

MlpGrads Mlp::make_grads() const {
    MlpGrads g;
    g.dW.resize(layers_.size());
    g.db.resize(layers_.size());
    for (size_t k = 0; k < layers_.size(); ++k) {
        g.dW[k].resize(layers_[k].weights.rows, layers_[k].weights.cols);
        g.db[k].assign(layers_[k].bias.size(), 0.0);
    }
    return g;
}

Adam::Adam(const Mlp& net, double lr) : learning_rate(lr) {
    const auto& layers = net.layers();
    m_w_.resize(layers.size());
    v_w_.resize(layers.size());
    m_b_.resize(layers.size());
    v_b_.resize(layers.size());
    for (size_t k = 0; k < layers.size(); ++k) {
        m_w_[k].resize(layers[k].weights.rows, layers[k].weights.cols);
        v_w_[k].resize(layers[k].weights.rows, layers[k].weights.cols);
        m_b_[k].assign(layers[k].bias.size(), 0.0);
        v_b_[k].assign(layers[k].bias.size(), 0.0);
    }
}

void Adam::step(Mlp& net, const MlpGrads& grads) {
    constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

    for (const auto& m : grads.dW)
        for (double g : m.data)
            if (!std::isfinite(g)) {
                ++skipped_updates;
                return;
            }
    for (const auto& v : grads.db)
        for (double g : v)
            if (!std::isfinite(g)) {
                ++skipped_updates;
                return;
            }

    ++step_count;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step_count));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step_count));
    auto update = [&](double& p, double g, double& m, double& v) {
        m = beta1 * m + (1.0 - beta1) * g;
        v = beta2 * v + (1.0 - beta2) * g * g;
        p -= learning_rate * (m / bc1) / (std::sqrt(v / bc2) + eps);
    };

    auto& layers = net.layers();
    for (size_t k = 0; k < layers.size(); ++k) {
        double* w = layers[k].weights.data.data();
        const double* gw = grads.dW[k].data.data();
        double* mw = m_w_[k].data.data();
        double* vw = v_w_[k].data.data();
        const size_t nw = layers[k].weights.data.size();
        for (size_t i = 0; i < nw; ++i) update(w[i], gw[i], mw[i], vw[i]);

        double* b = layers[k].bias.data();
        const double* gb = grads.db[k].data();
        double* mb = m_b_[k].data();
        double* vb = v_b_[k].data();
        for (size_t i = 0; i < layers[k].bias.size(); ++i) update(b[i], gb[i], mb[i], vb[i]);
    }
}

void soft_update(Mlp& target, const Mlp& source, double lambda) {
    if (target.layer_sizes() != source.layer_sizes())
        throw DimensionError("soft_update: layer shape mismatch");
    if (!(lambda > 0.0 && lambda <= 1.0)) throw ConfigError("soft_update: lambda outside (0,1]");
    auto& tl = target.layers();
    const auto& sl = source.layers();
    for (size_t k = 0; k < tl.size(); ++k) {
        for (size_t i = 0; i < tl[k].weights.data.size(); ++i)
            tl[k].weights.data[i] =
                lambda * sl[k].weights.data[i] + (1.0 - lambda) * tl[k].weights.data[i];
        for (size_t i = 0; i < tl[k].bias.size(); ++i)
            tl[k].bias[i] = lambda * sl[k].bias[i] + (1.0 - lambda) * tl[k].bias[i];
    }
}

double global_grad_norm(const MlpGrads& grads) {
    double acc = 0.0;
    for (const auto& m : grads.dW)
        for (double g : m.data) acc += g * g;
    for (const auto& v : grads.db)
        for (double g : v) acc += g * g;
    return std::sqrt(acc);
}

void scale_grads(MlpGrads& grads, double factor) {
    for (auto& m : grads.dW)
        for (double& g : m.data) g *= factor;
    for (auto& v : grads.db)
        for (double& g : v) g *= factor;
}

namespace {

constexpr char kMagic[8] = {'D', 'L', 'O', 'M', 'L', 'P', '0', '1'};

template <typename T>
void append_raw(std::string& buf, const T& value) {
    buf.append(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(const std::string& buf, size_t& off) {
    if (off + sizeof(T) > buf.size()) throw Error("checkpoint truncated");
    T v;
    std::memcpy(&v, buf.data() + off, sizeof(T));
    off += sizeof(T);
    return v;
}

} // namespace

void save_mlp(const std::string& path, const Mlp& net) {
    std::string buf;
    buf.append(kMagic, sizeof(kMagic));
    append_raw<int32_t>(buf, static_cast<int32_t>(net.layer_sizes().size()));
    for (int s : net.layer_sizes()) append_raw<int32_t>(buf, s);
    append_raw<uint8_t>(buf, static_cast<uint8_t>(net.output_activation()));
    for (const auto& l : net.layers()) {
        buf.append(reinterpret_cast<const char*>(l.weights.data.data()),
                   l.weights.data.size() * sizeof(double));
        buf.append(reinterpret_cast<const char*>(l.bias.data()), l.bias.size() * sizeof(double));
    }
    io::atomic_write_file(path, buf);
}

Mlp load_mlp(const std::string& path) {
    const std::string buf = io::read_file(path);
    if (buf.size() < sizeof(kMagic) || std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0)
        throw Error("checkpoint " + path + ": bad magic/version");
    size_t off = sizeof(kMagic);
    const auto n_sizes = read_raw<int32_t>(buf, off);
    if (n_sizes < 2 || n_sizes > 64) throw Error("checkpoint " + path + ": bad layer count");
    std::vector<int> sizes(n_sizes);
    for (auto& s : sizes) s = read_raw<int32_t>(buf, off);
    const auto act = static_cast<OutputActivation>(read_raw<uint8_t>(buf, off));

    Mlp net(sizes, act);
    for (auto& l : net.layers()) {
        const size_t wbytes = l.weights.data.size() * sizeof(double);
        const size_t bbytes = l.bias.size() * sizeof(double);
        if (off + wbytes + bbytes > buf.size()) throw Error("checkpoint " + path + ": truncated");
        std::memcpy(l.weights.data.data(), buf.data() + off, wbytes);
        off += wbytes;
        std::memcpy(l.bias.data(), buf.data() + off, bbytes);
        off += bbytes;
    }
    if (off != buf.size()) throw Error("checkpoint " + path + ": trailing bytes");
    return net;
}

} // namespace dlo::nn
