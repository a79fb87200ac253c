#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dlo/rng.hpp"
#include "dlo/tensor.hpp"

namespace dlo::nn {

enum class OutputActivation : uint8_t { Tanh = 0, Linear = 1 };

struct DenseLayer {
    Mat weights;              // [out, in]
    std::vector<double> bias; // [out]
};

struct MlpGrads {
    std::vector<Mat> dW;
    std::vector<std::vector<double>> db;

    void zero();
};

// Dense feed-forward net, ReLU hidden activations, Tanh or Linear output,
// 64-bit parameters. forward() is const and thread-safe; the batch API keeps
// an activation cache for backward and belongs to a single owner.
class Mlp {
public:
    Mlp() = default;
    Mlp(std::vector<int> layer_sizes, OutputActivation out_act);

    // Hidden layers: uniform +-1/sqrt(fan_in); output layer: uniform +-3e-3 so
    // initial actions/values start near zero.
    void init_params(Rng& rng);

    int input_size() const { return sizes_.front(); }
    int output_size() const { return sizes_.back(); }
    const std::vector<int>& layer_sizes() const { return sizes_; }
    OutputActivation output_activation() const { return out_act_; }

    std::vector<DenseLayer>& layers() { return layers_; }
    const std::vector<DenseLayer>& layers() const { return layers_; }
    size_t param_count() const;
    bool params_finite() const;

    // Single-sample forward; throws on non-finite input.
    std::vector<double> forward(std::span<const double> input) const;

    // Batch forward; caches activations for backward_batch. Returns the output.
    const Mat& forward_batch(const Mat& X);

    // Reverse-mode gradients for the cached batch. dY is dLoss/dOutput.
    // Accumulates parameter gradients into grads; optionally emits dLoss/dInput.
    // Throws if no forward_batch cache matches dY's batch size.
    void backward_batch(const Mat& dY, MlpGrads& grads, Mat* dX = nullptr);

    MlpGrads make_grads() const;

private:
    std::vector<int> sizes_;
    OutputActivation out_act_ = OutputActivation::Linear;
    std::vector<DenseLayer> layers_;

    // backward cache
    Mat input_cache_;
    std::vector<Mat> act_cache_; // post-activation per layer
    bool cache_valid_ = false;
};

// Standard Adam with bias correction; beta1=0.9, beta2=0.999, eps=1e-8.
// Non-finite gradients skip the update and bump skipped_updates.
class Adam {
public:
    Adam() = default;
    Adam(const Mlp& net, double learning_rate);

    void step(Mlp& net, const MlpGrads& grads);

    double learning_rate = 1e-3;
    long step_count = 0;
    long skipped_updates = 0;

private:
    std::vector<Mat> m_w_, v_w_;
    std::vector<std::vector<double>> m_b_, v_b_;
};

// target <- lambda * source + (1 - lambda) * target
void soft_update(Mlp& target, const Mlp& source, double lambda);

double global_grad_norm(const MlpGrads& grads);
void scale_grads(MlpGrads& grads, double factor);

// Versioned binary checkpoint (layer sizes + row-major params); bit-exact
// round trip, written atomically.
void save_mlp(const std::string& path, const Mlp& net);
Mlp load_mlp(const std::string& path);

} // namespace dlo::nn
