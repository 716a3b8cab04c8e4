#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace vc {

/// Fully connected stack with rectified hidden layers and a linear
/// output. Parameters live in one flat vector so the optimizer and the
/// finite-difference checks can treat them uniformly.
class Mlp {
public:
    Mlp() = default;
    /// sizes = {input, hidden..., output}
    Mlp(std::vector<std::size_t> sizes, std::mt19937_64& rng);

    std::size_t input_size() const { return sizes_.front(); }
    std::size_t output_size() const { return sizes_.back(); }
    std::size_t param_count() const { return params_.size(); }
    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }
    const std::vector<std::size_t>& sizes() const { return sizes_; }

    struct Workspace {
        std::vector<std::vector<double>> activations;  // per layer, post
        std::vector<std::vector<double>> pre;          // pre-activation
        std::vector<std::vector<double>> dropout_mask; // per hidden layer
    };

    /// Forward pass. When dropout_rng is non-null, inverted dropout with
    /// the given rate is applied to hidden activations and the masks are
    /// kept for backward.
    std::span<const double> forward(std::span<const double> x, Workspace& ws,
                                    double dropout_rate = 0.0,
                                    std::mt19937_64* dropout_rng = nullptr) const;

    /// Backpropagates d(loss)/d(output) through the cached pass,
    /// accumulating into param_grads (same layout as params) and, when
    /// non-empty, writing d(loss)/d(input) into input_grad.
    void backward(const Workspace& ws, std::span<const double> output_grad,
                  std::span<double> param_grads,
                  std::span<double> input_grad = {}) const;

private:
    std::vector<std::size_t> sizes_;
    std::vector<double> params_;
    // layer l occupies [offset, offset + out*in + out): weights then bias
    std::vector<std::size_t> offsets_;
};

/// Adaptive-moment gradient descent (beta 0.9/0.999, eps 1e-8).
class AdamOptimizer {
public:
    explicit AdamOptimizer(std::size_t n_params, double learning_rate = 1e-3)
        : lr_(learning_rate), m_(n_params, 0.0), v_(n_params, 0.0) {}

    void step(std::span<double> params, std::span<const double> grads);

private:
    double lr_;
    double beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
    long t_ = 0;
    std::vector<double> m_, v_;
};

double sigmoid(double z);

/// Uniform fan-in scaled initialization, U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
double init_uniform(std::size_t fan_in, std::mt19937_64& rng);

}  // namespace vc
