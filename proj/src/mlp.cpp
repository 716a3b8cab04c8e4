#include "vc/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace vc {

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

double init_uniform(std::size_t fan_in, std::mt19937_64& rng) {
    double bound = 1.0 / std::sqrt(double(fan_in ? fan_in : 1));
    std::uniform_real_distribution<double> dist(-bound, bound);
    return dist(rng);
}

Mlp::Mlp(std::vector<std::size_t> sizes, std::mt19937_64& rng)
    : sizes_(std::move(sizes)) {
    if (sizes_.size() < 2) throw std::invalid_argument("Mlp needs >= 2 sizes");
    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        offsets_.push_back(total);
        total += sizes_[l + 1] * sizes_[l] + sizes_[l + 1];
    }
    params_.resize(total);
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        std::size_t in = sizes_[l], out = sizes_[l + 1];
        double* w = &params_[offsets_[l]];
        for (std::size_t i = 0; i < out * in; ++i) w[i] = init_uniform(in, rng);
        // biases start at zero
    }
}

std::span<const double> Mlp::forward(std::span<const double> x, Workspace& ws,
                                     double dropout_rate,
                                     std::mt19937_64* dropout_rng) const {
    if (x.size() != sizes_.front())
        throw std::invalid_argument("Mlp::forward: input size mismatch");
    std::size_t n_layers = sizes_.size() - 1;
    ws.activations.assign(sizes_.size(), {});
    ws.pre.assign(n_layers, {});
    ws.dropout_mask.assign(n_layers, {});
    ws.activations[0].assign(x.begin(), x.end());

    for (std::size_t l = 0; l < n_layers; ++l) {
        std::size_t in = sizes_[l], out = sizes_[l + 1];
        const double* w = &params_[offsets_[l]];
        const double* b = w + out * in;
        const auto& a = ws.activations[l];
        auto& z = ws.pre[l];
        z.resize(out);
        for (std::size_t i = 0; i < out; ++i) {
            double s = b[i];
            const double* wi = w + i * in;
            for (std::size_t j = 0; j < in; ++j) s += wi[j] * a[j];
            z[i] = s;
        }
        auto& act = ws.activations[l + 1];
        act = z;
        bool hidden = l + 1 < n_layers;
        if (hidden) {
            for (double& v : act) v = v > 0 ? v : 0.0;
            if (dropout_rng && dropout_rate > 0.0) {
                std::bernoulli_distribution keep(1.0 - dropout_rate);
                auto& mask = ws.dropout_mask[l];
                mask.resize(out);
                double scale = 1.0 / (1.0 - dropout_rate);
                for (std::size_t i = 0; i < out; ++i) {
                    mask[i] = keep(*dropout_rng) ? scale : 0.0;
                    act[i] *= mask[i];
                }
            }
        }
    }
    return ws.activations.back();
}

void Mlp::backward(const Workspace& ws, std::span<const double> output_grad,
                   std::span<double> param_grads,
                   std::span<double> input_grad) const {
    if (param_grads.size() != params_.size())
        throw std::invalid_argument("Mlp::backward: grad size mismatch");
    std::size_t n_layers = sizes_.size() - 1;
    std::vector<double> delta(output_grad.begin(), output_grad.end());

    for (std::size_t li = n_layers; li-- > 0;) {
        std::size_t in = sizes_[li], out = sizes_[li + 1];
        const double* w = &params_[offsets_[li]];
        double* gw = &param_grads[offsets_[li]];
        double* gb = gw + out * in;
        const auto& a = ws.activations[li];

        bool hidden = li + 1 < n_layers;
        if (hidden) {
            const auto& mask = ws.dropout_mask[li];
            for (std::size_t i = 0; i < out; ++i) {
                if (!mask.empty()) delta[i] *= mask[i];
                if (ws.pre[li][i] <= 0) delta[i] = 0.0;
            }
        }

        for (std::size_t i = 0; i < out; ++i) {
            double d = delta[i];
            if (d == 0.0) continue;
            gb[i] += d;
            double* gwi = gw + i * in;
            for (std::size_t j = 0; j < in; ++j) gwi[j] += d * a[j];
        }

        if (li > 0 || !input_grad.empty()) {
            std::vector<double> prev(in, 0.0);
            for (std::size_t i = 0; i < out; ++i) {
                double d = delta[i];
                if (d == 0.0) continue;
                const double* wi = w + i * in;
                for (std::size_t j = 0; j < in; ++j) prev[j] += d * wi[j];
            }
            if (li == 0) {
                for (std::size_t j = 0; j < in; ++j) input_grad[j] = prev[j];
                break;
            }
            delta = std::move(prev);
        }
    }
}

void AdamOptimizer::step(std::span<double> params,
                         std::span<const double> grads) {
    ++t_;
    double bc1 = 1.0 - std::pow(beta1_, double(t_));
    double bc2 = 1.0 - std::pow(beta2_, double(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grads[i];
        v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grads[i] * grads[i];
        double mhat = m_[i] / bc1;
        double vhat = v_[i] / bc2;
        params[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
    }
}

}  // namespace vc
