#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "vc/features.hpp"
#include "vc/mlp.hpp"

namespace vc {

struct ClassifierConfig {
    std::size_t embedding_dim_per_categorical = 8;
    std::vector<std::size_t> hidden_sizes = {128, 64};
    double dropout_rate = 0.2;
    double learning_rate = 1e-3;
    int epochs = 30;
    std::size_t batch_size = 64;
    double positive_class_weight = 0.0;  // <= 0 means auto (n_neg / n_pos)
    std::uint64_t seed = 0;
};

struct TrainDiagnostics {
    std::vector<double> epoch_loss;  // mean weighted BCE per epoch
    double positive_class_weight = 1.0;
    bool single_class = false;
};

/// Multi-input binary classifier: one embedding table per categorical
/// field, concatenated with z-scored numerics, their missing masks, and
/// the tag embedding, through rectified hidden layers to a sigmoid head.
class Classifier {
public:
    Classifier() = default;
    Classifier(const FeatureSchema& schema, const ClassifierConfig& cfg);

    TrainDiagnostics train(const std::vector<FeatureVector>& rows,
                           const std::vector<int>& labels);

    std::vector<double> predict(const std::vector<FeatureVector>& rows) const;
    double predict_one(const FeatureVector& row) const;

    /// Max relative error between analytic and central finite-difference
    /// gradients on the batch (dropout off). Parameters whose +/-h
    /// evaluations straddle a rectifier kink are skipped.
    double gradient_check(const std::vector<FeatureVector>& rows,
                          const std::vector<int>& labels,
                          std::size_t max_params_per_group = 80,
                          double h = 1e-4);

    std::size_t input_width() const { return input_width_; }
    const ClassifierConfig& config() const { return cfg_; }

    void save(const std::filesystem::path& path) const;
    static Classifier load(const std::filesystem::path& path);

private:
    friend struct ClassifierTestAccess;

    ClassifierConfig cfg_;
    std::size_t n_categoricals_ = 0;
    std::vector<std::size_t> vocab_sizes_;  // rows per table = vocab + 1
    std::size_t n_numerics_ = 0;
    std::size_t tag_dim_ = 0;
    std::size_t input_width_ = 0;

    std::vector<double> embeddings_;  // tables back to back
    std::vector<std::size_t> emb_offsets_;
    Mlp mlp_;

    std::optional<double> constant_score_;  // single-class fallback

    void build_input(const FeatureVector& fv, std::vector<double>& x) const;
    void check_row(const FeatureVector& fv) const;

    /// Weighted BCE loss and gradient accumulation for one sample.
    double sample_pass(const FeatureVector& fv, int label, double pos_weight,
                       bool with_grads, std::vector<double>& emb_grads,
                       std::vector<double>& mlp_grads,
                       std::mt19937_64* dropout_rng,
                       Mlp::Workspace& ws) const;
};

}  // namespace vc
