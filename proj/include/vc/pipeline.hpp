#pragma once

#include <filesystem>
#include <optional>

#include "vc/model.hpp"
#include "vc/universe.hpp"

namespace vc {

struct PipelineParams {
    std::size_t nmf_rank = 30;
    int nmf_max_iters = 200;
    double nmf_tol = 1e-5;
    ClassifierConfig classifier;
    std::uint64_t seed = 0;
};

/// Tag NMF + feature encoders + classifier, all fitted on the labeled
/// dataset as of one cutoff date. Scoring any company afterwards only
/// reads data dated before that cutoff.
struct FittedPipeline {
    Date as_of;
    NmfModel tag_model;
    FeatureSchema schema;
    Classifier classifier;
    std::size_t train_size = 0;
    int n_pos = 0, n_neg = 0;
    bool single_class = false;

    double score(const EntityStore& store, const Uuid& company) const;

    /// Writes <stem>.nmf / .schema / .clf.
    void save(const std::filesystem::path& stem) const;
};

/// Fits the full pipeline on build_dataset_asof(as_of). Returns nullopt
/// when the dataset is empty.
std::optional<FittedPipeline> fit_pipeline(const EntityStore& store,
                                           const UniverseConfig& ucfg,
                                           Date as_of,
                                           const PipelineParams& params);

}  // namespace vc
