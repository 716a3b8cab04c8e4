#include "vc/pipeline.hpp"

#include <algorithm>

#include "vc/features.hpp"

namespace vc {

std::optional<FittedPipeline> fit_pipeline(const EntityStore& store,
                                           const UniverseConfig& ucfg,
                                           Date as_of,
                                           const PipelineParams& params) {
    LabeledDataset dataset = build_dataset_asof(store, ucfg, as_of);
    if (dataset.records.empty()) return std::nullopt;

    std::vector<Uuid> train_companies;
    std::vector<int> labels;
    for (const auto& rec : dataset.records) {
        train_companies.push_back(rec.company_uuid);
        labels.push_back(rec.label);
    }

    auto vocab = build_tag_vocabulary(store, train_companies);
    std::size_t rank =
        std::min(params.nmf_rank, std::max<std::size_t>(1, vocab.size()));
    Mat x(train_companies.size(), vocab.size());
    for (std::size_t i = 0; i < train_companies.size(); ++i) {
        auto row = tag_row(*store.find_company(train_companies[i]), vocab);
        std::copy(row.begin(), row.end(), &x.at(i, 0));
    }

    FittedPipeline p;
    p.as_of = as_of;
    p.tag_model = nmf_fit(x, rank, params.nmf_max_iters, params.nmf_tol,
                          params.seed, vocab)
                      .model;

    std::vector<FeatureMap> maps;
    maps.reserve(train_companies.size());
    for (const auto& uuid : train_companies)
        maps.push_back(company_feature_map(store, uuid, as_of));
    p.schema = fit_encoders(maps);
    p.schema.tag_embedding_dim = rank;

    std::vector<FeatureVector> train_rows;
    train_rows.reserve(maps.size());
    for (std::size_t i = 0; i < maps.size(); ++i) {
        auto row = tag_row(*store.find_company(train_companies[i]), vocab);
        train_rows.push_back(encode(p.schema, maps[i], p.tag_model, row, as_of));
    }

    ClassifierConfig ccfg = params.classifier;
    ccfg.seed = params.seed;
    p.classifier = Classifier(p.schema, ccfg);
    auto diag = p.classifier.train(train_rows, labels);
    p.single_class = diag.single_class;
    p.train_size = dataset.records.size();
    p.n_pos = dataset.n_pos;
    p.n_neg = dataset.n_neg;
    return p;
}

double FittedPipeline::score(const EntityStore& store,
                             const Uuid& company) const {
    auto map = company_feature_map(store, company, as_of);
    auto row = tag_row(*store.find_company(company), tag_model.tag_vocabulary);
    auto fv = encode(schema, map, tag_model, row, as_of);
    return classifier.predict_one(fv);
}

void FittedPipeline::save(const std::filesystem::path& stem) const {
    tag_model.save(stem.string() + ".nmf");
    schema.save(stem.string() + ".schema");
    classifier.save(stem.string() + ".clf");
}

}  // namespace vc
