#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vc/dates.hpp"
#include "vc/nmf.hpp"
#include "vc/store.hpp"

namespace vc {

/// Sparse per-company feature map before encoding. Absent keys (or
/// nullopt numerics) mean missing.
struct FeatureMap {
    std::map<std::string, std::string> categoricals;
    std::map<std::string, std::optional<double>> numerics;

    void set_cat(const std::string& name, std::string value) {
        if (!value.empty()) categoricals[name] = std::move(value);
    }
    void set_num(const std::string& name, std::optional<double> value) {
        numerics[name] = value;
    }
    void merge(const FeatureMap& other);
};

struct CategoricalField {
    std::string name;
    std::vector<std::string> vocabulary;  // lexicographic; code = index + 1

    int code_of(const std::string& value) const;  // 0 = unknown/missing
};

struct NumericField {
    std::string name;
    double mean = 0.0;
    double std = 1.0;
};

struct FeatureSchema {
    std::vector<CategoricalField> categorical_fields;
    std::vector<NumericField> numeric_fields;
    std::size_t tag_embedding_dim = 30;
    std::size_t vocabulary_cap = 10000;

    void save(const std::filesystem::path& path) const;
    static FeatureSchema load(const std::filesystem::path& path);
};

struct FeatureVector {
    Date as_of;
    std::vector<int> categorical_codes;   // aligned to schema
    std::vector<double> numeric_values;   // z-scored, missing -> 0
    std::vector<double> missing_mask;     // 1 = missing
    std::vector<double> tag_embedding;
};

/// Aggregates over founders with only pre-as_of history. Zero founders
/// gives an all-missing map.
FeatureMap founder_features(const EntityStore& store, const Uuid& company,
                            Date as_of);

/// Aggregates over investors in the company's prior rounds, with
/// per-investor activity counted only before as_of.
FeatureMap investor_features(const EntityStore& store, const Uuid& company,
                             Date as_of);

/// Sum/mean/max aggregates over the pre-as_of funding history plus
/// latest-round categoricals.
FeatureMap round_features(const EntityStore& store, const Uuid& company,
                          Date as_of);

/// founder + investor + round maps merged.
FeatureMap company_feature_map(const EntityStore& store, const Uuid& company,
                               Date as_of);

/// Combined category_list + category_groups_list, deduplicated sorted.
std::vector<std::string> company_tags(const Company& company);

/// Binary indicator row over the given tag vocabulary.
std::vector<double> tag_row(const Company& company,
                            const std::vector<std::string>& vocabulary);

/// Sorted union of tags across the given companies.
std::vector<std::string> build_tag_vocabulary(
    const EntityStore& store, const std::vector<Uuid>& companies);

/// Vocabularies (capped, code 0 reserved) and z-score statistics from
/// training rows. Throws on zero rows.
FeatureSchema fit_encoders(const std::vector<FeatureMap>& rows,
                           std::size_t vocabulary_cap = 10000);

/// Aligned encoding of one row; tag embedding from the NMF model over
/// the company's tags.
FeatureVector encode(const FeatureSchema& schema, const FeatureMap& map,
                     const NmfModel& tag_model,
                     const std::vector<double>& company_tag_row, Date as_of);

/// Median with the lower-middle rule for integer-valued data and the
/// arithmetic mean of middles otherwise (exposed for tests).
double aggregate_median(std::vector<double> values, bool integral);

}  // namespace vc
