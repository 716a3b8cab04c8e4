#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vc/metrics.hpp"
#include "vc/pipeline.hpp"

namespace vc {

struct CvConfig {
    int start_year = 2016;
    int end_year = 2021;  // inclusive
    double threshold = 0.5;
    PipelineParams pipeline;
};

struct CvResult {
    std::vector<FoldReport> folds;
    FoldReport averaged;
    std::vector<std::string> warnings;
};

/// One fold per year: train on the labeled dataset as of Jan 1, test on
/// companies announcing a series_b/series_c round during that year. A
/// test company is positive when a success event follows its trigger
/// round (with full snapshot knowledge), negative otherwise.
CvResult time_series_cv(const EntityStore& store, const UniverseConfig& ucfg,
                        const CvConfig& cfg);

void write_cv_csv(const CvResult& result, const std::filesystem::path& path);

}  // namespace vc
