#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace vc {

struct UndefinedMetricError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Probability that a random positive outranks a random negative; ties
/// count one half. Throws UndefinedMetricError with a single class.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

/// Area under the precision-recall curve with step-wise interpolation
/// over distinct thresholds. Throws when there are no positives.
double pr_auc(std::span<const double> scores, std::span<const int> labels);

struct PrecisionRecall {
    std::optional<double> precision;  // absent when nothing is predicted positive
    double recall = 0.0;
};

/// Confusion-matrix precision/recall with the predicted-positive rule
/// score >= threshold.
PrecisionRecall precision_recall_at(std::span<const double> scores,
                                    std::span<const int> labels,
                                    double threshold);

struct FoldReport {
    int fold_year = 0;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> roc_auc;
    std::optional<double> pr_auc;
    int n_pos = 0;
    int n_neg = 0;

    bool defined() const { return n_pos > 0 && n_neg > 0; }
};

/// Mean of the defined per-fold metrics; folds with a single-class test
/// set are excluded.
FoldReport average_folds(const std::vector<FoldReport>& folds);

}  // namespace vc
