#include "vc/metrics.hpp"

#include <algorithm>
#include <numeric>

namespace vc {

namespace {

void check_sizes(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size())
        throw std::invalid_argument("scores/labels size mismatch");
    if (scores.empty()) throw std::invalid_argument("empty input");
}

}  // namespace

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
    check_sizes(scores, labels);
    std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] < scores[b];
    });

    // rank-sum with midranks for ties
    double pos_rank_sum = 0;
    std::size_t n_pos = 0, n_neg = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        double midrank = (double(i + 1) + double(j)) / 2.0;
        for (std::size_t t = i; t < j; ++t) {
            if (labels[order[t]] == 1) {
                pos_rank_sum += midrank;
                ++n_pos;
            } else {
                ++n_neg;
            }
        }
        i = j;
    }
    if (n_pos == 0 || n_neg == 0)
        throw UndefinedMetricError("roc_auc needs both classes");
    return (pos_rank_sum - double(n_pos) * double(n_pos + 1) / 2.0) /
           (double(n_pos) * double(n_neg));
}

double pr_auc(std::span<const double> scores, std::span<const int> labels) {
    check_sizes(scores, labels);
    std::size_t n = scores.size();
    std::size_t total_pos = 0;
    for (int l : labels) total_pos += (l == 1);
    if (total_pos == 0) throw UndefinedMetricError("pr_auc needs positives");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] > scores[b];
    });

    // walk distinct thresholds from high to low; step-wise area
    // sum precision * delta-recall
    double area = 0;
    double prev_recall = 0;
    std::size_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        for (std::size_t t = i; t < j; ++t) {
            if (labels[order[t]] == 1)
                ++tp;
            else
                ++fp;
        }
        double recall = double(tp) / double(total_pos);
        double precision = double(tp) / double(tp + fp);
        area += precision * (recall - prev_recall);
        prev_recall = recall;
        i = j;
    }
    return area;
}

PrecisionRecall precision_recall_at(std::span<const double> scores,
                                    std::span<const int> labels,
                                    double threshold) {
    check_sizes(scores, labels);
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        bool predicted = scores[i] >= threshold;
        if (labels[i] == 1) {
            if (predicted)
                ++tp;
            else
                ++fn;
        } else if (predicted) {
            ++fp;
        }
    }
    PrecisionRecall pr;
    if (tp + fp > 0) pr.precision = double(tp) / double(tp + fp);
    pr.recall = (tp + fn) > 0 ? double(tp) / double(tp + fn) : 0.0;
    return pr;
}

FoldReport average_folds(const std::vector<FoldReport>& folds) {
    FoldReport avg;
    int n = 0;
    double p = 0, r = 0, roc = 0, pr = 0;
    for (const auto& f : folds) {
        if (!f.defined()) continue;
        ++n;
        p += f.precision.value_or(0.0);
        r += f.recall.value_or(0.0);
        roc += f.roc_auc.value_or(0.0);
        pr += f.pr_auc.value_or(0.0);
        avg.n_pos += f.n_pos;
        avg.n_neg += f.n_neg;
    }
    if (n > 0) {
        avg.precision = p / n;
        avg.recall = r / n;
        avg.roc_auc = roc / n;
        avg.pr_auc = pr / n;
    }
    return avg;
}

}  // namespace vc
