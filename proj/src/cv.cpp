#include "vc/cv.hpp"

#include <map>
#include <stdexcept>

#include "vc/backtest.hpp"
#include "vc/csv.hpp"

namespace vc {

CvResult time_series_cv(const EntityStore& store, const UniverseConfig& ucfg,
                        const CvConfig& cfg) {
    if (cfg.start_year > cfg.end_year)
        throw std::invalid_argument("cv: start_year after end_year");
    if (Date::from_ymd(cfg.end_year + 1, 1, 1) > store.snapshot_date())
        throw std::invalid_argument("cv: folds extend beyond the snapshot");

    // Full-knowledge outcomes decide the test labels.
    std::map<Uuid, const OutcomeRecord*> outcome_of;
    auto successes = label_successful(store, ucfg);
    for (const auto& rec : successes) outcome_of[rec.company_uuid] = &rec;

    CvResult result;
    for (int year = cfg.start_year; year <= cfg.end_year; ++year) {
        Date fold_start = Date::from_ymd(year, 1, 1);
        Date fold_end = Date::from_ymd(year + 1, 1, 1);
        FoldReport report;
        report.fold_year = year;

        auto pipeline = fit_pipeline(store, ucfg, fold_start, cfg.pipeline);
        if (!pipeline) {
            result.warnings.push_back("fold " + std::to_string(year) +
                                      ": empty training set");
            result.folds.push_back(report);
            continue;
        }

        std::vector<double> scores;
        std::vector<int> labels;
        for (const auto& [company, round] : eligible_companies(
                 store, fold_start, fold_end, EntryMode::earlybird)) {
            int label = 0;
            if (auto it = outcome_of.find(company->uuid);
                it != outcome_of.end()) {
                for (const auto& event : it->second->events)
                    if (!(event.date < round->announced_on)) {
                        label = 1;
                        break;
                    }
            }
            scores.push_back(pipeline->score(store, company->uuid));
            labels.push_back(label);
        }

        for (int y : labels) (y == 1 ? report.n_pos : report.n_neg)++;
        if (report.defined()) {
            auto pr = precision_recall_at(scores, labels, cfg.threshold);
            report.precision = pr.precision;
            report.recall = pr.recall;
            report.roc_auc = roc_auc(scores, labels);
            report.pr_auc = pr_auc(scores, labels);
        } else {
            result.warnings.push_back("fold " + std::to_string(year) +
                                      ": single-class test set, metrics "
                                      "undefined");
        }
        result.folds.push_back(report);
    }
    result.averaged = average_folds(result.folds);
    return result;
}

namespace {

std::string opt(const std::optional<double>& v) {
    if (!v) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", *v);
    return buf;
}

std::vector<std::string> fold_row(const std::string& name,
                                  const FoldReport& r) {
    return {name,          opt(r.precision),          opt(r.recall),
            opt(r.roc_auc), opt(r.pr_auc),
            std::to_string(r.n_pos), std::to_string(r.n_neg)};
}

}  // namespace

void write_cv_csv(const CvResult& result, const std::filesystem::path& path) {
    std::vector<std::string> header{"fold",    "precision", "recall",
                                    "roc_auc", "pr_auc",    "n_pos",
                                    "n_neg"};
    std::vector<std::vector<std::string>> rows;
    for (const auto& fold : result.folds)
        rows.push_back(fold_row(std::to_string(fold.fold_year), fold));
    rows.push_back(fold_row("average", result.averaged));
    csv::write_file(path, header, rows);
}

}  // namespace vc
