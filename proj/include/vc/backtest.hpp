#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vc/model.hpp"
#include "vc/universe.hpp"

namespace vc {

enum class EntryMode { earlybird, any };

EntryMode parse_entry_mode(std::string_view s);
std::string_view entry_mode_name(EntryMode m);

struct BacktestConfig {
    Date start = Date::from_ymd(2016, 1, 1);
    Date end = Date::from_ymd(2022, 1, 1);
    int retrain_interval_months = 3;
    EntryMode entry_mode = EntryMode::earlybird;
    std::uint64_t seed = 0;

    std::size_t nmf_rank = 30;
    int nmf_max_iters = 200;
    double nmf_tol = 1e-5;
    ClassifierConfig classifier;

    /// When set, each window's NMF model, feature schema and classifier
    /// are written here as w<YYYY-MM-DD>.{nmf,schema,clf}.
    std::optional<std::filesystem::path> checkpoint_dir;
};

struct PredictionRecord {
    Uuid company_uuid;
    std::string company_name;
    Date window_start;
    Date window_end;
    Uuid trigger_round_uuid;
    RoundType trigger_round_type = RoundType::other;
    Date trigger_announced_on;
    double score = 0.0;
    std::size_t train_size = 0;
};

struct BacktestResult {
    std::vector<PredictionRecord> records;
    std::vector<Date> window_starts;    // every generated window
    std::vector<Date> skipped_windows;  // empty training set
    std::vector<std::string> warnings;
};

/// Companies announcing a qualifying round within [window_start,
/// window_end): series_b/series_c under earlybird, series_b..series_j
/// under any. One entry per company, keeping its earliest qualifying
/// round in the window.
std::vector<std::pair<const Company*, const FundingRound*>> eligible_companies(
    const EntityStore& store, Date window_start, Date window_end,
    EntryMode mode);

/// Quarterly walk-forward: per window, rebuild the labeled dataset as of
/// the window start, refit tag NMF + encoders + classifier from scratch,
/// and score that window's eligible companies. Records sorted by
/// (window_start, score desc, uuid).
BacktestResult run_walkforward(const EntityStore& store,
                               const UniverseConfig& ucfg,
                               const BacktestConfig& cfg);

void write_predictions_csv(const std::vector<PredictionRecord>& records,
                           const std::filesystem::path& path);
std::vector<PredictionRecord> read_predictions_csv(
    const std::filesystem::path& path);

}  // namespace vc
