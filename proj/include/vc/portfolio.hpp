#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vc/backtest.hpp"
#include "vc/universe.hpp"

namespace vc {

enum class ExitReason { success, longtime, still_in };

std::string_view exit_reason_name(ExitReason r);  // "STILL_IN" for still_in
ExitReason parse_exit_reason(std::string_view s);

struct PortfolioConfig {
    Date start = Date::from_ymd(2016, 1, 1);
    Date end = Date::from_ymd(2022, 1, 1);
    std::size_t capacity = 30;
    std::size_t monthly_top_k = 3;
    double threshold_base = 0.5;
    double threshold_slope = 0.05;
    /// Denominator of the threshold growth term; defaults to the train
    /// size of the earliest prediction window.
    std::optional<std::size_t> reference_train_size;
    int longtime_days = 730;
    ExitMode exit_mode = ExitMode::last;
    double stake_usd = 1'000'000.0;
};

/// Score cutoff that rises with the training set:
/// clamp(base + slope * log10(train_size / reference), 0, 0.95).
double threshold_fn(const PortfolioConfig& cfg, std::size_t train_size,
                    std::size_t reference_size);

struct LedgerEntry {
    Uuid uuid;
    std::string name;
    Date enter_series_date;                 // trigger round announcement
    std::optional<Usd> enter_series_value;  // trigger round post-money
    std::optional<double> score;
    Date added;  // month boundary the fund entered
    std::optional<Date> last_series_date;
    std::optional<Usd> last_series_value;
    ExitReason exit_reason = ExitReason::still_in;
    std::optional<Date> expired;
    bool used_in_capital_growth = false;
};

struct PnlRow {
    Date month;
    double realized_pnl = 0.0;    // cumulative realized exit value, USD
    double unrealized_pnl = 0.0;  // current marks of live holdings, USD
    std::size_t portfolio_size = 0;
    double growth_multiple = 0.0;  // (realized + unrealized) / invested
};

struct PnlSeries {
    std::vector<PnlRow> rows;
    double growth_multiple = 0.0;  // final row's value
    double invested = 0.0;         // total entered stakes, USD
};

/// Monthly fund loop over the prediction table: at each month boundary,
/// add up to monthly_top_k above-threshold companies whose trigger round
/// fell in the previous month, then expel holdings on a success event
/// (dated by exit_mode) or after longtime_days without activity.
std::vector<LedgerEntry> simulate_fund(
    const std::vector<PredictionRecord>& predictions, const EntityStore& store,
    const std::vector<OutcomeRecord>& outcomes, const PortfolioConfig& cfg);

/// Equal-stake capital accounting: entry at the trigger round post-money,
/// exit at the success valuation (longtime exits at zero), STILL_IN
/// marked monthly at the last known valuation.
PnlSeries compute_pnl(const std::vector<LedgerEntry>& ledger,
                      const EntityStore& store, const PortfolioConfig& cfg);

void write_ledger_csv(const std::vector<LedgerEntry>& ledger,
                      const std::filesystem::path& path);
std::vector<LedgerEntry> read_ledger_csv(const std::filesystem::path& path);

void write_pnl_csv(const PnlSeries& pnl, const std::filesystem::path& path);

}  // namespace vc
