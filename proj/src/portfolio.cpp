#include "vc/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "vc/csv.hpp"

namespace vc {

std::string_view exit_reason_name(ExitReason r) {
    switch (r) {
        case ExitReason::success: return "success";
        case ExitReason::longtime: return "longtime";
        case ExitReason::still_in: return "STILL_IN";
    }
    return "STILL_IN";
}

ExitReason parse_exit_reason(std::string_view s) {
    if (s == "success") return ExitReason::success;
    if (s == "longtime") return ExitReason::longtime;
    if (s == "STILL_IN") return ExitReason::still_in;
    throw std::invalid_argument("unknown exit reason: " + std::string(s));
}

double threshold_fn(const PortfolioConfig& cfg, std::size_t train_size,
                    std::size_t reference_size) {
    double ref = double(std::max<std::size_t>(1, reference_size));
    double t = cfg.threshold_base +
               cfg.threshold_slope *
                   std::log10(double(std::max<std::size_t>(1, train_size)) / ref);
    return std::clamp(t, 0.0, 0.95);
}

namespace {

/// Latest round strictly before the cutoff with a post-money valuation.
std::optional<std::pair<Date, Usd>> last_valuation(const EntityStore& store,
                                                   const Uuid& company,
                                                   Date cutoff) {
    std::optional<std::pair<Date, Usd>> best;
    for (const FundingRound* r : store.rounds_of(company)) {
        if (!(r->announced_on < cutoff)) break;
        if (r->post_money_valuation_usd)
            best = {r->announced_on, *r->post_money_valuation_usd};
    }
    return best;
}

/// Latest round announcement strictly before the cutoff.
std::optional<Date> last_round_date(const EntityStore& store,
                                    const Uuid& company, Date cutoff) {
    std::optional<Date> best;
    for (const FundingRound* r : store.rounds_of(company)) {
        if (!(r->announced_on < cutoff)) break;
        best = r->announced_on;
    }
    return best;
}

}  // namespace

std::vector<LedgerEntry> simulate_fund(
    const std::vector<PredictionRecord>& predictions, const EntityStore& store,
    const std::vector<OutcomeRecord>& outcomes, const PortfolioConfig& cfg) {
    if (cfg.monthly_top_k > cfg.capacity)
        throw std::invalid_argument("portfolio: monthly_top_k > capacity");
    if (cfg.longtime_days <= 0)
        throw std::invalid_argument("portfolio: longtime_days must be > 0");
    for (const auto& p : predictions)
        if (p.trigger_announced_on < cfg.start ||
            !(p.trigger_announced_on < cfg.end))
            throw std::invalid_argument(
                "portfolio: prediction outside the backtest period (" +
                p.trigger_announced_on.to_iso() + ")");

    std::map<Uuid, const OutcomeRecord*> outcome_of;
    for (const auto& rec : outcomes) outcome_of[rec.company_uuid] = &rec;

    // Reference size for the rising threshold: earliest window's train set.
    std::size_t reference = cfg.reference_train_size.value_or(0);
    if (reference == 0 && !predictions.empty()) {
        Date first = predictions.front().window_start;
        reference = predictions.front().train_size;
        for (const auto& p : predictions)
            if (p.window_start < first ||
                (p.window_start == first && p.train_size < reference)) {
                first = p.window_start;
                reference = p.train_size;
            }
    }

    struct Holding {
        std::size_t ledger_index;
    };
    std::vector<LedgerEntry> ledger;
    std::vector<Holding> holdings;
    std::set<Uuid> ever_held;

    Date prev = cfg.start;
    for (Date t = cfg.start.plus_months_floor(1);; t = t.plus_months_floor(1)) {
        // (a) additions from predictions triggered in [prev, t)
        std::vector<const PredictionRecord*> slice;
        for (const auto& p : predictions)
            if (!(p.trigger_announced_on < prev) && p.trigger_announced_on < t)
                slice.push_back(&p);
        std::sort(slice.begin(), slice.end(),
                  [](const PredictionRecord* a, const PredictionRecord* b) {
                      if (a->score != b->score) return a->score > b->score;
                      return a->company_uuid < b->company_uuid;
                  });
        std::size_t added = 0;
        for (const PredictionRecord* p : slice) {
            if (added >= cfg.monthly_top_k) break;
            if (holdings.size() >= cfg.capacity) break;
            if (ever_held.count(p->company_uuid)) continue;
            if (p->score < threshold_fn(cfg, p->train_size, reference))
                continue;
            LedgerEntry e;
            e.uuid = p->company_uuid;
            e.name = p->company_name;
            e.enter_series_date = p->trigger_announced_on;
            if (const FundingRound* r = store.find_round(p->trigger_round_uuid))
                e.enter_series_value = r->post_money_valuation_usd;
            e.score = p->score;
            e.added = t;
            ledger.push_back(std::move(e));
            holdings.push_back({ledger.size() - 1});
            ever_held.insert(p->company_uuid);
            ++added;
        }

        // (b) review holdings: success first, then the longtime clock
        for (std::size_t i = 0; i < holdings.size();) {
            LedgerEntry& e = ledger[holdings[i].ledger_index];
            std::optional<SuccessEvent> event;
            if (auto it = outcome_of.find(e.uuid); it != outcome_of.end())
                event = it->second->success_event(cfg.exit_mode);

            if (event && event->date <= t) {
                e.exit_reason = ExitReason::success;
                e.expired = event->date;
                holdings.erase(holdings.begin() + long(i));
                continue;
            }
            Date last_activity = e.added;
            if (auto d = last_round_date(store, e.uuid, t))
                last_activity = std::max(last_activity, *d);
            if (t - last_activity >= cfg.longtime_days) {
                e.exit_reason = ExitReason::longtime;
                e.expired = t;
                holdings.erase(holdings.begin() + long(i));
                continue;
            }
            ++i;
        }

        prev = t;
        if (!(t < cfg.end)) break;
    }

    // (c) survivors stay in the fund
    for (const Holding& h : holdings)
        ledger[h.ledger_index].exit_reason = ExitReason::still_in;

    for (LedgerEntry& e : ledger) {
        Date horizon = e.expired ? *e.expired : store.snapshot_date();
        if (auto lv = last_valuation(store, e.uuid,
                                     horizon.plus_days(1))) {
            e.last_series_date = lv->first;
            e.last_series_value = lv->second;
        }
        if (e.exit_reason == ExitReason::success) {
            // a success exit marks at the event itself (an acquisition
            // price or IPO valuation is not a round post-money)
            auto it = outcome_of.find(e.uuid);
            auto event = it == outcome_of.end()
                             ? std::nullopt
                             : it->second->success_event(cfg.exit_mode);
            if (event && event->value) {
                e.last_series_date = event->date;
                e.last_series_value = event->value;
            }
        }

        bool exit_resolvable = false;
        switch (e.exit_reason) {
            case ExitReason::success:
            case ExitReason::still_in:
                exit_resolvable = e.last_series_value.has_value();
                break;
            case ExitReason::longtime:
                exit_resolvable = true;  // exits at zero
                break;
        }
        e.used_in_capital_growth =
            e.enter_series_value.has_value() && *e.enter_series_value > 0 &&
            exit_resolvable;
    }
    return ledger;
}

PnlSeries compute_pnl(const std::vector<LedgerEntry>& ledger,
                      const EntityStore& store, const PortfolioConfig& cfg) {
    PnlSeries out;
    double realized = 0.0;
    double invested = 0.0;

    for (Date t = cfg.start;; t = t.plus_months_floor(1)) {
        PnlRow row;
        row.month = t;
        double unrealized = 0.0;
        for (const LedgerEntry& e : ledger) {
            bool entered = e.added <= t;
            bool live = entered && (!e.expired || t < *e.expired);
            if (live) ++row.portfolio_size;
            if (!e.used_in_capital_growth) continue;
            double entry = double(*e.enter_series_value);
            if (e.added == t) invested += cfg.stake_usd;
            if (live) {
                // mark at last known valuation as of this month
                auto lv = last_valuation(store, e.uuid, t.plus_days(1));
                double mark = lv ? double(lv->second) : entry;
                unrealized += cfg.stake_usd * mark / entry;
            } else if (entered && e.expired) {
                // realize once, at the first boundary reaching expiry
                Date realize_at = std::max(e.added, e.expired->ceil_to_month());
                if (t == realize_at && e.exit_reason == ExitReason::success) {
                    double exit_value =
                        e.last_series_value ? double(*e.last_series_value) : 0.0;
                    realized += cfg.stake_usd * exit_value / entry;
                }
                // longtime exits contribute zero
            }
        }
        row.realized_pnl = realized;
        row.unrealized_pnl = unrealized;
        row.growth_multiple =
            invested > 0 ? (realized + unrealized) / invested : 0.0;
        out.rows.push_back(row);
        if (!(t < cfg.end)) break;
    }
    out.invested = invested;
    out.growth_multiple = out.rows.empty() ? 0.0 : out.rows.back().growth_multiple;
    return out;
}

namespace {

std::string opt_date(const std::optional<Date>& d) {
    return d ? d->to_iso() : "";
}
std::string opt_usd(const std::optional<Usd>& v) {
    return v ? std::to_string(*v) : "";
}

}  // namespace

void write_ledger_csv(const std::vector<LedgerEntry>& ledger,
                      const std::filesystem::path& path) {
    std::vector<std::string> header{
        "uuid",        "name",
        "enter_series_date", "enter_series_value",
        "score",       "added",
        "last_series_date",  "last_series_value",
        "exit_reason", "expired",
        "used_in_capital_growth"};
    std::vector<std::vector<std::string>> rows;
    for (const auto& e : ledger) {
        char score[32] = "";
        if (e.score) std::snprintf(score, sizeof score, "%.17g", *e.score);
        rows.push_back({e.uuid, e.name, e.enter_series_date.to_iso(),
                        opt_usd(e.enter_series_value), score,
                        e.added.to_iso(), opt_date(e.last_series_date),
                        opt_usd(e.last_series_value),
                        std::string(exit_reason_name(e.exit_reason)),
                        opt_date(e.expired),
                        e.used_in_capital_growth ? "true" : "false"});
    }
    csv::write_file(path, header, rows);
}

std::vector<LedgerEntry> read_ledger_csv(const std::filesystem::path& path) {
    csv::Table table = csv::read_file(path);
    std::vector<LedgerEntry> out;
    for (const auto& row : table.rows) {
        LedgerEntry e;
        e.uuid = row[0];
        e.name = row[1];
        e.enter_series_date = Date::parse_iso(row[2]).value();
        if (!row[3].empty()) e.enter_series_value = std::stoll(row[3]);
        if (!row[4].empty()) e.score = std::stod(row[4]);
        e.added = Date::parse_iso(row[5]).value();
        if (!row[6].empty()) e.last_series_date = Date::parse_iso(row[6]);
        if (!row[7].empty()) e.last_series_value = std::stoll(row[7]);
        e.exit_reason = parse_exit_reason(row[8]);
        if (!row[9].empty()) e.expired = Date::parse_iso(row[9]);
        e.used_in_capital_growth = row[10] == "true";
        out.push_back(std::move(e));
    }
    return out;
}

void write_pnl_csv(const PnlSeries& pnl, const std::filesystem::path& path) {
    std::vector<std::string> header{"month", "realized_pnl", "unrealized_pnl",
                                    "portfolio_size", "growth_multiple"};
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : pnl.rows) {
        char realized[32], unrealized[32], growth[32];
        std::snprintf(realized, sizeof realized, "%.17g", r.realized_pnl);
        std::snprintf(unrealized, sizeof unrealized, "%.17g", r.unrealized_pnl);
        std::snprintf(growth, sizeof growth, "%.17g", r.growth_multiple);
        rows.push_back({r.month.to_iso(), realized, unrealized,
                        std::to_string(r.portfolio_size), growth});
    }
    csv::write_file(path, header, rows);
}

}  // namespace vc
