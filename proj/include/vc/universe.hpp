#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vc/store.hpp"

namespace vc {

enum class OutcomeKind { NONE, IPO, ACQ, UNIC };
enum class ExitMode { first, last };

std::string_view outcome_kind_name(OutcomeKind k);
OutcomeKind parse_outcome_kind(std::string_view s);

struct UniverseConfig {
    Date founded_after = Date::from_ymd(2000, 1, 1);
    std::set<std::string> allowed_category_groups;  // default: the 25 groups
    Usd ipo_valuation_min = 500'000'000;
    Usd ipo_raised_min = 100'000'000;
    Usd acq_price_min = 100'000'000;
    Usd unicorn_valuation_min = 1'000'000'000;
    Date dead_after = Date::from_ymd(2016, 1, 1);
    Date jobs_after = Date::from_ymd(2017, 1, 1);
    Usd gray_zone_valuation_max = 100'000'000;
    std::set<Uuid> verified_unicorns;

    static UniverseConfig defaults();
    static const std::set<std::string>& default_category_groups();
};

struct SuccessEvent {
    OutcomeKind kind = OutcomeKind::NONE;
    Date date;
    std::optional<Usd> value;  // IPO valuation, ACQ price, or round post-money
};

struct OutcomeRecord {
    Uuid company_uuid;
    int label = 0;
    OutcomeKind outcome_kind = OutcomeKind::NONE;
    std::optional<Date> success_date;
    std::optional<int> success_round_index;
    std::vector<const FundingRound*> round_timeline;
    /// All qualifying success events, chronological.
    std::vector<SuccessEvent> events;

    /// Earliest (first) or latest (last) qualifying event.
    std::optional<SuccessEvent> success_event(ExitMode mode) const;
};

struct LabeledDataset {
    std::vector<OutcomeRecord> records;  // positives then negatives, each
                                         // sorted by uuid
    int n_pos = 0;
    int n_neg = 0;
};

/// Companies passing the founding-date and category-group filters.
std::set<Uuid> filter_universe(const EntityStore& store,
                               const UniverseConfig& cfg);

/// Label-1 companies with their qualifying events and round timelines,
/// evaluated on full snapshot knowledge.
std::vector<OutcomeRecord> label_successful(const EntityStore& store,
                                            const UniverseConfig& cfg);

/// Label-0 companies under the dead-company filters.
std::vector<OutcomeRecord> label_unsuccessful(
    const EntityStore& store, const UniverseConfig& cfg,
    const std::set<Uuid>& successful);

/// Point-in-time training set: positives with a success event before
/// as_of, negatives decidable at as_of. Throws on as_of > snapshot.
LabeledDataset build_dataset_asof(const EntityStore& store,
                                  const UniverseConfig& cfg, Date as_of);

}  // namespace vc
