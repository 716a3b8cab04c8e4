#include "vc/universe.hpp"

#include <algorithm>

namespace vc {

std::string_view outcome_kind_name(OutcomeKind k) {
    switch (k) {
        case OutcomeKind::IPO: return "IPO";
        case OutcomeKind::ACQ: return "ACQ";
        case OutcomeKind::UNIC: return "UNIC";
        default: return "NONE";
    }
}

OutcomeKind parse_outcome_kind(std::string_view s) {
    if (s == "IPO") return OutcomeKind::IPO;
    if (s == "ACQ") return OutcomeKind::ACQ;
    if (s == "UNIC") return OutcomeKind::UNIC;
    return OutcomeKind::NONE;
}

const std::set<std::string>& UniverseConfig::default_category_groups() {
    static const std::set<std::string> groups = {
        "Software", "Internet Services", "Hardware", "Information Technology",
        "Media and Entertainment", "Commerce and Shopping", "Mobile",
        "Data and Analytics", "Financial Services", "Sales and Marketing",
        "Apps", "Advertising", "Artificial Intelligence",
        "Professional Services", "Privacy and Security", "Video",
        "Content and Publishing", "Design", "Payments", "Gaming",
        "Messaging and Telecommunications", "Music and Audio", "Platforms",
        "Education", "Lending and Investments"};
    return groups;
}

UniverseConfig UniverseConfig::defaults() {
    UniverseConfig cfg;
    cfg.allowed_category_groups = default_category_groups();
    return cfg;
}

std::optional<SuccessEvent> OutcomeRecord::success_event(ExitMode mode) const {
    if (events.empty()) return std::nullopt;
    return mode == ExitMode::first ? events.front() : events.back();
}

std::set<Uuid> filter_universe(const EntityStore& store,
                               const UniverseConfig& cfg) {
    std::set<Uuid> out;
    for (const auto& c : store.companies()) {
        if (!c.founded_on || *c.founded_on < cfg.founded_after) continue;
        bool in_groups = false;
        for (const auto& g : c.category_groups_list)
            if (cfg.allowed_category_groups.count(g)) {
                in_groups = true;
                break;
            }
        if (in_groups) out.insert(c.uuid);
    }
    return out;
}

namespace {

/// Qualifying success events for one company, chronological.
/// Events dated on/after knowledge_cutoff are dropped when given.
std::vector<SuccessEvent> success_events(const EntityStore& store,
                                         const UniverseConfig& cfg,
                                         const Uuid& uuid,
                                         std::optional<Date> cutoff) {
    std::vector<SuccessEvent> events;
    auto admit = [&](Date d) { return !cutoff || d < *cutoff; };

    for (const Ipo* ipo : store.ipos_of(uuid)) {
        bool big_val = ipo->valuation_usd &&
                       *ipo->valuation_usd > cfg.ipo_valuation_min;
        bool big_raise = ipo->money_raised_usd &&
                         *ipo->money_raised_usd > cfg.ipo_raised_min;
        if ((big_val || big_raise) && admit(ipo->went_public_on)) {
            auto value =
                ipo->valuation_usd ? ipo->valuation_usd : ipo->money_raised_usd;
            events.push_back({OutcomeKind::IPO, ipo->went_public_on, value});
        }
    }

    Usd max_raised = 0;
    for (const FundingRound* r : store.rounds_of(uuid))
        if (r->raised_amount_usd)
            max_raised = std::max(max_raised, *r->raised_amount_usd);
    for (const Acquisition* a : store.acquisitions_of(uuid)) {
        if (a->price_usd && *a->price_usd >= cfg.acq_price_min &&
            *a->price_usd >= max_raised && admit(a->announced_on))
            events.push_back({OutcomeKind::ACQ, a->announced_on, a->price_usd});
    }

    bool verified = cfg.verified_unicorns.count(uuid) > 0;
    bool had_unicorn_round = false;
    for (const FundingRound* r : store.rounds_of(uuid)) {
        if (r->post_money_valuation_usd &&
            *r->post_money_valuation_usd > cfg.unicorn_valuation_min &&
            admit(r->announced_on)) {
            events.push_back({OutcomeKind::UNIC, r->announced_on,
                              r->post_money_valuation_usd});
            had_unicorn_round = true;
        }
    }
    if (verified && !had_unicorn_round) {
        // no dated valuation evidence; anchor to the last known round
        const auto& rs = store.rounds_of(uuid);
        for (auto it = rs.rbegin(); it != rs.rend(); ++it) {
            if (admit((*it)->announced_on)) {
                events.push_back({OutcomeKind::UNIC, (*it)->announced_on,
                                  (*it)->post_money_valuation_usd});
                break;
            }
        }
    }

    std::sort(events.begin(), events.end(),
              [](const SuccessEvent& a, const SuccessEvent& b) {
                  return std::tie(a.date, a.kind) < std::tie(b.date, b.kind);
              });
    return events;
}

OutcomeRecord make_positive(const EntityStore& store, const Uuid& uuid,
                            std::vector<SuccessEvent> events, Date timeline_end) {
    OutcomeRecord rec;
    rec.company_uuid = uuid;
    rec.label = 1;
    rec.events = std::move(events);
    rec.outcome_kind = rec.events.front().kind;
    rec.success_date = rec.events.front().date;
    rec.round_timeline = store.funding_history(uuid, timeline_end);
    // round coincident with or immediately preceding the success date
    for (int i = int(rec.round_timeline.size()) - 1; i >= 0; --i) {
        if (rec.round_timeline[std::size_t(i)]->announced_on <=
            *rec.success_date) {
            rec.success_round_index = i;
            break;
        }
    }
    return rec;
}

}  // namespace

std::vector<OutcomeRecord> label_successful(const EntityStore& store,
                                            const UniverseConfig& cfg) {
    auto universe = filter_universe(store, cfg);
    Date horizon = store.snapshot_date().plus_days(1);
    std::vector<OutcomeRecord> out;
    for (const Uuid& uuid : universe) {
        auto events = success_events(store, cfg, uuid, std::nullopt);
        if (events.empty()) continue;
        auto rec = make_positive(store, uuid, std::move(events), horizon);
        if (!rec.success_round_index) continue;  // no round evidence at all
        out.push_back(std::move(rec));
    }
    return out;
}

namespace {

/// Dead-company (label 0) test at a knowledge cutoff. cutoff == nullopt
/// means full-snapshot knowledge.
bool is_negative_at(const EntityStore& store, const UniverseConfig& cfg,
                    const Company& c, std::optional<Date> cutoff) {
    auto admit = [&](Date d) { return !cutoff || d < *cutoff; };

    if (store.is_parent_or_subsidiary(c.uuid)) return false;
    for (const Ipo* ipo : store.ipos_of(c.uuid))
        if (admit(ipo->went_public_on)) return false;
    for (const Acquisition* a : store.acquisitions_of(c.uuid))
        if (admit(a->announced_on)) return false;
    if (cfg.verified_unicorns.count(c.uuid)) return false;

    std::optional<Date> last_round;
    for (const FundingRound* r : store.rounds_of(c.uuid)) {
        if (!admit(r->announced_on)) continue;
        if (r->post_money_valuation_usd) {
            if (*r->post_money_valuation_usd > cfg.gray_zone_valuation_max)
                return false;  // unicorns and the gray zone alike
        }
        if (!last_round || r->announced_on > *last_round)
            last_round = r->announced_on;
    }

    Date eval_at = cutoff ? *cutoff : store.snapshot_date();
    if (cutoff && *cutoff < Date::from_ymd(2018, 1, 1)) {
        // Early in the backtest the "no rounds since 2016" window has no
        // evidence yet; fall back to closed-or-stale (>= 730 days idle).
        if (c.status == CompanyStatus::closed) return true;
        Date last_activity = last_round ? *last_round : *c.founded_on;
        return eval_at - last_activity >= 730;
    }

    if (last_round && *last_round >= cfg.dead_after) return false;
    for (const Job* j : store.jobs_at(c.uuid)) {
        if (!j->started_on) continue;
        if (*j->started_on >= cfg.jobs_after && admit(*j->started_on))
            return false;
    }
    return true;
}

}  // namespace

std::vector<OutcomeRecord> label_unsuccessful(const EntityStore& store,
                                              const UniverseConfig& cfg,
                                              const std::set<Uuid>& successful) {
    auto universe = filter_universe(store, cfg);
    Date horizon = store.snapshot_date().plus_days(1);
    std::vector<OutcomeRecord> out;
    for (const Uuid& uuid : universe) {
        if (successful.count(uuid)) continue;
        const Company* c = store.find_company(uuid);
        if (!is_negative_at(store, cfg, *c, std::nullopt)) continue;
        OutcomeRecord rec;
        rec.company_uuid = uuid;
        rec.label = 0;
        rec.round_timeline = store.funding_history(uuid, horizon);
        out.push_back(std::move(rec));
    }
    return out;
}

LabeledDataset build_dataset_asof(const EntityStore& store,
                                  const UniverseConfig& cfg, Date as_of) {
    if (as_of > store.snapshot_date())
        throw std::invalid_argument("as_of is after the store snapshot date");

    auto universe = filter_universe(store, cfg);
    LabeledDataset ds;
    std::set<Uuid> positive_ids;
    for (const Uuid& uuid : universe) {
        const Company* c = store.find_company(uuid);
        if (*c->founded_on >= as_of) continue;
        auto events = success_events(store, cfg, uuid, as_of);
        if (events.empty()) continue;
        auto rec = make_positive(store, uuid, std::move(events), as_of);
        if (!rec.success_round_index) continue;
        positive_ids.insert(uuid);
        ds.records.push_back(std::move(rec));
        ++ds.n_pos;
    }
    for (const Uuid& uuid : universe) {
        if (positive_ids.count(uuid)) continue;
        const Company* c = store.find_company(uuid);
        if (*c->founded_on >= as_of) continue;
        if (!is_negative_at(store, cfg, *c, as_of)) continue;
        OutcomeRecord rec;
        rec.company_uuid = uuid;
        rec.label = 0;
        rec.round_timeline = store.funding_history(uuid, as_of);
        ds.records.push_back(std::move(rec));
        ++ds.n_neg;
    }
    return ds;
}

}  // namespace vc
