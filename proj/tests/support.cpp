#include "support.hpp"

namespace vc::test {

Date d(const char* iso) { return *Date::parse_iso(iso); }

Company company(const Uuid& uuid, const char* founded,
                std::vector<std::string> groups) {
    Company c;
    c.uuid = uuid;
    c.name = "name-" + uuid;
    c.founded_on = d(founded);
    c.country_code = "USA";
    c.category_groups_list = std::move(groups);
    c.category_list = {"Tag A", "Tag B"};
    c.status = CompanyStatus::operating;
    return c;
}

FundingRound round(const Uuid& uuid, const Uuid& company, RoundType type,
                   const char* announced, std::optional<Usd> raised,
                   std::optional<Usd> post_money) {
    FundingRound r;
    r.uuid = uuid;
    r.company_uuid = company;
    r.investment_type = type;
    r.announced_on = d(announced);
    r.raised_amount_usd = raised;
    r.post_money_valuation_usd = post_money;
    return r;
}

EntityStore build_store(std::vector<Company> companies,
                        std::vector<FundingRound> rounds,
                        std::vector<Ipo> ipos,
                        std::vector<Acquisition> acquisitions,
                        std::vector<Person> people,
                        std::vector<Degree> degrees, std::vector<Job> jobs,
                        std::vector<Investor> investors,
                        std::vector<Investment> investments) {
    return EntityStore::from_entities(
        d("2022-06-14"), std::move(companies), std::move(rounds),
        std::move(ipos), std::move(acquisitions), std::move(people),
        std::move(degrees), std::move(jobs), std::move(investors),
        std::move(investments));
}

EntityStore perturb_from(const EntityStore& store, Date cutoff) {
    EntityStore copy = store;
    for (auto& r : copy.mutable_rounds()) {
        if (r.announced_on < cutoff) continue;
        r.raised_amount_usd = r.raised_amount_usd ? std::optional<Usd>()
                                                  : std::optional<Usd>(777);
        r.post_money_valuation_usd =
            r.post_money_valuation_usd && *r.post_money_valuation_usd > 0
                ? std::optional<Usd>(*r.post_money_valuation_usd * 3)
                : std::optional<Usd>(123'456'789);
        r.investor_count = r.investor_count.value_or(0) + 9;
        r.lead_investor_uuids.clear();
    }
    for (auto& i : copy.mutable_ipos()) {
        if (i.went_public_on < cutoff) continue;
        i.valuation_usd = i.valuation_usd.value_or(0) * 5 + 1'000'000'000;
        i.money_raised_usd.reset();
    }
    for (auto& a : copy.mutable_acquisitions()) {
        if (a.announced_on < cutoff) continue;
        a.price_usd = a.price_usd.value_or(0) * 7 + 500'000'000;
    }
    for (auto& j : copy.mutable_jobs()) {
        if (!j.started_on || *j.started_on < cutoff) continue;
        j.title = "perturbed";
    }
    for (auto& g : copy.mutable_degrees()) {
        if (!g.completed_on || *g.completed_on < cutoff) continue;
        g.institution_name = "perturbed";
        g.subject = "perturbed";
        g.is_completed = !g.is_completed;
    }
    copy.rebuild_indexes();
    return copy;
}

}  // namespace vc::test
