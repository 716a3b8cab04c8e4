#include "vc/store.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>

#include "vc/csv.hpp"

namespace vc {

namespace {

const std::pair<RoundType, std::string_view> kRoundNames[] = {
    {RoundType::pre_seed, "pre_seed"},
    {RoundType::seed, "seed"},
    {RoundType::angel, "angel"},
    {RoundType::series_a, "series_a"},
    {RoundType::series_b, "series_b"},
    {RoundType::series_c, "series_c"},
    {RoundType::series_d, "series_d"},
    {RoundType::series_e, "series_e"},
    {RoundType::series_f, "series_f"},
    {RoundType::series_g, "series_g"},
    {RoundType::series_h, "series_h"},
    {RoundType::series_i, "series_i"},
    {RoundType::series_j, "series_j"},
    {RoundType::series_unknown, "series_unknown"},
    {RoundType::private_equity, "private_equity"},
    {RoundType::undisclosed, "undisclosed"},
    {RoundType::secondary_market, "secondary_market"},
    {RoundType::other, "other"},
};

std::optional<Usd> parse_usd(const std::string& s) {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') return std::nullopt;
    return static_cast<Usd>(std::llround(v));
}

std::optional<std::int64_t> parse_int(const std::string& s) {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    long long v = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0') return std::nullopt;
    return v;
}

std::string fmt_usd(const std::optional<Usd>& v) {
    return v ? std::to_string(*v) : std::string();
}
std::string fmt_int(const std::optional<std::int64_t>& v) {
    return v ? std::to_string(*v) : std::string();
}
std::string fmt_int(const std::optional<int>& v) {
    return v ? std::to_string(*v) : std::string();
}
std::string fmt_date(const std::optional<Date>& d) {
    return d ? d->to_iso() : std::string();
}
std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ',';
        out += parts[i];
    }
    return out;
}
bool parse_bool(const std::string& s) { return s == "true" || s == "1"; }
std::string fmt_bool(bool b) { return b ? "true" : "false"; }

struct FileCtx {
    csv::Table table;
    std::string name;
    std::vector<int> cols;

    const std::string& cell(const std::vector<std::string>& row, int which) const {
        static const std::string empty;
        int c = cols[which];
        if (c < 0 || std::size_t(c) >= row.size()) return empty;
        return row[std::size_t(c)];
    }
};

FileCtx open_table(const std::filesystem::path& dir, const std::string& name,
                   const std::vector<std::string>& required) {
    auto path = dir / (name + ".csv");
    if (!std::filesystem::exists(path))
        throw LoadError("missing export file: " + path.string());
    FileCtx ctx;
    ctx.name = name;
    ctx.table = csv::read_file(path);
    for (const auto& col : required) {
        if (ctx.table.column(col) < 0) {
            std::string msg = "malformed header in " + name +
                              ".csv; expected columns: ";
            msg += join(required);
            throw LoadError(msg);
        }
        ctx.cols.push_back(ctx.table.column(col));
    }
    return ctx;
}

}  // namespace

RoundType parse_round_type(std::string_view s) {
    for (auto [t, n] : kRoundNames)
        if (n == s) return t;
    return RoundType::other;
}

std::string_view round_type_name(RoundType t) {
    for (auto [rt, n] : kRoundNames)
        if (rt == t) return n;
    return "other";
}

CompanyStatus parse_status(std::string_view s) {
    if (s == "operating") return CompanyStatus::operating;
    if (s == "acquired") return CompanyStatus::acquired;
    if (s == "ipo") return CompanyStatus::ipo;
    if (s == "closed") return CompanyStatus::closed;
    return CompanyStatus::unknown;
}

std::string_view status_name(CompanyStatus s) {
    switch (s) {
        case CompanyStatus::operating: return "operating";
        case CompanyStatus::acquired: return "acquired";
        case CompanyStatus::ipo: return "ipo";
        case CompanyStatus::closed: return "closed";
        default: return "";
    }
}

bool is_ambiguous_round(RoundType t) {
    return t == RoundType::series_unknown || t == RoundType::private_equity ||
           t == RoundType::undisclosed;
}

bool is_series_b_to_j(RoundType t) {
    return t >= RoundType::series_b && t <= RoundType::series_j;
}

int QuarantineStats::total() const {
    int n = 0;
    for (const auto& [_, c] : per_file) n += c;
    return n;
}

EntityStore EntityStore::load_export(const std::filesystem::path& dir,
                                     Date snapshot_date) {
    EntityStore store;
    store.snapshot_date_ = snapshot_date;
    auto& q = store.quarantine_.per_file;

    // organizations
    {
        auto f = open_table(dir, "organizations",
                            {"uuid", "name", "founded_on", "country_code",
                             "region", "city", "category_list",
                             "category_groups_list", "status", "parent_uuid"});
        for (const auto& row : f.table.rows) {
            Company c;
            c.uuid = f.cell(row, 0);
            if (c.uuid.empty()) {
                ++q["organizations"];
                continue;
            }
            c.name = f.cell(row, 1);
            const auto& founded = f.cell(row, 2);
            if (!founded.empty()) {
                auto d = Date::parse_iso(founded);
                if (!d) {
                    ++q["organizations"];
                    continue;
                }
                c.founded_on = d;
            }
            c.country_code = f.cell(row, 3);
            c.region = f.cell(row, 4);
            c.city = f.cell(row, 5);
            c.category_list = csv::split_tags(f.cell(row, 6));
            c.category_groups_list = csv::split_tags(f.cell(row, 7));
            c.status = parse_status(f.cell(row, 8));
            c.parent_uuid = f.cell(row, 9);
            store.companies_.push_back(std::move(c));
        }
    }

    // people
    {
        auto f = open_table(
            dir, "people",
            {"uuid", "name", "gender", "country_code", "region", "city",
             "twitter_url", "linkedin_url", "facebook_url",
             "featured_job_organization_uuid"});
        for (const auto& row : f.table.rows) {
            Person p;
            p.uuid = f.cell(row, 0);
            if (p.uuid.empty()) {
                ++q["people"];
                continue;
            }
            p.name = f.cell(row, 1);
            p.gender = f.cell(row, 2);
            p.country_code = f.cell(row, 3);
            p.region = f.cell(row, 4);
            p.city = f.cell(row, 5);
            p.has_twitter = !f.cell(row, 6).empty();
            p.has_linkedin = !f.cell(row, 7).empty();
            p.has_facebook = !f.cell(row, 8).empty();
            p.featured_job_organization_uuid = f.cell(row, 9);
            store.people_.push_back(std::move(p));
        }
    }

    // investors
    {
        auto f = open_table(
            dir, "investors",
            {"uuid", "name", "type", "investor_types", "country_code", "region",
             "city", "investment_count", "total_funding_usd", "twitter_url",
             "linkedin_url", "facebook_url"});
        for (const auto& row : f.table.rows) {
            Investor v;
            v.uuid = f.cell(row, 0);
            if (v.uuid.empty()) {
                ++q["investors"];
                continue;
            }
            v.name = f.cell(row, 1);
            v.type = f.cell(row, 2);
            v.investor_types = csv::split_tags(f.cell(row, 3));
            v.country_code = f.cell(row, 4);
            v.region = f.cell(row, 5);
            v.city = f.cell(row, 6);
            v.investment_count = parse_int(f.cell(row, 7));
            if (v.investment_count && *v.investment_count < 0) {
                ++q["investors"];
                continue;
            }
            v.total_funding_usd = parse_usd(f.cell(row, 8));
            v.has_twitter = !f.cell(row, 9).empty();
            v.has_linkedin = !f.cell(row, 10).empty();
            v.has_facebook = !f.cell(row, 11).empty();
            store.investors_.push_back(std::move(v));
        }
    }

    // Canonical order + uuid dedup for the keyed tables.
    auto sort_dedup = [&](auto& vec, const char* file) {
        std::sort(vec.begin(), vec.end(),
                  [](const auto& a, const auto& b) { return a.uuid < b.uuid; });
        auto it = std::unique(vec.begin(), vec.end(), [](const auto& a,
                                                         const auto& b) {
            return a.uuid == b.uuid;
        });
        q[file] += int(vec.end() - it);
        vec.erase(it, vec.end());
    };
    sort_dedup(store.companies_, "organizations");
    sort_dedup(store.people_, "people");
    sort_dedup(store.investors_, "investors");

    std::set<Uuid> company_ids, people_ids, investor_ids;
    for (const auto& c : store.companies_) company_ids.insert(c.uuid);
    for (const auto& p : store.people_) people_ids.insert(p.uuid);
    for (const auto& v : store.investors_) investor_ids.insert(v.uuid);

    // funding_rounds
    {
        auto f = open_table(dir, "funding_rounds",
                            {"uuid", "org_uuid", "investment_type",
                             "announced_on", "raised_amount_usd",
                             "post_money_valuation_usd", "investor_count",
                             "lead_investor_uuids"});
        for (const auto& row : f.table.rows) {
            FundingRound r;
            r.uuid = f.cell(row, 0);
            r.company_uuid = f.cell(row, 1);
            auto date = Date::parse_iso(f.cell(row, 3));
            if (r.uuid.empty() || !date || !company_ids.count(r.company_uuid)) {
                ++q["funding_rounds"];
                continue;
            }
            r.announced_on = *date;
            r.investment_type = parse_round_type(f.cell(row, 2));
            r.raised_amount_usd = parse_usd(f.cell(row, 4));
            if (r.raised_amount_usd && *r.raised_amount_usd < 0) {
                ++q["funding_rounds"];
                continue;
            }
            r.post_money_valuation_usd = parse_usd(f.cell(row, 5));
            auto ic = parse_int(f.cell(row, 6));
            if (ic) r.investor_count = int(*ic);
            r.lead_investor_uuids = csv::split_tags(f.cell(row, 7));
            store.rounds_.push_back(std::move(r));
        }
        sort_dedup(store.rounds_, "funding_rounds");
    }
    std::set<Uuid> round_ids;
    for (const auto& r : store.rounds_) round_ids.insert(r.uuid);

    // ipos (at most one per company: keep earliest)
    {
        auto f = open_table(
            dir, "ipos",
            {"org_uuid", "went_public_on", "valuation_usd", "money_raised_usd"});
        for (const auto& row : f.table.rows) {
            Ipo ipo;
            ipo.company_uuid = f.cell(row, 0);
            auto d = Date::parse_iso(f.cell(row, 1));
            if (!d || !company_ids.count(ipo.company_uuid)) {
                ++q["ipos"];
                continue;
            }
            ipo.went_public_on = *d;
            ipo.valuation_usd = parse_usd(f.cell(row, 2));
            ipo.money_raised_usd = parse_usd(f.cell(row, 3));
            store.ipos_.push_back(std::move(ipo));
        }
        std::sort(store.ipos_.begin(), store.ipos_.end(),
                  [](const Ipo& a, const Ipo& b) {
                      return std::tie(a.company_uuid, a.went_public_on) <
                             std::tie(b.company_uuid, b.went_public_on);
                  });
        auto it = std::unique(store.ipos_.begin(), store.ipos_.end(),
                              [](const Ipo& a, const Ipo& b) {
                                  return a.company_uuid == b.company_uuid;
                              });
        q["ipos"] += int(store.ipos_.end() - it);
        store.ipos_.erase(it, store.ipos_.end());
    }

    // acquisitions
    {
        auto f = open_table(
            dir, "acquisitions",
            {"acquiree_uuid", "acquirer_uuid", "announced_on", "price_usd"});
        for (const auto& row : f.table.rows) {
            Acquisition a;
            a.acquiree_uuid = f.cell(row, 0);
            a.acquirer_uuid = f.cell(row, 1);
            auto d = Date::parse_iso(f.cell(row, 2));
            if (!d || !company_ids.count(a.acquiree_uuid) ||
                !company_ids.count(a.acquirer_uuid) ||
                a.acquiree_uuid == a.acquirer_uuid) {
                ++q["acquisitions"];
                continue;
            }
            a.announced_on = *d;
            a.price_usd = parse_usd(f.cell(row, 3));
            store.acquisitions_.push_back(std::move(a));
        }
        std::sort(store.acquisitions_.begin(), store.acquisitions_.end(),
                  [](const Acquisition& a, const Acquisition& b) {
                      return std::tie(a.acquiree_uuid, a.announced_on,
                                      a.acquirer_uuid) <
                             std::tie(b.acquiree_uuid, b.announced_on,
                                      b.acquirer_uuid);
                  });
    }

    // degrees
    {
        auto f = open_table(dir, "degrees",
                            {"person_uuid", "institution_name", "degree_type",
                             "subject", "is_completed", "completed_on"});
        for (const auto& row : f.table.rows) {
            Degree d;
            d.person_uuid = f.cell(row, 0);
            if (!people_ids.count(d.person_uuid)) {
                ++q["degrees"];
                continue;
            }
            d.institution_name = f.cell(row, 1);
            d.degree_type = f.cell(row, 2);
            d.subject = f.cell(row, 3);
            d.is_completed = parse_bool(f.cell(row, 4));
            const auto& on = f.cell(row, 5);
            if (!on.empty()) {
                auto dd = Date::parse_iso(on);
                if (!dd) {
                    ++q["degrees"];
                    continue;
                }
                d.completed_on = dd;
            }
            store.degrees_.push_back(std::move(d));
        }
        std::sort(store.degrees_.begin(), store.degrees_.end(),
                  [](const Degree& a, const Degree& b) {
                      return std::tie(a.person_uuid, a.institution_name,
                                      a.degree_type, a.subject) <
                             std::tie(b.person_uuid, b.institution_name,
                                      b.degree_type, b.subject);
                  });
    }

    // jobs
    {
        auto f = open_table(dir, "jobs",
                            {"person_uuid", "org_uuid", "started_on",
                             "ended_on", "title", "is_founder"});
        for (const auto& row : f.table.rows) {
            Job j;
            j.person_uuid = f.cell(row, 0);
            j.org_uuid = f.cell(row, 1);
            if (!people_ids.count(j.person_uuid) ||
                !company_ids.count(j.org_uuid)) {
                ++q["jobs"];
                continue;
            }
            bool bad = false;
            for (int k : {2, 3}) {
                const auto& cell = f.cell(row, k);
                if (cell.empty()) continue;
                auto d = Date::parse_iso(cell);
                if (!d) {
                    bad = true;
                    break;
                }
                (k == 2 ? j.started_on : j.ended_on) = d;
            }
            if (bad || (j.started_on && j.ended_on &&
                        *j.started_on > *j.ended_on)) {
                ++q["jobs"];
                continue;
            }
            j.title = f.cell(row, 4);
            j.is_founder = parse_bool(f.cell(row, 5));
            store.jobs_.push_back(std::move(j));
        }
        std::sort(store.jobs_.begin(), store.jobs_.end(),
                  [](const Job& a, const Job& b) {
                      auto da = a.started_on ? a.started_on->days_since_epoch()
                                             : INT32_MIN;
                      auto db = b.started_on ? b.started_on->days_since_epoch()
                                             : INT32_MIN;
                      return std::tie(a.person_uuid, a.org_uuid, da, a.title) <
                             std::tie(b.person_uuid, b.org_uuid, db, b.title);
                  });
    }

    // investments
    {
        auto f = open_table(dir, "investments",
                            {"funding_round_uuid", "investor_uuid", "is_lead"});
        for (const auto& row : f.table.rows) {
            Investment inv;
            inv.round_uuid = f.cell(row, 0);
            inv.investor_uuid = f.cell(row, 1);
            if (!round_ids.count(inv.round_uuid) ||
                !investor_ids.count(inv.investor_uuid)) {
                ++q["investments"];
                continue;
            }
            inv.is_lead = parse_bool(f.cell(row, 2));
            store.investments_.push_back(inv);
        }
        std::sort(store.investments_.begin(), store.investments_.end(),
                  [](const Investment& a, const Investment& b) {
                      return std::tie(a.round_uuid, a.investor_uuid) <
                             std::tie(b.round_uuid, b.investor_uuid);
                  });
        auto it = std::unique(store.investments_.begin(),
                              store.investments_.end(),
                              [](const Investment& a, const Investment& b) {
                                  return a.round_uuid == b.round_uuid &&
                                         a.investor_uuid == b.investor_uuid;
                              });
        q["investments"] += int(store.investments_.end() - it);
        store.investments_.erase(it, store.investments_.end());
    }

    store.rebuild_indexes();
    return store;
}

EntityStore EntityStore::from_entities(
    Date snapshot_date, std::vector<Company> companies,
    std::vector<FundingRound> rounds, std::vector<Ipo> ipos,
    std::vector<Acquisition> acquisitions, std::vector<Person> people,
    std::vector<Degree> degrees, std::vector<Job> jobs,
    std::vector<Investor> investors, std::vector<Investment> investments) {
    EntityStore s;
    s.snapshot_date_ = snapshot_date;
    s.companies_ = std::move(companies);
    s.rounds_ = std::move(rounds);
    s.ipos_ = std::move(ipos);
    s.acquisitions_ = std::move(acquisitions);
    s.people_ = std::move(people);
    s.degrees_ = std::move(degrees);
    s.jobs_ = std::move(jobs);
    s.investors_ = std::move(investors);
    s.investments_ = std::move(investments);

    auto by_uuid = [](const auto& a, const auto& b) { return a.uuid < b.uuid; };
    std::sort(s.companies_.begin(), s.companies_.end(), by_uuid);
    std::sort(s.people_.begin(), s.people_.end(), by_uuid);
    std::sort(s.investors_.begin(), s.investors_.end(), by_uuid);
    std::sort(s.rounds_.begin(), s.rounds_.end(), by_uuid);
    std::sort(s.ipos_.begin(), s.ipos_.end(), [](const Ipo& a, const Ipo& b) {
        return std::tie(a.company_uuid, a.went_public_on) <
               std::tie(b.company_uuid, b.went_public_on);
    });
    std::sort(s.acquisitions_.begin(), s.acquisitions_.end(),
              [](const Acquisition& a, const Acquisition& b) {
                  return std::tie(a.acquiree_uuid, a.announced_on,
                                  a.acquirer_uuid) <
                         std::tie(b.acquiree_uuid, b.announced_on,
                                  b.acquirer_uuid);
              });
    std::sort(s.degrees_.begin(), s.degrees_.end(),
              [](const Degree& a, const Degree& b) {
                  return std::tie(a.person_uuid, a.institution_name,
                                  a.degree_type, a.subject) <
                         std::tie(b.person_uuid, b.institution_name,
                                  b.degree_type, b.subject);
              });
    std::sort(s.jobs_.begin(), s.jobs_.end(), [](const Job& a, const Job& b) {
        auto da = a.started_on ? a.started_on->days_since_epoch() : INT32_MIN;
        auto db = b.started_on ? b.started_on->days_since_epoch() : INT32_MIN;
        return std::tie(a.person_uuid, a.org_uuid, da, a.title) <
               std::tie(b.person_uuid, b.org_uuid, db, b.title);
    });
    std::sort(s.investments_.begin(), s.investments_.end(),
              [](const Investment& a, const Investment& b) {
                  return std::tie(a.round_uuid, a.investor_uuid) <
                         std::tie(b.round_uuid, b.investor_uuid);
              });

    s.rebuild_indexes();
    return s;
}

EntityStore::EntityStore(const EntityStore& other) {
    snapshot_date_ = other.snapshot_date_;
    quarantine_ = other.quarantine_;
    companies_ = other.companies_;
    rounds_ = other.rounds_;
    ipos_ = other.ipos_;
    acquisitions_ = other.acquisitions_;
    people_ = other.people_;
    degrees_ = other.degrees_;
    jobs_ = other.jobs_;
    investors_ = other.investors_;
    investments_ = other.investments_;
    rebuild_indexes();
}

EntityStore& EntityStore::operator=(const EntityStore& other) {
    if (this != &other) *this = EntityStore(other);
    return *this;
}

void EntityStore::rebuild_indexes() {
    company_index_.clear();
    person_index_.clear();
    investor_index_.clear();
    round_index_.clear();
    company_rounds_.clear();
    company_founders_.clear();
    round_investments_.clear();
    person_degrees_.clear();
    person_jobs_.clear();
    company_ipos_.clear();
    company_acqs_.clear();
    investor_rounds_.clear();
    person_founded_.clear();
    parent_or_sub_.clear();

    for (std::size_t i = 0; i < companies_.size(); ++i)
        company_index_[companies_[i].uuid] = i;
    for (std::size_t i = 0; i < people_.size(); ++i)
        person_index_[people_[i].uuid] = i;
    for (std::size_t i = 0; i < investors_.size(); ++i)
        investor_index_[investors_[i].uuid] = i;
    for (std::size_t i = 0; i < rounds_.size(); ++i)
        round_index_[rounds_[i].uuid] = i;

    for (const auto& r : rounds_) company_rounds_[r.company_uuid].push_back(&r);
    for (auto& [_, rs] : company_rounds_)
        std::sort(rs.begin(), rs.end(),
                  [](const FundingRound* a, const FundingRound* b) {
                      return std::tie(a->announced_on, a->uuid) <
                             std::tie(b->announced_on, b->uuid);
                  });

    for (const auto& j : jobs_) {
        person_jobs_[j.person_uuid].push_back(&j);
        org_jobs_[j.org_uuid].push_back(&j);
        if (j.is_founder) {
            auto* p = find_person(j.person_uuid);
            auto& fs = company_founders_[j.org_uuid];
            if (p && std::find(fs.begin(), fs.end(), p) == fs.end())
                fs.push_back(p);
        }
    }
    for (auto& [_, fs] : company_founders_)
        std::sort(fs.begin(), fs.end(),
                  [](const Person* a, const Person* b) {
                      return a->uuid < b->uuid;
                  });

    for (const auto& inv : investments_)
        round_investments_[inv.round_uuid].push_back(&inv);
    for (const auto& d : degrees_) person_degrees_[d.person_uuid].push_back(&d);
    for (const auto& ipo : ipos_) company_ipos_[ipo.company_uuid].push_back(&ipo);
    for (const auto& a : acquisitions_)
        company_acqs_[a.acquiree_uuid].push_back(&a);

    for (const auto& inv : investments_) {
        const FundingRound* r = find_round(inv.round_uuid);
        if (r) investor_rounds_[inv.investor_uuid].push_back(r);
    }
    for (auto& [_, rs] : investor_rounds_)
        std::sort(rs.begin(), rs.end(),
                  [](const FundingRound* a, const FundingRound* b) {
                      return std::tie(a->announced_on, a->uuid) <
                             std::tie(b->announced_on, b->uuid);
                  });

    // founded companies: founder jobs joined with the company's founded_on
    for (const auto& j : jobs_) {
        if (!j.is_founder) continue;
        const Company* c = find_company(j.org_uuid);
        if (c && c->founded_on)
            person_founded_[j.person_uuid].emplace_back(c, *c->founded_on);
    }
    for (auto& [_, fc] : person_founded_)
        std::sort(fc.begin(), fc.end(), [](const auto& a, const auto& b) {
            return std::tie(a.second, a.first->uuid) <
                   std::tie(b.second, b.first->uuid);
        });

    for (const auto& c : companies_) {
        if (!c.parent_uuid.empty()) {
            parent_or_sub_[c.uuid] = true;
            parent_or_sub_[c.parent_uuid] = true;
        }
    }
}

void EntityStore::save_export(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);

    std::vector<std::vector<std::string>> rows;
    rows.reserve(companies_.size());
    for (const auto& c : companies_)
        rows.push_back({c.uuid, c.name, fmt_date(c.founded_on), c.country_code,
                        c.region, c.city, join(c.category_list),
                        join(c.category_groups_list),
                        std::string(status_name(c.status)), c.parent_uuid});
    csv::write_file(dir / "organizations.csv",
                    {"uuid", "name", "founded_on", "country_code", "region",
                     "city", "category_list", "category_groups_list", "status",
                     "parent_uuid"},
                    rows);

    rows.clear();
    for (const auto& r : rounds_)
        rows.push_back({r.uuid, r.company_uuid,
                        std::string(round_type_name(r.investment_type)),
                        r.announced_on.to_iso(), fmt_usd(r.raised_amount_usd),
                        fmt_usd(r.post_money_valuation_usd),
                        fmt_int(r.investor_count),
                        join(r.lead_investor_uuids)});
    csv::write_file(dir / "funding_rounds.csv",
                    {"uuid", "org_uuid", "investment_type", "announced_on",
                     "raised_amount_usd", "post_money_valuation_usd",
                     "investor_count", "lead_investor_uuids"},
                    rows);

    rows.clear();
    for (const auto& i : ipos_)
        rows.push_back({i.company_uuid, i.went_public_on.to_iso(),
                        fmt_usd(i.valuation_usd), fmt_usd(i.money_raised_usd)});
    csv::write_file(
        dir / "ipos.csv",
        {"org_uuid", "went_public_on", "valuation_usd", "money_raised_usd"},
        rows);

    rows.clear();
    for (const auto& a : acquisitions_)
        rows.push_back({a.acquiree_uuid, a.acquirer_uuid,
                        a.announced_on.to_iso(), fmt_usd(a.price_usd)});
    csv::write_file(
        dir / "acquisitions.csv",
        {"acquiree_uuid", "acquirer_uuid", "announced_on", "price_usd"}, rows);

    auto url = [](bool present, const char* site, const Uuid& uuid) {
        return present ? "https://" + std::string(site) + ".com/" + uuid
                       : std::string();
    };

    rows.clear();
    for (const auto& p : people_)
        rows.push_back({p.uuid, p.name, p.gender, p.country_code, p.region,
                        p.city, url(p.has_twitter, "twitter", p.uuid),
                        url(p.has_linkedin, "linkedin", p.uuid),
                        url(p.has_facebook, "facebook", p.uuid),
                        p.featured_job_organization_uuid});
    csv::write_file(dir / "people.csv",
                    {"uuid", "name", "gender", "country_code", "region", "city",
                     "twitter_url", "linkedin_url", "facebook_url",
                     "featured_job_organization_uuid"},
                    rows);

    rows.clear();
    for (const auto& d : degrees_)
        rows.push_back({d.person_uuid, d.institution_name, d.degree_type,
                        d.subject, fmt_bool(d.is_completed),
                        fmt_date(d.completed_on)});
    csv::write_file(dir / "degrees.csv",
                    {"person_uuid", "institution_name", "degree_type",
                     "subject", "is_completed", "completed_on"},
                    rows);

    rows.clear();
    for (const auto& j : jobs_)
        rows.push_back({j.person_uuid, j.org_uuid, fmt_date(j.started_on),
                        fmt_date(j.ended_on), j.title, fmt_bool(j.is_founder)});
    csv::write_file(dir / "jobs.csv",
                    {"person_uuid", "org_uuid", "started_on", "ended_on",
                     "title", "is_founder"},
                    rows);

    rows.clear();
    for (const auto& v : investors_)
        rows.push_back({v.uuid, v.name, v.type, join(v.investor_types),
                        v.country_code, v.region, v.city,
                        fmt_int(v.investment_count),
                        fmt_usd(v.total_funding_usd),
                        url(v.has_twitter, "twitter", v.uuid),
                        url(v.has_linkedin, "linkedin", v.uuid),
                        url(v.has_facebook, "facebook", v.uuid)});
    csv::write_file(dir / "investors.csv",
                    {"uuid", "name", "type", "investor_types", "country_code",
                     "region", "city", "investment_count", "total_funding_usd",
                     "twitter_url", "linkedin_url", "facebook_url"},
                    rows);

    rows.clear();
    for (const auto& i : investments_)
        rows.push_back({i.round_uuid, i.investor_uuid, fmt_bool(i.is_lead)});
    csv::write_file(dir / "investments.csv",
                    {"funding_round_uuid", "investor_uuid", "is_lead"}, rows);
}

const Company* EntityStore::find_company(const Uuid& uuid) const {
    auto it = company_index_.find(uuid);
    return it == company_index_.end() ? nullptr : &companies_[it->second];
}
const Person* EntityStore::find_person(const Uuid& uuid) const {
    auto it = person_index_.find(uuid);
    return it == person_index_.end() ? nullptr : &people_[it->second];
}
const Investor* EntityStore::find_investor(const Uuid& uuid) const {
    auto it = investor_index_.find(uuid);
    return it == investor_index_.end() ? nullptr : &investors_[it->second];
}
const FundingRound* EntityStore::find_round(const Uuid& uuid) const {
    auto it = round_index_.find(uuid);
    return it == round_index_.end() ? nullptr : &rounds_[it->second];
}

template <typename Map>
static const typename Map::mapped_type& lookup(const Map& map,
                                               const Uuid& key) {
    static const typename Map::mapped_type empty;
    auto it = map.find(key);
    return it == map.end() ? empty : it->second;
}

const std::vector<const FundingRound*>& EntityStore::rounds_of(
    const Uuid& company) const {
    return lookup(company_rounds_, company);
}
const std::vector<const Person*>& EntityStore::founders_of(
    const Uuid& company) const {
    return lookup(company_founders_, company);
}
const std::vector<const Investment*>& EntityStore::investments_in(
    const Uuid& round) const {
    return lookup(round_investments_, round);
}
const std::vector<const Degree*>& EntityStore::degrees_of(
    const Uuid& person) const {
    return lookup(person_degrees_, person);
}
const std::vector<const Job*>& EntityStore::jobs_of(const Uuid& person) const {
    return lookup(person_jobs_, person);
}
const std::vector<const Job*>& EntityStore::jobs_at(const Uuid& company) const {
    return lookup(org_jobs_, company);
}
const std::vector<const Ipo*>& EntityStore::ipos_of(const Uuid& company) const {
    return lookup(company_ipos_, company);
}
const std::vector<const Acquisition*>& EntityStore::acquisitions_of(
    const Uuid& company) const {
    return lookup(company_acqs_, company);
}
const std::vector<const FundingRound*>& EntityStore::rounds_of_investor(
    const Uuid& investor) const {
    return lookup(investor_rounds_, investor);
}
const std::vector<std::pair<const Company*, Date>>&
EntityStore::founded_companies_of(const Uuid& person) const {
    return lookup(person_founded_, person);
}

bool EntityStore::is_parent_or_subsidiary(const Uuid& company) const {
    auto it = parent_or_sub_.find(company);
    return it != parent_or_sub_.end() && it->second;
}

std::vector<const FundingRound*> EntityStore::funding_history(
    const Uuid& company, Date as_of) const {
    if (!find_company(company))
        throw NotFoundError("unknown company: " + company);
    std::vector<const FundingRound*> out;
    bool seen_series_b = false;
    for (const FundingRound* r : rounds_of(company)) {
        if (r->announced_on >= as_of) break;
        if (is_ambiguous_round(r->investment_type) && !seen_series_b) continue;
        if (r->investment_type == RoundType::series_b) seen_series_b = true;
        out.push_back(r);
    }
    return out;
}

}  // namespace vc
