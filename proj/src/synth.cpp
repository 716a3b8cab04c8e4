#include "vc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "vc/mlp.hpp"
#include "vc/universe.hpp"

namespace vc {

namespace {

constexpr const char* kCountries[] = {"USA", "GBR", "DEU", "FRA",
                                      "IND", "BRA", "CHN", "ISR"};
constexpr const char* kRegions[] = {"California", "New York", "London",
                                    "Berlin",     "Bangalore", "Tel Aviv"};
constexpr const char* kCities[] = {"San Francisco", "New York", "London",
                                   "Berlin",        "Bangalore", "Tel Aviv"};
constexpr const char* kInstitutions[] = {
    "Stanford University",  "MIT",
    "Harvard University",   "UC Berkeley",
    "Carnegie Mellon",      "University of Oxford",
    "University of Cambridge", "ETH Zurich",
    "Technion",             "IIT Bombay",
    "State College",        "Community College"};
constexpr const char* kDegreeTypes[] = {"BSc", "MSc", "MBA", "PhD"};
constexpr const char* kSubjects[] = {"Computer Science", "Economics",
                                     "Physics", "Business", "Biology"};
constexpr const char* kGenders[] = {"male", "female"};
constexpr RoundType kLadder[] = {
    RoundType::seed,     RoundType::series_a, RoundType::series_b,
    RoundType::series_c, RoundType::series_d, RoundType::series_e,
    RoundType::series_f, RoundType::series_g, RoundType::series_h};

std::string zero_pad(std::size_t n, int width) {
    std::string s = std::to_string(n);
    while (int(s.size()) < width) s.insert(s.begin(), '0');
    return s;
}

enum class Role { positive, negative, undecided };

Date uniform_date(std::mt19937_64& rng, Date lo, Date hi) {
    std::uniform_int_distribution<std::int32_t> dist(lo.days_since_epoch(),
                                                     hi.days_since_epoch());
    return Date(dist(rng));
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

/// Solves mean_i sigmoid(c + scale * q_i) = target for c by bisection.
double calibrate_intercept(const std::vector<double>& q, double scale,
                           double target) {
    auto rate = [&](double c) {
        double s = 0.0;
        for (double qi : q) s += sigmoid(c + scale * qi);
        return s / double(q.size());
    };
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (rate(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

EntityStore generate_synthetic(const SynthConfig& cfg) {
    if (cfg.n_companies < 100)
        throw std::invalid_argument("synth: need at least 100 companies");
    if (!(cfg.positive_rate > 0.0 && cfg.positive_rate < 1.0))
        throw std::invalid_argument("synth: positive_rate must be in (0,1)");

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> stdnorm(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double s = cfg.signal_strength;
    const std::size_t n = cfg.n_companies;

    // Hidden quality and the calibrated success draw.
    std::vector<double> q(n);
    for (double& v : q) v = stdnorm(rng);
    double intercept = calibrate_intercept(q, 4.0 * s, cfg.positive_rate);
    std::vector<Role> role(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (unif(rng) < sigmoid(intercept + 4.0 * s * q[i]))
            role[i] = Role::positive;
        else
            role[i] = unif(rng) < 0.25 ? Role::undecided : Role::negative;
    }

    // Investor pool ordered by descending quality; better companies tend
    // to draw from the top, so co-investment patterns carry the signal.
    std::size_t n_inv = std::max<std::size_t>(20, n / 15);
    std::vector<Investor> investors(n_inv);
    for (std::size_t j = 0; j < n_inv; ++j) {
        Investor& v = investors[j];
        v.uuid = "inv" + zero_pad(j, 5);
        v.name = "Fund " + zero_pad(j, 5);
        v.type = j % 4 == 0 ? "private_equity_firm" : "venture_capital";
        v.investor_types = {v.type};
        std::size_t loc = j % std::size(kCities);
        v.country_code = kCountries[j % std::size(kCountries)];
        v.region = kRegions[loc];
        v.city = kCities[loc];
        v.has_twitter = j % 3 != 0;
        v.has_linkedin = j % 2 == 0;
        v.has_facebook = j % 5 == 0;
    }

    std::vector<std::string> groups(
        UniverseConfig::default_category_groups().begin(),
        UniverseConfig::default_category_groups().end());

    std::vector<Company> companies;
    std::vector<FundingRound> rounds;
    std::vector<Ipo> ipos;
    std::vector<Acquisition> acquisitions;
    std::vector<Person> people;
    std::vector<Degree> degrees;
    std::vector<Job> jobs;
    std::vector<Investment> investments;
    std::vector<std::int64_t> inv_round_count(n_inv, 0);
    std::vector<Usd> inv_total_funding(n_inv, 0);

    auto pick_investors = [&](double quality, std::size_t k) {
        std::vector<std::size_t> out;
        for (std::size_t tries = 0; tries < 4 * k && out.size() < k; ++tries) {
            // Phi(-(q + noise)) maps high quality to low (top) indices.
            double z = 1.5 * quality * s + 0.6 * stdnorm(rng);
            double u = 0.5 * std::erfc(z / std::sqrt(2.0));
            auto idx = std::size_t(std::min(double(n_inv) - 1.0,
                                            std::floor(u * double(n_inv))));
            if (std::find(out.begin(), out.end(), idx) == out.end())
                out.push_back(idx);
        }
        return out;
    };

    for (std::size_t i = 0; i < n; ++i) {
        Company c;
        c.uuid = "c" + zero_pad(i, 6);
        c.name = "Synthco " + zero_pad(i, 6);
        Role r = role[i];
        double qi = q[i];

        switch (r) {
            case Role::positive:
                c.founded_on = uniform_date(rng, Date::from_ymd(2002, 1, 1),
                                            Date::from_ymd(2012, 12, 31));
                break;
            case Role::negative:
                c.founded_on = uniform_date(rng, Date::from_ymd(2002, 1, 1),
                                            Date::from_ymd(2013, 6, 30));
                break;
            case Role::undecided:
                c.founded_on = uniform_date(rng, Date::from_ymd(2011, 1, 1),
                                            Date::from_ymd(2018, 6, 30));
                break;
        }

        // Location mildly follows quality (USA-heavy at the top).
        std::size_t ci = unif(rng) < clamp01(0.35 + 0.25 * s * qi)
                             ? 0
                             : 1 + std::size_t(unif(rng) *
                                               (std::size(kCountries) - 1));
        ci = std::min(ci, std::size(kCountries) - 1);
        c.country_code = kCountries[ci];
        std::size_t li = std::size_t(unif(rng) * std::size(kCities));
        c.region = kRegions[li];
        c.city = kCities[li];

        std::size_t g1 = std::size_t(unif(rng) * double(groups.size()));
        c.category_groups_list = {groups[g1]};
        if (unif(rng) < 0.5) {
            std::size_t g2 = std::size_t(unif(rng) * double(groups.size()));
            if (g2 != g1) c.category_groups_list.push_back(groups[g2]);
        }
        for (const auto& g : c.category_groups_list) {
            c.category_list.push_back(g + " Platform");
            if (unif(rng) < 0.4) c.category_list.push_back(g + " Analytics");
        }
        c.status = CompanyStatus::operating;

        // ---- funding ladder ----
        struct PlannedRound {
            Date date;
            RoundType type;
            std::optional<Usd> raised;
            std::optional<Usd> post_money;
        };
        std::vector<PlannedRound> planned;
        Date rd = c.founded_on->plus_days(
            180 + std::int32_t(unif(rng) * 540));  // 0.5 - 2 years in
        std::size_t stages;
        switch (r) {
            case Role::positive:
                stages = 3 + std::size_t(unif(rng) * 5.0);
                break;
            case Role::negative:
                stages = 1 + std::size_t(unif(rng) * 2.5);
                break;
            default:
                stages = std::size(kLadder);  // bounded by the date loop
        }
        Date neg_cap = Date::from_ymd(2015, 12, 1);
        std::optional<Date> success_date;
        if (r == Role::positive) {
            success_date = c.founded_on->plus_days(
                std::int32_t((4.0 + 5.0 * unif(rng)) * 365.25));
            if (*success_date >= cfg.snapshot.plus_days(-90))
                success_date = cfg.snapshot.plus_days(-90);
        }

        Usd total_raised = 0;
        for (std::size_t j = 0; j < stages && j < std::size(kLadder); ++j) {
            if (r == Role::negative && rd > neg_cap) break;
            if (r == Role::positive && success_date && rd >= *success_date)
                break;
            if (rd >= cfg.snapshot.plus_days(-30)) break;
            PlannedRound p;
            p.date = rd;
            p.type = kLadder[j];
            double amount = 1.2e6 * std::pow(2.4, double(j)) *
                            std::exp(0.8 * s * qi + 0.3 * stdnorm(rng));
            p.raised = Usd(std::max(50'000.0, amount));
            total_raised += *p.raised;
            if (j >= 1 && unif(rng) < 0.7) {
                double post = double(*p.raised) * (4.0 + 4.0 * unif(rng));
                if (r == Role::negative) post = std::min(post, 9.0e7);
                if (r == Role::undecided) post = std::min(post, 8.5e8);
                p.post_money = Usd(post);
            }
            planned.push_back(p);
            rd = rd.plus_days(240 + std::int32_t(unif(rng) * 400));
        }
        if (planned.empty()) {
            // every company gets at least a seed round
            PlannedRound p;
            p.date = std::min(c.founded_on->plus_days(200),
                              r == Role::negative ? neg_cap
                                                  : cfg.snapshot.plus_days(-60));
            p.type = RoundType::seed;
            p.raised = Usd(500'000 + std::int64_t(unif(rng) * 1'500'000));
            total_raised += *p.raised;
            planned.push_back(p);
        }

        // Undecided companies stay visibly alive near the snapshot.
        if (r == Role::undecided &&
            planned.back().date < Date::from_ymd(2020, 7, 1)) {
            PlannedRound p;
            p.date = uniform_date(rng, Date::from_ymd(2020, 7, 1),
                                  cfg.snapshot.plus_days(-30));
            p.type = kLadder[std::min(planned.size(), std::size(kLadder) - 1)];
            p.raised = Usd(double(*planned.back().raised) * 1.8);
            total_raised += *p.raised;
            planned.push_back(p);
        }

        // ---- success event ----
        if (r == Role::positive) {
            double kind_draw = unif(rng);
            if (kind_draw < 0.6) {
                // unicorn round at the success date
                PlannedRound p;
                p.date = *success_date;
                p.type = kLadder[std::min(planned.size(),
                                          std::size(kLadder) - 1)];
                p.raised = Usd(2.0e8 * (1.0 + unif(rng)));
                p.post_money =
                    Usd(1.2e9 * std::exp(1.2 * unif(rng)));
                total_raised += *p.raised;
                planned.push_back(p);
            } else if (kind_draw < 0.8) {
                Ipo ipo;
                ipo.company_uuid = c.uuid;
                ipo.went_public_on = *success_date;
                ipo.valuation_usd = Usd(6.0e8 * (1.0 + 6.0 * unif(rng)));
                ipo.money_raised_usd = Usd(1.2e8 * (1.0 + 2.0 * unif(rng)));
                ipos.push_back(ipo);
                c.status = CompanyStatus::ipo;
            } else {
                Acquisition a;
                a.acquiree_uuid = c.uuid;
                a.acquirer_uuid = "c" + zero_pad((i + 1) % n, 6);
                a.announced_on = *success_date;
                a.price_usd = std::max<Usd>(Usd(2.0e8 * (1.0 + 4.0 * unif(rng))),
                                            total_raised * 4);
                acquisitions.push_back(a);
                c.status = CompanyStatus::acquired;
            }
        } else if (r == Role::negative && unif(rng) < 0.6) {
            c.status = CompanyStatus::closed;
        }

        for (const PlannedRound& p : planned) {
            FundingRound fr;
            fr.uuid = "r" + zero_pad(rounds.size(), 7);
            fr.company_uuid = c.uuid;
            fr.investment_type = p.type;
            fr.announced_on = p.date;
            fr.raised_amount_usd = p.raised;
            fr.post_money_valuation_usd = p.post_money;
            auto chosen =
                pick_investors(qi, 1 + std::size_t(unif(rng) *
                                                   (2.0 + 2.0 * clamp01(
                                                              0.5 + s * qi))));
            fr.investor_count = int(chosen.size());
            for (std::size_t t = 0; t < chosen.size(); ++t) {
                Investment inv;
                inv.round_uuid = fr.uuid;
                inv.investor_uuid = investors[chosen[t]].uuid;
                inv.is_lead = t == 0;
                investments.push_back(inv);
                ++inv_round_count[chosen[t]];
                if (fr.raised_amount_usd)
                    inv_total_funding[chosen[t]] += *fr.raised_amount_usd;
            }
            if (!chosen.empty())
                fr.lead_investor_uuids = {investors[chosen[0]].uuid};
            rounds.push_back(std::move(fr));
        }

        // ---- founders ----
        std::size_t n_founders =
            1 + std::size_t(unif(rng) < 0.45) +
            std::size_t(unif(rng) < clamp01(0.15 + 0.15 * s * qi));
        for (std::size_t f = 0; f < n_founders; ++f) {
            Person p;
            p.uuid = c.uuid + "_p" + std::to_string(f);
            p.name = "Founder " + zero_pad(i, 6) + "-" + std::to_string(f);
            p.gender = kGenders[unif(rng) < 0.8 ? 0 : 1];
            p.country_code = c.country_code;
            p.region = c.region;
            p.city = c.city;
            p.has_linkedin = unif(rng) < clamp01(0.5 + 0.2 * s * qi);
            p.has_twitter = unif(rng) < clamp01(0.3 + 0.15 * s * qi);
            p.has_facebook = unif(rng) < 0.3;
            p.featured_job_organization_uuid = c.uuid;

            Job founder_job;
            founder_job.person_uuid = p.uuid;
            founder_job.org_uuid = c.uuid;
            founder_job.started_on = c.founded_on;
            founder_job.title = "Founder";
            founder_job.is_founder = true;
            jobs.push_back(founder_job);

            int n_degrees = int(std::clamp(
                std::floor(1.2 + 1.2 * s * qi + 0.7 * stdnorm(rng)), 0.0,
                4.0));
            for (int g = 0; g < n_degrees; ++g) {
                Degree d;
                d.person_uuid = p.uuid;
                // top institutions cluster at high quality
                double z = qi * s + stdnorm(rng);
                double u = 0.5 * std::erfc(z / std::sqrt(2.0));
                auto idx = std::size_t(std::min(
                    double(std::size(kInstitutions)) - 1.0,
                    std::floor(u * double(std::size(kInstitutions)))));
                d.institution_name = kInstitutions[idx];
                d.degree_type =
                    kDegreeTypes[std::size_t(unif(rng) *
                                             std::size(kDegreeTypes))];
                d.subject =
                    kSubjects[std::size_t(unif(rng) * std::size(kSubjects))];
                d.is_completed = unif(rng) < 0.8;
                d.completed_on = c.founded_on->plus_days(
                    -std::int32_t(365 * (2 + unif(rng) * 12)));
                degrees.push_back(std::move(d));
            }

            int n_jobs = int(std::clamp(
                std::floor(0.7 + 1.0 * s * qi + 0.8 * stdnorm(rng)), 0.0,
                5.0));
            for (int j = 0; j < n_jobs && i > 0; ++j) {
                Job job;
                job.person_uuid = p.uuid;
                std::size_t other = std::size_t(unif(rng) * double(i));
                job.org_uuid = "c" + zero_pad(other, 6);
                // capped so stray jobs never register as late activity
                // at the company they point to
                Date started = std::min(
                    c.founded_on->plus_days(
                        -std::int32_t(365 * (1 + unif(rng) * 8))),
                    Date::from_ymd(2015, 6, 30));
                job.started_on = started;
                job.ended_on =
                    started.plus_days(200 + std::int32_t(unif(rng) * 700));
                job.title = "Engineer";
                jobs.push_back(std::move(job));
            }
            people.push_back(std::move(p));
        }
        companies.push_back(std::move(c));
    }

    for (std::size_t j = 0; j < n_inv; ++j) {
        investors[j].investment_count = inv_round_count[j];
        investors[j].total_funding_usd = inv_total_funding[j];
    }

    return EntityStore::from_entities(
        cfg.snapshot, std::move(companies), std::move(rounds), std::move(ipos),
        std::move(acquisitions), std::move(people), std::move(degrees),
        std::move(jobs), std::move(investors), std::move(investments));
}

}  // namespace vc
