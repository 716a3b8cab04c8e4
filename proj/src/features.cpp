#include "vc/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

namespace vc {

void FeatureMap::merge(const FeatureMap& other) {
    for (const auto& [k, v] : other.categoricals) categoricals[k] = v;
    for (const auto& [k, v] : other.numerics) numerics[k] = v;
}

int CategoricalField::code_of(const std::string& value) const {
    auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), value);
    if (it == vocabulary.end() || *it != value) return 0;
    return int(it - vocabulary.begin()) + 1;
}

double aggregate_median(std::vector<double> values, bool integral) {
    if (values.empty()) throw std::invalid_argument("median of empty list");
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    if (integral) return values[n / 2 - 1];  // lower middle
    return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

namespace {

/// Mode with ties broken by the lexicographically smallest value.
std::string mode_of(const std::vector<std::string>& values) {
    std::map<std::string, int> counts;
    for (const auto& v : values)
        if (!v.empty()) ++counts[v];
    std::string best;
    int best_count = 0;
    for (const auto& [v, c] : counts) {
        if (c > best_count) {  // map order makes ties pick the smallest
            best = v;
            best_count = c;
        }
    }
    return best;
}

void aggregate_cat(FeatureMap& out, const std::string& name,
                   const std::vector<std::string>& values) {
    out.set_cat(name, mode_of(values));
}

void aggregate_num(FeatureMap& out, const std::string& name,
                   const std::vector<double>& values, bool integral) {
    if (values.empty())
        out.set_num(name, std::nullopt);
    else
        out.set_num(name, aggregate_median(values, integral));
}

}  // namespace

FeatureMap founder_features(const EntityStore& store, const Uuid& company,
                            Date as_of) {
    FeatureMap out;
    const auto& founders = store.founders_of(company);

    std::vector<std::string> countries, regions, cities, institutions,
        degree_types, subjects, genders;
    std::vector<double> twitter, linkedin, facebook, completed_share,
        num_degrees, num_startups, num_jobs;

    for (const Person* p : founders) {
        countries.push_back(p->country_code);
        regions.push_back(p->region);
        cities.push_back(p->city);
        genders.push_back(p->gender);
        twitter.push_back(p->has_twitter ? 1.0 : 0.0);
        linkedin.push_back(p->has_linkedin ? 1.0 : 0.0);
        facebook.push_back(p->has_facebook ? 1.0 : 0.0);

        std::vector<std::string> insts, types, subs;
        int degrees = 0, completed = 0;
        for (const Degree* d : store.degrees_of(p->uuid)) {
            if (d->completed_on && *d->completed_on >= as_of) continue;
            ++degrees;
            if (d->is_completed) ++completed;
            insts.push_back(d->institution_name);
            types.push_back(d->degree_type);
            subs.push_back(d->subject);
        }
        num_degrees.push_back(degrees);
        if (degrees > 0)
            completed_share.push_back(double(completed) / degrees);
        if (auto m = mode_of(insts); !m.empty()) institutions.push_back(m);
        if (auto m = mode_of(types); !m.empty()) degree_types.push_back(m);
        if (auto m = mode_of(subs); !m.empty()) subjects.push_back(m);

        int startups = 0;
        for (const auto& [c, founded] : store.founded_companies_of(p->uuid)) {
            if (c->uuid == company) continue;  // the company itself
            if (founded < as_of) ++startups;
        }
        num_startups.push_back(startups);

        int jobs = 0;
        for (const Job* j : store.jobs_of(p->uuid)) {
            if (j->is_founder && j->org_uuid == company) continue;
            if (j->started_on && *j->started_on < as_of) ++jobs;
        }
        num_jobs.push_back(jobs);
    }

    if (founders.empty()) {
        out.set_num("f_number_of_founders", std::nullopt);
        return out;
    }

    aggregate_cat(out, "f_country", countries);
    aggregate_cat(out, "f_region", regions);
    aggregate_cat(out, "f_city", cities);
    aggregate_cat(out, "f_gender", genders);
    aggregate_cat(out, "f_institution", institutions);
    aggregate_cat(out, "f_degree_type", degree_types);
    aggregate_cat(out, "f_subject", subjects);
    aggregate_num(out, "f_has_twitter", twitter, true);
    aggregate_num(out, "f_has_linkedin", linkedin, true);
    aggregate_num(out, "f_has_facebook", facebook, true);
    aggregate_num(out, "f_is_completed", completed_share, false);
    aggregate_num(out, "f_num_degrees", num_degrees, false);
    aggregate_num(out, "f_num_last_startups", num_startups, false);
    aggregate_num(out, "f_num_last_jobs", num_jobs, false);
    out.set_num("f_number_of_founders", double(founders.size()));
    return out;
}

FeatureMap investor_features(const EntityStore& store, const Uuid& company,
                             Date as_of) {
    FeatureMap out;
    auto history = store.funding_history(company, as_of);

    std::set<Uuid> investor_ids;
    for (const FundingRound* r : history)
        for (const Investment* inv : store.investments_in(r->uuid))
            investor_ids.insert(inv->investor_uuid);

    if (investor_ids.empty()) {
        out.set_num("i_num_full", history.empty()
                                      ? std::optional<double>()
                                      : std::optional<double>(0.0));
        return out;
    }

    std::vector<std::string> types, type_lists, countries, regions, cities;
    std::vector<double> inv_counts, total_fundings, twitter, linkedin, facebook;
    for (const Uuid& id : investor_ids) {
        const Investor* v = store.find_investor(id);
        if (!v) continue;
        types.push_back(v->type);
        std::string joined;
        for (const auto& t : v->investor_types)
            joined += (joined.empty() ? "" : ",") + t;
        type_lists.push_back(joined);
        countries.push_back(v->country_code);
        regions.push_back(v->region);
        cities.push_back(v->city);
        twitter.push_back(v->has_twitter ? 1.0 : 0.0);
        linkedin.push_back(v->has_linkedin ? 1.0 : 0.0);
        facebook.push_back(v->has_facebook ? 1.0 : 0.0);

        // as-of activity reconstructed from dated investments, not the
        // snapshot-level aggregates on the investor record
        int count = 0;
        double funding = 0;
        for (const FundingRound* r : store.rounds_of_investor(id)) {
            if (r->announced_on >= as_of) continue;
            ++count;
            if (r->raised_amount_usd) funding += double(*r->raised_amount_usd);
        }
        inv_counts.push_back(count);
        total_fundings.push_back(funding);
    }

    aggregate_cat(out, "i_type", types);
    aggregate_cat(out, "i_investor_types", type_lists);
    aggregate_cat(out, "i_country", countries);
    aggregate_cat(out, "i_region", regions);
    aggregate_cat(out, "i_city", cities);
    aggregate_num(out, "i_investment_count", inv_counts, false);
    aggregate_num(out, "i_total_funding_usd", total_fundings, false);
    aggregate_num(out, "i_has_twitter", twitter, true);
    aggregate_num(out, "i_has_linkedin", linkedin, true);
    aggregate_num(out, "i_has_facebook", facebook, true);
    out.set_num("i_num_full", double(investor_ids.size()));
    return out;
}

FeatureMap round_features(const EntityStore& store, const Uuid& company,
                          Date as_of) {
    FeatureMap out;
    auto history = store.funding_history(company, as_of);

    auto aggregate = [&](const char* prefix, auto getter) {
        std::vector<double> values;
        for (const FundingRound* r : history) {
            auto v = getter(r);
            if (v) values.push_back(double(*v));
        }
        std::string p(prefix);
        if (values.empty()) {
            out.set_num(p + "_sum", std::nullopt);
            out.set_num(p + "_mean", std::nullopt);
            out.set_num(p + "_max", std::nullopt);
            return;
        }
        double sum = 0, mx = values.front();
        for (double v : values) {
            sum += v;
            mx = std::max(mx, v);
        }
        out.set_num(p + "_sum", sum);
        out.set_num(p + "_mean", sum / double(values.size()));
        out.set_num(p + "_max", mx);
    };
    aggregate("r_raised", [](const FundingRound* r) { return r->raised_amount_usd; });
    aggregate("r_investor_count", [](const FundingRound* r) {
        return r->investor_count ? std::optional<Usd>(*r->investor_count)
                                 : std::nullopt;
    });
    aggregate("r_post_money", [](const FundingRound* r) {
        return r->post_money_valuation_usd;
    });
    out.set_num("r_num_rounds", history.empty()
                                    ? std::optional<double>()
                                    : std::optional<double>(double(history.size())));

    const Company* c = store.find_company(company);
    out.set_cat("c_country", c->country_code);
    out.set_cat("c_region", c->region);
    out.set_cat("c_city", c->city);

    if (!history.empty()) {
        const FundingRound* latest = history.back();
        out.set_cat("r_latest_type",
                    std::string(round_type_name(latest->investment_type)));
        if (!latest->lead_investor_uuids.empty()) {
            const auto& uuid = latest->lead_investor_uuids.front();
            const Investor* lead = store.find_investor(uuid);
            out.set_cat("r_lead_investor", lead ? lead->name : uuid);
        }
    }
    return out;
}

FeatureMap company_feature_map(const EntityStore& store, const Uuid& company,
                               Date as_of) {
    FeatureMap map = founder_features(store, company, as_of);
    map.merge(investor_features(store, company, as_of));
    map.merge(round_features(store, company, as_of));
    return map;
}

std::vector<std::string> company_tags(const Company& company) {
    std::set<std::string> tags(company.category_list.begin(),
                               company.category_list.end());
    tags.insert(company.category_groups_list.begin(),
                company.category_groups_list.end());
    return {tags.begin(), tags.end()};
}

std::vector<double> tag_row(const Company& company,
                            const std::vector<std::string>& vocabulary) {
    std::vector<double> row(vocabulary.size(), 0.0);
    for (const auto& tag : company_tags(company)) {
        auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), tag);
        if (it != vocabulary.end() && *it == tag)
            row[std::size_t(it - vocabulary.begin())] = 1.0;
    }
    return row;
}

std::vector<std::string> build_tag_vocabulary(
    const EntityStore& store, const std::vector<Uuid>& companies) {
    std::set<std::string> vocab;
    for (const Uuid& id : companies) {
        const Company* c = store.find_company(id);
        if (!c) continue;
        for (auto& t : company_tags(*c)) vocab.insert(std::move(t));
    }
    return {vocab.begin(), vocab.end()};
}

FeatureSchema fit_encoders(const std::vector<FeatureMap>& rows,
                           std::size_t vocabulary_cap) {
    if (rows.empty()) throw std::invalid_argument("fit_encoders: zero rows");
    FeatureSchema schema;
    schema.vocabulary_cap = vocabulary_cap;

    std::map<std::string, std::map<std::string, int>> cat_counts;
    std::map<std::string, std::pair<double, double>> num_sums;  // sum, sum2
    std::map<std::string, int> num_counts;
    for (const auto& row : rows) {
        for (const auto& [name, value] : row.categoricals)
            ++cat_counts[name][value];
        for (const auto& [name, value] : row.numerics) {
            if (!num_counts.count(name)) num_counts[name] = 0;
            if (value) {
                auto& [s, s2] = num_sums[name];
                s += *value;
                s2 += *value * *value;
                ++num_counts[name];
            }
        }
    }

    for (const auto& [name, counts] : cat_counts) {
        CategoricalField field;
        field.name = name;
        if (counts.size() <= vocabulary_cap) {
            for (const auto& [v, _] : counts) field.vocabulary.push_back(v);
        } else {
            // keep the most frequent, ties to the smaller value
            std::vector<std::pair<int, std::string>> by_freq;
            for (const auto& [v, c] : counts) by_freq.emplace_back(-c, v);
            std::sort(by_freq.begin(), by_freq.end());
            by_freq.resize(vocabulary_cap);
            for (auto& [_, v] : by_freq) field.vocabulary.push_back(std::move(v));
            std::sort(field.vocabulary.begin(), field.vocabulary.end());
        }
        schema.categorical_fields.push_back(std::move(field));
    }

    for (const auto& [name, n] : num_counts) {
        if (n == 0) continue;  // all missing
        auto [s, s2] = num_sums[name];
        double mean = s / n;
        double var = s2 / n - mean * mean;
        double std = var > 0 ? std::sqrt(var) : 0.0;
        if (std <= 0.0) continue;  // constant column carries nothing
        schema.numeric_fields.push_back({name, mean, std});
    }
    return schema;
}

FeatureVector encode(const FeatureSchema& schema, const FeatureMap& map,
                     const NmfModel& tag_model,
                     const std::vector<double>& company_tag_row, Date as_of) {
    FeatureVector fv;
    fv.as_of = as_of;
    fv.categorical_codes.reserve(schema.categorical_fields.size());
    for (const auto& field : schema.categorical_fields) {
        auto it = map.categoricals.find(field.name);
        fv.categorical_codes.push_back(
            it == map.categoricals.end() ? 0 : field.code_of(it->second));
    }
    fv.numeric_values.reserve(schema.numeric_fields.size());
    fv.missing_mask.reserve(schema.numeric_fields.size());
    for (const auto& field : schema.numeric_fields) {
        auto it = map.numerics.find(field.name);
        if (it == map.numerics.end() || !it->second) {
            fv.numeric_values.push_back(0.0);
            fv.missing_mask.push_back(1.0);
        } else {
            fv.numeric_values.push_back((*it->second - field.mean) / field.std);
            fv.missing_mask.push_back(0.0);
        }
    }
    fv.tag_embedding = nmf_transform(tag_model, company_tag_row);
    if (fv.tag_embedding.size() != schema.tag_embedding_dim)
        throw std::invalid_argument("encode: tag model rank mismatch");
    return fv;
}

void FeatureSchema::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "feature-schema v1\n";
    out << tag_embedding_dim << ' ' << vocabulary_cap << '\n';
    out << categorical_fields.size() << '\n';
    for (const auto& f : categorical_fields) {
        out << f.name << '\n' << f.vocabulary.size() << '\n';
        for (const auto& v : f.vocabulary) out << v << '\n';
    }
    out << numeric_fields.size() << '\n';
    out.precision(17);
    for (const auto& f : numeric_fields)
        out << f.name << '\n' << f.mean << ' ' << f.std << '\n';
}

FeatureSchema FeatureSchema::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::string line;
    std::getline(in, line);
    if (line != "feature-schema v1")
        throw std::runtime_error("bad schema file: " + path.string());
    FeatureSchema s;
    std::size_t n_cat, n_num;
    in >> s.tag_embedding_dim >> s.vocabulary_cap >> n_cat;
    std::getline(in, line);
    for (std::size_t i = 0; i < n_cat; ++i) {
        CategoricalField f;
        std::getline(in, f.name);
        std::size_t n;
        in >> n;
        std::getline(in, line);
        f.vocabulary.resize(n);
        for (auto& v : f.vocabulary) std::getline(in, v);
        s.categorical_fields.push_back(std::move(f));
    }
    in >> n_num;
    std::getline(in, line);
    for (std::size_t i = 0; i < n_num; ++i) {
        NumericField f;
        std::getline(in, f.name);
        in >> f.mean >> f.std;
        std::getline(in, line);
        s.numeric_fields.push_back(std::move(f));
    }
    if (!in) throw std::runtime_error("truncated schema file: " + path.string());
    return s;
}

}  // namespace vc
