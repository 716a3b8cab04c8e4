#include "vc/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "vc/csv.hpp"
#include "vc/features.hpp"

namespace vc {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---- investor feature construction ----

FeatureMap investor_feature_map(const EntityStore& store, const Investor& inv,
                                Date as_of) {
    FeatureMap map;
    map.set_cat("type", inv.type);
    map.set_cat("country", inv.country_code);
    map.set_cat("region", inv.region);
    map.set_cat("city", inv.city);
    if (!inv.investor_types.empty()) {
        auto kinds = inv.investor_types;
        std::sort(kinds.begin(), kinds.end());
        map.set_cat("investor_kind", kinds.front());
    }

    // Activity counted strictly before as_of, from dated participations.
    double count = 0.0, total = 0.0;
    bool any_raised = false;
    std::optional<Date> first;
    for (const FundingRound* r : store.rounds_of_investor(inv.uuid)) {
        if (!(r->announced_on < as_of)) continue;
        count += 1.0;
        if (!first) first = r->announced_on;
        if (r->raised_amount_usd) {
            total += static_cast<double>(*r->raised_amount_usd);
            any_raised = true;
        }
    }
    map.set_num("investment_count", count);
    map.set_num("total_raised_usd",
                any_raised ? std::optional<double>(total) : std::nullopt);
    map.set_num("years_active",
                first ? std::optional<double>((as_of - *first) / 365.25)
                      : std::nullopt);
    map.set_num("has_twitter", inv.has_twitter ? 1.0 : 0.0);
    map.set_num("has_linkedin", inv.has_linkedin ? 1.0 : 0.0);
    map.set_num("has_facebook", inv.has_facebook ? 1.0 : 0.0);
    return map;
}

struct AutoLayout {
    // one-hot block sizes per categorical field (vocab + unknown slot)
    std::vector<std::size_t> cat_block;
    std::size_t n_num = 0;  // z-values followed by masks
    std::size_t input_dim = 0;

    explicit AutoLayout(const FeatureSchema& schema) {
        for (const auto& f : schema.categorical_fields)
            cat_block.push_back(f.vocabulary.size() + 1);
        n_num = schema.numeric_fields.size();
        input_dim = 2 * n_num;
        for (std::size_t b : cat_block) input_dim += b;
    }
};

std::vector<double> autoencoder_input(const AutoLayout& layout,
                                      const FeatureVector& fv) {
    std::vector<double> x;
    x.reserve(layout.input_dim);
    for (std::size_t f = 0; f < layout.cat_block.size(); ++f) {
        std::vector<double> block(layout.cat_block[f], 0.0);
        block[static_cast<std::size_t>(fv.categorical_codes[f])] = 1.0;
        x.insert(x.end(), block.begin(), block.end());
    }
    x.insert(x.end(), fv.numeric_values.begin(), fv.numeric_values.end());
    x.insert(x.end(), fv.missing_mask.begin(), fv.missing_mask.end());
    return x;
}

/// Reconstruction loss on one sample: softmax cross-entropy per
/// categorical block over its logits, squared error on the numeric tail
/// (z-values and masks alike). Fills d(loss)/d(logits) when grad given.
double reconstruction_loss(const AutoLayout& layout,
                           std::span<const double> target,
                           std::span<const double> output,
                           std::span<double> grad = {}) {
    double loss = 0.0;
    std::size_t at = 0;
    for (std::size_t b : layout.cat_block) {
        double mx = output[at];
        for (std::size_t j = 1; j < b; ++j) mx = std::max(mx, output[at + j]);
        double z = 0.0;
        for (std::size_t j = 0; j < b; ++j) z += std::exp(output[at + j] - mx);
        double logz = std::log(z) + mx;
        for (std::size_t j = 0; j < b; ++j) {
            double p = std::exp(output[at + j] - logz);
            if (target[at + j] > 0.5) loss += logz - output[at + j];
            if (!grad.empty()) grad[at + j] = p - target[at + j];
        }
        at += b;
    }
    for (; at < layout.input_dim; ++at) {
        double d = output[at] - target[at];
        loss += d * d;
        if (!grad.empty()) grad[at] = 2.0 * d;
    }
    return loss;
}

}  // namespace

const std::vector<double>* InvestorEmbeddings::latent_of(
    const Uuid& uuid) const {
    auto it = std::lower_bound(uuids.begin(), uuids.end(), uuid);
    if (it == uuids.end() || *it != uuid) return nullptr;
    return &latents[static_cast<std::size_t>(it - uuids.begin())];
}

InvestorEmbeddings train_investor_autoencoder(const EntityStore& store,
                                              Date as_of,
                                              const AutoencoderConfig& cfg) {
    if (cfg.latent_dim == 0)
        throw std::invalid_argument("autoencoder: latent_dim must be >= 1");
    const auto& investors = store.investors();
    if (investors.size() < cfg.latent_dim)
        throw std::invalid_argument(
            "autoencoder: fewer investors than latent dimensions");

    std::vector<FeatureMap> maps;
    maps.reserve(investors.size());
    for (const Investor& inv : investors)
        maps.push_back(investor_feature_map(store, inv, as_of));
    FeatureSchema schema = fit_encoders(maps);
    schema.tag_embedding_dim = 0;
    AutoLayout layout(schema);

    NmfModel no_tags;
    std::vector<double> empty_row;
    std::vector<std::vector<double>> inputs;
    inputs.reserve(maps.size());
    for (const FeatureMap& map : maps)
        inputs.push_back(autoencoder_input(
            layout, encode(schema, map, no_tags, empty_row, as_of)));

    std::vector<std::size_t> enc_sizes{layout.input_dim};
    enc_sizes.insert(enc_sizes.end(), cfg.hidden_sizes.begin(),
                     cfg.hidden_sizes.end());
    enc_sizes.push_back(cfg.latent_dim);
    std::vector<std::size_t> dec_sizes(enc_sizes.rbegin(), enc_sizes.rend());

    std::mt19937_64 init_rng(cfg.seed);
    Mlp encoder(enc_sizes, init_rng);
    Mlp decoder(dec_sizes, init_rng);
    AdamOptimizer enc_opt(encoder.param_count(), cfg.learning_rate);
    AdamOptimizer dec_opt(decoder.param_count(), cfg.learning_rate);

    InvestorEmbeddings out;
    out.as_of = as_of;
    std::vector<std::size_t> order(inputs.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> enc_grads(encoder.param_count());
    std::vector<double> dec_grads(decoder.param_count());
    Mlp::Workspace enc_ws, dec_ws;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::mt19937_64 shuffle_rng(cfg.seed * 0x9e3779b97f4a7c15ULL +
                                    static_cast<std::uint64_t>(epoch) + 1);
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        double epoch_loss = 0.0;

        for (std::size_t begin = 0; begin < order.size();
             begin += cfg.batch_size) {
            std::size_t end = std::min(begin + cfg.batch_size, order.size());
            double inv_n = 1.0 / static_cast<double>(end - begin);
            std::fill(enc_grads.begin(), enc_grads.end(), 0.0);
            std::fill(dec_grads.begin(), dec_grads.end(), 0.0);

            for (std::size_t k = begin; k < end; ++k) {
                const std::vector<double>& x = inputs[order[k]];
                auto latent = encoder.forward(x, enc_ws);
                auto output = decoder.forward(latent, dec_ws);
                std::vector<double> out_grad(layout.input_dim);
                double loss = reconstruction_loss(layout, x, output, out_grad);
                epoch_loss += loss;
                if (!std::isfinite(loss))
                    throw std::runtime_error(
                        "autoencoder: training diverged (non-finite loss)");
                for (double& g : out_grad) g *= inv_n;
                std::vector<double> latent_grad(cfg.latent_dim);
                decoder.backward(dec_ws, out_grad, dec_grads, latent_grad);
                encoder.backward(enc_ws, latent_grad, enc_grads);
            }
            enc_opt.step(encoder.params(), enc_grads);
            dec_opt.step(decoder.params(), dec_grads);
        }
        out.epoch_loss.push_back(epoch_loss /
                                 static_cast<double>(inputs.size()));
    }

    // Store order is canonical (sorted by uuid), so the aligned vectors
    // stay binary-searchable.
    for (std::size_t i = 0; i < investors.size(); ++i) {
        out.uuids.push_back(investors[i].uuid);
        out.names.push_back(investors[i].name);
        auto latent = encoder.forward(inputs[i], enc_ws);
        out.latents.emplace_back(latent.begin(), latent.end());
    }
    return out;
}

std::vector<InvestorScore> score_investors(const InvestorEmbeddings& embeddings,
                                           const std::set<Uuid>& expert_set) {
    if (expert_set.empty())
        throw std::invalid_argument("score_investors: empty expert set");
    if (embeddings.latents.empty())
        throw std::invalid_argument("score_investors: no embeddings");
    std::size_t dim = embeddings.latents.front().size();
    std::vector<double> centroid(dim, 0.0);
    for (const Uuid& uuid : expert_set) {
        const std::vector<double>* latent = embeddings.latent_of(uuid);
        if (!latent)
            throw std::invalid_argument("score_investors: expert " + uuid +
                                        " has no embedding");
        for (std::size_t j = 0; j < dim; ++j) centroid[j] += (*latent)[j];
    }
    for (double& c : centroid) c /= static_cast<double>(expert_set.size());

    std::vector<InvestorScore> scores;
    scores.reserve(embeddings.uuids.size());
    for (std::size_t i = 0; i < embeddings.uuids.size(); ++i) {
        InvestorScore s;
        s.investor_uuid = embeddings.uuids[i];
        s.name = embeddings.names[i];
        s.latent_vector = embeddings.latents[i];
        double d2 = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            double d = s.latent_vector[j] - centroid[j];
            d2 += d * d;
        }
        s.distance_to_centroid = std::sqrt(d2);
        s.score = 1.0 / (1.0 + s.distance_to_centroid);
        scores.push_back(std::move(s));
    }
    std::sort(scores.begin(), scores.end(),
              [](const InvestorScore& a, const InvestorScore& b) {
                  if (a.score != b.score) return a.score > b.score;
                  return a.investor_uuid < b.investor_uuid;
              });
    return scores;
}

std::vector<FounderScore> score_founders(const EntityStore& store,
                                         const UniverseConfig& ucfg,
                                         Date as_of,
                                         const FounderWeights& weights) {
    // Success evidence is as-of-dated: a startup counts as successful
    // only once a qualifying event has happened.
    std::map<Uuid, Date> success_from;
    for (const auto& rec : label_successful(store, ucfg))
        for (const auto& event : rec.events) {
            auto [it, inserted] = success_from.emplace(rec.company_uuid,
                                                       event.date);
            if (!inserted && event.date < it->second) it->second = event.date;
        }

    std::vector<FounderScore> scores;
    for (const Person& p : store.people()) {
        bool is_founder = false;
        for (const Job* job : store.jobs_of(p.uuid))
            if (job->is_founder) {
                is_founder = true;
                break;
            }
        if (!is_founder) continue;

        double startups = 0.0, successful = 0.0, jobs = 0.0, degrees = 0.0;
        for (const auto& [company, founded] :
             store.founded_companies_of(p.uuid)) {
            if (!(founded < as_of)) continue;
            startups += 1.0;
            auto it = success_from.find(company->uuid);
            if (it != success_from.end() && it->second < as_of)
                successful += 1.0;
        }
        for (const Job* job : store.jobs_of(p.uuid)) {
            if (job->is_founder) continue;
            if (job->started_on && *job->started_on < as_of) jobs += 1.0;
        }
        for (const Degree* deg : store.degrees_of(p.uuid)) {
            if (!deg->is_completed) continue;
            if (deg->completed_on && !(*deg->completed_on < as_of)) continue;
            degrees += 1.0;
        }

        FounderScore s;
        s.person_uuid = p.uuid;
        s.name = p.name;
        s.raw_score = weights.startups * startups +
                      weights.successful_startups * successful +
                      weights.jobs * jobs + weights.degrees * degrees;
        scores.push_back(std::move(s));
    }

    if (!scores.empty()) {
        double lo = scores.front().raw_score, hi = lo;
        for (const FounderScore& s : scores) {
            lo = std::min(lo, s.raw_score);
            hi = std::max(hi, s.raw_score);
        }
        for (FounderScore& s : scores)
            s.score = hi > lo ? (s.raw_score - lo) / (hi - lo) : 0.0;
    }
    std::sort(scores.begin(), scores.end(),
              [](const FounderScore& a, const FounderScore& b) {
                  if (a.score != b.score) return a.score > b.score;
                  return a.person_uuid < b.person_uuid;
              });
    return scores;
}

namespace {

std::vector<double> similarity_vector(const FeatureVector& fv) {
    std::vector<double> v;
    v.reserve(fv.numeric_values.size() + fv.missing_mask.size() +
              fv.tag_embedding.size());
    v.insert(v.end(), fv.numeric_values.begin(), fv.numeric_values.end());
    v.insert(v.end(), fv.missing_mask.begin(), fv.missing_mask.end());
    v.insert(v.end(), fv.tag_embedding.begin(), fv.tag_embedding.end());
    return v;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        dot += a[j] * b[j];
        na += a[j] * a[j];
        nb += b[j] * b[j];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

UnicornRecommendations recommend_unicorns(const EntityStore& store,
                                          const UniverseConfig& ucfg,
                                          Date as_of, const UnicornConfig& cfg) {
    UnicornRecommendations out;
    Date band_lo = Date::from_ymd(as_of.year() - cfg.max_age_years,
                                  as_of.month(), as_of.day());
    Date band_hi = Date::from_ymd(as_of.year() - cfg.min_age_years,
                                  as_of.month(), as_of.day());

    std::vector<const Company*> cohort;
    for (const Company& c : store.companies())
        if (c.founded_on && !(*c.founded_on < band_lo) &&
            *c.founded_on < band_hi)
            cohort.push_back(&c);
    if (cohort.empty()) {
        out.warnings.push_back("no companies founded " +
                               std::to_string(cfg.min_age_years) + "-" +
                               std::to_string(cfg.max_age_years) +
                               " years before " + as_of.to_iso());
        return out;
    }

    // A cohort company already is a unicorn when a pre-as_of round
    // crossed the valuation threshold or it appears on the verified list.
    std::vector<bool> is_unicorn(cohort.size(), false);
    std::size_t n_unicorns = 0;
    for (std::size_t i = 0; i < cohort.size(); ++i) {
        if (ucfg.verified_unicorns.count(cohort[i]->uuid)) {
            is_unicorn[i] = true;
        } else {
            for (const FundingRound* r : store.rounds_of(cohort[i]->uuid))
                if (r->announced_on < as_of && r->post_money_valuation_usd &&
                    *r->post_money_valuation_usd > ucfg.unicorn_valuation_min) {
                    is_unicorn[i] = true;
                    break;
                }
        }
        if (is_unicorn[i]) ++n_unicorns;
    }
    if (n_unicorns == 0) {
        out.warnings.push_back("cohort for " + as_of.to_iso() +
                               " contains no unicorns");
        return out;
    }

    std::vector<FeatureMap> maps;
    std::vector<Uuid> uuids;
    for (const Company* c : cohort) {
        maps.push_back(company_feature_map(store, c->uuid, as_of));
        uuids.push_back(c->uuid);
    }
    FeatureSchema schema = fit_encoders(maps);
    auto vocab = build_tag_vocabulary(store, uuids);
    NmfModel tag_model;
    if (vocab.empty()) {
        schema.tag_embedding_dim = 0;
    } else {
        std::size_t rank = std::max<std::size_t>(
            1, std::min({cfg.nmf_rank, cohort.size(), vocab.size()}));
        schema.tag_embedding_dim = rank;
        Mat x(cohort.size(), vocab.size());
        for (std::size_t i = 0; i < cohort.size(); ++i) {
            auto row = tag_row(*cohort[i], vocab);
            for (std::size_t j = 0; j < vocab.size(); ++j) x.at(i, j) = row[j];
        }
        tag_model =
            nmf_fit(x, rank, cfg.nmf_max_iters, cfg.nmf_tol, cfg.seed, vocab)
                .model;
    }

    std::vector<std::vector<double>> vectors;
    for (std::size_t i = 0; i < cohort.size(); ++i)
        vectors.push_back(similarity_vector(encode(
            schema, maps[i], tag_model, tag_row(*cohort[i], vocab), as_of)));

    std::vector<double> centroid(vectors.front().size(), 0.0);
    for (std::size_t i = 0; i < cohort.size(); ++i)
        if (is_unicorn[i])
            for (std::size_t j = 0; j < centroid.size(); ++j)
                centroid[j] += vectors[i][j];
    for (double& c : centroid) c /= static_cast<double>(n_unicorns);

    for (std::size_t i = 0; i < cohort.size(); ++i) {
        if (is_unicorn[i]) continue;
        UnicornRecommendation rec;
        rec.company_uuid = cohort[i]->uuid;
        rec.name = cohort[i]->name;
        rec.similarity = cosine(vectors[i], centroid);
        rec.recommended_on = as_of;
        for (const FundingRound* r : store.rounds_of(cohort[i]->uuid)) {
            if (!(r->announced_on < as_of)) continue;
            rec.enter_series = r->investment_type;
            if (r->post_money_valuation_usd)
                rec.last_series_value = *r->post_money_valuation_usd;
        }
        out.items.push_back(std::move(rec));
    }
    std::sort(out.items.begin(), out.items.end(),
              [](const UnicornRecommendation& a,
                 const UnicornRecommendation& b) {
                  if (a.similarity != b.similarity)
                      return a.similarity > b.similarity;
                  return a.company_uuid < b.company_uuid;
              });
    if (out.items.size() > cfg.top_k) out.items.resize(cfg.top_k);
    return out;
}

namespace {

bool on_entry_ladder(RoundType t, RoundType max_entry) {
    // Ladder types precede the ambiguous ones in the enum.
    return static_cast<int>(t) <= static_cast<int>(max_entry);
}

}  // namespace

std::vector<UnicornLedgerRow> simulate_unicorn_portfolio(
    const EntityStore& store,
    const std::map<int, std::vector<UnicornRecommendation>>& by_year,
    const UnicornPortfolioConfig& cfg) {
    if (!(cfg.start < cfg.end))
        throw std::invalid_argument(
            "unicorn portfolio: start must precede end");

    // recommendation activation date per company (earliest year listed)
    std::map<Uuid, Date> recommended_from;
    for (const auto& [year, recs] : by_year)
        for (const UnicornRecommendation& rec : recs) {
            Date from = Date::from_ymd(year, 1, 1);
            auto [it, inserted] = recommended_from.emplace(rec.company_uuid,
                                                          from);
            if (!inserted && from < it->second) it->second = from;
        }

    std::vector<UnicornLedgerRow> ledger;
    std::map<Uuid, std::size_t> row_of;  // held or exited; no re-entry

    for (Date t = cfg.start.plus_months_floor(1); !(cfg.end < t);
         t = t.plus_months_floor(1)) {
        Date month_start = t.plus_months_floor(-1);

        // additions from last month's qualifying rounds
        for (const auto& [uuid, from] : recommended_from) {
            if (row_of.count(uuid)) continue;
            const Company* c = store.find_company(uuid);
            if (!c) continue;
            for (const FundingRound* r : store.rounds_of(uuid)) {
                if (r->announced_on < month_start || !(r->announced_on < t))
                    continue;
                if (r->announced_on < from) continue;
                if (!r->post_money_valuation_usd ||
                    !(*r->post_money_valuation_usd < cfg.entry_valuation_max))
                    continue;
                if (!on_entry_ladder(r->investment_type, cfg.max_entry_round))
                    continue;
                UnicornLedgerRow row;
                row.uuid = uuid;
                row.name = c->name;
                row.added = t;
                row.enter_series = r->investment_type;
                row.enter_value = *r->post_money_valuation_usd;
                row_of[uuid] = ledger.size();
                ledger.push_back(std::move(row));
                break;
            }
        }

        // review held positions
        for (auto& [uuid, idx] : row_of) {
            UnicornLedgerRow& row = ledger[idx];
            if (row.removed) continue;
            std::optional<Date> last_round;
            bool crossed = false;
            for (const FundingRound* r : store.rounds_of(uuid)) {
                if (!(r->announced_on < t)) break;
                last_round = r->announced_on;
                if (r->post_money_valuation_usd &&
                    !(*r->post_money_valuation_usd < cfg.exit_valuation_min))
                    crossed = true;
            }
            if (crossed) {
                row.removed = t;
                row.removal_reason = "valuation";
            } else if (t - std::max(row.added, last_round.value_or(row.added)) >=
                       cfg.stale_days) {
                row.removed = t;
                row.removal_reason = "stale";
            }
        }
    }

    // last known valuation up to removal (or the simulation end)
    for (UnicornLedgerRow& row : ledger) {
        Date horizon = row.removed.value_or(cfg.end);
        for (const FundingRound* r : store.rounds_of(row.uuid)) {
            if (!(r->announced_on <= horizon)) break;
            if (r->post_money_valuation_usd)
                row.last_series_value = *r->post_money_valuation_usd;
        }
    }
    std::sort(ledger.begin(), ledger.end(),
              [](const UnicornLedgerRow& a, const UnicornLedgerRow& b) {
                  if (a.added != b.added) return a.added < b.added;
                  return a.uuid < b.uuid;
              });
    return ledger;
}

void write_investor_scores_csv(const std::vector<InvestorScore>& scores,
                               const std::filesystem::path& path) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& s : scores)
        rows.push_back({s.investor_uuid, s.name, fmt(s.score),
                        fmt(s.distance_to_centroid)});
    csv::write_file(path, {"uuid", "name", "score", "distance"}, rows);
}

void write_founder_scores_csv(const std::vector<FounderScore>& scores,
                              const std::filesystem::path& path) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& s : scores)
        rows.push_back({s.person_uuid, s.name, fmt(s.score),
                        fmt(s.raw_score)});
    csv::write_file(path, {"uuid", "name", "score", "raw_score"}, rows);
}

void write_recommendations_csv(const std::vector<UnicornRecommendation>& recs,
                               const std::filesystem::path& path) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : recs)
        rows.push_back(
            {r.company_uuid, r.name, fmt(r.similarity),
             r.recommended_on.to_iso(),
             r.enter_series ? std::string(round_type_name(*r.enter_series))
                            : "",
             r.last_series_value ? std::to_string(*r.last_series_value) : ""});
    csv::write_file(path,
                    {"uuid", "name", "similarity", "recommended_on",
                     "enter_series", "last_series_value"},
                    rows);
}

void write_unicorn_ledger_csv(const std::vector<UnicornLedgerRow>& rows_in,
                              const std::filesystem::path& path) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : rows_in)
        rows.push_back(
            {r.uuid, r.name, r.added.to_iso(),
             r.enter_series ? std::string(round_type_name(*r.enter_series))
                            : "",
             r.enter_value ? std::to_string(*r.enter_value) : "",
             r.removed ? r.removed->to_iso() : "", r.removal_reason,
             r.last_series_value ? std::to_string(*r.last_series_value) : ""});
    csv::write_file(path,
                    {"uuid", "name", "added", "enter_series", "enter_value",
                     "removed", "removal_reason", "last_series_value"},
                    rows);
}

}  // namespace vc
