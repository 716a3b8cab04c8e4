#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vc/mlp.hpp"
#include "vc/universe.hpp"

namespace vc {

// ---- investor embeddings ----

struct AutoencoderConfig {
    std::size_t latent_dim = 16;
    std::vector<std::size_t> hidden_sizes = {64};
    int epochs = 60;
    double learning_rate = 1e-3;
    std::size_t batch_size = 32;
    std::uint64_t seed = 0;
};

struct InvestorEmbeddings {
    Date as_of;
    std::vector<Uuid> uuids;
    std::vector<std::string> names;
    std::vector<std::vector<double>> latents;  // aligned with uuids
    std::vector<double> epoch_loss;

    const std::vector<double>* latent_of(const Uuid& uuid) const;
};

/// Encoder/decoder over tabular investor features (one-hot categoricals
/// plus z-scored numerics), trained by reconstruction: squared error on
/// numerics, cross-entropy on each categorical block. Only pre-as_of
/// investment activity feeds the numeric features.
InvestorEmbeddings train_investor_autoencoder(const EntityStore& store,
                                              Date as_of,
                                              const AutoencoderConfig& cfg);

struct InvestorScore {
    Uuid investor_uuid;
    std::string name;
    std::vector<double> latent_vector;
    double distance_to_centroid = 0.0;
    double score = 0.0;  // 1 / (1 + distance)
};

/// Distance to the centroid of the expert set in latent space, mapped to
/// (0, 1] and sorted descending. Throws on an empty or unembedded set.
std::vector<InvestorScore> score_investors(const InvestorEmbeddings& embeddings,
                                           const std::set<Uuid>& expert_set);

// ---- founder scoring ----

struct FounderWeights {
    double startups = 1.0;
    double successful_startups = 3.0;
    double jobs = 0.5;
    double degrees = 0.5;
};

struct FounderScore {
    Uuid person_uuid;
    std::string name;
    double raw_score = 0.0;
    double score = 0.0;  // min-max normalized
};

/// raw = w1*prior startups + w2*prior successful startups + w3*prior
/// jobs + w4*completed degrees, all counted strictly before as_of, then
/// min-max normalized and sorted descending.
std::vector<FounderScore> score_founders(const EntityStore& store,
                                         const UniverseConfig& ucfg, Date as_of,
                                         const FounderWeights& weights = {});

// ---- unicorn recommendations ----

struct UnicornRecommendation {
    Uuid company_uuid;
    std::string name;
    double similarity = 0.0;
    Date recommended_on;
    std::optional<RoundType> enter_series;  // latest pre-as_of round type
    std::optional<Usd> last_series_value;   // last known valuation
};

struct UnicornRecommendations {
    std::vector<UnicornRecommendation> items;  // at most top_k
    std::vector<std::string> warnings;
};

struct UnicornConfig {
    std::size_t top_k = 30;
    std::size_t nmf_rank = 30;
    int nmf_max_iters = 200;
    double nmf_tol = 1e-5;
    std::uint64_t seed = 0;
    // cohort age band, in years before as_of
    int min_age_years = 4;
    int max_age_years = 5;
};

/// Cohort = companies founded 4-5 years before as_of; non-unicorn cohort
/// members are ranked by cosine similarity of their encoded feature
/// vectors to the centroid of the cohort's unicorns.
UnicornRecommendations recommend_unicorns(const EntityStore& store,
                                          const UniverseConfig& ucfg,
                                          Date as_of,
                                          const UnicornConfig& cfg = {});

struct UnicornPortfolioConfig {
    Date start = Date::from_ymd(2016, 1, 1);
    Date end = Date::from_ymd(2022, 1, 1);
    Usd entry_valuation_max = 1'000'000'000;    // strict upper bound
    RoundType max_entry_round = RoundType::series_e;
    Usd exit_valuation_min = 2'500'000'000;
    int stale_days = 1095;
};

struct UnicornLedgerRow {
    Uuid uuid;
    std::string name;
    Date added;
    std::optional<RoundType> enter_series;
    std::optional<Usd> enter_value;
    std::optional<Date> removed;
    std::string removal_reason;  // "valuation", "stale" or "" while held
    std::optional<Usd> last_series_value;
};

/// Monthly loop over annual recommendation lists: a recommended company
/// announcing a sub-billion round no later in the ladder than
/// max_entry_round is added; holdings leave at exit_valuation_min or
/// after stale_days without a round.
std::vector<UnicornLedgerRow> simulate_unicorn_portfolio(
    const EntityStore& store,
    const std::map<int, std::vector<UnicornRecommendation>>& by_year,
    const UnicornPortfolioConfig& cfg = {});

void write_investor_scores_csv(const std::vector<InvestorScore>& scores,
                               const std::filesystem::path& path);
void write_founder_scores_csv(const std::vector<FounderScore>& scores,
                              const std::filesystem::path& path);
void write_recommendations_csv(const std::vector<UnicornRecommendation>& recs,
                               const std::filesystem::path& path);
void write_unicorn_ledger_csv(const std::vector<UnicornLedgerRow>& rows,
                              const std::filesystem::path& path);

}  // namespace vc
