#include "vc/backtest.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "vc/csv.hpp"
#include "vc/pipeline.hpp"

namespace vc {

EntryMode parse_entry_mode(std::string_view s) {
    if (s == "earlybird") return EntryMode::earlybird;
    if (s == "any") return EntryMode::any;
    throw std::invalid_argument("unknown entry mode: " + std::string(s));
}

std::string_view entry_mode_name(EntryMode m) {
    return m == EntryMode::earlybird ? "earlybird" : "any";
}

namespace {

bool qualifies(RoundType t, EntryMode mode) {
    if (mode == EntryMode::earlybird)
        return t == RoundType::series_b || t == RoundType::series_c;
    return is_series_b_to_j(t);
}

}  // namespace

std::vector<std::pair<const Company*, const FundingRound*>> eligible_companies(
    const EntityStore& store, Date window_start, Date window_end,
    EntryMode mode) {
    if (!(window_start < window_end))
        throw std::invalid_argument("eligible_companies: empty window");
    std::map<Uuid, const FundingRound*> earliest;
    for (const FundingRound& r : store.rounds()) {
        if (r.announced_on < window_start || !(r.announced_on < window_end))
            continue;
        if (!qualifies(r.investment_type, mode)) continue;
        auto [it, inserted] = earliest.emplace(r.company_uuid, &r);
        if (!inserted) {
            const FundingRound* prev = it->second;
            if (r.announced_on < prev->announced_on ||
                (r.announced_on == prev->announced_on && r.uuid < prev->uuid))
                it->second = &r;
        }
    }
    std::vector<std::pair<const Company*, const FundingRound*>> out;
    for (const auto& [uuid, round] : earliest) {
        const Company* c = store.find_company(uuid);
        if (c) out.emplace_back(c, round);
    }
    return out;
}

BacktestResult run_walkforward(const EntityStore& store,
                               const UniverseConfig& ucfg,
                               const BacktestConfig& cfg) {
    if (!(cfg.start < cfg.end))
        throw std::invalid_argument("backtest: start must precede end");
    if (cfg.retrain_interval_months < 1)
        throw std::invalid_argument("backtest: interval must be >= 1 month");
    if (cfg.end > store.snapshot_date())
        throw std::invalid_argument("backtest: end beyond snapshot date");

    BacktestResult result;
    for (Date t = cfg.start; t < cfg.end;
         t = t.plus_months_floor(cfg.retrain_interval_months)) {
        Date we = std::min(t.plus_months_floor(cfg.retrain_interval_months),
                           cfg.end);
        result.window_starts.push_back(t);

        // The pipeline fit sees only pre-window data: the dataset is cut
        // at t and every feature map is computed as of t.
        PipelineParams params;
        params.nmf_rank = cfg.nmf_rank;
        params.nmf_max_iters = cfg.nmf_max_iters;
        params.nmf_tol = cfg.nmf_tol;
        params.classifier = cfg.classifier;
        params.seed = cfg.seed;
        auto pipeline = fit_pipeline(store, ucfg, t, params);
        if (!pipeline) {
            result.skipped_windows.push_back(t);
            result.warnings.push_back("window " + t.to_iso() +
                                      ": empty training set, skipped");
            continue;
        }
        if (pipeline->single_class)
            result.warnings.push_back("window " + t.to_iso() +
                                      ": single-class training set, scores "
                                      "are the class prior");

        if (cfg.checkpoint_dir) {
            std::filesystem::create_directories(*cfg.checkpoint_dir);
            pipeline->save(*cfg.checkpoint_dir / ("w" + t.to_iso()));
        }

        for (const auto& [company, round] :
             eligible_companies(store, t, we, cfg.entry_mode)) {
            PredictionRecord rec;
            rec.company_uuid = company->uuid;
            rec.company_name = company->name;
            rec.window_start = t;
            rec.window_end = we;
            rec.trigger_round_uuid = round->uuid;
            rec.trigger_round_type = round->investment_type;
            rec.trigger_announced_on = round->announced_on;
            rec.score = pipeline->score(store, company->uuid);
            rec.train_size = pipeline->train_size;
            result.records.push_back(std::move(rec));
        }
    }

    std::sort(result.records.begin(), result.records.end(),
              [](const PredictionRecord& a, const PredictionRecord& b) {
                  if (a.window_start != b.window_start)
                      return a.window_start < b.window_start;
                  if (a.score != b.score) return a.score > b.score;
                  return a.company_uuid < b.company_uuid;
              });
    return result;
}

void write_predictions_csv(const std::vector<PredictionRecord>& records,
                           const std::filesystem::path& path) {
    std::vector<std::string> header{"uuid",
                                    "name",
                                    "window_start",
                                    "window_end",
                                    "trigger_round_uuid",
                                    "trigger_round_type",
                                    "trigger_announced_on",
                                    "score",
                                    "train_size"};
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : records) {
        char score[32];
        std::snprintf(score, sizeof score, "%.17g", r.score);
        rows.push_back({r.company_uuid, r.company_name, r.window_start.to_iso(),
                        r.window_end.to_iso(), r.trigger_round_uuid,
                        std::string(round_type_name(r.trigger_round_type)),
                        r.trigger_announced_on.to_iso(), score,
                        std::to_string(r.train_size)});
    }
    csv::write_file(path, header, rows);
}

std::vector<PredictionRecord> read_predictions_csv(
    const std::filesystem::path& path) {
    csv::Table table = csv::read_file(path);
    std::vector<std::string> expected{
        "uuid",         "name",
        "window_start", "window_end",
        "trigger_round_uuid", "trigger_round_type",
        "trigger_announced_on", "score",
        "train_size"};
    if (table.header != expected)
        throw std::runtime_error("bad prediction table header in " +
                                 path.string());
    std::vector<PredictionRecord> out;
    for (const auto& row : table.rows) {
        PredictionRecord r;
        r.company_uuid = row[0];
        r.company_name = row[1];
        r.window_start = Date::parse_iso(row[2]).value();
        r.window_end = Date::parse_iso(row[3]).value();
        r.trigger_round_uuid = row[4];
        r.trigger_round_type = parse_round_type(row[5]);
        r.trigger_announced_on = Date::parse_iso(row[6]).value();
        r.score = std::stod(row[7]);
        r.train_size = std::stoul(row[8]);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace vc
