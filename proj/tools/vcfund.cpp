// vcfund: command-line front end for the venture pipeline library.
//
// Subcommands cover the full flow: synth -> ingest -> label -> train /
// backtest -> simulate -> cv, plus the auxiliary ranking models. Every
// command writes its resolved configuration next to its outputs as
// <command>.runconfig, a flat key-value file (with [sections]) that can
// be fed back through --config to reproduce the run bit for bit.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vc/backtest.hpp"
#include "vc/csv.hpp"
#include "vc/cv.hpp"
#include "vc/pipeline.hpp"
#include "vc/portfolio.hpp"
#include "vc/ranking.hpp"
#include "vc/synth.hpp"

namespace {

using namespace vc;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

Date parse_date_flag(const std::string& s, const char* what) {
    auto d = Date::parse_iso(s);
    if (!d)
        throw CLI::ValidationError(std::string(what) +
                                   ": expected YYYY-MM-DD, got '" + s + "'");
    return *d;
}

const CLI::Validator IsoDate(
    [](std::string& s) {
        return Date::parse_iso(s) ? std::string()
                                  : "expected an ISO date (YYYY-MM-DD)";
    },
    "DATE");

struct CommonOpts {
    std::string data_dir;
    std::string out_dir;
    std::string snapshot = "2022-06-14";
    std::uint64_t seed = 0;
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_data) {
    auto* data = cmd->add_option("--data", o.data_dir,
                                 "directory with the CSV export");
    if (needs_data) data->required();
    cmd->add_option("--out", o.out_dir, "output directory")
        ->default_val(o.out_dir);
    cmd->add_option("--snapshot", o.snapshot,
                    "snapshot date of the export")
        ->check(IsoDate)
        ->default_val(o.snapshot);
    cmd->add_option("--seed", o.seed, "run seed")->default_val(o.seed);
    cmd->add_option("--threads", o.threads,
                    "worker threads (1 keeps runs bitwise reproducible)")
        ->check(CLI::PositiveNumber)
        ->default_val(o.threads);
}

EntityStore load_store(const CommonOpts& o) {
    return EntityStore::load_export(o.data_dir,
                                    parse_date_flag(o.snapshot, "--snapshot"));
}

UniverseConfig load_universe(const CommonOpts& o) {
    UniverseConfig ucfg = UniverseConfig::defaults();
    auto path = std::filesystem::path(o.data_dir) / "verified_unicorns.csv";
    if (!o.data_dir.empty() && std::filesystem::exists(path)) {
        csv::Table table = csv::read_file(path);
        for (const auto& row : table.rows)
            if (!row.empty() && !row[0].empty())
                ucfg.verified_unicorns.insert(row[0]);
    }
    return ucfg;
}

std::filesystem::path ensure_out(const CommonOpts& o) {
    std::filesystem::path dir = o.out_dir.empty() ? "." : o.out_dir;
    std::filesystem::create_directories(dir);
    return dir;
}

void write_runconfig(const CLI::App& sub, const std::filesystem::path& dir,
                     const std::string& command) {
    // Only the invoked subcommand's resolved options are persisted, in a
    // [section] that --config maps back onto the same subcommand.
    std::ofstream out(dir / (command + ".runconfig"), std::ios::binary);
    out << "[" << command << "]\n" << sub.config_to_str(true, false);
}

struct PipelineOpts {
    std::size_t nmf_rank = 30;
    int nmf_iters = 200;
    double nmf_tol = 1e-5;
    std::vector<std::size_t> hidden = {128, 64};
    std::size_t embedding_dim = 8;
    double dropout = 0.2;
    double lr = 1e-3;
    int epochs = 30;
    std::size_t batch = 64;
    double pos_weight = 0.0;
};

void add_pipeline(CLI::App* cmd, PipelineOpts& p) {
    cmd->add_option("--nmf-rank", p.nmf_rank)->default_val(p.nmf_rank);
    cmd->add_option("--nmf-iters", p.nmf_iters)->default_val(p.nmf_iters);
    cmd->add_option("--nmf-tol", p.nmf_tol)->default_val(p.nmf_tol);
    cmd->add_option("--hidden", p.hidden, "hidden layer widths")
        ->default_val(p.hidden);
    cmd->add_option("--embedding-dim", p.embedding_dim)
        ->default_val(p.embedding_dim);
    cmd->add_option("--dropout", p.dropout)->default_val(p.dropout);
    cmd->add_option("--lr", p.lr)->default_val(p.lr);
    cmd->add_option("--epochs", p.epochs)->default_val(p.epochs);
    cmd->add_option("--batch", p.batch)->default_val(p.batch);
    cmd->add_option("--pos-weight", p.pos_weight,
                    "positive class weight, <= 0 selects n_neg / n_pos")
        ->default_val(p.pos_weight);
}

PipelineParams to_pipeline_params(const PipelineOpts& p, std::uint64_t seed) {
    PipelineParams params;
    params.nmf_rank = p.nmf_rank;
    params.nmf_max_iters = p.nmf_iters;
    params.nmf_tol = p.nmf_tol;
    params.seed = seed;
    params.classifier.hidden_sizes = p.hidden;
    params.classifier.embedding_dim_per_categorical = p.embedding_dim;
    params.classifier.dropout_rate = p.dropout;
    params.classifier.learning_rate = p.lr;
    params.classifier.epochs = p.epochs;
    params.classifier.batch_size = p.batch;
    params.classifier.positive_class_weight = p.pos_weight;
    params.classifier.seed = seed;
    return params;
}

std::string fmt_opt_date(const std::optional<Date>& d) {
    return d ? d->to_iso() : "";
}

int cmd_synth(const CLI::App& app, const CommonOpts& common, std::size_t n,
              double signal, double rate, const std::string& span_start) {
    SynthConfig cfg;
    cfg.n_companies = n;
    cfg.signal_strength = signal;
    cfg.positive_rate = rate;
    cfg.span_start = parse_date_flag(span_start, "--span-start");
    cfg.snapshot = parse_date_flag(common.snapshot, "--snapshot");
    cfg.seed = common.seed;
    auto dir = ensure_out(common);
    EntityStore store = generate_synthetic(cfg);
    store.save_export(dir);
    write_runconfig(app, dir, "synth");
    std::cout << "synth: wrote " << store.companies().size() << " companies, "
              << store.rounds().size() << " rounds to " << dir.string()
              << "\n";
    return kExitOk;
}

int cmd_ingest(const CLI::App& app, const CommonOpts& common) {
    EntityStore store = load_store(common);
    auto dir = ensure_out(common);
    std::vector<std::vector<std::string>> rows{
        {"companies", std::to_string(store.companies().size())},
        {"funding_rounds", std::to_string(store.rounds().size())},
        {"ipos", std::to_string(store.ipos().size())},
        {"acquisitions", std::to_string(store.acquisitions().size())},
        {"people", std::to_string(store.people().size())},
        {"degrees", std::to_string(store.degrees().size())},
        {"jobs", std::to_string(store.jobs().size())},
        {"investors", std::to_string(store.investors().size())},
        {"investments", std::to_string(store.investments().size())},
        {"quarantined_rows", std::to_string(store.quarantine().total())}};
    csv::write_file(dir / "ingest_stats.csv", {"entity", "count"}, rows);
    write_runconfig(app, dir, "ingest");
    for (const auto& row : rows)
        std::cout << row[0] << ": " << row[1] << "\n";
    return kExitOk;
}

int cmd_label(const CLI::App& app, const CommonOpts& common) {
    EntityStore store = load_store(common);
    UniverseConfig ucfg = load_universe(common);
    auto positives = label_successful(store, ucfg);
    std::set<Uuid> pos_set;
    for (const auto& rec : positives) pos_set.insert(rec.company_uuid);
    auto negatives = label_unsuccessful(store, ucfg, pos_set);

    std::vector<std::vector<std::string>> rows;
    auto emit = [&rows](const OutcomeRecord& r) {
        rows.push_back({r.company_uuid, std::to_string(r.label),
                        std::string(outcome_kind_name(r.outcome_kind)),
                        fmt_opt_date(r.success_date),
                        r.success_round_index
                            ? std::to_string(*r.success_round_index)
                            : ""});
    };
    for (const auto& r : positives) emit(r);
    for (const auto& r : negatives) emit(r);
    auto dir = ensure_out(common);
    csv::write_file(
        dir / "labeled.csv",
        {"uuid", "label", "outcome_kind", "success_date",
         "success_round_index"},
        rows);
    write_runconfig(app, dir, "label");
    std::cout << "label: " << positives.size() << " positive, "
              << negatives.size() << " negative\n";
    return kExitOk;
}

int cmd_train(const CLI::App& app, const CommonOpts& common,
              const PipelineOpts& popts, const std::string& cutoff) {
    EntityStore store = load_store(common);
    UniverseConfig ucfg = load_universe(common);
    Date as_of = parse_date_flag(cutoff, "--cutoff");
    auto pipeline = fit_pipeline(store, ucfg, as_of,
                                 to_pipeline_params(popts, common.seed));
    auto dir = ensure_out(common);
    write_runconfig(app, dir, "train");
    if (!pipeline) {
        std::cerr << "train: no labeled companies as of " << as_of.to_iso()
                  << "\n";
        return kExitData;
    }
    pipeline->save(dir / "model");
    std::cout << "train: fitted on " << pipeline->train_size << " companies ("
              << pipeline->n_pos << " positive) as of " << as_of.to_iso()
              << "\n";
    return kExitOk;
}

int cmd_backtest(const CLI::App& app, const CommonOpts& common,
                 const PipelineOpts& popts, const std::string& start,
                 const std::string& end, int interval,
                 const std::string& entry_mode, bool checkpoints) {
    EntityStore store = load_store(common);
    UniverseConfig ucfg = load_universe(common);
    BacktestConfig cfg;
    cfg.start = parse_date_flag(start, "--start");
    cfg.end = parse_date_flag(end, "--end");
    cfg.retrain_interval_months = interval;
    cfg.entry_mode = parse_entry_mode(entry_mode);
    cfg.seed = common.seed;
    PipelineParams params = to_pipeline_params(popts, common.seed);
    cfg.nmf_rank = params.nmf_rank;
    cfg.nmf_max_iters = params.nmf_max_iters;
    cfg.nmf_tol = params.nmf_tol;
    cfg.classifier = params.classifier;
    auto dir = ensure_out(common);
    if (checkpoints) cfg.checkpoint_dir = dir / "checkpoints";
    BacktestResult result = run_walkforward(store, ucfg, cfg);
    write_predictions_csv(result.records, dir / "predictions.csv");
    write_runconfig(app, dir, "backtest");
    for (const auto& w : result.warnings) std::cerr << w << "\n";
    std::cout << "backtest: " << result.records.size() << " predictions over "
              << result.window_starts.size() << " windows ("
              << result.skipped_windows.size() << " skipped)\n";
    return kExitOk;
}

int cmd_simulate(const CLI::App& app, const CommonOpts& common,
                 const std::string& predictions_path, const std::string& start,
                 const std::string& end, std::size_t capacity,
                 std::size_t top_k, double base, double slope,
                 std::int64_t reference, int longtime_days,
                 const std::string& exit_mode, double stake) {
    EntityStore store = load_store(common);
    UniverseConfig ucfg = load_universe(common);
    auto predictions = read_predictions_csv(predictions_path);
    PortfolioConfig cfg;
    cfg.start = parse_date_flag(start, "--start");
    cfg.end = parse_date_flag(end, "--end");
    cfg.capacity = capacity;
    cfg.monthly_top_k = top_k;
    cfg.threshold_base = base;
    cfg.threshold_slope = slope;
    if (reference > 0) cfg.reference_train_size = std::size_t(reference);
    cfg.longtime_days = longtime_days;
    cfg.exit_mode =
        exit_mode == "first" ? ExitMode::first : ExitMode::last;
    cfg.stake_usd = stake;
    auto outcomes = label_successful(store, ucfg);
    auto ledger = simulate_fund(predictions, store, outcomes, cfg);
    PnlSeries pnl = compute_pnl(ledger, store, cfg);
    auto dir = ensure_out(common);
    write_ledger_csv(ledger, dir / "ledger.csv");
    write_pnl_csv(pnl, dir / "pnl.csv");
    write_runconfig(app, dir, "simulate");
    std::cout << "simulate: " << ledger.size() << " positions, growth "
              << pnl.growth_multiple << "x\n";
    return kExitOk;
}

int cmd_cv(const CLI::App& app, const CommonOpts& common,
           const PipelineOpts& popts, int start_year, int end_year,
           double threshold) {
    EntityStore store = load_store(common);
    UniverseConfig ucfg = load_universe(common);
    CvConfig cfg;
    cfg.start_year = start_year;
    cfg.end_year = end_year;
    cfg.threshold = threshold;
    cfg.pipeline = to_pipeline_params(popts, common.seed);
    CvResult result = time_series_cv(store, ucfg, cfg);
    auto dir = ensure_out(common);
    write_cv_csv(result, dir / "cv.csv");
    write_runconfig(app, dir, "cv");
    for (const auto& w : result.warnings) std::cerr << w << "\n";
    std::cout << "cv: " << result.folds.size() << " folds written\n";
    return kExitOk;
}

int cmd_rank_investors(const CLI::App& app, const CommonOpts& common,
                       const std::string& as_of_str, std::size_t latent_dim,
                       std::vector<std::size_t> hidden, int epochs, double lr,
                       std::size_t batch, const std::string& experts_path,
                       std::size_t n_experts) {
    EntityStore store = load_store(common);
    Date as_of = parse_date_flag(as_of_str, "--as-of");
    AutoencoderConfig cfg;
    cfg.latent_dim = latent_dim;
    cfg.hidden_sizes = std::move(hidden);
    cfg.epochs = epochs;
    cfg.learning_rate = lr;
    cfg.batch_size = batch;
    cfg.seed = common.seed;
    auto emb = train_investor_autoencoder(store, as_of, cfg);

    std::set<Uuid> experts;
    if (!experts_path.empty()) {
        std::ifstream in(experts_path);
        if (!in)
            throw std::runtime_error("cannot read expert list " +
                                     experts_path);
        std::string line;
        while (std::getline(in, line)) {
            while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
                line.pop_back();
            if (!line.empty()) experts.insert(line);
        }
    } else {
        // Default expert set: the investors with the most pre-as_of
        // participations.
        std::vector<std::pair<std::size_t, Uuid>> activity;
        for (const Investor& inv : store.investors()) {
            std::size_t count = 0;
            for (const FundingRound* r : store.rounds_of_investor(inv.uuid))
                if (r->announced_on < as_of) ++count;
            activity.emplace_back(count, inv.uuid);
        }
        std::sort(activity.begin(), activity.end(),
                  [](const auto& a, const auto& b) {
                      if (a.first != b.first) return a.first > b.first;
                      return a.second < b.second;
                  });
        for (std::size_t i = 0; i < std::min(n_experts, activity.size()); ++i)
            experts.insert(activity[i].second);
    }
    auto scores = score_investors(emb, experts);
    auto dir = ensure_out(common);
    write_investor_scores_csv(scores, dir / "investor_scores.csv");
    write_runconfig(app, dir, "rank-investors");
    std::cout << "rank-investors: " << scores.size() << " investors, "
              << experts.size() << " experts\n";
    return kExitOk;
}

int cmd_rank_founders(const CLI::App& app, const CommonOpts& common,
                      const std::string& as_of_str, const FounderWeights& w) {
    EntityStore store = load_store(common);
    UniverseConfig ucfg = load_universe(common);
    Date as_of = parse_date_flag(as_of_str, "--as-of");
    auto scores = score_founders(store, ucfg, as_of, w);
    auto dir = ensure_out(common);
    write_founder_scores_csv(scores, dir / "founder_scores.csv");
    write_runconfig(app, dir, "rank-founders");
    std::cout << "rank-founders: " << scores.size() << " founders scored\n";
    return kExitOk;
}

int cmd_recommend(const CLI::App& app, const CommonOpts& common,
                  const std::string& as_of_str, std::size_t top_k,
                  std::size_t nmf_rank, bool portfolio, int start_year,
                  int end_year) {
    EntityStore store = load_store(common);
    UniverseConfig ucfg = load_universe(common);
    auto dir = ensure_out(common);
    UnicornConfig cfg;
    cfg.top_k = top_k;
    cfg.nmf_rank = nmf_rank;
    cfg.seed = common.seed;

    Date as_of = parse_date_flag(as_of_str, "--as-of");
    auto recs = recommend_unicorns(store, ucfg, as_of, cfg);
    for (const auto& w : recs.warnings) std::cerr << w << "\n";
    write_recommendations_csv(recs.items, dir / "unicorn_recommendations.csv");

    if (portfolio) {
        std::map<int, std::vector<UnicornRecommendation>> by_year;
        for (int year = start_year; year <= end_year; ++year) {
            auto annual = recommend_unicorns(
                store, ucfg, Date::from_ymd(year, 1, 1), cfg);
            for (const auto& w : annual.warnings) std::cerr << w << "\n";
            by_year[year] = std::move(annual.items);
        }
        UnicornPortfolioConfig pcfg;
        pcfg.start = Date::from_ymd(start_year, 1, 1);
        pcfg.end = Date::from_ymd(end_year + 1, 1, 1);
        auto ledger = simulate_unicorn_portfolio(store, by_year, pcfg);
        write_unicorn_ledger_csv(ledger, dir / "unicorn_ledger.csv");
        std::cout << "recommend-unicorns: " << recs.items.size()
                  << " recommendations, " << ledger.size()
                  << " simulated positions\n";
    } else {
        std::cout << "recommend-unicorns: " << recs.items.size()
                  << " recommendations\n";
    }
    write_runconfig(app, dir, "recommend-unicorns");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"venture pipeline toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "key-value configuration file; flags take precedence");

    std::string default_out = ".";
    if (const char* env = std::getenv("VCFUND_OUT"); env && *env)
        default_out = env;

    // synth
    CommonOpts synth_common;
    synth_common.out_dir = default_out;
    std::size_t synth_n = 1000;
    double synth_signal = 1.0, synth_rate = 0.06;
    std::string synth_span = "2000-01-01";
    auto* synth = app.add_subcommand("synth", "generate a synthetic export");
    add_common(synth, synth_common, false);
    synth->add_option("--n", synth_n, "number of companies")
        ->default_val(synth_n);
    synth->add_option("--signal-strength", synth_signal)
        ->default_val(synth_signal);
    synth->add_option("--positive-rate", synth_rate)->default_val(synth_rate);
    synth->add_option("--span-start", synth_span)
        ->check(IsoDate)
        ->default_val(synth_span);

    // ingest
    CommonOpts ingest_common;
    ingest_common.out_dir = default_out;
    auto* ingest =
        app.add_subcommand("ingest", "load, validate and summarize an export");
    add_common(ingest, ingest_common, true);

    // label
    CommonOpts label_common;
    label_common.out_dir = default_out;
    auto* label = app.add_subcommand("label", "emit the labeled dataset");
    add_common(label, label_common, true);

    // train
    CommonOpts train_common;
    train_common.out_dir = default_out;
    PipelineOpts train_popts;
    std::string train_cutoff;
    auto* train =
        app.add_subcommand("train", "fit one model at a cutoff date");
    add_common(train, train_common, true);
    add_pipeline(train, train_popts);
    train->add_option("--cutoff", train_cutoff, "training cutoff date")
        ->check(IsoDate)
        ->required();

    // backtest
    CommonOpts bt_common;
    bt_common.out_dir = default_out;
    PipelineOpts bt_popts;
    std::string bt_start = "2016-01-01", bt_end = "2022-01-01";
    std::string bt_mode = "earlybird";
    int bt_interval = 3;
    bool bt_checkpoints = false;
    auto* backtest =
        app.add_subcommand("backtest", "walk-forward prediction table");
    add_common(backtest, bt_common, true);
    add_pipeline(backtest, bt_popts);
    backtest->add_option("--start", bt_start)->check(IsoDate)->default_val(
        bt_start);
    backtest->add_option("--end", bt_end)->check(IsoDate)->default_val(bt_end);
    backtest->add_option("--interval", bt_interval, "months between refits")
        ->default_val(bt_interval);
    backtest->add_option("--entry-mode", bt_mode)
        ->check(CLI::IsMember({"earlybird", "any"}))
        ->default_val(bt_mode);
    backtest->add_flag("--checkpoints", bt_checkpoints,
                       "save per-window model checkpoints");

    // simulate
    CommonOpts sim_common;
    sim_common.out_dir = default_out;
    std::string sim_predictions;
    std::string sim_start = "2016-01-01", sim_end = "2022-01-01";
    std::string sim_exit_mode = "last";
    std::size_t sim_capacity = 30, sim_top_k = 3;
    double sim_base = 0.5, sim_slope = 0.05, sim_stake = 1'000'000.0;
    std::int64_t sim_reference = 0;
    int sim_longtime = 730;
    auto* simulate =
        app.add_subcommand("simulate", "fund ledger and PnL from predictions");
    add_common(simulate, sim_common, true);
    simulate->add_option("--predictions", sim_predictions,
                         "prediction table CSV")
        ->required();
    simulate->add_option("--start", sim_start)->check(IsoDate)->default_val(
        sim_start);
    simulate->add_option("--end", sim_end)->check(IsoDate)->default_val(
        sim_end);
    simulate->add_option("--capacity", sim_capacity)->default_val(
        sim_capacity);
    simulate->add_option("--top-k", sim_top_k)->default_val(sim_top_k);
    simulate->add_option("--threshold-base", sim_base)->default_val(sim_base);
    simulate->add_option("--threshold-slope", sim_slope)->default_val(
        sim_slope);
    simulate->add_option("--reference-train-size", sim_reference,
                         "threshold reference; 0 uses the earliest window")
        ->default_val(sim_reference);
    simulate->add_option("--longtime-days", sim_longtime)
        ->default_val(sim_longtime);
    simulate->add_option("--exit-mode", sim_exit_mode)
        ->check(CLI::IsMember({"first", "last"}))
        ->default_val(sim_exit_mode);
    simulate->add_option("--stake", sim_stake, "USD invested per position")
        ->default_val(sim_stake);

    // cv
    CommonOpts cv_common;
    cv_common.out_dir = default_out;
    PipelineOpts cv_popts;
    int cv_start_year = 2016, cv_end_year = 2021;
    double cv_threshold = 0.5;
    auto* cv = app.add_subcommand("cv", "annual time-series cross-validation");
    add_common(cv, cv_common, true);
    add_pipeline(cv, cv_popts);
    cv->add_option("--start-year", cv_start_year)->default_val(cv_start_year);
    cv->add_option("--end-year", cv_end_year)->default_val(cv_end_year);
    cv->add_option("--threshold", cv_threshold)->default_val(cv_threshold);

    // rank-investors
    CommonOpts ri_common;
    ri_common.out_dir = default_out;
    std::string ri_as_of = "2022-01-01", ri_experts;
    std::size_t ri_latent = 16, ri_batch = 32, ri_n_experts = 10;
    std::vector<std::size_t> ri_hidden = {64};
    int ri_epochs = 60;
    double ri_lr = 1e-3;
    auto* rank_inv = app.add_subcommand(
        "rank-investors", "embed investors and rank by expert proximity");
    add_common(rank_inv, ri_common, true);
    rank_inv->add_option("--as-of", ri_as_of)->check(IsoDate)->default_val(
        ri_as_of);
    rank_inv->add_option("--latent-dim", ri_latent)->default_val(ri_latent);
    rank_inv->add_option("--hidden", ri_hidden)->default_val(ri_hidden);
    rank_inv->add_option("--epochs", ri_epochs)->default_val(ri_epochs);
    rank_inv->add_option("--lr", ri_lr)->default_val(ri_lr);
    rank_inv->add_option("--batch", ri_batch)->default_val(ri_batch);
    rank_inv->add_option("--experts", ri_experts,
                         "file with one expert investor uuid per line");
    rank_inv->add_option("--n-experts", ri_n_experts,
                         "default expert set size when --experts is absent")
        ->default_val(ri_n_experts);

    // rank-founders
    CommonOpts rf_common;
    rf_common.out_dir = default_out;
    std::string rf_as_of = "2022-01-01";
    FounderWeights rf_weights;
    auto* rank_founders =
        app.add_subcommand("rank-founders", "heuristic founder scores");
    add_common(rank_founders, rf_common, true);
    rank_founders->add_option("--as-of", rf_as_of)
        ->check(IsoDate)
        ->default_val(rf_as_of);
    rank_founders->add_option("--w-startups", rf_weights.startups)
        ->default_val(rf_weights.startups);
    rank_founders->add_option("--w-success", rf_weights.successful_startups)
        ->default_val(rf_weights.successful_startups);
    rank_founders->add_option("--w-jobs", rf_weights.jobs)
        ->default_val(rf_weights.jobs);
    rank_founders->add_option("--w-degrees", rf_weights.degrees)
        ->default_val(rf_weights.degrees);

    // recommend-unicorns
    CommonOpts ru_common;
    ru_common.out_dir = default_out;
    std::string ru_as_of = "2020-01-01";
    std::size_t ru_top_k = 30, ru_nmf_rank = 30;
    bool ru_portfolio = false;
    int ru_start_year = 2016, ru_end_year = 2021;
    auto* recommend = app.add_subcommand(
        "recommend-unicorns", "cohort-similarity unicorn candidates");
    add_common(recommend, ru_common, true);
    recommend->add_option("--as-of", ru_as_of)->check(IsoDate)->default_val(
        ru_as_of);
    recommend->add_option("--top-k", ru_top_k)->default_val(ru_top_k);
    recommend->add_option("--nmf-rank", ru_nmf_rank)->default_val(ru_nmf_rank);
    recommend->add_flag("--portfolio", ru_portfolio,
                        "also simulate the annual recommendation portfolio");
    recommend->add_option("--start-year", ru_start_year)
        ->default_val(ru_start_year);
    recommend->add_option("--end-year", ru_end_year)->default_val(ru_end_year);

    for (CLI::App* sub : app.get_subcommands(nullptr)) sub->configurable(true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (synth->parsed())
            return cmd_synth(*synth, synth_common, synth_n, synth_signal,
                             synth_rate, synth_span);
        if (ingest->parsed()) return cmd_ingest(*ingest, ingest_common);
        if (label->parsed()) return cmd_label(*label, label_common);
        if (train->parsed())
            return cmd_train(*train, train_common, train_popts, train_cutoff);
        if (backtest->parsed())
            return cmd_backtest(*backtest, bt_common, bt_popts, bt_start, bt_end,
                                bt_interval, bt_mode, bt_checkpoints);
        if (simulate->parsed())
            return cmd_simulate(*simulate, sim_common, sim_predictions, sim_start,
                                sim_end, sim_capacity, sim_top_k, sim_base,
                                sim_slope, sim_reference, sim_longtime,
                                sim_exit_mode, sim_stake);
        if (cv->parsed())
            return cmd_cv(*cv, cv_common, cv_popts, cv_start_year, cv_end_year,
                          cv_threshold);
        if (rank_inv->parsed())
            return cmd_rank_investors(*rank_inv, ri_common, ri_as_of, ri_latent,
                                      ri_hidden, ri_epochs, ri_lr, ri_batch,
                                      ri_experts, ri_n_experts);
        if (rank_founders->parsed())
            return cmd_rank_founders(*rank_founders, rf_common, rf_as_of, rf_weights);
        if (recommend->parsed())
            return cmd_recommend(*recommend, ru_common, ru_as_of, ru_top_k,
                                 ru_nmf_rank, ru_portfolio, ru_start_year,
                                 ru_end_year);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
