// Acceptance gate: ten independent criteria, each reported as a single
// PASS/FAIL line. The binary exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "vc/backtest.hpp"
#include "vc/cv.hpp"
#include "vc/model.hpp"
#include "vc/pipeline.hpp"
#include "vc/portfolio.hpp"
#include "vc/synth.hpp"

using namespace vc;
using test::d;

namespace {

int g_failures = 0;

template <typename F>
void criterion(int index, const char* description, F body) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string note;
    try {
        ok = body();
    } catch (const std::exception& e) {
        note = std::string(" (exception: ") + e.what() + ")";
    }
    auto seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
    std::printf("%s: %2d. %s [%.1fs]%s\n", ok ? "PASS" : "FAIL", index,
                description, seconds, note.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

PipelineParams light_pipeline(std::uint64_t seed) {
    PipelineParams p;
    p.nmf_rank = 10;
    p.nmf_max_iters = 60;
    p.nmf_tol = 1e-5;
    p.seed = seed;
    p.classifier.hidden_sizes = {32, 16};
    p.classifier.epochs = 6;
    p.classifier.batch_size = 64;
    p.classifier.seed = seed;
    return p;
}

// ---- criterion 1: no lookahead in sampled backtest windows ----

bool no_lookahead() {
    SynthConfig scfg;
    scfg.n_companies = 5000;
    scfg.seed = 42;
    EntityStore store = generate_synthetic(scfg);
    auto ucfg = UniverseConfig::defaults();

    for (const char* iso : {"2016-04-01", "2018-01-01", "2020-07-01"}) {
        Date w = d(iso);
        Date we = w.plus_months_floor(3);
        EntityStore perturbed = test::perturb_from(store, w);
        auto a = fit_pipeline(store, ucfg, w, light_pipeline(9));
        auto b = fit_pipeline(perturbed, ucfg, w, light_pipeline(9));
        if (!a || !b) return false;
        for (const auto& [company, round] :
             eligible_companies(store, w, we, EntryMode::earlybird)) {
            double sa = a->score(store, company->uuid);
            double sb = b->score(perturbed, company->uuid);
            if (sa != sb) return false;
        }
    }
    return true;
}

// ---- criterion 2: metric oracles ----

double roc_auc_bruteforce(const std::vector<double>& s,
                          const std::vector<int>& y) {
    double num = 0;
    int pairs = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (y[i] != 1) continue;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (y[j] != 0) continue;
            ++pairs;
            if (s[i] > s[j])
                num += 1.0;
            else if (s[i] == s[j])
                num += 0.5;
        }
    }
    return num / pairs;
}

double pr_auc_bruteforce(const std::vector<double>& s,
                         const std::vector<int>& y) {
    std::set<double, std::greater<>> thresholds(s.begin(), s.end());
    int total_pos = int(std::count(y.begin(), y.end(), 1));
    double area = 0, prev_recall = 0;
    for (double th : thresholds) {
        int tp = 0, fp = 0;
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s[i] >= th) (y[i] == 1 ? tp : fp)++;
        double recall = double(tp) / total_pos;
        double precision = double(tp) / (tp + fp);
        area += precision * (recall - prev_recall);
        prev_recall = recall;
    }
    return area;
}

bool metric_oracles() {
    {
        std::vector<double> s = {0.1, 0.4, 0.35, 0.8};
        std::vector<int> y = {0, 0, 1, 1};
        if (roc_auc(s, y) != 0.75) return false;
    }
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0, 1);
    std::uniform_int_distribution<int> len(2, 50);
    std::bernoulli_distribution coin(0.4);
    std::uniform_int_distribution<int> grid(0, 9);
    for (int rep = 0; rep < 200; ++rep) {
        int n = len(rng);
        std::vector<double> s(n);
        std::vector<int> y(n);
        bool coarse = rep % 2 == 0;  // force score ties half the time
        bool has_pos = false, has_neg = false;
        for (int i = 0; i < n; ++i) {
            s[i] = coarse ? grid(rng) / 10.0 : u(rng);
            y[i] = coin(rng) ? 1 : 0;
            (y[i] ? has_pos : has_neg) = true;
        }
        if (!has_pos || !has_neg) {
            y[0] = 1;
            y[n - 1] = 0;
            if (n == 1) continue;
        }
        if (std::abs(roc_auc(s, y) - roc_auc_bruteforce(s, y)) > 1e-12)
            return false;
        if (std::abs(pr_auc(s, y) - pr_auc_bruteforce(s, y)) > 1e-12)
            return false;
    }
    return true;
}

// ---- criterion 3: gradient correctness ----

FeatureSchema small_schema() {
    FeatureSchema s;
    s.categorical_fields.push_back({"c", {"a", "b"}});
    s.numeric_fields.push_back({"x", 0.0, 1.0});
    s.numeric_fields.push_back({"y", 0.0, 1.0});
    s.tag_embedding_dim = 2;
    return s;
}

bool gradients() {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        std::mt19937_64 rng(seed * 977);
        std::normal_distribution<double> noise(0.0, 1.0);
        std::uniform_int_distribution<int> code(0, 2);
        std::vector<FeatureVector> rows;
        std::vector<int> labels;
        for (int i = 0; i < 24; ++i) {
            FeatureVector fv;
            fv.categorical_codes = {code(rng)};
            fv.numeric_values = {noise(rng), noise(rng)};
            fv.missing_mask = {0.0, 0.0};
            fv.tag_embedding = {noise(rng), noise(rng)};
            rows.push_back(fv);
            labels.push_back(i % 3 == 0 ? 1 : 0);
        }
        ClassifierConfig cfg;
        cfg.embedding_dim_per_categorical = 4;
        cfg.hidden_sizes = {16, 8};
        cfg.seed = seed;
        Classifier clf(small_schema(), cfg);
        if (clf.gradient_check(rows, labels) >= 1e-4) return false;
    }
    return true;
}

// ---- criterion 4: NMF monotonicity and nonnegativity ----

bool nmf_monotone() {
    std::mt19937_64 rng(77);
    std::bernoulli_distribution bit(0.3);
    Mat x(100, 60);
    for (double& v : x.data) v = bit(rng) ? 1.0 : 0.0;
    std::vector<double> objective;
    auto fit = nmf_fit(x, 30, 500, 0.0, 3, {},
                       [&objective](int, double obj) {
                           objective.push_back(obj);
                       });
    if (objective.size() < 500) return false;
    for (std::size_t i = 1; i < objective.size(); ++i)
        if (objective[i] > objective[i - 1] + 1e-12) return false;
    for (double v : fit.model.h.data)
        if (v < 0.0) return false;
    for (double v : fit.w.data)
        if (v < 0.0) return false;
    return true;
}

// ---- criterion 5: planted-signal recovery ----

double holdout_auc(double signal_strength, std::uint64_t seed) {
    SynthConfig scfg;
    scfg.n_companies = 5000;
    scfg.signal_strength = signal_strength;
    scfg.seed = seed;
    EntityStore store = generate_synthetic(scfg);
    auto ucfg = UniverseConfig::defaults();

    // Train strictly before the evaluation window, then score the
    // companies whose trigger round falls after the cutoff; the label is
    // whether a success event follows the trigger. Nothing the model saw
    // can mention the outcome, so only the planted signal is learnable.
    Date cutoff = d("2010-01-01");
    Date window_end = d("2013-01-01");
    PipelineParams params;
    params.nmf_rank = 5;
    params.nmf_max_iters = 100;
    params.seed = seed;
    params.classifier.hidden_sizes = {32};
    params.classifier.epochs = 80;
    params.classifier.seed = seed;
    auto pipeline = fit_pipeline(store, ucfg, cutoff, params);
    if (!pipeline) return -1.0;

    std::map<Uuid, const OutcomeRecord*> outcome_of;
    auto successes = label_successful(store, ucfg);
    for (const auto& rec : successes) outcome_of[rec.company_uuid] = &rec;

    std::vector<double> scores;
    std::vector<int> labels;
    for (const auto& [company, round] :
         eligible_companies(store, cutoff, window_end,
                            EntryMode::earlybird)) {
        // Series B only keeps the holdout symmetric: both classes reach
        // the trigger through the same seed -> A -> B ladder prefix.
        if (round->investment_type != RoundType::series_b) continue;
        int label = 0;
        if (auto it = outcome_of.find(company->uuid); it != outcome_of.end())
            for (const auto& event : it->second->events)
                if (!(event.date < round->announced_on)) {
                    label = 1;
                    break;
                }
        scores.push_back(pipeline->score(store, company->uuid));
        labels.push_back(label);
    }
    return roc_auc(scores, labels);
}

bool planted_signal() {
    double strong = holdout_auc(1.0, 7);
    double none = holdout_auc(0.0, 8);
    std::printf("      (signal=1 auc %.3f, signal=0 auc %.3f)\n", strong,
                none);
    return strong >= 0.85 && none >= 0.45 && none <= 0.55;
}

// ---- criterion 6: portfolio invariants ----

std::string ledger_fingerprint(const std::vector<LedgerEntry>& ledger) {
    std::ostringstream out;
    out.precision(17);
    for (const auto& e : ledger) {
        out << e.uuid << '|' << e.added.to_iso() << '|'
            << int(e.exit_reason) << '|'
            << (e.expired ? e.expired->to_iso() : "") << '|'
            << (e.last_series_value ? *e.last_series_value : -1) << '\n';
    }
    return out.str();
}

bool portfolio_invariants() {
    SynthConfig scfg;
    scfg.n_companies = 600;
    scfg.seed = 21;
    EntityStore store = generate_synthetic(scfg);
    auto ucfg = UniverseConfig::defaults();

    BacktestConfig bcfg;
    bcfg.retrain_interval_months = 12;
    bcfg.seed = 21;
    bcfg.nmf_rank = 8;
    bcfg.nmf_max_iters = 60;
    bcfg.classifier.hidden_sizes = {16, 8};
    bcfg.classifier.epochs = 6;
    bcfg.classifier.batch_size = 32;
    bcfg.classifier.seed = 21;
    auto predictions = run_walkforward(store, ucfg, bcfg).records;
    if (predictions.empty()) return false;
    auto outcomes = label_successful(store, ucfg);

    std::mt19937_64 rng(99);
    for (int rep = 0; rep < 20; ++rep) {
        PortfolioConfig cfg;
        cfg.capacity = 5 + rng() % 36;
        cfg.monthly_top_k = 1 + rng() % 5;
        cfg.threshold_base = 0.3 + 0.3 * (rng() % 100) / 100.0;
        cfg.threshold_slope = 0.1 * (rng() % 100) / 100.0;
        cfg.longtime_days = 365 + int(rng() % 540);
        cfg.exit_mode = rep % 2 ? ExitMode::first : ExitMode::last;
        auto ledger = simulate_fund(predictions, store, outcomes, cfg);
        auto replay = simulate_fund(predictions, store, outcomes, cfg);
        if (ledger_fingerprint(ledger) != ledger_fingerprint(replay))
            return false;

        std::map<Date, std::size_t> additions;
        for (const auto& e : ledger) additions[e.added]++;
        for (const auto& [date, count] : additions)
            if (count > cfg.monthly_top_k) return false;

        for (const auto& e : ledger) {
            bool exited = e.exit_reason != ExitReason::still_in;
            if (exited != e.expired.has_value()) return false;
            if (e.exit_reason == ExitReason::longtime) {
                Date last_activity = e.added;
                for (const FundingRound* r : store.rounds_of(e.uuid)) {
                    if (!(r->announced_on < *e.expired)) break;
                    last_activity = std::max(last_activity, r->announced_on);
                }
                if (*e.expired - last_activity < cfg.longtime_days)
                    return false;
            }
        }
        auto pnl = compute_pnl(ledger, store, cfg);
        for (const auto& row : pnl.rows)
            if (row.portfolio_size > cfg.capacity) return false;
    }
    return true;
}

// ---- criteria 7 and 8: PnL fixture and golden ledger rows ----

PredictionRecord prediction(const Uuid& uuid, const char* window_start,
                            const Uuid& round, const char* announced,
                            double score) {
    PredictionRecord p;
    p.company_uuid = uuid;
    p.company_name = "Company " + uuid;
    p.window_start = d(window_start);
    p.window_end = d(window_start).plus_months_floor(3);
    p.trigger_round_uuid = round;
    p.trigger_round_type = RoundType::series_b;
    p.trigger_announced_on = d(announced);
    p.score = score;
    p.train_size = 100;
    return p;
}

OutcomeRecord outcome(const Uuid& uuid, OutcomeKind kind, const char* date,
                      std::optional<Usd> value) {
    OutcomeRecord rec;
    rec.company_uuid = uuid;
    rec.label = 1;
    rec.outcome_kind = kind;
    rec.success_date = d(date);
    rec.events.push_back({kind, d(date), value});
    return rec;
}

bool pnl_accounting() {
    std::vector<Company> companies{test::company("a", "2012-01-01"),
                                   test::company("b", "2012-01-01"),
                                   test::company("c", "2012-01-01")};
    std::vector<FundingRound> rounds{
        test::round("ra", "a", RoundType::series_b, "2016-01-10", 10000000,
                    100000000),
        test::round("ra2", "a", RoundType::series_c, "2017-06-01", 50000000,
                    1400000000),
        test::round("rb", "b", RoundType::series_b, "2016-01-10", 5000000,
                    50000000),
        test::round("rc", "c", RoundType::series_b, "2016-01-10", 20000000,
                    200000000),
        test::round("rc2", "c", RoundType::series_c, "2017-12-01", 40000000,
                    400000000),
        test::round("rc3", "c", RoundType::series_d, "2019-06-01", 40000000),
        test::round("rc4", "c", RoundType::series_e, "2021-01-01", 40000000)};
    auto store = test::build_store(std::move(companies), std::move(rounds));
    PortfolioConfig cfg;
    cfg.reference_train_size = 100;
    std::vector<OutcomeRecord> outcomes{
        outcome("a", OutcomeKind::UNIC, "2017-06-01", 1400000000)};
    auto ledger = simulate_fund({prediction("a", "2016-01-01", "ra",
                                            "2016-01-10", 0.9),
                                 prediction("b", "2016-01-01", "rb",
                                            "2016-01-10", 0.8),
                                 prediction("c", "2016-01-01", "rc",
                                            "2016-01-10", 0.7)},
                                store, outcomes, cfg);
    if (ledger.size() != 3) return false;
    auto pnl = compute_pnl(ledger, store, cfg);
    // per-company multiples: a 100M -> 1.4B success = 14x, b longtime = 0x,
    // c 200M -> 400M STILL_IN = 2x; closed form (14 + 0 + 2) / 3
    if (std::abs(pnl.growth_multiple - 16.0 / 3.0) > 1e-9) return false;
    double marks = cfg.stake_usd * (14.0 + 0.0 + 2.0);
    const auto& last = pnl.rows.back();
    if (std::abs(last.realized_pnl + last.unrealized_pnl - marks) >
        1e-9 * marks)
        return false;
    return std::abs(last.realized_pnl - cfg.stake_usd * 14.0) <= 1e-9 * marks;
}

bool golden_ledger() {
    // success pattern: enter February 2016, unicorn event mid-2021
    std::vector<FundingRound> k_rounds{
        test::round("r1", "k", RoundType::series_c, "2016-01-15", 10000000,
                    500000000),
        test::round("r2", "k", RoundType::series_d, "2017-06-01", 20000000),
        test::round("r3", "k", RoundType::series_e, "2019-01-01", 30000000),
        test::round("r4", "k", RoundType::series_f, "2020-06-01", 40000000),
        test::round("r5", "k", RoundType::series_g, "2021-07-01", 60000000,
                    45000000000)};
    auto k_store = test::build_store({test::company("k", "2010-01-01")},
                                     std::move(k_rounds));
    PortfolioConfig cfg;
    cfg.reference_train_size = 100;
    std::vector<OutcomeRecord> outcomes{
        outcome("k", OutcomeKind::UNIC, "2021-07-01", 45000000000)};
    auto ledger = simulate_fund({prediction("k", "2016-01-01", "r1",
                                            "2016-01-15", 0.9)},
                                k_store, outcomes, cfg);
    if (ledger.size() != 1) return false;
    const auto& k = ledger[0];
    if (k.added != d("2016-02-01")) return false;
    if (k.exit_reason != ExitReason::success) return false;
    if (k.expired != d("2021-07-01")) return false;
    if (k.last_series_value != Usd(45000000000)) return false;

    // longtime pattern: one round, expelled exactly when the 730-day gap
    // since entry elapses
    auto f_store = test::build_store(
        {test::company("f", "2012-01-01")},
        {test::round("fr", "f", RoundType::series_b, "2016-01-15", 5000000,
                     50000000)});
    auto f_ledger = simulate_fund({prediction("f", "2016-01-01", "fr",
                                              "2016-01-15", 0.8)},
                                  f_store, {}, cfg);
    if (f_ledger.size() != 1) return false;
    const auto& f = f_ledger[0];
    if (f.exit_reason != ExitReason::longtime) return false;
    if (f.expired != d("2018-02-01")) return false;
    return *f.expired - f.added >= 730;
}

// ---- criterion 9: time-series CV folds and leakage ----

bool cv_folds() {
    SynthConfig scfg;
    scfg.n_companies = 800;
    scfg.seed = 5;
    EntityStore store = generate_synthetic(scfg);
    auto ucfg = UniverseConfig::defaults();

    CvConfig cfg;
    cfg.pipeline = light_pipeline(5);
    auto result = time_series_cv(store, ucfg, cfg);
    if (result.folds.size() != 6) return false;
    for (int i = 0; i < 6; ++i)
        if (result.folds[i].fold_year != 2016 + i) return false;

    // mutation-based leakage check on the first fold's training cutoff
    Date cutoff = d("2016-01-01");
    EntityStore perturbed = test::perturb_from(store, cutoff);
    auto a = fit_pipeline(store, ucfg, cutoff, cfg.pipeline);
    auto b = fit_pipeline(perturbed, ucfg, cutoff, cfg.pipeline);
    if (!a || !b) return false;
    int compared = 0;
    for (const auto& c : store.companies()) {
        if (!c.founded_on || !(*c.founded_on < d("2015-01-01"))) continue;
        if (a->score(store, c.uuid) != b->score(perturbed, c.uuid))
            return false;
        if (++compared >= 40) break;
    }
    return compared > 0;
}

// ---- criterion 10: end-to-end CLI smoke ----

bool file_has_rows(const std::filesystem::path& path, std::size_t min_lines) {
    std::ifstream in(path);
    if (!in) return false;
    std::size_t lines = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++lines;
    return lines >= min_lines;
}

bool cli_smoke() {
#ifndef VCFUND_BIN
    std::printf("      (no CLI binary path compiled in)\n");
    return false;
#else
    namespace fs = std::filesystem;
    fs::path root = fs::temp_directory_path() / "vcfund-acceptance";
    fs::remove_all(root);
    fs::create_directories(root);
    fs::path data = root / "data";
    fs::path out = root / "out";
    std::string bin = VCFUND_BIN;

    auto run = [&](const std::string& args) {
        std::string cmd = bin + " " + args + " > /dev/null 2>&1";
        return std::system(cmd.c_str()) == 0;
    };
    std::string light =
        " --nmf-rank 8 --nmf-iters 60 --hidden 16 8 --epochs 8 --seed 7";
    if (!run("synth --n 2000 --seed 7 --out " + data.string())) return false;
    std::string common = " --data " + data.string() + " --out " + out.string();
    if (!run("ingest" + common)) return false;
    if (!run("label" + common)) return false;
    if (!run("backtest" + common + " --interval 12" + light)) return false;
    if (!run("simulate" + common + " --predictions " +
             (out / "predictions.csv").string()))
        return false;
    if (!run("cv" + common + light)) return false;
    if (!run("rank-investors" + common + " --as-of 2020-01-01 --epochs 20"))
        return false;
    if (!run("rank-founders" + common + " --as-of 2020-01-01")) return false;
    if (!run("recommend-unicorns" + common + " --as-of 2015-01-01"))
        return false;

    return file_has_rows(out / "ingest_stats.csv", 2) &&
           file_has_rows(out / "labeled.csv", 2) &&
           file_has_rows(out / "predictions.csv", 2) &&
           file_has_rows(out / "ledger.csv", 2) &&
           file_has_rows(out / "pnl.csv", 2) &&
           file_has_rows(out / "cv.csv", 7) &&
           file_has_rows(out / "investor_scores.csv", 2) &&
           file_has_rows(out / "founder_scores.csv", 2) &&
           file_has_rows(out / "unicorn_recommendations.csv", 2);
#endif
}

}  // namespace

int main() {
    criterion(1,
              "no lookahead: perturbing post-cutoff data leaves all sampled "
              "window scores unchanged",
              no_lookahead);
    criterion(2, "roc/pr metrics match brute-force oracles to 1e-12",
              metric_oracles);
    criterion(3,
              "analytic gradients match central differences (< 1e-4, 10 "
              "random initializations)",
              gradients);
    criterion(4,
              "nmf objective is monotone over 500 iterations and factors "
              "stay nonnegative",
              nmf_monotone);
    criterion(5,
              "planted signal is recovered (auc >= 0.85) and absent signal "
              "is not (auc in [0.45, 0.55])",
              planted_signal);
    criterion(6,
              "portfolio invariants hold across 20 randomized simulations",
              portfolio_invariants);
    criterion(7,
              "pnl accounting identity and the three-company closed form "
              "hold to 1e-9",
              pnl_accounting);
    criterion(8, "golden ledger rows: success and longtime exit patterns",
              golden_ledger);
    criterion(9, "time-series cv has six folds and leaks nothing at the fold "
                 "cutoff",
              cv_folds);
    criterion(10, "end-to-end cli smoke run produces non-empty outputs",
              cli_smoke);

    if (g_failures == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    return 1;
}
