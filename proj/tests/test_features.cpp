#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "support.hpp"
#include "vc/features.hpp"
#include "vc/nmf.hpp"

using namespace vc;
using test::d;

namespace {

Person person(const Uuid& uuid, std::string country, std::string gender = "male") {
    Person p;
    p.uuid = uuid;
    p.name = "Person " + uuid;
    p.gender = std::move(gender);
    p.country_code = std::move(country);
    p.region = "Region";
    p.city = "City";
    p.has_linkedin = true;
    return p;
}

Job founder_job(const Uuid& person, const Uuid& org, const char* started) {
    Job j;
    j.person_uuid = person;
    j.org_uuid = org;
    j.started_on = d(started);
    j.title = "Founder";
    j.is_founder = true;
    return j;
}

Job plain_job(const Uuid& person, const Uuid& org, const char* started) {
    Job j;
    j.person_uuid = person;
    j.org_uuid = org;
    j.started_on = d(started);
    j.title = "Engineer";
    return j;
}

Degree degree(const Uuid& person, std::string institution,
              std::optional<const char*> completed = std::nullopt,
              bool is_completed = true) {
    Degree g;
    g.person_uuid = person;
    g.institution_name = std::move(institution);
    g.degree_type = "BSc";
    g.subject = "CS";
    g.is_completed = is_completed;
    if (completed) g.completed_on = d(*completed);
    return g;
}

Investor investor(const Uuid& uuid, std::string country = "USA") {
    Investor v;
    v.uuid = uuid;
    v.name = "Fund " + uuid;
    v.type = "venture_capital";
    v.investor_types = {"venture_capital"};
    v.country_code = std::move(country);
    v.region = "Region";
    v.city = "City";
    return v;
}

}  // namespace

TEST_CASE("median uses lower middle for flags and mean of middles otherwise") {
    CHECK(aggregate_median({3.0, 1.0, 2.0}, false) == 2.0);
    CHECK(aggregate_median({0.0, 1.0}, true) == 0.0);   // lower middle
    CHECK(aggregate_median({10.0, 30.0}, false) == 20.0);
    CHECK(aggregate_median({1.0, 2.0, 3.0, 4.0}, false) == 2.5);
    CHECK_THROWS_AS(aggregate_median({}, false), std::invalid_argument);
}

TEST_CASE("founder country aggregates to the most frequent value") {
    auto store = test::build_store(
        {test::company("c1", "2015-01-01")}, {}, {}, {},
        {person("p1", "USA"), person("p2", "USA"), person("p3", "GBR")}, {},
        {founder_job("p1", "c1", "2015-01-01"),
         founder_job("p2", "c1", "2015-01-01"),
         founder_job("p3", "c1", "2015-01-01")});

    auto f = founder_features(store, "c1", d("2020-01-01"));
    CHECK(f.categoricals.at("f_country") == "USA");
    CHECK(f.numerics.at("f_number_of_founders") == 3.0);
}

TEST_CASE("mode ties break to the lexicographically smallest value") {
    auto store = test::build_store(
        {test::company("c1", "2015-01-01")}, {}, {}, {},
        {person("p1", "USA"), person("p2", "GBR")}, {},
        {founder_job("p1", "c1", "2015-01-01"),
         founder_job("p2", "c1", "2015-01-01")});
    auto f = founder_features(store, "c1", d("2020-01-01"));
    CHECK(f.categoricals.at("f_country") == "GBR");
}

TEST_CASE("founder history is filtered to events before as_of") {
    auto companies = std::vector<Company>{
        test::company("c1", "2015-01-01"), test::company("old", "2010-01-01"),
        test::company("future", "2019-06-01")};
    auto store = test::build_store(
        std::move(companies), {}, {}, {}, {person("p1", "USA")},
        {degree("p1", "MIT", "2008-06-01"),
         degree("p1", "Stanford", "2021-06-01")},  // after as_of: excluded
        {founder_job("p1", "c1", "2015-01-01"),
         founder_job("p1", "old", "2010-01-01"),
         founder_job("p1", "future", "2019-06-01"),
         plain_job("p1", "old", "2011-01-01"),
         plain_job("p1", "old", "2020-01-01")});  // after as_of: excluded

    auto f = founder_features(store, "c1", d("2019-01-01"));
    CHECK(f.numerics.at("f_num_degrees") == 1.0);
    // "old" counts, "future" is founded after as_of, "c1" itself excluded
    CHECK(f.numerics.at("f_num_last_startups") == 1.0);
    // founder jobs at other orgs count as jobs ("old" in 2010 plus the
    // 2011 engineer role); c1's founder job and post-cutoff jobs do not
    CHECK(f.numerics.at("f_num_last_jobs") == 2.0);
    CHECK(f.categoricals.at("f_institution") == "MIT");
}

TEST_CASE("single founder with two degrees has num_degrees two") {
    auto store = test::build_store(
        {test::company("c1", "2015-01-01")}, {}, {}, {},
        {person("p1", "USA")},
        {degree("p1", "MIT", "2008-06-01"), degree("p1", "CMU", "2010-06-01")},
        {founder_job("p1", "c1", "2015-01-01")});
    auto f = founder_features(store, "c1", d("2019-01-01"));
    CHECK(f.numerics.at("f_num_degrees") == 2.0);
}

TEST_CASE("company with no founders yields an all-missing founder map") {
    auto store = test::build_store({test::company("c1", "2015-01-01")}, {});
    auto f = founder_features(store, "c1", d("2019-01-01"));
    CHECK(f.categoricals.empty());
    CHECK_FALSE(f.numerics.at("f_number_of_founders").has_value());
}

TEST_CASE("investor activity is reconstructed as of the cutoff") {
    // v1 joined 1 round before as_of, v2 joined 3; snapshot-level
    // aggregates on the investor records must be ignored.
    std::vector<Company> companies{test::company("c1", "2015-01-01"),
                                   test::company("c2", "2010-01-01")};
    std::vector<FundingRound> rounds{
        test::round("r1", "c1", RoundType::seed, "2016-01-01", 1000000),
        test::round("x1", "c2", RoundType::series_a, "2014-01-01", 5000000),
        test::round("x2", "c2", RoundType::series_b, "2015-01-01", 5000000),
        test::round("x3", "c2", RoundType::series_c, "2019-06-01", 5000000)};
    Investor v1 = investor("v1");
    v1.investment_count = 999;  // stale snapshot aggregate, must be unused
    Investor v2 = investor("v2");
    std::vector<Investment> invs{{"r1", "v1", true},  {"r1", "v2", false},
                                 {"x1", "v2", false}, {"x2", "v2", false},
                                 {"x3", "v2", false}};
    auto store = test::build_store(std::move(companies), std::move(rounds), {},
                                   {}, {}, {}, {}, {v1, v2}, std::move(invs));

    auto f = investor_features(store, "c1", d("2017-01-01"));
    CHECK(f.numerics.at("i_num_full") == 2.0);
    // counts as of 2017: v1 -> 1 (r1), v2 -> 3 (r1, x1, x2); median = 2
    CHECK(f.numerics.at("i_investment_count") == 2.0);
    CHECK(f.categoricals.at("i_type") == "venture_capital");
}

TEST_CASE("no funding history leaves investor features missing") {
    auto store = test::build_store({test::company("c1", "2015-01-01")}, {});
    auto f = investor_features(store, "c1", d("2019-01-01"));
    CHECK_FALSE(f.numerics.at("i_num_full").has_value());
}

TEST_CASE("round aggregates cover sum mean and max over present values") {
    std::vector<FundingRound> rounds{
        test::round("r1", "c1", RoundType::seed, "2015-06-01", 1000000),
        test::round("r2", "c1", RoundType::series_a, "2016-06-01", 5000000,
                    20000000),
        test::round("r3", "c1", RoundType::series_b, "2017-06-01",
                    std::nullopt, 80000000),
        test::round("r4", "c1", RoundType::series_c, "2019-06-01", 9000000)};
    auto store =
        test::build_store({test::company("c1", "2015-01-01")}, std::move(rounds));

    auto f = round_features(store, "c1", d("2018-01-01"));
    CHECK(f.numerics.at("r_num_rounds") == 3.0);  // r4 is after as_of
    CHECK(f.numerics.at("r_raised_sum") == 6000000.0);
    CHECK(f.numerics.at("r_raised_mean") == 3000000.0);
    CHECK(f.numerics.at("r_raised_max") == 5000000.0);
    CHECK(f.numerics.at("r_post_money_sum") == 100000000.0);
    CHECK(f.numerics.at("r_post_money_max") == 80000000.0);
    CHECK(f.categoricals.at("r_latest_type") == "series_b");
    CHECK(f.categoricals.at("c_country") == "USA");
}

TEST_CASE("lead investor of the latest round resolves to its name") {
    auto r = test::round("r1", "c1", RoundType::series_b, "2016-01-01", 1000000);
    r.lead_investor_uuids = {"v9"};
    auto store = test::build_store({test::company("c1", "2015-01-01")}, {r}, {},
                                   {}, {}, {}, {}, {investor("v9")}, {});
    auto f = round_features(store, "c1", d("2017-01-01"));
    CHECK(f.categoricals.at("r_lead_investor") == "Fund v9");
}

TEST_CASE("fit_encoders assigns lexicographic codes with unknown zero") {
    FeatureMap a, b;
    a.set_cat("country", "USA");
    b.set_cat("country", "GBR");
    auto schema = fit_encoders({a, b});
    REQUIRE(schema.categorical_fields.size() == 1);
    const auto& field = schema.categorical_fields[0];
    CHECK(field.code_of("GBR") == 1);
    CHECK(field.code_of("USA") == 2);
    CHECK(field.code_of("FRA") == 0);
    CHECK(field.code_of("") == 0);
}

TEST_CASE("vocabulary cap keeps the most frequent values") {
    std::vector<FeatureMap> rows;
    for (int i = 0; i < 3; ++i) {
        FeatureMap m;
        m.set_cat("c", "common");
        rows.push_back(m);
    }
    for (const char* v : {"rare_a", "rare_b", "rare_c"}) {
        FeatureMap m;
        m.set_cat("c", v);
        rows.push_back(m);
    }
    auto schema = fit_encoders(rows, 2);
    const auto& vocab = schema.categorical_fields[0].vocabulary;
    // ties among rares break to the smaller value
    CHECK(vocab == std::vector<std::string>{"common", "rare_a"});
}

TEST_CASE("z-scoring matches the direct oracle") {
    std::vector<FeatureMap> rows(3);
    rows[0].set_num("x", 10.0);
    rows[1].set_num("x", 20.0);
    rows[2].set_num("x", 30.0);
    auto schema = fit_encoders(rows);
    REQUIRE(schema.numeric_fields.size() == 1);

    NmfModel tag_model;  // empty vocabulary, dim set below
    tag_model.k = 0;
    schema.tag_embedding_dim = 0;

    double expected[] = {-1.2247448, 0.0, 1.2247448};
    for (int i = 0; i < 3; ++i) {
        auto fv = encode(schema, rows[i], tag_model, {}, d("2020-01-01"));
        REQUIRE(fv.numeric_values.size() == 1);
        CHECK(fv.numeric_values[0] == doctest::Approx(expected[i]).epsilon(1e-6));
        CHECK(fv.missing_mask[0] == 0.0);
    }
}

TEST_CASE("all-missing and constant numeric columns are dropped") {
    std::vector<FeatureMap> rows(2);
    rows[0].set_num("gone", std::nullopt);
    rows[1].set_num("gone", std::nullopt);
    rows[0].set_num("flat", 7.0);
    rows[1].set_num("flat", 7.0);
    rows[0].set_num("ok", 1.0);
    rows[1].set_num("ok", 3.0);
    auto schema = fit_encoders(rows);
    REQUIRE(schema.numeric_fields.size() == 1);
    CHECK(schema.numeric_fields[0].name == "ok");
}

TEST_CASE("missing numerics encode to zero with the mask set") {
    std::vector<FeatureMap> rows(2);
    rows[0].set_num("x", 1.0);
    rows[1].set_num("x", 3.0);
    auto schema = fit_encoders(rows);
    schema.tag_embedding_dim = 0;
    NmfModel tag_model;
    tag_model.k = 0;

    FeatureMap empty;
    auto fv = encode(schema, empty, tag_model, {}, d("2020-01-01"));
    CHECK(fv.numeric_values[0] == 0.0);
    CHECK(fv.missing_mask[0] == 1.0);
    CHECK(fv.categorical_codes.empty());
}

TEST_CASE("seen categorical codes round-trip through the vocabulary") {
    FeatureMap a, b;
    a.set_cat("country", "USA");
    b.set_cat("country", "GBR");
    auto schema = fit_encoders({a, b});
    const auto& field = schema.categorical_fields[0];
    for (const auto& value : field.vocabulary) {
        int code = field.code_of(value);
        REQUIRE(code > 0);
        CHECK(field.vocabulary[std::size_t(code) - 1] == value);
    }
}

TEST_CASE("schema save and load round-trips") {
    FeatureMap a, b;
    a.set_cat("country", "USA");
    a.set_num("x", 1.0);
    b.set_cat("country", "GBR");
    b.set_num("x", 3.0);
    auto schema = fit_encoders({a, b});

    auto path = std::filesystem::temp_directory_path() / "vc-schema-test.txt";
    schema.save(path);
    auto back = FeatureSchema::load(path);
    std::filesystem::remove(path);

    REQUIRE(back.categorical_fields.size() == 1);
    CHECK(back.categorical_fields[0].vocabulary ==
          schema.categorical_fields[0].vocabulary);
    REQUIRE(back.numeric_fields.size() == 1);
    CHECK(back.numeric_fields[0].mean == schema.numeric_fields[0].mean);
    CHECK(back.numeric_fields[0].std == schema.numeric_fields[0].std);
    CHECK(back.tag_embedding_dim == schema.tag_embedding_dim);
}

TEST_CASE("tag rows index into the sorted vocabulary") {
    auto c = test::company("c1", "2015-01-01", {"Software", "Fintech"});
    c.category_list = {"Payments", "Software"};
    auto tags = company_tags(c);
    CHECK(tags == std::vector<std::string>{"Fintech", "Payments", "Software"});

    auto row = tag_row(c, {"Biotech", "Fintech", "Software"});
    CHECK(row == std::vector<double>{0.0, 1.0, 1.0});
}

TEST_CASE("founder aggregation is invariant to founder ordering") {
    // Same attribute multiset attached to differently ordered uuids.
    auto make = [](bool flipped) {
        auto p_first = person(flipped ? "pa" : "pz", flipped ? "GBR" : "USA");
        auto p_second = person(flipped ? "pz" : "pa", flipped ? "USA" : "GBR");
        return test::build_store(
            {test::company("c1", "2015-01-01")}, {}, {}, {},
            {p_first, p_second}, {},
            {founder_job("pa", "c1", "2015-01-01"),
             founder_job("pz", "c1", "2015-01-01")});
    };
    auto f1 = founder_features(make(false), "c1", d("2020-01-01"));
    auto f2 = founder_features(make(true), "c1", d("2020-01-01"));
    CHECK(f1.categoricals == f2.categoricals);
    CHECK(f1.numerics == f2.numerics);
}

TEST_CASE("feature maps ignore every record dated at or after as_of") {
    std::vector<Company> companies{test::company("c1", "2015-01-01"),
                                   test::company("c2", "2012-01-01")};
    std::vector<FundingRound> rounds{
        test::round("r1", "c1", RoundType::seed, "2015-06-01", 1000000),
        test::round("r2", "c1", RoundType::series_a, "2016-06-01", 5000000),
        test::round("r3", "c1", RoundType::series_b, "2019-03-01", 30000000,
                    120000000),
        test::round("x1", "c2", RoundType::series_a, "2018-01-01", 4000000)};
    std::vector<Investment> invs{
        {"r1", "v1", true}, {"r2", "v1", false}, {"r3", "v1", true},
        {"x1", "v1", false}};
    auto store = test::build_store(
        std::move(companies), std::move(rounds), {}, {},
        {person("p1", "USA")},
        {degree("p1", "MIT", "2008-06-01"),
         degree("p1", "Stanford", "2019-06-01")},
        {founder_job("p1", "c1", "2015-01-01"),
         plain_job("p1", "c2", "2012-01-01"),
         plain_job("p1", "c2", "2020-02-01")},
        {investor("v1")}, std::move(invs));

    Date as_of = d("2017-01-01");
    auto before = company_feature_map(store, "c1", as_of);
    auto perturbed = test::perturb_from(store, as_of);
    auto after = company_feature_map(perturbed, "c1", as_of);
    CHECK(before.categoricals == after.categoricals);
    CHECK(before.numerics == after.numerics);

    // sanity: later cutoffs do see the perturbation
    auto late_before = company_feature_map(store, "c1", d("2020-01-01"));
    auto late_after = company_feature_map(perturbed, "c1", d("2020-01-01"));
    CHECK(late_before.numerics != late_after.numerics);
}

TEST_CASE("encode is deterministic for identical inputs") {
    FeatureMap a, b;
    a.set_cat("country", "USA");
    a.set_num("x", 1.0);
    b.set_cat("country", "GBR");
    b.set_num("x", 3.0);
    auto schema = fit_encoders({a, b});

    Mat x(4, 3);
    for (std::size_t i = 0; i < x.data.size(); ++i)
        x.data[i] = double((i * 7) % 2);
    auto [model, codes] = nmf_fit(x, 2, 100, 1e-6, 42,
                                  {"Fintech", "Payments", "Software"});
    schema.tag_embedding_dim = 2;

    std::vector<double> tag_row{1.0, 0.0, 1.0};
    auto f1 = encode(schema, a, model, tag_row, d("2020-01-01"));
    auto f2 = encode(schema, a, model, tag_row, d("2020-01-01"));
    CHECK(f1.categorical_codes == f2.categorical_codes);
    CHECK(f1.numeric_values == f2.numeric_values);
    CHECK(f1.tag_embedding == f2.tag_embedding);
    CHECK(f1.tag_embedding.size() == 2);
}
