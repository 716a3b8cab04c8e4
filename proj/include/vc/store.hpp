#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "vc/dates.hpp"

namespace vc {

using Uuid = std::string;
using Usd = std::int64_t;

struct LoadError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotFoundError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class CompanyStatus { operating, acquired, ipo, closed, unknown };

enum class RoundType {
    pre_seed,
    seed,
    angel,
    series_a,
    series_b,
    series_c,
    series_d,
    series_e,
    series_f,
    series_g,
    series_h,
    series_i,
    series_j,
    series_unknown,
    private_equity,
    undisclosed,
    secondary_market,
    other,
};

RoundType parse_round_type(std::string_view s);
std::string_view round_type_name(RoundType t);
CompanyStatus parse_status(std::string_view s);
std::string_view status_name(CompanyStatus s);

/// series_unknown / private_equity / undisclosed: kept in a funding
/// history only when a series_b round precedes them.
bool is_ambiguous_round(RoundType t);

/// series_b .. series_j (the "any"-entry list).
bool is_series_b_to_j(RoundType t);

struct Company {
    Uuid uuid;
    std::string name;
    std::optional<Date> founded_on;
    std::string country_code, region, city;
    std::vector<std::string> category_list;
    std::vector<std::string> category_groups_list;
    CompanyStatus status = CompanyStatus::unknown;
    Uuid parent_uuid;  // empty = none
};

struct FundingRound {
    Uuid uuid;
    Uuid company_uuid;
    RoundType investment_type = RoundType::other;
    Date announced_on;
    std::optional<Usd> raised_amount_usd;
    std::optional<Usd> post_money_valuation_usd;
    std::optional<int> investor_count;
    std::vector<Uuid> lead_investor_uuids;
};

struct Ipo {
    Uuid company_uuid;
    Date went_public_on;
    std::optional<Usd> valuation_usd;
    std::optional<Usd> money_raised_usd;
};

struct Acquisition {
    Uuid acquiree_uuid;
    Uuid acquirer_uuid;
    Date announced_on;
    std::optional<Usd> price_usd;
};

struct Degree {
    Uuid person_uuid;
    std::string institution_name, degree_type, subject;
    bool is_completed = false;
    std::optional<Date> completed_on;
};

struct Job {
    Uuid person_uuid;
    Uuid org_uuid;
    std::optional<Date> started_on;
    std::optional<Date> ended_on;
    std::string title;
    bool is_founder = false;
};

struct Person {
    Uuid uuid;
    std::string name;
    std::string gender;
    std::string country_code, region, city;
    bool has_twitter = false, has_linkedin = false, has_facebook = false;
    Uuid featured_job_organization_uuid;  // empty = none
};

struct Investor {
    Uuid uuid;
    std::string name;
    std::string type;
    std::vector<std::string> investor_types;
    std::string country_code, region, city;
    std::optional<std::int64_t> investment_count;
    std::optional<Usd> total_funding_usd;
    bool has_twitter = false, has_linkedin = false, has_facebook = false;
};

struct Investment {
    Uuid round_uuid;
    Uuid investor_uuid;
    bool is_lead = false;
};

struct QuarantineStats {
    std::map<std::string, int> per_file;
    int total() const;
};

/// Immutable snapshot of a Crunchbase-style export. Built once by
/// load_export, then safe for concurrent reads.
class EntityStore {
public:
    static EntityStore load_export(const std::filesystem::path& directory,
                                   Date snapshot_date);

    /// Builds a store from in-memory entities (the synthetic generator's
    /// path). Applies the same canonical sort as load_export.
    static EntityStore from_entities(
        Date snapshot_date, std::vector<Company> companies,
        std::vector<FundingRound> rounds, std::vector<Ipo> ipos,
        std::vector<Acquisition> acquisitions, std::vector<Person> people,
        std::vector<Degree> degrees, std::vector<Job> jobs,
        std::vector<Investor> investors, std::vector<Investment> investments);

    /// Re-emits the nine schema CSVs, canonically sorted. load then save
    /// of a canonical export is byte-identical.
    void save_export(const std::filesystem::path& directory) const;

    Date snapshot_date() const { return snapshot_date_; }
    const QuarantineStats& quarantine() const { return quarantine_; }

    const std::vector<Company>& companies() const { return companies_; }
    const std::vector<FundingRound>& rounds() const { return rounds_; }
    const std::vector<Ipo>& ipos() const { return ipos_; }
    const std::vector<Acquisition>& acquisitions() const {
        return acquisitions_;
    }
    const std::vector<Person>& people() const { return people_; }
    const std::vector<Degree>& degrees() const { return degrees_; }
    const std::vector<Job>& jobs() const { return jobs_; }
    const std::vector<Investor>& investors() const { return investors_; }
    const std::vector<Investment>& investments() const { return investments_; }

    const Company* find_company(const Uuid& uuid) const;
    const Person* find_person(const Uuid& uuid) const;
    const Investor* find_investor(const Uuid& uuid) const;
    const FundingRound* find_round(const Uuid& uuid) const;

    /// All rounds of a company, chronological (ties by uuid).
    const std::vector<const FundingRound*>& rounds_of(const Uuid& company) const;
    /// People with an is_founder job at the company.
    const std::vector<const Person*>& founders_of(const Uuid& company) const;
    const std::vector<const Investment*>& investments_in(const Uuid& round) const;
    const std::vector<const Degree*>& degrees_of(const Uuid& person) const;
    const std::vector<const Job*>& jobs_of(const Uuid& person) const;
    const std::vector<const Job*>& jobs_at(const Uuid& company) const;
    const std::vector<const Ipo*>& ipos_of(const Uuid& company) const;
    const std::vector<const Acquisition*>& acquisitions_of(
        const Uuid& company) const;
    /// Rounds the investor participated in, chronological.
    const std::vector<const FundingRound*>& rounds_of_investor(
        const Uuid& investor) const;
    /// Companies founded by the person: (company, founded_on).
    const std::vector<std::pair<const Company*, Date>>& founded_companies_of(
        const Uuid& person) const;
    /// True when the uuid is a parent or subsidiary of another org.
    bool is_parent_or_subsidiary(const Uuid& company) const;

    /// Rounds with announced_on < as_of, chronological; ambiguous types
    /// only when a prior series_b exists. Throws NotFoundError on an
    /// unknown company.
    std::vector<const FundingRound*> funding_history(const Uuid& company,
                                                     Date as_of) const;

    /// Mutable access for test-only perturbation of a copied store.
    std::vector<FundingRound>& mutable_rounds() { return rounds_; }
    std::vector<Ipo>& mutable_ipos() { return ipos_; }
    std::vector<Acquisition>& mutable_acquisitions() { return acquisitions_; }
    std::vector<Job>& mutable_jobs() { return jobs_; }
    std::vector<Degree>& mutable_degrees() { return degrees_; }
    void rebuild_indexes();

    EntityStore() = default;
    EntityStore(EntityStore&&) = default;
    EntityStore& operator=(EntityStore&&) = default;
    // Indexes hold pointers into the entity vectors, so copies rebuild them.
    EntityStore(const EntityStore& other);
    EntityStore& operator=(const EntityStore& other);

private:
    Date snapshot_date_;
    QuarantineStats quarantine_;

    std::vector<Company> companies_;
    std::vector<FundingRound> rounds_;
    std::vector<Ipo> ipos_;
    std::vector<Acquisition> acquisitions_;
    std::vector<Person> people_;
    std::vector<Degree> degrees_;
    std::vector<Job> jobs_;
    std::vector<Investor> investors_;
    std::vector<Investment> investments_;

    std::unordered_map<Uuid, std::size_t> company_index_;
    std::unordered_map<Uuid, std::size_t> person_index_;
    std::unordered_map<Uuid, std::size_t> investor_index_;
    std::unordered_map<Uuid, std::size_t> round_index_;
    std::unordered_map<Uuid, std::vector<const FundingRound*>> company_rounds_;
    std::unordered_map<Uuid, std::vector<const Person*>> company_founders_;
    std::unordered_map<Uuid, std::vector<const Investment*>> round_investments_;
    std::unordered_map<Uuid, std::vector<const Degree*>> person_degrees_;
    std::unordered_map<Uuid, std::vector<const Job*>> person_jobs_;
    std::unordered_map<Uuid, std::vector<const Job*>> org_jobs_;
    std::unordered_map<Uuid, std::vector<const Ipo*>> company_ipos_;
    std::unordered_map<Uuid, std::vector<const Acquisition*>> company_acqs_;
    std::unordered_map<Uuid, std::vector<const FundingRound*>> investor_rounds_;
    std::unordered_map<Uuid, std::vector<std::pair<const Company*, Date>>>
        person_founded_;
    std::unordered_map<Uuid, bool> parent_or_sub_;
};

}  // namespace vc
