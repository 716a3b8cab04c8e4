#pragma once

// Shared fixture builders for the test suites.

#include <string>
#include <vector>

#include "vc/store.hpp"
#include "vc/universe.hpp"

namespace vc::test {

Date d(const char* iso);

Company company(const Uuid& uuid, const char* founded,
                std::vector<std::string> groups = {"Software"});

FundingRound round(const Uuid& uuid, const Uuid& company, RoundType type,
                   const char* announced,
                   std::optional<Usd> raised = std::nullopt,
                   std::optional<Usd> post_money = std::nullopt);

/// Store assembled from entity lists; snapshot defaults to 2022-06-14.
EntityStore build_store(std::vector<Company> companies,
                        std::vector<FundingRound> rounds,
                        std::vector<Ipo> ipos = {},
                        std::vector<Acquisition> acquisitions = {},
                        std::vector<Person> people = {},
                        std::vector<Degree> degrees = {},
                        std::vector<Job> jobs = {},
                        std::vector<Investor> investors = {},
                        std::vector<Investment> investments = {});

/// Scrambles every value on records dated >= cutoff without touching
/// dates, types, or identifiers, so point-in-time queries before the
/// cutoff must be unaffected.
EntityStore perturb_from(const EntityStore& store, Date cutoff);

}  // namespace vc::test
