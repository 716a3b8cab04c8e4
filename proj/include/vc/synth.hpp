#pragma once

#include <cstdint>

#include "vc/store.hpp"

namespace vc {

/// Controls for the synthetic Crunchbase-style export. A hidden
/// per-company quality score drives round sizes, founder history depth
/// and investor choice; success is a logistic function of that score
/// scaled by signal_strength, so signal_strength 0 produces unlearnable
/// labels and 1 produces strongly recoverable ones.
struct SynthConfig {
    std::size_t n_companies = 1000;  // >= 100
    Date span_start = Date::from_ymd(2000, 1, 1);
    Date snapshot = Date::from_ymd(2022, 6, 14);
    double signal_strength = 1.0;  // in [0, 1]
    double positive_rate = 0.06;   // in (0, 1)
    std::uint64_t seed = 0;
};

/// Deterministic per seed; the returned store round-trips through
/// save_export / load_export with zero quarantined rows.
EntityStore generate_synthetic(const SynthConfig& cfg);

}  // namespace vc
