#pragma once

#include "chowrobbins/induction.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace chowrobbins {

// beta_n(N): smallest heads-minus-tails surplus d >= 0 at which the position
// with n tosses is Stop under horizon N. d always has the parity of n.
struct BetaSequence {
    Horizon horizon{1};
    std::vector<std::int64_t> entries;  // entries[n - 1] = beta_n

    std::int64_t n_max() const { return static_cast<std::int64_t>(entries.size()); }
    std::int64_t at(std::int64_t n) const { return entries.at(static_cast<std::size_t>(n - 1)); }
};

using ProgressCallback = std::function<void(std::int64_t level)>;

BetaSequence beta_sequence(Horizon n_max, std::int64_t levels, const NumericMode& mode,
                           const ProgressCallback& progress = {});

double shepp_ratio(const BetaSequence& beta, std::int64_t n);

struct CutoffRecord {
    Position position;
    std::int64_t cutoff = 0;  // smallest N with decision Go
};

// Smallest N <= cap at which p becomes Go: gap doubling above p's level, then
// bisection. nullopt means "still Stop at cap", which proves nothing about
// larger horizons.
std::optional<CutoffRecord> cutoff(Position p, Horizon cap, const NumericMode& mode);

struct FrontierEntry {
    std::int64_t total = 0;
    Position position;                  // largest-heads Go position at this total, horizon N_ref
    std::optional<std::int64_t> cutoff; // empty if not found within N_cap
};

// One entry per total in [1, total_max] that has at least one Go position at
// N_ref. Cutoff searches are independent and are spread over `threads` workers.
std::vector<FrontierEntry> go_frontier(std::int64_t total_max, Horizon n_ref, Horizon n_cap, const NumericMode& mode,
                                       unsigned threads = 1);

}  // namespace chowrobbins
