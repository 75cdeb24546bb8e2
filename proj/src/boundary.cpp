#include "chowrobbins/boundary.hpp"

#include "chowrobbins/errors.hpp"

#include <atomic>
#include <cmath>
#include <string>
#include <thread>

namespace chowrobbins {

namespace {

template <class Diagonal>
std::int64_t min_stop_surplus(const Diagonal& d) {
    const std::int64_t n = d.level;
    for (std::int64_t h = (n + 1) / 2; h <= n; ++h)
        if (d.decision_at(h) == Decision::Stop) return 2 * h - n;
    return n;  // unreachable: (n, 0) pays 1 and is always Stop
}

template <class Diagonal>
std::optional<std::int64_t> max_go_heads(const Diagonal& d) {
    for (std::int64_t h = d.level; h >= 0; --h)
        if (d.decision_at(h) == Decision::Go) return h;
    return std::nullopt;
}

}  // namespace

BetaSequence beta_sequence(Horizon n_max, std::int64_t levels, const NumericMode& mode,
                           const ProgressCallback& progress) {
    if (levels < 1) throw DomainError("beta_sequence: need at least one level");
    if (levels > n_max.value())
        throw DomainError("beta_sequence: n_max " + std::to_string(levels) + " exceeds horizon " +
                          std::to_string(n_max.value()));
    BetaSequence beta;
    beta.horizon = n_max;
    beta.entries.assign(static_cast<std::size_t>(levels), 0);
    auto harvest = [&](const auto& d) {
        if (progress) progress(d.level);
        if (d.level >= 1 && d.level <= levels)
            beta.entries[static_cast<std::size_t>(d.level - 1)] = min_stop_surplus(d);
    };
    if (mode.is_exact()) {
        sweep_exact(n_max, Position{0, 0}, harvest);
    } else {
        sweep_float(n_max, Position{0, 0}, mode.epsilon(), harvest);
    }
    return beta;
}

double shepp_ratio(const BetaSequence& beta, std::int64_t n) {
    if (n < 1 || n > beta.n_max()) throw DomainError("shepp_ratio: n outside the beta sequence");
    return static_cast<double>(beta.at(n)) / std::sqrt(static_cast<double>(n));
}

std::optional<CutoffRecord> cutoff(Position p, Horizon cap, const NumericMode& mode) {
    if (p.heads < 0 || p.tails < 0) throw DomainError("cutoff: negative coordinate");
    if (p.level() < 1) throw DomainError("cutoff: the origin has no stop payoff");
    if (p.level() >= cap.value()) return std::nullopt;

    // Go-ness is monotone in N: f_N grows with N while h/(h+t) does not move.
    std::int64_t last_stop = p.level();  // the terminal diagonal is always Stop
    std::int64_t first_go = 0;
    for (std::int64_t gap = 1;; gap *= 2) {
        const std::int64_t probe = std::min(p.level() + gap, cap.value());
        if (decision(p, Horizon(probe), mode) == Decision::Go) {
            first_go = probe;
            break;
        }
        last_stop = probe;
        if (probe == cap.value()) return std::nullopt;
    }
    while (first_go - last_stop > 1) {
        const std::int64_t mid = last_stop + (first_go - last_stop) / 2;
        if (decision(p, Horizon(mid), mode) == Decision::Go)
            first_go = mid;
        else
            last_stop = mid;
    }
    return CutoffRecord{p, first_go};
}

std::vector<FrontierEntry> go_frontier(std::int64_t total_max, Horizon n_ref, Horizon n_cap, const NumericMode& mode,
                                       unsigned threads) {
    if (total_max < 1 || total_max > n_ref.value() || n_ref.value() > n_cap.value())
        throw DomainError("go_frontier: need 1 <= total_max <= N_ref <= N_cap");

    std::vector<FrontierEntry> entries;
    std::vector<std::optional<std::int64_t>> go_heads(static_cast<std::size_t>(total_max + 1));
    auto harvest = [&](const auto& d) {
        if (d.level >= 1 && d.level <= total_max) go_heads[static_cast<std::size_t>(d.level)] = max_go_heads(d);
    };
    if (mode.is_exact()) {
        sweep_exact(n_ref, Position{0, 0}, harvest);
    } else {
        sweep_float(n_ref, Position{0, 0}, mode.epsilon(), harvest);
    }
    for (std::int64_t i = 1; i <= total_max; ++i) {
        if (const auto h = go_heads[static_cast<std::size_t>(i)])
            entries.push_back(FrontierEntry{i, Position{*h, i - *h}, std::nullopt});
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < entries.size(); k = next++) {
            if (auto rec = cutoff(entries[k].position, n_cap, mode)) entries[k].cutoff = rec->cutoff;
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(entries.size())));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return entries;
}

}  // namespace chowrobbins
