#pragma once

#include "chowrobbins/numerics.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace chowrobbins {

enum class Comparison { Strict, Weak };

const char* to_string(Comparison c);

// The ratio heads/tails against a/b, tracked through the surplus
// s = b*heads - a*tails. Strict escape: s > 0. Weak escape: s >= 0 at some
// step >= 1 (the origin has no ratio).
class Barrier {
public:
    Barrier(std::int64_t a, std::int64_t b, Comparison comparison);

    std::int64_t a() const { return a_; }
    std::int64_t b() const { return b_; }
    Comparison comparison() const { return comparison_; }

    std::int64_t surplus(std::int64_t heads, std::int64_t tails) const { return b_ * heads - a_ * tails; }
    // Smallest surplus that counts as escaped.
    std::int64_t threshold() const { return comparison_ == Comparison::Strict ? 1 : 0; }
    // Lattice point (heads, tails) is inside the non-escaped region.
    bool inside(std::int64_t heads, std::int64_t tails) const {
        return (heads == 0 && tails == 0) || surplus(heads, tails) < threshold();
    }

private:
    std::int64_t a_;
    std::int64_t b_;
    Comparison comparison_;
};

struct EscapeResult {
    double value = 0.0;  // bracket midpoint
    double lower = 0.0;  // mass absorbed so far
    double upper = 0.0;  // lower + bound on the escape chance of surviving mass
    std::int64_t steps = 0;

    double width() const { return upper - lower; }
};

// Probability that a fair-coin walk from the origin ever escapes. The
// surviving mass is bounded with the supermartingale exp(theta*s), theta
// just below the positive root of (e^{theta b} + e^{-theta a})/2 = 1, so the
// bracket closes geometrically. Throws ConvergenceError if the bracket is
// still wider than tol after max_steps.
EscapeResult escape_probability(const Barrier& barrier, double tol = 1e-9, std::int64_t max_steps = 100000);

// Mass absorbed within the first `steps` tosses (no truncation).
double absorbed_mass(const Barrier& barrier, std::int64_t steps);
Rational exact_absorbed_mass(const Barrier& barrier, std::int64_t steps);

// Counts of east(heads)/north(tails) unit-step walks from the origin that
// stay inside the barrier's non-escaped region, for every point of a box.
struct WalkTable {
    std::int64_t max_heads = 0;
    std::int64_t max_tails = 0;
    std::vector<Integer> counts;  // row-major by tails

    const Integer& count(std::int64_t heads, std::int64_t tails) const {
        return counts[static_cast<std::size_t>(tails * (max_heads + 1) + heads)];
    }
};

WalkTable walk_table(const Barrier& barrier, std::int64_t max_heads, std::int64_t max_tails);

// Walks to (n, n), n = 0..n_max. The endpoint lies strictly inside the region.
std::vector<Integer> walk_counts_diagonal(const Barrier& barrier, std::int64_t n_max);

// Walks to (a n, b n), n = 0..n_max. The endpoint sits on the line s = 0 and
// may touch it on the last step under either comparison.
std::vector<Integer> walk_counts_barrier(const Barrier& barrier, std::int64_t n_max);

// counts(n) ~ C * base^n / n^{half_powers/2}
struct GrowthForm {
    Rational base;
    int half_powers = 1;
};

GrowthForm diagonal_growth();                     // 4^n / sqrt(n)
GrowthForm barrier_growth(const Barrier& barrier); // ((a+b)^{a+b} / (a^a b^b))^n / n^{3/2}

struct AsymptoticEstimate {
    double constant = 0.0;
    std::int64_t terms_used = 0;
    int extrapolation_order = 0;
    double error_proxy = 0.0;  // |last estimate - previous estimate|
};

// Richardson extrapolation, assuming c_n = C + k1/n + k2/n^2 + ..., of
// values[i] = c_{i+1}.
AsymptoticEstimate richardson(std::span<const double> values, int order);

// Normalizes counts[n] (n >= 1; counts[0] is ignored) by the growth form and
// extrapolates in long double.
AsymptoticEstimate estimate_constant(const std::vector<Integer>& counts, const GrowthForm& law, int order);

}  // namespace chowrobbins
