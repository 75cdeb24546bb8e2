#pragma once

#include "chowrobbins/numerics.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace chowrobbins {

struct Position {
    std::int64_t heads = 0;
    std::int64_t tails = 0;

    std::int64_t level() const { return heads + tails; }
    friend bool operator==(const Position&, const Position&) = default;
};

// Finite game length: at h+t == N the player must collect max(1/2, h/N).
class Horizon {
public:
    explicit Horizon(std::int64_t n_max);
    std::int64_t value() const { return n_max_; }

private:
    std::int64_t n_max_;
};

enum class Decision : std::uint8_t { Stop, Go };

const char* to_string(Decision d);

// Payoff for stopping at (heads, level-heads); 0 at the origin.
template <class Scalar>
Scalar stop_payoff(std::int64_t heads, std::int64_t level);

// Forced payoff on the terminal diagonal, max(1/2, heads/N).
template <class Scalar>
Scalar terminal_payoff(std::int64_t heads, std::int64_t n_max);

// A contiguous run of cells on one anti-diagonal h+t == level. A full
// diagonal has first_heads == 0 and level+1 cells; cones and bands keep only
// the cells that influence a target.
template <class Scalar>
struct DiagonalTable {
    std::int64_t level = 0;
    std::int64_t first_heads = 0;
    std::vector<Scalar> values;
    std::vector<Decision> decisions;

    std::int64_t size() const { return static_cast<std::int64_t>(values.size()); }
    std::int64_t last_heads() const { return first_heads + size() - 1; }
    bool contains(std::int64_t heads) const { return heads >= first_heads && heads <= last_heads(); }
    const Scalar& at(std::int64_t heads) const { return values[static_cast<std::size_t>(heads - first_heads)]; }
    Decision decision_at(std::int64_t heads) const {
        return decisions[static_cast<std::size_t>(heads - first_heads)];
    }
};

template <class Scalar>
DiagonalTable<Scalar> boundary_values(Horizon n_max);

// Terminal cells with heads in [first_heads, last_heads].
template <class Scalar>
DiagonalTable<Scalar> boundary_band(Horizon n_max, std::int64_t first_heads, std::int64_t last_heads);

// One backward-induction level: cell h of the result is
// max((next[h+1] + next[h]) / 2, h/level), the band shrinking by one cell.
template <class Scalar>
DiagonalTable<Scalar> step_back(const DiagonalTable<Scalar>& next, const NumericMode& mode);

// Allocation-free float step used by the long sweeps.
void step_back_into(const DiagonalTable<double>& next, DiagonalTable<double>& out, double decision_epsilon);

// Exact diagonal stored as integer numerators over one common denominator.
struct ScaledDiagonal {
    std::int64_t level = 0;
    std::int64_t first_heads = 0;
    Integer denominator = 1;
    std::vector<Integer> numerators;
    std::vector<Decision> decisions;

    std::int64_t size() const { return static_cast<std::int64_t>(numerators.size()); }
    std::int64_t last_heads() const { return first_heads + size() - 1; }
    bool contains(std::int64_t heads) const { return heads >= first_heads && heads <= last_heads(); }
    Rational value_at(std::int64_t heads) const;
    Decision decision_at(std::int64_t heads) const {
        return decisions[static_cast<std::size_t>(heads - first_heads)];
    }
    DiagonalTable<Rational> to_table() const;
};

// Backward sweeps over the cells reachable from `apex`, from the terminal
// diagonal down to apex.level(). Only two diagonals are alive at a time;
// on_level sees every diagonal (terminal one included) before it is retired.
void sweep_float(Horizon n_max, Position apex, double decision_epsilon,
                 const std::function<void(const DiagonalTable<double>&)>& on_level);
void sweep_exact(Horizon n_max, Position apex, const std::function<void(const ScaledDiagonal&)>& on_level);

// f_N(h,t). In exact mode the exact value is rounded once at the end.
double value(Position p, Horizon n_max, const NumericMode& mode);
Rational exact_value(Position p, Horizon n_max);

// Stop iff the stop payoff is not beaten by continuing; always Stop on the
// terminal diagonal.
Decision decision(Position p, Horizon n_max, const NumericMode& mode);

// Every level of the exact triangle for N, indexed by level.
std::vector<DiagonalTable<Rational>> exact_triangle(Horizon n_max);

// F(m, alpha, n) = f_{2n+1}(n+alpha, n-alpha-m+1).
struct ConeQuery {
    std::int64_t m = 1;
    std::int64_t alpha = 0;
    std::int64_t n = 1;

    Position position() const { return {n + alpha, n - alpha - m + 1}; }
};

// Exact F(m, alpha, n) from the (m+1)-cell cone of terminal cells above the
// target; O(m^2) rational operations regardless of n.
Rational cone_values_exact(const ConeQuery& q);

// F(m, alpha, n) for every alpha in [alpha_lo, alpha_hi] from one shared cone.
// Alphas whose position has a negative coordinate are clipped off the ends.
struct ConeRow {
    std::int64_t m = 1;
    std::int64_t n = 1;
    std::int64_t first_alpha = 0;
    std::vector<Rational> values;

    std::int64_t last_alpha() const { return first_alpha + static_cast<std::int64_t>(values.size()) - 1; }
    bool contains(std::int64_t alpha) const { return alpha >= first_alpha && alpha <= last_alpha(); }
    const Rational& at(std::int64_t alpha) const { return values[static_cast<std::size_t>(alpha - first_alpha)]; }
};

ConeRow cone_row(std::int64_t m, std::int64_t n, std::int64_t alpha_lo, std::int64_t alpha_hi);

}  // namespace chowrobbins
