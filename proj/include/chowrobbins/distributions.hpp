#pragma once

#include "chowrobbins/induction.hpp"

#include <map>
#include <optional>

namespace chowrobbins {

// Law of the final payoff: exact payoff -> probability. Keys stay exact in
// float mode so 1/2 reached by different routes lands on one atom.
template <class Scalar>
struct PayoffDistribution {
    std::map<Rational, Scalar> atoms;

    Scalar total_mass() const;
    Scalar mean() const;
    // P(X >= threshold), compared exactly on the keys.
    Scalar tail_probability(const Rational& threshold) const;
};

using FloatDistribution = PayoffDistribution<double>;
using ExactDistribution = PayoffDistribution<Rational>;

// Payoff law under the expectation-optimal policy. The Stop/Go table comes
// from a backward sweep; mass is then pushed forward from p.
FloatDistribution payoff_distribution(Position p, Horizon n_max, const NumericMode& mode);
ExactDistribution exact_payoff_distribution(Position p, Horizon n_max);

// mean always; std_dev for order >= 2; skewness and (non-excess) kurtosis for
// order >= 3 / 4 unless the law is a point mass.
struct Moments {
    int order = 1;
    double mean = 0.0;
    std::optional<double> std_dev;
    std::optional<double> skewness;
    std::optional<double> kurtosis;
};

template <class Scalar>
Moments moments(const PayoffDistribution<Scalar>& d, int order);

class GoalParams {
public:
    explicit GoalParams(Rational g);
    const Rational& g() const { return g_; }
    // h/(h+t) >= g; never at the origin.
    bool satisfied(std::int64_t heads, std::int64_t level) const;

private:
    Rational g_;
};

// P_N(g; h, t): probability that the ratio reaches g at some level <= N
// (terminal cells count when h/N >= g).
double goal_value(const GoalParams& goal, Position p, Horizon n_max, const NumericMode& mode);
Rational exact_goal_value(const GoalParams& goal, Position p, Horizon n_max);

// What the goal strategy collects on the terminal diagonal when h/N < g.
// Zero treats a missed goal as a total loss (the default); Floor pays the
// game's usual max(1/2, h/N).
enum class MissedGoalPayoff { Zero, Floor };

const char* to_string(MissedGoalPayoff m);

// Payoff law of "stop at the first h/(h+t) >= g, else play to the horizon".
FloatDistribution goal_distribution(const GoalParams& goal, Position p, Horizon n_max, const NumericMode& mode,
                                    MissedGoalPayoff missed = MissedGoalPayoff::Zero);
ExactDistribution exact_goal_distribution(const GoalParams& goal, Position p, Horizon n_max,
                                          MissedGoalPayoff missed = MissedGoalPayoff::Zero);

struct CompareReport {
    Horizon horizon{1};
    GoalParams goal{Rational(1, 2)};
    MissedGoalPayoff missed_goal = MissedGoalPayoff::Zero;
    double optimal_expectation = 0.0;
    double optimal_goal_prob = 0.0;          // P(payoff >= g), optimal policy
    double goal_strategy_expectation = 0.0;
    double goal_strategy_prob = 0.0;         // P(payoff >= g), goal strategy
};

// Both strategies from (0,0).
CompareReport compare(const GoalParams& goal, Horizon n_max, const NumericMode& mode,
                      MissedGoalPayoff missed = MissedGoalPayoff::Zero);

}  // namespace chowrobbins
