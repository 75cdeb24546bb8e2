#include "chowrobbins/distributions.hpp"

#include "chowrobbins/errors.hpp"

#include <cmath>
#include <vector>

namespace chowrobbins {

namespace {

template <class Scalar>
Scalar from_rational(const Rational& r);

template <>
double from_rational<double>(const Rational& r) {
    return to_double(r);
}

template <>
Rational from_rational<Rational>(const Rational& r) {
    return r;
}

double as_double(double x) { return x; }
double as_double(const Rational& x) { return to_double(x); }

void check_start(Position p, Horizon n_max) {
    if (p.heads < 0 || p.tails < 0) throw DomainError("position has a negative coordinate");
    if (p.level() > n_max.value()) throw DomainError("position lies beyond the horizon");
}

// Decisions of the optimal policy for every cell reachable from p, indexed
// [level - p.level()][heads - p.heads].
using DecisionBands = std::vector<std::vector<Decision>>;

DecisionBands optimal_decisions(Position p, Horizon n_max, const NumericMode& mode) {
    DecisionBands bands(static_cast<std::size_t>(n_max.value() - p.level() + 1));
    auto keep = [&](const auto& d) { bands[static_cast<std::size_t>(d.level - p.level())] = d.decisions; };
    if (mode.is_exact())
        sweep_exact(n_max, p, keep);
    else
        sweep_float(n_max, p, mode.epsilon(), keep);
    return bands;
}

// Pushes unit mass forward from `start`; a cell either absorbs its mass at
// its stop payoff or splits it evenly between (h+1, t) and (h, t+1).
template <class Scalar, class IsStop, class TerminalPayoff>
PayoffDistribution<Scalar> forward_absorb(Position start, Horizon n_max, IsStop is_stop, TerminalPayoff terminal_pay) {
    const std::int64_t n = n_max.value();
    PayoffDistribution<Scalar> dist;
    std::vector<Scalar> mass{Scalar(1)};
    std::vector<Scalar> next;
    for (std::int64_t level = start.level(); level <= n; ++level) {
        const bool terminal = level == n;
        next.assign(mass.size() + 1, Scalar(0));
        for (std::size_t i = 0; i < mass.size(); ++i) {
            if (mass[i] == 0) continue;
            const std::int64_t h = start.heads + static_cast<std::int64_t>(i);
            if (terminal) {
                dist.atoms[terminal_pay(h)] += mass[i];
            } else if (is_stop(h, level)) {
                dist.atoms[stop_payoff<Rational>(h, level)] += mass[i];
            } else {
                Scalar half = mass[i] / 2;
                next[i + 1] += half;
                next[i] += half;
            }
        }
        mass.swap(next);
    }
    return dist;
}

template <class Scalar>
PayoffDistribution<Scalar> optimal_distribution(Position p, Horizon n_max, const NumericMode& mode) {
    check_start(p, n_max);
    const DecisionBands bands = optimal_decisions(p, n_max, mode);
    return forward_absorb<Scalar>(
        p, n_max,
        [&](std::int64_t h, std::int64_t level) {
            return bands[static_cast<std::size_t>(level - p.level())][static_cast<std::size_t>(h - p.heads)] ==
                   Decision::Stop;
        },
        [&](std::int64_t h) { return terminal_payoff<Rational>(h, n_max.value()); });
}

template <class Scalar>
Scalar goal_probability(const GoalParams& goal, Position p, Horizon n_max) {
    check_start(p, n_max);
    const std::int64_t n = n_max.value();
    // Band of heads [p.heads, level - p.tails] on each level.
    std::vector<Scalar> next;
    for (std::int64_t h = p.heads; h <= n - p.tails; ++h)
        next.push_back(goal.satisfied(h, n) ? Scalar(1) : Scalar(0));
    std::vector<Scalar> cur;
    for (std::int64_t level = n - 1; level >= p.level(); --level) {
        cur.resize(next.size() - 1);
        for (std::size_t i = 0; i < cur.size(); ++i) {
            const std::int64_t h = p.heads + static_cast<std::int64_t>(i);
            cur[i] = goal.satisfied(h, level) ? Scalar(1) : Scalar((next[i] + next[i + 1]) / 2);
        }
        next.swap(cur);
    }
    return next.front();
}

template <class Scalar>
PayoffDistribution<Scalar> goal_law(const GoalParams& goal, Position p, Horizon n_max, MissedGoalPayoff missed) {
    check_start(p, n_max);
    const std::int64_t n = n_max.value();
    return forward_absorb<Scalar>(
        p, n_max, [&](std::int64_t h, std::int64_t level) { return goal.satisfied(h, level); },
        [&](std::int64_t h) -> Rational {
            if (missed == MissedGoalPayoff::Floor) return terminal_payoff<Rational>(h, n);
            return goal.satisfied(h, n) ? stop_payoff<Rational>(h, n) : Rational(0);
        });
}

}  // namespace

template <class Scalar>
Scalar PayoffDistribution<Scalar>::total_mass() const {
    Scalar sum(0);
    for (const auto& [payoff, prob] : atoms) sum += prob;
    return sum;
}

template <class Scalar>
Scalar PayoffDistribution<Scalar>::mean() const {
    Scalar sum(0);
    for (const auto& [payoff, prob] : atoms) sum += from_rational<Scalar>(payoff) * prob;
    return sum;
}

template <class Scalar>
Scalar PayoffDistribution<Scalar>::tail_probability(const Rational& threshold) const {
    Scalar sum(0);
    for (auto it = atoms.lower_bound(threshold); it != atoms.end(); ++it) sum += it->second;
    return sum;
}

template struct PayoffDistribution<double>;
template struct PayoffDistribution<Rational>;

FloatDistribution payoff_distribution(Position p, Horizon n_max, const NumericMode& mode) {
    return optimal_distribution<double>(p, n_max, mode);
}

ExactDistribution exact_payoff_distribution(Position p, Horizon n_max) {
    return optimal_distribution<Rational>(p, n_max, NumericMode::exact());
}

template <class Scalar>
Moments moments(const PayoffDistribution<Scalar>& d, int order) {
    if (order < 1 || order > 4) throw DomainError("moments: order must be in [1, 4]");
    if (d.atoms.empty()) throw DomainError("moments: empty distribution");
    Moments m;
    m.order = order;
    long double mean = 0;
    for (const auto& [payoff, prob] : d.atoms)
        mean += static_cast<long double>(to_double(payoff)) * static_cast<long double>(as_double(prob));
    m.mean = static_cast<double>(mean);
    if (order < 2) return m;

    long double c2 = 0, c3 = 0, c4 = 0;
    for (const auto& [payoff, prob] : d.atoms) {
        const long double x = static_cast<long double>(to_double(payoff)) - mean;
        const long double w = static_cast<long double>(as_double(prob));
        c2 += w * x * x;
        c3 += w * x * x * x;
        c4 += w * x * x * x * x;
    }
    const bool degenerate = d.atoms.size() == 1 || c2 <= 0;
    m.std_dev = degenerate ? 0.0 : static_cast<double>(std::sqrt(c2));
    if (degenerate) return m;
    if (order >= 3) m.skewness = static_cast<double>(c3 / std::pow(c2, 1.5L));
    if (order >= 4) m.kurtosis = static_cast<double>(c4 / (c2 * c2));
    return m;
}

template Moments moments<double>(const PayoffDistribution<double>&, int);
template Moments moments<Rational>(const PayoffDistribution<Rational>&, int);

const char* to_string(MissedGoalPayoff m) { return m == MissedGoalPayoff::Zero ? "zero" : "floor"; }

GoalParams::GoalParams(Rational g) : g_(std::move(g)) {
    g_.canonicalize();
    if (!(g_ > 0 && g_ < 1)) throw DomainError("goal must lie strictly between 0 and 1, got " + to_string(g_));
}

bool GoalParams::satisfied(std::int64_t heads, std::int64_t level) const {
    if (level <= 0) return false;
    // heads/level >= num/den  <=>  heads*den >= num*level
    return Integer(heads) * g_.get_den() >= g_.get_num() * Integer(level);
}

double goal_value(const GoalParams& goal, Position p, Horizon n_max, const NumericMode& mode) {
    if (mode.is_exact()) return to_double(exact_goal_value(goal, p, n_max));
    return goal_probability<double>(goal, p, n_max);
}

Rational exact_goal_value(const GoalParams& goal, Position p, Horizon n_max) {
    return goal_probability<Rational>(goal, p, n_max);
}

FloatDistribution goal_distribution(const GoalParams& goal, Position p, Horizon n_max, const NumericMode& mode,
                                    MissedGoalPayoff missed) {
    if (mode.is_exact()) {
        FloatDistribution out;
        for (const auto& [payoff, prob] : exact_goal_distribution(goal, p, n_max, missed).atoms)
            out.atoms.emplace(payoff, to_double(prob));
        return out;
    }
    return goal_law<double>(goal, p, n_max, missed);
}

ExactDistribution exact_goal_distribution(const GoalParams& goal, Position p, Horizon n_max,
                                          MissedGoalPayoff missed) {
    return goal_law<Rational>(goal, p, n_max, missed);
}

CompareReport compare(const GoalParams& goal, Horizon n_max, const NumericMode& mode, MissedGoalPayoff missed) {
    const Position origin{0, 0};
    CompareReport report;
    report.horizon = n_max;
    report.goal = goal;
    report.missed_goal = missed;
    if (mode.is_exact()) {
        const ExactDistribution optimal = exact_payoff_distribution(origin, n_max);
        const ExactDistribution goal_law = exact_goal_distribution(goal, origin, n_max, missed);
        report.optimal_expectation = to_double(optimal.mean());
        report.optimal_goal_prob = to_double(optimal.tail_probability(goal.g()));
        report.goal_strategy_expectation = to_double(goal_law.mean());
        report.goal_strategy_prob = to_double(goal_law.tail_probability(goal.g()));
    } else {
        const FloatDistribution optimal = payoff_distribution(origin, n_max, mode);
        const FloatDistribution goal_law = goal_distribution(goal, origin, n_max, mode, missed);
        report.optimal_expectation = optimal.mean();
        report.optimal_goal_prob = optimal.tail_probability(goal.g());
        report.goal_strategy_expectation = goal_law.mean();
        report.goal_strategy_prob = goal_law.tail_probability(goal.g());
    }
    return report;
}

}  // namespace chowrobbins
