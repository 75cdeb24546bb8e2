#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chowrobbins/distributions.hpp"
#include "chowrobbins/errors.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace chowrobbins;

TEST_CASE("forward absorption equals the generating-function recursion") {
    for (std::int64_t n = 1; n <= 40; ++n) {
        oracle::GeneratingFunction gf(n);
        for (const Position p : {Position{0, 0}, Position{1, 0}, Position{0, 1}, Position{2, 1}, Position{1, 3}}) {
            if (p.level() > n) continue;
            const ExactDistribution d = exact_payoff_distribution(p, Horizon(n));
            const oracle::FracPoly& g = gf.at(p.heads, p.tails);
            CHECK(d.atoms == g);
        }
    }
}

TEST_CASE("float distribution tracks the exact one") {
    const ExactDistribution e = exact_payoff_distribution({0, 0}, Horizon(60));
    const FloatDistribution f = payoff_distribution({0, 0}, Horizon(60), NumericMode());
    REQUIRE(e.atoms.size() == f.atoms.size());
    for (const auto& [payoff, prob] : e.atoms) CHECK(f.atoms.at(payoff) == doctest::Approx(to_double(prob)).epsilon(1e-13));
}

TEST_CASE("mass, mean identity and tails") {
    for (std::int64_t n : {5, 17, 50, 120}) {
        const ExactDistribution d = exact_payoff_distribution({0, 0}, Horizon(n));
        CHECK(d.total_mass() == 1);
        CHECK(d.mean() == exact_value({0, 0}, Horizon(n)));
        // Tail of a threshold between atoms equals the tail at the next atom.
        Rational running = 0;
        for (auto it = d.atoms.rbegin(); it != d.atoms.rend(); ++it) {
            running += it->second;
            CHECK(d.tail_probability(it->first) == running);
        }
        CHECK(d.tail_probability(Rational(0)) == 1);
        CHECK(d.tail_probability(Rational(11, 10)) == 0);
        // Payoffs never fall below 1/2.
        CHECK(d.atoms.begin()->first >= Rational(1, 2));
    }
    const FloatDistribution f = payoff_distribution({0, 0}, Horizon(200), NumericMode());
    CHECK(std::fabs(f.total_mass() - 1.0) < 1e-12);
    CHECK(std::fabs(f.mean() - value({0, 0}, Horizon(200), NumericMode())) < 1e-10);
}

TEST_CASE("mean identity for every start with h+t <= 20, N <= 60") {
    for (std::int64_t n = 1; n <= 60; ++n) {
        const auto tri = exact_triangle(Horizon(n));
        for (std::int64_t level = 0; level <= std::min<std::int64_t>(20, n); ++level)
            for (std::int64_t h = 0; h <= level; ++h) {
                const ExactDistribution d = exact_payoff_distribution({h, level - h}, Horizon(n));
                CHECK(d.total_mass() == 1);
                CHECK(d.mean() == tri[static_cast<std::size_t>(level)].at(h));
            }
    }
}

TEST_CASE("moments") {
    FloatDistribution two;
    two.atoms = {{Rational(1, 2), 0.5}, {Rational(1), 0.5}};
    const Moments m = moments(two, 4);
    CHECK(m.mean == doctest::Approx(0.75));
    CHECK(*m.std_dev == doctest::Approx(0.25));
    CHECK(*m.skewness == doctest::Approx(0.0));
    CHECK(*m.kurtosis == doctest::Approx(1.0));

    FloatDistribution point;
    point.atoms = {{Rational(3, 4), 1.0}};
    const Moments p = moments(point, 4);
    CHECK(*p.std_dev == 0.0);
    CHECK_FALSE(p.skewness.has_value());
    CHECK_FALSE(p.kurtosis.has_value());

    const Moments first = moments(two, 1);
    CHECK_FALSE(first.std_dev.has_value());
    CHECK_THROWS_AS(moments(two, 5), DomainError);

    const ExactDistribution e = exact_payoff_distribution({0, 0}, Horizon(30));
    const Moments me = moments(e, 2);
    const Moments mf = moments(payoff_distribution({0, 0}, Horizon(30), NumericMode()), 2);
    CHECK(me.mean == doctest::Approx(mf.mean).epsilon(1e-14));
    CHECK(*me.std_dev == doctest::Approx(*mf.std_dev).epsilon(1e-12));
}

TEST_CASE("goal parameters") {
    CHECK_THROWS_AS(GoalParams(Rational(0)), DomainError);
    CHECK_THROWS_AS(GoalParams(Rational(1)), DomainError);
    const GoalParams g(Rational(3, 5));
    CHECK(g.satisfied(3, 5));
    CHECK_FALSE(g.satisfied(2, 4));
    CHECK_FALSE(g.satisfied(0, 0));
}

TEST_CASE("goal value equals the naive recursion") {
    for (const Rational& g : {Rational(3, 5), Rational(7, 10), Rational(1, 3), Rational(5, 9)}) {
        for (std::int64_t n : {1, 6, 19, 40}) {
            oracle::NaiveGoal naive(g, n);
            for (const Position p : {Position{0, 0}, Position{1, 2}, Position{0, 3}}) {
                if (p.level() > n) continue;
                CHECK(exact_goal_value(GoalParams(g), p, Horizon(n)) == naive.value(p.heads, p.tails));
                CHECK(goal_value(GoalParams(g), p, Horizon(n), NumericMode()) ==
                      doctest::Approx(to_double(naive.value(p.heads, p.tails))).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("goal probability is nonincreasing in g") {
    for (std::int64_t n : {10, 37, 90}) {
        Rational prev = 2;
        for (int k = 1; k < 40; ++k) {
            const Rational g(k, 40);
            const Rational v = exact_goal_value(GoalParams(g), {0, 0}, Horizon(n));
            CHECK(v <= prev);
            prev = v;
        }
    }
}

TEST_CASE("goal distribution") {
    const GoalParams g(Rational(3, 5));
    const ExactDistribution zero = exact_goal_distribution(g, {0, 0}, Horizon(50), MissedGoalPayoff::Zero);
    const ExactDistribution floor = exact_goal_distribution(g, {0, 0}, Horizon(50), MissedGoalPayoff::Floor);
    CHECK(zero.total_mass() == 1);
    CHECK(floor.total_mass() == 1);
    // The goal strategy reaches g exactly when its payoff is >= g.
    const Rational p = exact_goal_value(g, {0, 0}, Horizon(50));
    CHECK(zero.tail_probability(g.g()) == p);
    CHECK(floor.tail_probability(g.g()) == p);
    CHECK(floor.mean() >= zero.mean());
    const FloatDistribution f = goal_distribution(g, {0, 0}, Horizon(50), NumericMode(), MissedGoalPayoff::Zero);
    CHECK(f.mean() == doctest::Approx(to_double(zero.mean())).epsilon(1e-13));
}

TEST_CASE("dominance: each strategy wins its own criterion") {
    for (std::int64_t n : {50, 100, 200}) {
        for (const Rational& g : {Rational(11, 20), Rational(3, 5), Rational(13, 20), Rational(7, 10)}) {
            for (MissedGoalPayoff missed : {MissedGoalPayoff::Zero, MissedGoalPayoff::Floor}) {
                const CompareReport r = compare(GoalParams(g), Horizon(n), NumericMode(), missed);
                CHECK(r.optimal_expectation >= r.goal_strategy_expectation - 1e-12);
                CHECK(r.goal_strategy_prob >= r.optimal_goal_prob - 1e-12);
            }
        }
    }
}

TEST_CASE("comparison at N=200") {
    const CompareReport six = compare(GoalParams(Rational(3, 5)), Horizon(200), NumericMode());
    CHECK(std::fabs(six.optimal_expectation - 0.7916879464) < 1e-9);
    CHECK(std::fabs(six.optimal_goal_prob - 0.6917238235) < 1e-9);
    CHECK(std::fabs(six.goal_strategy_prob - 0.7753928313) < 1e-9);
    CHECK(std::fabs(six.goal_strategy_expectation - 0.6742902054) < 1e-9);
    const CompareReport seven = compare(GoalParams(Rational(7, 10)), Horizon(200), NumericMode());
    CHECK(std::fabs(seven.optimal_goal_prob - 0.5625) < 1e-9);
    CHECK(std::fabs(seven.goal_strategy_prob - 0.6075176458) < 1e-9);
    CHECK(std::fabs(seven.goal_strategy_expectation - 0.5787939263) < 1e-9);
    // A goal at or below 1/2 is met by every outcome of the floored payoff.
    const CompareReport half = compare(GoalParams(Rational(1, 2)), Horizon(200), NumericMode(), MissedGoalPayoff::Floor);
    CHECK(half.optimal_goal_prob == doctest::Approx(1.0));
    CHECK(half.goal_strategy_prob == doctest::Approx(1.0));
}
