#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chowrobbins/errors.hpp"
#include "chowrobbins/induction.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace chowrobbins;

TEST_CASE("payoffs and domain checks") {
    CHECK(stop_payoff<Rational>(0, 0) == 0);
    CHECK(stop_payoff<Rational>(2, 3) == Rational(2, 3));
    CHECK(terminal_payoff<Rational>(1, 4) == Rational(1, 2));
    CHECK(terminal_payoff<Rational>(3, 4) == Rational(3, 4));
    CHECK(terminal_payoff<double>(3, 4) == 0.75);
    CHECK_THROWS_AS(Horizon(0), DomainError);
    CHECK_THROWS_AS(value({3, 2}, Horizon(4), NumericMode()), DomainError);
    CHECK_THROWS_AS(value({-1, 2}, Horizon(4), NumericMode()), DomainError);
    CHECK_THROWS_AS(decision({0, 0}, Horizon(4), NumericMode()), DomainError);
    CHECK(decision({2, 2}, Horizon(4), NumericMode::exact()) == Decision::Stop);
}

TEST_CASE("small horizons by hand") {
    // N=1: toss once, collect max(1/2, h).
    CHECK(exact_value({0, 0}, Horizon(1)) == Rational(3, 4));
    // N=2 from the origin: after H stop at 1; after T continue to 1/2.
    CHECK(exact_value({0, 0}, Horizon(2)) == Rational(3, 4));
    CHECK(decision({1, 0}, Horizon(2), NumericMode::exact()) == Decision::Stop);
    CHECK(decision({0, 1}, Horizon(2), NumericMode::exact()) == Decision::Go);
}

TEST_CASE("exact triangle matches the naive recursion") {
    for (std::int64_t n = 1; n <= 30; ++n) {
        oracle::NaiveGame game(n);
        const auto tri = exact_triangle(Horizon(n));
        REQUIRE(static_cast<std::int64_t>(tri.size()) == n + 1);
        for (std::int64_t level = 0; level <= n; ++level) {
            for (std::int64_t h = 0; h <= level; ++h) {
                const auto& diag = tri[static_cast<std::size_t>(level)];
                CHECK(diag.at(h) == game.value(h, level - h));
                CHECK((diag.decision_at(h) == Decision::Go) == game.go(h, level - h));
            }
        }
    }
}

TEST_CASE("value and exact_value agree with the triangle") {
    const auto tri = exact_triangle(Horizon(60));
    for (std::int64_t h = 0; h <= 20; ++h)
        for (std::int64_t t = 0; t + h <= 40; t += 3) {
            const Rational& v = tri[static_cast<std::size_t>(h + t)].at(h);
            CHECK(exact_value({h, t}, Horizon(60)) == v);
            CHECK(value({h, t}, Horizon(60), NumericMode()) == doctest::Approx(to_double(v)).epsilon(1e-13));
            CHECK(value({h, t}, Horizon(60), NumericMode::exact()) == doctest::Approx(to_double(v)).epsilon(1e-15));
        }
}

TEST_CASE("value invariants for N <= 200") {
    for (std::int64_t n : {1, 2, 3, 7, 25, 64, 101, 200}) {
        const auto tri = exact_triangle(Horizon(n));
        for (std::int64_t level = 0; level < n; ++level) {
            const auto& d = tri[static_cast<std::size_t>(level)];
            const auto& next = tri[static_cast<std::size_t>(level + 1)];
            for (std::int64_t h = 0; h <= level; ++h) {
                const Rational cont = (next.at(h + 1) + next.at(h)) / 2;
                const Rational stop = stop_payoff<Rational>(h, level);
                const Rational& f = d.at(h);
                CHECK(f == (cont > stop ? cont : stop));
                CHECK(f >= Rational(1, 2));
                CHECK(f <= 1);
                CHECK(f >= stop);
            }
        }
    }
}

TEST_CASE("values are nondecreasing in the horizon") {
    auto prev = exact_triangle(Horizon(1));
    for (std::int64_t n = 2; n <= 100; ++n) {
        auto cur = exact_triangle(Horizon(n));
        for (std::int64_t level = 0; level < n; ++level)
            for (std::int64_t h = 0; h <= level; ++h)
                CHECK(cur[static_cast<std::size_t>(level)].at(h) >= prev[static_cast<std::size_t>(level)].at(h));
        prev = std::move(cur);
    }
}

// Float and exact decisions over the whole triangle of horizon n.
static std::int64_t decision_mismatches(std::int64_t n) {
    std::vector<std::vector<Decision>> exact(static_cast<std::size_t>(n + 1));
    sweep_exact(Horizon(n), {0, 0}, [&](const ScaledDiagonal& d) {
        exact[static_cast<std::size_t>(d.level)] = d.decisions;
    });
    std::int64_t bad = 0;
    sweep_float(Horizon(n), {0, 0}, NumericMode::kDefaultEpsilon, [&](const DiagonalTable<double>& d) {
        if (d.decisions != exact[static_cast<std::size_t>(d.level)]) ++bad;
    });
    return bad;
}

TEST_CASE("float decisions equal exact decisions") {
    for (std::int64_t n = 1; n <= 200; ++n) CHECK(decision_mismatches(n) == 0);
    for (std::int64_t n : {500, 1000, 2000}) CHECK(decision_mismatches(n) == 0);
}

TEST_CASE("scaled diagonal reproduces the triangle") {
    const std::int64_t n = 40;
    const auto tri = exact_triangle(Horizon(n));
    sweep_exact(Horizon(n), {3, 5}, [&](const ScaledDiagonal& d) {
        const auto table = d.to_table();
        for (std::int64_t h = d.first_heads; h <= d.last_heads(); ++h) {
            CHECK(d.value_at(h) == tri[static_cast<std::size_t>(d.level)].at(h));
            CHECK(table.at(h) == d.value_at(h));
        }
    });
}

TEST_CASE("cone values match the full triangle") {
    for (std::int64_t n = 1; n <= 12; ++n) {
        const auto tri = exact_triangle(Horizon(2 * n + 1));
        for (std::int64_t m = 1; m <= std::min<std::int64_t>(6, 2 * n + 1); ++m) {
            const std::int64_t level = 2 * n + 1 - m;
            for (std::int64_t alpha = -n; alpha <= level - n; ++alpha) {
                const ConeQuery q{m, alpha, n};
                const Position p = q.position();
                REQUIRE(p.level() == level);
                CHECK(cone_values_exact(q) == tri[static_cast<std::size_t>(level)].at(p.heads));
            }
            const ConeRow row = cone_row(m, n, -n - 3, level - n + 3);
            CHECK(row.first_alpha == -n);
            CHECK(row.last_alpha() == level - n);
            for (std::int64_t alpha = row.first_alpha; alpha <= row.last_alpha(); ++alpha)
                CHECK(row.at(alpha) == cone_values_exact({m, alpha, n}));
        }
    }
    CHECK_THROWS_AS(cone_values_exact({0, 0, 3}), DomainError);
    CHECK_THROWS_AS(cone_values_exact({8, 0, 3}), DomainError);
}

TEST_CASE("origin at N=200") {
    CHECK(std::fabs(value({0, 0}, Horizon(200), NumericMode()) - 0.7916879464) < 1e-9);
    CHECK(std::fabs(to_double(exact_value({0, 0}, Horizon(200))) - 0.7916879464) < 1e-9);
}
