#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chowrobbins/errors.hpp"
#include "chowrobbins/escape.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace chowrobbins;

namespace {

struct Reference {
    std::int64_t a, b;
    double strict, weak;
};

const Reference kReference[] = {
    {2, 1, 0.6180339887, 0.6909830056}, {3, 1, 0.5436890127, 0.5803566224}, {3, 2, 0.7481518342, 0.7754441182},
    {4, 1, 0.5187900637, 0.5362190123}, {4, 3, 0.8091410707, 0.8229424412}, {5, 1, 0.5086603916, 0.5170258817},
    {5, 2, 0.5876238826, 0.5996923731}, {5, 3, 0.7158769909, 0.7276461121}, {5, 4, 0.8453136528, 0.8534748833},
};

}  // namespace

TEST_CASE("barrier validation") {
    CHECK_THROWS_AS(Barrier(1, 1, Comparison::Strict), DomainError);
    CHECK_THROWS_AS(Barrier(2, 3, Comparison::Strict), DomainError);
    CHECK_THROWS_AS(Barrier(4, 2, Comparison::Strict), DomainError);
    CHECK_THROWS_AS(Barrier(3, 0, Comparison::Strict), DomainError);
    const Barrier bar(2, 1, Comparison::Weak);
    CHECK(bar.surplus(2, 1) == 0);
    CHECK_FALSE(bar.inside(2, 1));
    CHECK(Barrier(2, 1, Comparison::Strict).inside(2, 1));
    CHECK(bar.inside(0, 0));
}

TEST_CASE("escape probabilities and brackets") {
    for (const auto& row : kReference) {
        const EscapeResult s = escape_probability(Barrier(row.a, row.b, Comparison::Strict));
        const EscapeResult w = escape_probability(Barrier(row.a, row.b, Comparison::Weak));
        CAPTURE(row.a);
        CAPTURE(row.b);
        CHECK(s.lower <= s.value);
        CHECK(s.value <= s.upper);
        CHECK(s.width() <= 1e-9);
        CHECK(w.width() <= 1e-9);
        CHECK(std::fabs(s.value - row.strict) < 1e-8);
        CHECK(std::fabs(w.value - row.weak) < 1e-8);
        // Reaching the line is easier than crossing it.
        CHECK(s.upper <= w.upper);
        CHECK(s.lower <= w.lower);
        // The brackets must contain the 10-digit reference values (rounded).
        CHECK(s.lower <= row.strict + 5e-11);
        CHECK(s.upper >= row.strict - 5e-11);
        CHECK(w.lower <= row.weak + 5e-11);
        CHECK(w.upper >= row.weak - 5e-11);
    }
}

TEST_CASE("strict (2,1) is the golden-ratio root") {
    const double q = escape_probability(Barrier(2, 1, Comparison::Strict), 1e-12).value;
    CHECK(std::fabs(q * q + q - 1.0) < 1e-10);
}

TEST_CASE("convergence failure is reported with the bracket") {
    try {
        escape_probability(Barrier(5, 4, Comparison::Strict), 1e-9, 5);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.lower() <= e.upper());
    }
    CHECK_THROWS_AS(escape_probability(Barrier(2, 1, Comparison::Strict), 0.0), DomainError);
}

TEST_CASE("absorbed mass equals path enumeration") {
    for (const auto [a, b] : {std::pair{2, 1}, std::pair{3, 2}, std::pair{5, 3}}) {
        for (Comparison cmp : {Comparison::Strict, Comparison::Weak}) {
            const Barrier bar(a, b, cmp);
            for (int steps : {1, 2, 5, 9, 16}) {
                const Integer escaped = oracle::escaped_paths(a, b, bar.threshold(), steps);
                Rational expected(escaped, Integer(1) << steps);
                expected.canonicalize();
                CHECK(exact_absorbed_mass(bar, steps) == expected);
                CHECK(absorbed_mass(bar, steps) == doctest::Approx(to_double(expected)).epsilon(1e-15));
            }
        }
    }
}

TEST_CASE("absorbed mass stays below the escape bracket") {
    const Barrier bar(3, 2, Comparison::Weak);
    const EscapeResult r = escape_probability(bar);
    CHECK(absorbed_mass(bar, 2000) <= r.upper);
    CHECK(to_double(exact_absorbed_mass(bar, 200)) <= r.upper);
}

TEST_CASE("walk counts equal exhaustive enumeration") {
    for (const auto [a, b] : {std::pair{2, 1}, std::pair{3, 1}, std::pair{3, 2}, std::pair{5, 3}}) {
        for (Comparison cmp : {Comparison::Strict, Comparison::Weak}) {
            const Barrier bar(a, b, cmp);
            const std::int64_t threshold = cmp == Comparison::Strict ? 1 : 0;
            auto inside = [&](std::int64_t x, std::int64_t y) { return b * x - a * y < threshold; };

            const auto diag = walk_counts_diagonal(bar, 8);
            CHECK(diag[0] == 1);
            for (int n = 1; n <= 8; ++n) {
                const auto counts = oracle::enumerate_walks(2 * n, inside);
                const auto it = counts.find({n, n});
                CHECK(diag[static_cast<std::size_t>(n)] == (it == counts.end() ? 0 : it->second));
            }

            const int max_n = static_cast<int>(16 / (a + b));
            const auto barrier = walk_counts_barrier(bar, max_n);
            CHECK(barrier[0] == 1);
            for (int n = 1; n <= max_n; ++n) {
                const auto counts = oracle::enumerate_walks(static_cast<int>((a + b) * n), inside, true);
                const auto it = counts.find({a * n, b * n});
                CHECK(barrier[static_cast<std::size_t>(n)] == (it == counts.end() ? 0 : it->second));
            }

            const WalkTable table = walk_table(bar, 9, 7);
            for (int length = 1; length <= 16; ++length) {
                const auto counts = oracle::enumerate_walks(length, inside);
                for (std::int64_t x = std::max(0, length - 7); x <= std::min(9, length); ++x) {
                    const auto it = counts.find({x, length - x});
                    CHECK(table.count(x, length - x) == (it == counts.end() ? 0 : it->second));
                }
            }
        }
    }
}

TEST_CASE("walk table: Pascal rule inside, zero outside, bounded by binomials") {
    const Barrier bar(3, 2, Comparison::Strict);
    const WalkTable table = walk_table(bar, 40, 40);
    for (std::int64_t y = 0; y <= 40; ++y)
        for (std::int64_t x = 0; x <= 40; ++x) {
            const Integer& c = table.count(x, y);
            CHECK(c <= oracle::binomial(x + y, x));
            if (x + y == 0) continue;
            if (!bar.inside(x, y)) {
                CHECK(c == 0);
                continue;
            }
            Integer pascal = 0;
            if (x > 0) pascal += table.count(x - 1, y);
            if (y > 0) pascal += table.count(x, y - 1);
            CHECK(c == pascal);
        }
    // Weak keeps fewer walks than strict.
    const WalkTable weak = walk_table(Barrier(3, 2, Comparison::Weak), 40, 40);
    for (std::size_t i = 0; i < weak.counts.size(); ++i) CHECK(weak.counts[i] <= table.counts[i]);
}

TEST_CASE("richardson removes polynomial corrections") {
    std::vector<double> seq;
    for (int n = 1; n <= 40; ++n) seq.push_back(0.75 + 0.3 / n - 0.2 / (double(n) * n));
    CHECK(richardson(seq, 2).constant == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(richardson(seq, 0).constant == doctest::Approx(seq.back()));
    CHECK_THROWS_AS(richardson(std::span<const double>(seq.data(), 2), 2), DomainError);
}

TEST_CASE("growth constants are self-consistent") {
    const Barrier bar(2, 1, Comparison::Strict);
    const auto diag = walk_counts_diagonal(bar, 200);
    const auto barrier = walk_counts_barrier(bar, 200);
    const auto c1a = estimate_constant(diag, diagonal_growth(), 2);
    const auto c1b = estimate_constant(diag, diagonal_growth(), 3);
    const auto c1c = estimate_constant(std::vector<Integer>(diag.begin(), diag.begin() + 151), diagonal_growth(), 2);
    CHECK(std::fabs(c1a.constant - c1b.constant) < 1e-4 * std::fabs(c1a.constant));
    CHECK(std::fabs(c1a.constant - c1c.constant) < 1e-4 * std::fabs(c1a.constant));
    const auto c2a = estimate_constant(barrier, barrier_growth(bar), 2);
    const auto c2b = estimate_constant(barrier, barrier_growth(bar), 3);
    CHECK(std::fabs(c2a.constant - c2b.constant) < 1e-4 * std::fabs(c2a.constant));
    CHECK(barrier_growth(bar).base == Rational(27, 4));
    CHECK(barrier_growth(bar).half_powers == 3);
}
