#include "chowrobbins/escape.hpp"

#include "chowrobbins/errors.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace chowrobbins {

const char* to_string(Comparison c) { return c == Comparison::Strict ? "strict" : "weak"; }

Barrier::Barrier(std::int64_t a, std::int64_t b, Comparison comparison) : a_(a), b_(b), comparison_(comparison) {
    if (b < 1 || a <= b) throw DomainError("barrier needs a > b >= 1");
    if (std::gcd(a, b) != 1) throw DomainError("barrier a/b must be in lowest terms");
}

namespace {

// phi(theta) = (e^{theta b} + e^{-theta a}) / 2 is convex with phi(0) = 1 and
// phi'(0) = (b - a)/2 < 0, so it dips below 1 and crosses back at one
// theta* in (0, ln 2 / b]. Returns a theta with phi(theta) <= 1.
double tilt_exponent(std::int64_t a, std::int64_t b) {
    auto phi = [&](double t) { return 0.5 * (std::exp(t * static_cast<double>(b)) + std::exp(-t * static_cast<double>(a))); };
    double lo = 0.0;
    double hi = std::log(2.0) / static_cast<double>(b);
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (phi(mid) < 1.0 ? lo : hi) = mid;
    }
    return lo * (1.0 - 1e-9);
}

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

}  // namespace

EscapeResult escape_probability(const Barrier& barrier, double tol, std::int64_t max_steps) {
    if (!(tol >= 1e-12)) throw DomainError("escape tolerance must be >= 1e-12");
    if (max_steps < 1) throw DomainError("escape max_steps must be >= 1");
    const std::int64_t a = barrier.a();
    const std::int64_t b = barrier.b();
    const std::int64_t c = barrier.threshold();
    const double theta = tilt_exponent(a, b);

    // Alive surplus s <= c-1 is stored at depth d = c-1-s. Escape from depth d
    // has probability <= exp(-theta (d+1)); mass deeper than max_depth is
    // retired with that bound.
    const auto max_depth = static_cast<std::int64_t>(std::ceil(std::log(100.0 / tol) / theta)) + a;
    std::vector<double> weight(static_cast<std::size_t>(max_depth + 1));
    for (std::int64_t d = 0; d <= max_depth; ++d)
        weight[static_cast<std::size_t>(d)] = std::exp(-theta * static_cast<double>(d + 1));

    std::vector<double> mass(static_cast<std::size_t>(max_depth + 1), 0.0);
    std::vector<double> next(mass.size(), 0.0);
    KahanSum absorbed;
    KahanSum retired_bound;

    // Step 1 from the origin: heads escapes under either comparison.
    absorbed.add(0.5);
    mass[static_cast<std::size_t>(c - 1 + a)] = 0.5;

    EscapeResult result;
    for (std::int64_t step = 1;; ++step) {
        KahanSum alive_bound;
        for (std::int64_t d = 0; d <= max_depth; ++d)
            alive_bound.add(mass[static_cast<std::size_t>(d)] * weight[static_cast<std::size_t>(d)]);
        result.lower = absorbed.sum;
        result.upper = absorbed.sum + alive_bound.sum + retired_bound.sum;
        result.steps = step;
        if (result.upper - result.lower < tol) break;
        if (step >= max_steps)
            throw ConvergenceError("escape bracket [" + std::to_string(result.lower) + ", " +
                                       std::to_string(result.upper) + "] still wider than tolerance after " +
                                       std::to_string(step) + " steps",
                                   result.lower, result.upper);

        std::fill(next.begin(), next.end(), 0.0);
        for (std::int64_t d = 0; d <= max_depth; ++d) {
            const double m = mass[static_cast<std::size_t>(d)];
            if (m == 0.0) continue;
            const double half = 0.5 * m;
            if (d - b < 0)
                absorbed.add(half);
            else
                next[static_cast<std::size_t>(d - b)] += half;
            if (d + a > max_depth)
                retired_bound.add(half * std::exp(-theta * static_cast<double>(d + a + 1)));
            else
                next[static_cast<std::size_t>(d + a)] += half;
        }
        mass.swap(next);
    }
    result.value = 0.5 * (result.lower + result.upper);
    return result;
}

double absorbed_mass(const Barrier& barrier, std::int64_t steps) {
    if (steps < 0) throw DomainError("steps must be >= 0");
    if (steps == 0) return 0.0;
    const std::int64_t a = barrier.a();
    const std::int64_t b = barrier.b();
    const std::int64_t c = barrier.threshold();
    std::vector<double> mass(static_cast<std::size_t>(c + a * steps + 1), 0.0);
    std::vector<double> next(mass.size(), 0.0);
    KahanSum absorbed;
    absorbed.add(0.5);
    mass[static_cast<std::size_t>(c - 1 + a)] = 0.5;
    for (std::int64_t step = 2; step <= steps; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t d = 0; d + static_cast<std::size_t>(a) < mass.size(); ++d) {
            const double m = mass[d];
            if (m == 0.0) continue;
            if (static_cast<std::int64_t>(d) < b)
                absorbed.add(0.5 * m);
            else
                next[d - static_cast<std::size_t>(b)] += 0.5 * m;
            next[d + static_cast<std::size_t>(a)] += 0.5 * m;
        }
        mass.swap(next);
    }
    return absorbed.sum;
}

Rational exact_absorbed_mass(const Barrier& barrier, std::int64_t steps) {
    if (steps < 0) throw DomainError("steps must be >= 0");
    if (steps == 0) return Rational(0);
    const std::int64_t a = barrier.a();
    const std::int64_t b = barrier.b();
    const std::int64_t c = barrier.threshold();
    // Path counts by depth; absorbed mass accumulated over the common
    // denominator 2^steps.
    std::vector<Integer> paths(static_cast<std::size_t>(c + a * steps + 1));
    std::vector<Integer> next(paths.size());
    Integer absorbed = 1;  // heads on step 1, in units of 2^-1
    paths[static_cast<std::size_t>(c - 1 + a)] = 1;
    for (std::int64_t step = 2; step <= steps; ++step) {
        absorbed *= 2;
        for (auto& z : next) z = 0;
        for (std::size_t d = 0; d + static_cast<std::size_t>(a) < paths.size(); ++d) {
            if (paths[d] == 0) continue;
            if (static_cast<std::int64_t>(d) < b)
                absorbed += paths[d];
            else
                next[d - static_cast<std::size_t>(b)] += paths[d];
            next[d + static_cast<std::size_t>(a)] += paths[d];
        }
        paths.swap(next);
    }
    Integer denom;
    mpz_ui_pow_ui(denom.get_mpz_t(), 2, static_cast<unsigned long>(steps));
    return make_rational(absorbed, denom);
}

WalkTable walk_table(const Barrier& barrier, std::int64_t max_heads, std::int64_t max_tails) {
    if (max_heads < 0 || max_tails < 0) throw DomainError("walk_table: negative extent");
    WalkTable table;
    table.max_heads = max_heads;
    table.max_tails = max_tails;
    const auto width = static_cast<std::size_t>(max_heads + 1);
    table.counts.assign(width * static_cast<std::size_t>(max_tails + 1), Integer(0));
    for (std::int64_t y = 0; y <= max_tails; ++y) {
        for (std::int64_t x = 0; x <= max_heads; ++x) {
            Integer& cell = table.counts[static_cast<std::size_t>(y) * width + static_cast<std::size_t>(x)];
            if (x == 0 && y == 0) {
                cell = 1;
                continue;
            }
            if (!barrier.inside(x, y)) continue;
            if (x > 0) cell += table.counts[static_cast<std::size_t>(y) * width + static_cast<std::size_t>(x - 1)];
            if (y > 0) cell += table.counts[static_cast<std::size_t>(y - 1) * width + static_cast<std::size_t>(x)];
        }
    }
    return table;
}

namespace {

// Rolls the walk DP row by row (one row per tails count) and hands each
// finished row to on_row(tails, row). Cells outside the region hold 0.
template <class OnRow>
void roll_walks(const Barrier& barrier, std::int64_t max_heads, std::int64_t max_tails, OnRow on_row) {
    std::vector<Integer> prev(static_cast<std::size_t>(max_heads + 1));
    std::vector<Integer> cur(prev.size());
    for (std::int64_t y = 0; y <= max_tails; ++y) {
        for (std::int64_t x = 0; x <= max_heads; ++x) {
            Integer& cell = cur[static_cast<std::size_t>(x)];
            if (x == 0 && y == 0) {
                cell = 1;
            } else if (!barrier.inside(x, y)) {
                cell = 0;
            } else {
                cell = prev[static_cast<std::size_t>(x)];
                if (x > 0) cell += cur[static_cast<std::size_t>(x - 1)];
            }
        }
        on_row(y, cur, prev);
        prev.swap(cur);
    }
}

}  // namespace

std::vector<Integer> walk_counts_diagonal(const Barrier& barrier, std::int64_t n_max) {
    if (n_max < 0) throw DomainError("n_max must be >= 0");
    std::vector<Integer> out(static_cast<std::size_t>(n_max + 1));
    roll_walks(barrier, n_max, n_max, [&](std::int64_t y, const std::vector<Integer>& row, const std::vector<Integer>&) {
        out[static_cast<std::size_t>(y)] = row[static_cast<std::size_t>(y)];
    });
    return out;
}

std::vector<Integer> walk_counts_barrier(const Barrier& barrier, std::int64_t n_max) {
    if (n_max < 0) throw DomainError("n_max must be >= 0");
    const std::int64_t a = barrier.a();
    const std::int64_t b = barrier.b();
    std::vector<Integer> out(static_cast<std::size_t>(n_max + 1));
    out[0] = 1;
    roll_walks(barrier, a * n_max, b * n_max,
               [&](std::int64_t y, const std::vector<Integer>& row, const std::vector<Integer>& above) {
                   if (y == 0 || y % b != 0) return;
                   const std::int64_t n = y / b;
                   const auto x = static_cast<std::size_t>(a * n);
                   // Last step into (an, bn) from the west or from the south.
                   out[static_cast<std::size_t>(n)] = row[x - 1] + above[x];
               });
    return out;
}

GrowthForm diagonal_growth() { return GrowthForm{Rational(4), 1}; }

GrowthForm barrier_growth(const Barrier& barrier) {
    const auto a = static_cast<unsigned long>(barrier.a());
    const auto b = static_cast<unsigned long>(barrier.b());
    Integer num, a_pow, b_pow;
    mpz_ui_pow_ui(num.get_mpz_t(), a + b, a + b);
    mpz_ui_pow_ui(a_pow.get_mpz_t(), a, a);
    mpz_ui_pow_ui(b_pow.get_mpz_t(), b, b);
    return GrowthForm{make_rational(num, a_pow * b_pow), 3};
}

namespace {

// num/den correctly to about 120 bits, then rounded to long double.
long double quotient_to_long_double(const Integer& num, const Integer& den) {
    if (num == 0) return 0.0L;
    const long shift = 128 - (static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) -
                              static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2)));
    Integer q;
    if (shift >= 0) {
        Integer scaled = num;
        mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
        mpz_tdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), den.get_mpz_t());
    } else {
        Integer scaled = den;
        mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), static_cast<mp_bitcnt_t>(-shift));
        mpz_tdiv_q(q.get_mpz_t(), num.get_mpz_t(), scaled.get_mpz_t());
    }
    // q has ~128 bits: fold in its top 32-bit chunks.
    long double v = 0.0L;
    long chunk_shift = static_cast<long>(mpz_sizeinbase(q.get_mpz_t(), 2)) - 96;
    if (chunk_shift < 0) chunk_shift = 0;
    Integer top;
    mpz_tdiv_q_2exp(top.get_mpz_t(), q.get_mpz_t(), static_cast<mp_bitcnt_t>(chunk_shift));
    for (int k = 2; k >= 0; --k) {
        Integer part;
        mpz_tdiv_q_2exp(part.get_mpz_t(), top.get_mpz_t(), static_cast<mp_bitcnt_t>(32 * k));
        mpz_tdiv_r_2exp(part.get_mpz_t(), part.get_mpz_t(), 32);
        v = v * 4294967296.0L + static_cast<long double>(mpz_get_ui(part.get_mpz_t()));
    }
    return std::ldexp(v, static_cast<int>(chunk_shift - shift));
}

template <class T>
T richardson_at(const std::vector<T>& c, std::size_t last, int order) {
    // c[i] holds c_{i+1}; combine c_{n}..c_{n+order}, n + order = last + 1.
    const std::size_t first = last - static_cast<std::size_t>(order);
    T sum = 0;
    T factorial_j = 1;
    for (int j = 0; j <= order; ++j) {
        if (j > 0) factorial_j *= j;
        T factorial_rest = 1;
        for (int k = 2; k <= order - j; ++k) factorial_rest *= k;
        const double n_plus_j = static_cast<double>(first + static_cast<std::size_t>(j) + 1);
        T power = 1;
        for (int k = 0; k < order; ++k) power *= n_plus_j;
        T term = c[first + static_cast<std::size_t>(j)] * power / (factorial_j * factorial_rest);
        if ((order + j) % 2 == 0)
            sum += term;
        else
            sum -= term;
    }
    return sum;
}

template <class T>
AsymptoticEstimate extrapolate(const std::vector<T>& c, int order) {
    if (order < 0) throw DomainError("extrapolation order must be >= 0");
    if (c.size() < static_cast<std::size_t>(order) + 2)
        throw DomainError("need at least order+2 terms, got " + std::to_string(c.size()));
    const T last = richardson_at(c, c.size() - 1, order);
    const T prev = richardson_at(c, c.size() - 2, order);
    T diff = last - prev;
    if (diff < 0) diff = -diff;
    AsymptoticEstimate est;
    est.constant = static_cast<double>(last);
    est.terms_used = static_cast<std::int64_t>(c.size());
    est.extrapolation_order = order;
    est.error_proxy = static_cast<double>(diff);
    return est;
}

}  // namespace

AsymptoticEstimate richardson(std::span<const double> values, int order) {
    std::vector<long double> c(values.begin(), values.end());
    return extrapolate(c, order);
}

AsymptoticEstimate estimate_constant(const std::vector<Integer>& counts, const GrowthForm& law, int order) {
    if (counts.size() < 2) throw DomainError("estimate_constant: need counts beyond n = 0");
    const Integer& num = law.base.get_num();
    const Integer& den = law.base.get_den();
    std::vector<long double> c;
    c.reserve(counts.size() - 1);
    Integer num_pow = 1, den_pow = 1;
    for (std::size_t n = 1; n < counts.size(); ++n) {
        num_pow *= num;
        den_pow *= den;
        long double scaled = quotient_to_long_double(counts[n] * den_pow, num_pow);
        const long double root = std::sqrt(static_cast<long double>(n));
        for (int k = 0; k < law.half_powers; ++k) scaled *= root;
        c.push_back(scaled);
    }
    return extrapolate(c, order);
}

}  // namespace chowrobbins
