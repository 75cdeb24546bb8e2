#include "chowrobbins/induction.hpp"

#include "chowrobbins/errors.hpp"

#include <algorithm>
#include <string>

namespace chowrobbins {

Horizon::Horizon(std::int64_t n_max) : n_max_(n_max) {
    if (n_max < 1) throw DomainError("horizon must be >= 1, got " + std::to_string(n_max));
}

const char* to_string(Decision d) { return d == Decision::Stop ? "stop" : "go"; }

template <>
double stop_payoff<double>(std::int64_t heads, std::int64_t level) {
    return level == 0 ? 0.0 : static_cast<double>(heads) / static_cast<double>(level);
}

template <>
Rational stop_payoff<Rational>(std::int64_t heads, std::int64_t level) {
    return level == 0 ? Rational(0) : make_rational(heads, level);
}

template <>
double terminal_payoff<double>(std::int64_t heads, std::int64_t n_max) {
    return std::max(0.5, static_cast<double>(heads) / static_cast<double>(n_max));
}

template <>
Rational terminal_payoff<Rational>(std::int64_t heads, std::int64_t n_max) {
    Rational r = make_rational(heads, n_max);
    return r > Rational(1, 2) ? r : Rational(1, 2);
}

template <class Scalar>
DiagonalTable<Scalar> boundary_band(Horizon n_max, std::int64_t first_heads, std::int64_t last_heads) {
    const std::int64_t n = n_max.value();
    if (first_heads < 0 || last_heads > n || first_heads > last_heads)
        throw DomainError("boundary band outside the terminal diagonal");
    DiagonalTable<Scalar> table;
    table.level = n;
    table.first_heads = first_heads;
    table.values.reserve(static_cast<std::size_t>(last_heads - first_heads + 1));
    for (std::int64_t h = first_heads; h <= last_heads; ++h) table.values.push_back(terminal_payoff<Scalar>(h, n));
    table.decisions.assign(table.values.size(), Decision::Stop);
    return table;
}

template <class Scalar>
DiagonalTable<Scalar> boundary_values(Horizon n_max) {
    return boundary_band<Scalar>(n_max, 0, n_max.value());
}

template <class Scalar>
DiagonalTable<Scalar> step_back(const DiagonalTable<Scalar>& next, const NumericMode& mode) {
    if (next.level < 1) throw DomainError("step_back: level 0 has no predecessor");
    if (next.size() < 2) throw DomainError("step_back: band needs at least two cells");
    DiagonalTable<Scalar> out;
    out.level = next.level - 1;
    out.first_heads = next.first_heads;
    const std::size_t cells = next.values.size() - 1;
    out.values.resize(cells);
    out.decisions.resize(cells);
    for (std::size_t i = 0; i < cells; ++i) {
        const std::int64_t h = out.first_heads + static_cast<std::int64_t>(i);
        Scalar cont = (next.values[i] + next.values[i + 1]) / 2;
        Scalar stop = stop_payoff<Scalar>(h, out.level);
        if (prefer_continue(cont, stop, mode)) {
            out.values[i] = std::move(cont);
            out.decisions[i] = Decision::Go;
        } else {
            out.values[i] = std::move(stop);
            out.decisions[i] = Decision::Stop;
        }
    }
    return out;
}

template DiagonalTable<double> boundary_band<double>(Horizon, std::int64_t, std::int64_t);
template DiagonalTable<Rational> boundary_band<Rational>(Horizon, std::int64_t, std::int64_t);
template DiagonalTable<double> boundary_values<double>(Horizon);
template DiagonalTable<Rational> boundary_values<Rational>(Horizon);
template DiagonalTable<double> step_back<double>(const DiagonalTable<double>&, const NumericMode&);
template DiagonalTable<Rational> step_back<Rational>(const DiagonalTable<Rational>&, const NumericMode&);

void step_back_into(const DiagonalTable<double>& next, DiagonalTable<double>& out, double decision_epsilon) {
    const std::size_t cells = next.values.size() - 1;
    out.level = next.level - 1;
    out.first_heads = next.first_heads;
    out.values.resize(cells);
    out.decisions.resize(cells);
    const double* succ = next.values.data();
    double* cur = out.values.data();
    Decision* dec = out.decisions.data();
    const double level = static_cast<double>(out.level);
    for (std::size_t i = 0; i < cells; ++i) {
        const double h = static_cast<double>(out.first_heads + static_cast<std::int64_t>(i));
        const double cont = 0.5 * (succ[i] + succ[i + 1]);
        // h * (1/level) can be off by an ulp from h/level; keep the division.
        const double stop = out.level == 0 ? 0.0 : h / level;
        const bool go = cont > stop + decision_epsilon;
        cur[i] = go ? cont : stop;
        dec[i] = go ? Decision::Go : Decision::Stop;
    }
}

Rational ScaledDiagonal::value_at(std::int64_t heads) const {
    Rational r(numerators[static_cast<std::size_t>(heads - first_heads)], denominator);
    r.canonicalize();
    return r;
}

DiagonalTable<Rational> ScaledDiagonal::to_table() const {
    DiagonalTable<Rational> t;
    t.level = level;
    t.first_heads = first_heads;
    t.decisions = decisions;
    t.values.reserve(numerators.size());
    for (std::int64_t h = first_heads; h <= last_heads(); ++h) t.values.push_back(value_at(h));
    return t;
}

namespace {

void check_apex(Horizon n_max, Position apex) {
    if (apex.heads < 0 || apex.tails < 0) throw DomainError("position has a negative coordinate");
    if (apex.level() > n_max.value())
        throw DomainError("position (" + std::to_string(apex.heads) + "," + std::to_string(apex.tails) +
                          ") lies beyond horizon " + std::to_string(n_max.value()));
}

}  // namespace

void sweep_float(Horizon n_max, Position apex, double decision_epsilon,
                 const std::function<void(const DiagonalTable<double>&)>& on_level) {
    check_apex(n_max, apex);
    DiagonalTable<double> next = boundary_band<double>(n_max, apex.heads, n_max.value() - apex.tails);
    DiagonalTable<double> cur;
    cur.values.reserve(next.values.size());
    cur.decisions.reserve(next.values.size());
    on_level(next);
    while (next.level > apex.level()) {
        step_back_into(next, cur, decision_epsilon);
        on_level(cur);
        std::swap(next, cur);
    }
}

void sweep_exact(Horizon n_max, Position apex, const std::function<void(const ScaledDiagonal&)>& on_level) {
    check_apex(n_max, apex);
    const std::int64_t n = n_max.value();

    // Terminal diagonal over denominator 2N: max(1/2, h/N) = max(N, 2h) / 2N.
    ScaledDiagonal next;
    next.level = n;
    next.first_heads = apex.heads;
    next.denominator = 2 * n;
    for (std::int64_t h = apex.heads; h <= n - apex.tails; ++h)
        next.numerators.emplace_back(std::max<std::int64_t>(n, 2 * h));
    next.decisions.assign(next.numerators.size(), Decision::Stop);
    on_level(next);

    ScaledDiagonal cur;
    Integer cont_scale, stop_scale, cont, stop;
    while (next.level > apex.level()) {
        const std::int64_t level = next.level - 1;
        const std::size_t cells = next.numerators.size() - 1;
        // New denominator: lcm(2 * old, level); the continuation scales by
        // new / (2 * old), the stop payoff h/level by new / level.
        Integer twice_old = 2 * next.denominator;
        if (level == 0) {
            cur.denominator = twice_old;
        } else {
            mpz_lcm_ui(cur.denominator.get_mpz_t(), twice_old.get_mpz_t(), static_cast<unsigned long>(level));
        }
        mpz_divexact(cont_scale.get_mpz_t(), cur.denominator.get_mpz_t(), twice_old.get_mpz_t());
        if (level > 0)
            mpz_divexact_ui(stop_scale.get_mpz_t(), cur.denominator.get_mpz_t(), static_cast<unsigned long>(level));
        else
            stop_scale = 0;

        cur.level = level;
        cur.first_heads = next.first_heads;
        cur.numerators.resize(cells);
        cur.decisions.resize(cells);
        for (std::size_t i = 0; i < cells; ++i) {
            const std::int64_t h = cur.first_heads + static_cast<std::int64_t>(i);
            mpz_add(cont.get_mpz_t(), next.numerators[i].get_mpz_t(), next.numerators[i + 1].get_mpz_t());
            if (cont_scale != 1) cont *= cont_scale;
            stop = stop_scale;
            stop *= static_cast<unsigned long>(h);
            if (cont > stop) {
                mpz_swap(cur.numerators[i].get_mpz_t(), cont.get_mpz_t());
                cur.decisions[i] = Decision::Go;
            } else {
                mpz_swap(cur.numerators[i].get_mpz_t(), stop.get_mpz_t());
                cur.decisions[i] = Decision::Stop;
            }
        }
        on_level(cur);
        std::swap(next, cur);
    }
}

double value(Position p, Horizon n_max, const NumericMode& mode) {
    if (mode.is_exact()) return to_double(exact_value(p, n_max));
    double result = 0.0;
    sweep_float(n_max, p, mode.epsilon(), [&](const DiagonalTable<double>& d) {
        if (d.level == p.level()) result = d.at(p.heads);
    });
    return result;
}

Rational exact_value(Position p, Horizon n_max) {
    Rational result;
    sweep_exact(n_max, p, [&](const ScaledDiagonal& d) {
        if (d.level == p.level()) result = d.value_at(p.heads);
    });
    return result;
}

Decision decision(Position p, Horizon n_max, const NumericMode& mode) {
    check_apex(n_max, p);
    if (p.level() < 1) throw DomainError("decision: the origin has no stop payoff");
    Decision result = Decision::Stop;
    if (mode.is_exact()) {
        sweep_exact(n_max, p, [&](const ScaledDiagonal& d) {
            if (d.level == p.level()) result = d.decision_at(p.heads);
        });
    } else {
        sweep_float(n_max, p, mode.epsilon(), [&](const DiagonalTable<double>& d) {
            if (d.level == p.level()) result = d.decision_at(p.heads);
        });
    }
    return result;
}

std::vector<DiagonalTable<Rational>> exact_triangle(Horizon n_max) {
    std::vector<DiagonalTable<Rational>> levels(static_cast<std::size_t>(n_max.value() + 1));
    sweep_exact(n_max, Position{0, 0},
                [&](const ScaledDiagonal& d) { levels[static_cast<std::size_t>(d.level)] = d.to_table(); });
    return levels;
}

namespace {

void check_cone(std::int64_t m, std::int64_t n) {
    if (m < 1) throw DomainError("cone depth m must be >= 1");
    if (n < 1) throw DomainError("cone parameter n must be >= 1");
    if (m > 2 * n + 1) throw DomainError("cone depth exceeds the triangle for this n");
}

}  // namespace

ConeRow cone_row(std::int64_t m, std::int64_t n, std::int64_t alpha_lo, std::int64_t alpha_hi) {
    check_cone(m, n);
    const std::int64_t target_level = 2 * n - m + 1;
    // heads = n + alpha must lie in [0, target_level].
    alpha_lo = std::max(alpha_lo, -n);
    alpha_hi = std::min(alpha_hi, target_level - n);
    if (alpha_lo > alpha_hi) throw DomainError("no valid alpha for this cone");

    const Horizon horizon(2 * n + 1);
    DiagonalTable<Rational> table = boundary_band<Rational>(horizon, n + alpha_lo, n + alpha_hi + m);
    const NumericMode exact = NumericMode::exact();
    while (table.level > target_level) table = step_back(table, exact);

    ConeRow row;
    row.m = m;
    row.n = n;
    row.first_alpha = alpha_lo;
    row.values = std::move(table.values);
    return row;
}

Rational cone_values_exact(const ConeQuery& q) {
    check_cone(q.m, q.n);
    const Position p = q.position();
    if (p.heads < 0 || p.tails < 0)
        throw DomainError("cone query (m=" + std::to_string(q.m) + ", alpha=" + std::to_string(q.alpha) +
                          ", n=" + std::to_string(q.n) + ") has a negative coordinate");
    return cone_row(q.m, q.n, q.alpha, q.alpha).at(q.alpha);
}

}  // namespace chowrobbins
