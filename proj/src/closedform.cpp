#include "chowrobbins/closedform.hpp"

#include "chowrobbins/errors.hpp"
#include "chowrobbins/induction.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace chowrobbins {

namespace {

void trim(Polynomial& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

Polynomial remainder(Polynomial a, const Polynomial& b) {
    trim(a);
    const std::size_t db = b.size() - 1;
    while (a.size() >= b.size()) {
        const Rational factor = a.back() / b.back();
        const std::size_t shift = a.size() - 1 - db;
        for (std::size_t i = 0; i <= db; ++i) a[shift + i] -= factor * b[i];
        a.pop_back();
        trim(a);
    }
    return a;
}

Polynomial quotient(Polynomial a, const Polynomial& b) {
    trim(a);
    const std::size_t db = b.size() - 1;
    if (a.size() < b.size()) return {};
    Polynomial q(a.size() - db);
    while (a.size() >= b.size()) {
        const Rational factor = a.back() / b.back();
        const std::size_t shift = a.size() - 1 - db;
        q[shift] = factor;
        for (std::size_t i = 0; i <= db; ++i) a[shift + i] -= factor * b[i];
        a.pop_back();
    }
    trim(q);
    return q;
}

Polynomial polynomial_gcd(Polynomial a, Polynomial b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Polynomial r = remainder(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        const Rational lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

Rational horner(const Polynomial& p, const Rational& x) {
    Rational acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

}  // namespace

RationalFunction::RationalFunction(Polynomial numerator, Polynomial denominator)
    : numerator_(std::move(numerator)), denominator_(std::move(denominator)) {
    trim(numerator_);
    trim(denominator_);
    if (denominator_.empty()) throw DomainError("rational function with zero denominator");
    if (numerator_.empty()) {
        numerator_ = {Rational(0)};
        denominator_ = {Rational(1)};
        return;
    }
    const Polynomial g = polynomial_gcd(numerator_, denominator_);
    if (g.size() > 1) {
        numerator_ = quotient(numerator_, g);
        denominator_ = quotient(denominator_, g);
    }
    // Clear denominators, then strip the common integer content.
    Integer scale = 1;
    for (const auto* p : {&numerator_, &denominator_})
        for (const auto& c : *p) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), c.get_den_mpz_t());
    Integer content = 0;
    for (auto* p : {&numerator_, &denominator_})
        for (auto& c : *p) {
            c *= scale;
            mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_num_mpz_t());
        }
    if (denominator_.back() < 0) content = -content;
    for (auto* p : {&numerator_, &denominator_})
        for (auto& c : *p) c /= content;
}

std::optional<Rational> RationalFunction::evaluate(const Rational& n) const {
    const Rational den = horner(denominator_, n);
    if (den == 0) return std::nullopt;
    return horner(numerator_, n) / den;
}

std::string polynomial_to_string(const Polynomial& p, const std::string& var) {
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = p.size(); i-- > 0;) {
        const Rational& c = p[i];
        if (c == 0) continue;
        const bool negative = c < 0;
        const Rational mag = negative ? Rational(-c) : c;
        if (first)
            out << (negative ? "-" : "");
        else
            out << (negative ? "-" : "+");
        const bool unit = mag == 1;
        if (i == 0 || !unit) out << to_string(mag);
        if (i > 0) {
            if (!unit) out << "*";
            out << var;
            if (i > 1) out << "^" << i;
        }
        first = false;
    }
    if (first) out << "0";
    return out.str();
}

std::string RationalFunction::to_string(const std::string& var) const {
    const std::string num = polynomial_to_string(numerator_, var);
    if (denominator_.size() == 1 && denominator_[0] == 1) return num;
    const auto terms = std::count_if(numerator_.begin(), numerator_.end(), [](const Rational& c) { return c != 0; });
    const std::string den = polynomial_to_string(denominator_, var);
    return (terms > 1 ? "(" + num + ")" : num) + "/" + (denominator_.size() > 1 ? "(" + den + ")" : den);
}

namespace {

// Arithmetic mod 2^61 - 1 for a quick rank test before the exact solve.
constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % kPrime);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    for (; e; e >>= 1, a = mul_mod(a, a))
        if (e & 1) r = mul_mod(r, a);
    return r;
}

std::uint64_t reduce(const Integer& z) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), z.get_mpz_t(), Integer(kPrime).get_mpz_t());
    return mpz_get_ui(r.get_mpz_t());
}

// Row of the homogeneous system P(n) - v Q(n) = 0 in unknowns
// (p_0..p_dp, q_0..q_dq).
std::vector<Rational> fit_row(const DataPoint& pt, int dp, int dq) {
    std::vector<Rational> row;
    row.reserve(static_cast<std::size_t>(dp + dq + 2));
    Rational power = 1;
    for (int i = 0; i <= dp; ++i, power *= pt.n) row.push_back(power);
    power = 1;
    for (int j = 0; j <= dq; ++j, power *= pt.n) row.push_back(-pt.value * power);
    return row;
}

// False only when the system certainly has no nonzero solution.
bool may_fit_mod_prime(std::span<const DataPoint> points, int dp, int dq) {
    const std::size_t cols = static_cast<std::size_t>(dp + dq + 2);
    if (points.size() < cols) return true;
    std::vector<std::vector<std::uint64_t>> m;
    m.reserve(points.size());
    for (const auto& pt : points) {
        const std::uint64_t den = reduce(pt.value.get_den());
        if (den == 0) return true;
        const std::uint64_t v = mul_mod(reduce(pt.value.get_num()), pow_mod(den, kPrime - 2));
        const std::uint64_t x = reduce(Integer(pt.n));
        std::vector<std::uint64_t> row(cols);
        std::uint64_t power = 1;
        for (int i = 0; i <= dp; ++i, power = mul_mod(power, x)) row[static_cast<std::size_t>(i)] = power;
        power = 1;
        for (int j = 0; j <= dq; ++j, power = mul_mod(power, x))
            row[static_cast<std::size_t>(dp + 1 + j)] = (kPrime - mul_mod(v, power)) % kPrime;
        m.push_back(std::move(row));
    }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < m.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < m.size() && m[pivot][col] == 0) ++pivot;
        if (pivot == m.size()) continue;
        std::swap(m[rank], m[pivot]);
        const std::uint64_t inv = pow_mod(m[rank][col], kPrime - 2);
        for (std::size_t r = rank + 1; r < m.size(); ++r) {
            if (m[r][col] == 0) continue;
            const std::uint64_t f = mul_mod(m[r][col], inv);
            for (std::size_t c = col; c < cols; ++c)
                m[r][c] = (m[r][c] + kPrime - mul_mod(f, m[rank][c])) % kPrime;
        }
        ++rank;
    }
    return rank < cols;
}

// Basis of the right null space, by exact Gauss-Jordan elimination.
std::vector<std::vector<Rational>> null_space(std::vector<std::vector<Rational>> m, std::size_t cols) {
    std::vector<std::size_t> pivot_cols;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < m.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < m.size() && m[pivot][col] == 0) ++pivot;
        if (pivot == m.size()) continue;
        std::swap(m[rank], m[pivot]);
        const Rational inv = 1 / m[rank][col];
        for (std::size_t c = col; c < cols; ++c) m[rank][c] *= inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == rank || m[r][col] == 0) continue;
            const Rational f = m[r][col];
            for (std::size_t c = col; c < cols; ++c) m[r][c] -= f * m[rank][c];
        }
        pivot_cols.push_back(col);
        ++rank;
    }
    std::vector<std::vector<Rational>> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (std::find(pivot_cols.begin(), pivot_cols.end(), free) != pivot_cols.end()) continue;
        std::vector<Rational> v(cols, Rational(0));
        v[free] = 1;
        for (std::size_t r = 0; r < pivot_cols.size(); ++r) v[pivot_cols[r]] = -m[r][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

bool matches_all(const RationalFunction& f, std::span<const DataPoint> points) {
    for (const auto& pt : points) {
        const auto v = f.evaluate(Rational(pt.n));
        if (!v || *v != pt.value) return false;
    }
    return true;
}

}  // namespace

std::optional<RationalFunction> guess_rational_function(std::span<const DataPoint> points, int max_degree) {
    if (max_degree < 0) throw DomainError("max_degree must be >= 0");
    if (points.size() < static_cast<std::size_t>(2 * max_degree + 3))
        throw DomainError("guess_rational_function: need at least 2*max_degree+3 points, got " +
                          std::to_string(points.size()));
    std::set<std::int64_t> seen;
    for (const auto& pt : points)
        if (!seen.insert(pt.n).second) throw DomainError("guess_rational_function: duplicate n = " + std::to_string(pt.n));

    for (int total = 0; total <= 2 * max_degree; ++total) {
        for (int dq = 0; dq <= std::min(total, max_degree); ++dq) {
            const int dp = total - dq;
            if (dp > max_degree) continue;
            if (!may_fit_mod_prime(points, dp, dq)) continue;
            const auto unknowns = static_cast<std::size_t>(dp + dq + 2);
            std::vector<std::vector<Rational>> rows;
            for (std::size_t i = 0; i + 1 < unknowns; ++i) rows.push_back(fit_row(points[i], dp, dq));
            for (const auto& v : null_space(std::move(rows), unknowns)) {
                Polynomial num(v.begin(), v.begin() + dp + 1);
                Polynomial den(v.begin() + dp + 1, v.end());
                trim(den);
                if (den.empty()) continue;
                RationalFunction f(std::move(num), std::move(den));
                if (matches_all(f, points)) return f;
            }
        }
    }
    return std::nullopt;
}

namespace {

RationalFunction upper_tail(std::int64_t m, std::int64_t alpha) {
    return RationalFunction({Rational(alpha), Rational(1)}, {Rational(1 - m), Rational(2)});
}

}  // namespace

std::optional<Rational> PiecewiseFormula::evaluate(std::int64_t alpha, std::int64_t n) const {
    if (alpha <= -m) return Rational(1, 2);
    if (alpha >= 1) return upper_tail(m, alpha).evaluate(Rational(n));
    return piece(alpha).evaluate(Rational(n));
}

PiecewiseFormula build_piecewise(std::int64_t m, std::int64_t sample_start, int max_degree) {
    if (m < 1) throw DomainError("build_piecewise: m must be >= 1");
    if (max_degree <= 0) max_degree = static_cast<int>(m) + 1;
    // Every middle position must exist from the first sample on.
    if (2 * sample_start < m) throw DomainError("build_piecewise: sample_start too small for this m");

    const std::int64_t window = 2 * (max_degree + 1) + 4;
    const std::int64_t first = sample_start;
    const std::int64_t last = sample_start + window - 1;

    std::map<std::int64_t, std::vector<DataPoint>> data;
    for (std::int64_t n = first; n <= last; ++n) {
        const ConeRow row = cone_row(m, n, -m + 1, 0);
        for (std::int64_t alpha = -m + 1; alpha <= 0; ++alpha) data[alpha].push_back({n, row.at(alpha)});
    }

    PiecewiseFormula f;
    f.m = m;
    f.valid_from = sample_start;
    std::vector<std::int64_t> failed;
    for (auto& [alpha, points] : data) {
        if (auto fit = guess_rational_function(points, max_degree))
            f.pieces.emplace(alpha, std::move(*fit));
        else
            failed.push_back(alpha);
    }
    if (!failed.empty()) {
        std::string list;
        for (auto a : failed) list += (list.empty() ? "" : ", ") + std::to_string(a);
        throw NoFitError("no rational function of degree <= " + std::to_string(max_degree) + " fits alpha {" + list +
                             "} on n in [" + std::to_string(first) + ", " + std::to_string(last) + "]",
                         failed, first, last);
    }

    // Fresh points: the next 2m+1 values of n and a few far ones.
    std::vector<std::int64_t> fresh;
    for (std::int64_t n = last + 1; n <= last + 2 * m + 1; ++n) fresh.push_back(n);
    for (std::int64_t k = 2; k <= 5; ++k) fresh.push_back(k * sample_start + window + 7 * k);
    for (std::int64_t n : fresh) {
        if (!formula_holds(f, n)) {
            throw NoFitError("fitted pieces for m = " + std::to_string(m) + " fail at fresh n = " + std::to_string(n),
                             {}, first, last);
        }
    }
    return f;
}

bool formula_holds(const PiecewiseFormula& f, std::int64_t n) {
    if (n < 1 || f.m > 2 * n) return false;
    const ConeRow row = cone_row(f.m, n, -f.m - 1, 2);
    for (std::int64_t alpha = row.first_alpha; alpha <= row.last_alpha(); ++alpha) {
        const auto v = f.evaluate(alpha, n);
        if (!v || *v != row.at(alpha)) return false;
    }
    return true;
}

std::int64_t find_start_index(const PiecewiseFormula& f, std::int64_t search_cap) {
    if (search_cap < 1) throw DomainError("find_start_index: search_cap must be >= 1");
    if (!formula_holds(f, search_cap))
        throw DomainError("find_start_index: formula for m = " + std::to_string(f.m) + " does not hold at n = " +
                          std::to_string(search_cap));

    // Gallop down to a failing n (0 stands for "fails everywhere below 1").
    std::int64_t holds_at = search_cap;
    std::int64_t fails_at = 0;
    for (std::int64_t step = 1;; step *= 2) {
        const std::int64_t probe = holds_at - step;
        if (probe < 1) break;
        if (!formula_holds(f, probe)) {
            fails_at = probe;
            break;
        }
        holds_at = probe;
    }
    while (holds_at - fails_at > 1) {
        const std::int64_t mid = fails_at + (holds_at - fails_at) / 2;
        (formula_holds(f, mid) ? holds_at : fails_at) = mid;
    }

    const std::int64_t start = holds_at;
    for (std::int64_t n = start; n <= start + 2 * f.m; ++n)
        if (!formula_holds(f, n))
            throw ThresholdViolation("m = " + std::to_string(f.m) + ": formula holds at " + std::to_string(start) +
                                         " but fails again at " + std::to_string(n),
                                     start);
    for (std::int64_t n = std::max<std::int64_t>(1, start - 2 * f.m); n < start; ++n)
        if (formula_holds(f, n))
            throw ThresholdViolation("m = " + std::to_string(f.m) + ": formula fails at " + std::to_string(start - 1) +
                                         " but holds at " + std::to_string(n),
                                     start);
    return start;
}

StartIndexSequence start_index_sequence(std::int64_t m_max) {
    if (m_max < 1) throw DomainError("start_index_sequence: m_max must be >= 1");
    StartIndexSequence s;
    s.a.assign(static_cast<std::size_t>(m_max + 1), 0);
    s.r.assign(static_cast<std::size_t>(m_max + 1), 0);
    for (std::int64_t m = 1; m <= m_max; ++m) {
        const auto i = static_cast<std::size_t>(m);
        if (m == 1)
            s.r[i] = 0;
        else if (m == 2)
            s.r[i] = 1;
        else if (m == 3)
            s.r[i] = 6;
        else
            s.r[i] = 2 * s.r[i - 1] + m - 3;
        s.a[i] = m == 1 ? 1 : 2 * s.a[i - 1] + s.r[i];
    }
    return s;
}

RecurrenceCheck check_start_recurrence(std::span<const std::int64_t> a) {
    RecurrenceCheck check;
    if (a.empty()) return check;
    const StartIndexSequence seq = start_index_sequence(static_cast<std::int64_t>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::size_t m = i + 1;
        const std::int64_t expected = m == 1 ? 1 : 2 * a[i - 1] + seq.r[m];
        if (a[i] != expected) {
            check.ok = false;
            check.first_violation = static_cast<std::int64_t>(m);
            return check;
        }
    }
    return check;
}

}  // namespace chowrobbins
