#pragma once

#include "chowrobbins/numerics.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace chowrobbins {

// Coefficients in ascending powers of n.
using Polynomial = std::vector<Rational>;

// P(n)/Q(n) with gcd(P, Q) = 1, integer coefficients with no common content
// across P and Q, and a positive leading coefficient in Q. Two equal
// functions therefore compare equal coefficient by coefficient.
class RationalFunction {
public:
    RationalFunction(Polynomial numerator, Polynomial denominator);

    const Polynomial& numerator() const { return numerator_; }
    const Polynomial& denominator() const { return denominator_; }
    int numerator_degree() const { return static_cast<int>(numerator_.size()) - 1; }
    int denominator_degree() const { return static_cast<int>(denominator_.size()) - 1; }

    // nullopt where the denominator vanishes.
    std::optional<Rational> evaluate(const Rational& n) const;

    // "(8*n+5)/(16*n+8)"
    std::string to_string(const std::string& var = "n") const;

    friend bool operator==(const RationalFunction&, const RationalFunction&) = default;

private:
    Polynomial numerator_;
    Polynomial denominator_;
};

std::string polynomial_to_string(const Polynomial& p, const std::string& var = "n");

struct DataPoint {
    std::int64_t n = 0;
    Rational value;
};

// Lowest-total-degree P/Q (ties: lower denominator degree) with deg P, deg Q
// <= max_degree that matches every point exactly, fitted on deg P + deg Q + 1
// points and confirmed on all the rest (at least two). nullopt when no
// degree pair fits. Needs >= 2*max_degree + 3 points with distinct n.
std::optional<RationalFunction> guess_rational_function(std::span<const DataPoint> points, int max_degree);

class NoFitError : public std::runtime_error {
public:
    NoFitError(const std::string& what, std::vector<std::int64_t> alphas, std::int64_t window_first,
               std::int64_t window_last)
        : std::runtime_error(what), alphas_(std::move(alphas)), window_first_(window_first), window_last_(window_last) {}

    const std::vector<std::int64_t>& alphas() const { return alphas_; }
    std::int64_t window_first() const { return window_first_; }
    std::int64_t window_last() const { return window_last_; }

private:
    std::vector<std::int64_t> alphas_;
    std::int64_t window_first_;
    std::int64_t window_last_;
};

// F(m, alpha, n) as m+2 pieces: 1/2 for alpha <= -m, one rational function
// of n for each alpha in [-m+1, 0], and (n+alpha)/(2n-m+1) for alpha >= 1.
struct PiecewiseFormula {
    std::int64_t m = 1;
    std::int64_t valid_from = 1;
    std::map<std::int64_t, RationalFunction> pieces;

    const RationalFunction& piece(std::int64_t alpha) const { return pieces.at(alpha); }
    std::optional<Rational> evaluate(std::int64_t alpha, std::int64_t n) const;
};

// Fits each middle piece to exact cone values on a window of
// 2*(max_degree+1)+4 consecutive n starting at sample_start, attaches the two
// closed tails and re-checks every piece on fresh n. max_degree <= 0 selects m+1.
PiecewiseFormula build_piecewise(std::int64_t m, std::int64_t sample_start, int max_degree = 0);

// True iff every piece (tails included) equals the exact cone value at n.
bool formula_holds(const PiecewiseFormula& f, std::int64_t n);

class ThresholdViolation : public std::runtime_error {
public:
    ThresholdViolation(const std::string& what, std::int64_t candidate)
        : std::runtime_error(what), candidate_(candidate) {}
    std::int64_t candidate() const { return candidate_; }

private:
    std::int64_t candidate_;
};

// Smallest n from which the formula holds. Gallops down from search_cap
// (where the formula must hold) and bisects, then checks that it holds on
// [n, n+2m] and fails on all of [n-2m, n-1]; otherwise ThresholdViolation.
std::int64_t find_start_index(const PiecewiseFormula& f, std::int64_t search_cap);

// a_1 = 1, a_m = 2 a_{m-1} + r_m; r_1 = 0, r_2 = 1, r_3 = 6 and
// r_m = 2 r_{m-1} + m - 3 from m = 4 on. Index 0 is unused.
struct StartIndexSequence {
    std::vector<std::int64_t> a;
    std::vector<std::int64_t> r;

    std::int64_t m_max() const { return static_cast<std::int64_t>(a.size()) - 1; }
};

StartIndexSequence start_index_sequence(std::int64_t m_max);

struct RecurrenceCheck {
    bool ok = true;
    std::optional<std::int64_t> first_violation;  // m
};

// a[0] is a_1.
RecurrenceCheck check_start_recurrence(std::span<const std::int64_t> a);

}  // namespace chowrobbins
