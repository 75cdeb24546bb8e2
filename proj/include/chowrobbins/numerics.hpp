#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <variant>

namespace chowrobbins {

using Integer = mpz_class;
// GMP keeps mpq_class canonical (lowest terms, positive denominator) after
// every arithmetic operation; make_rational/parse_rational canonicalize on entry.
using Rational = mpq_class;

Rational make_rational(const Integer& num, const Integer& den);
Rational make_rational(long num, long den);

// Accepts "p/q", integers and plain decimals ("0.6" -> 3/5, "-1.25" -> -5/4).
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);
std::string to_string(const Integer& z);
double to_double(const Rational& r);

// Decision policy for stop-vs-go comparisons.
//
// Exact: continue wins iff it is strictly larger. Float(eps): continue must
// beat stop by more than eps, so rounding noise can only push a decision to
// Stop. Ties always go to Stop.
class NumericMode {
public:
    struct Exact {};
    struct Float {
        double decision_epsilon = 1e-12;
    };

    static constexpr double kDefaultEpsilon = 1e-12;
    static constexpr double kMaxEpsilon = 1e-6;

    NumericMode() : variant_(Float{}) {}

    static NumericMode exact() { return NumericMode(Exact{}); }
    static NumericMode floating(double decision_epsilon = kDefaultEpsilon);

    bool is_exact() const { return std::holds_alternative<Exact>(variant_); }
    double epsilon() const;

private:
    explicit NumericMode(std::variant<Exact, Float> v) : variant_(v) {}
    std::variant<Exact, Float> variant_;
};

inline bool prefer_continue(double continue_value, double stop_value, const NumericMode& mode) {
    if (mode.is_exact()) return continue_value > stop_value;
    return continue_value > stop_value + mode.epsilon();
}

bool prefer_continue(const Rational& continue_value, const Rational& stop_value,
                     const NumericMode& mode);

}  // namespace chowrobbins
