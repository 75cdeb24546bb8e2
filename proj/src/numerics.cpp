#include "chowrobbins/numerics.hpp"

#include "chowrobbins/errors.hpp"

#include <cctype>

namespace chowrobbins {

Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) throw DomainError("rational: zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Rational make_rational(long num, long den) { return make_rational(Integer(num), Integer(den)); }

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

Integer parse_integer(std::string_view s) {
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) throw DomainError("not an integer: '" + std::string(s) + "'");
    Integer z(std::string(s), 10);
    return negative ? Integer(-z) : z;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw DomainError("empty rational literal");

    if (auto slash = text.find('/'); slash != std::string_view::npos)
        return make_rational(parse_integer(text.substr(0, slash)), parse_integer(text.substr(slash + 1)));

    auto dot = text.find('.');
    if (dot == std::string_view::npos) return Rational(parse_integer(text));

    bool negative = !text.empty() && text.front() == '-';
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac)))
        throw DomainError("malformed decimal: '" + std::string(text) + "'");

    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    Integer digits(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
    return make_rational(negative ? Integer(-digits) : digits, scale);
}

std::string to_string(const Rational& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_str();
}

std::string to_string(const Integer& z) { return z.get_str(); }

double to_double(const Rational& r) { return mpq_get_d(r.get_mpq_t()); }

NumericMode NumericMode::floating(double decision_epsilon) {
    if (!(decision_epsilon >= 0.0 && decision_epsilon <= kMaxEpsilon))
        throw DomainError("decision epsilon must lie in [0, 1e-6]");
    return NumericMode(Float{decision_epsilon});
}

double NumericMode::epsilon() const {
    if (auto f = std::get_if<Float>(&variant_)) return f->decision_epsilon;
    return 0.0;
}

bool prefer_continue(const Rational& continue_value, const Rational& stop_value, const NumericMode& mode) {
    if (mode.is_exact()) return continue_value > stop_value;
    return to_double(continue_value) > to_double(stop_value) + mode.epsilon();
}

}  // namespace chowrobbins
