#include "cli.hpp"

#include "chowrobbins/boundary.hpp"
#include "chowrobbins/closedform.hpp"
#include "chowrobbins/distributions.hpp"
#include "chowrobbins/errors.hpp"
#include "chowrobbins/escape.hpp"
#include "chowrobbins/induction.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

namespace chowrobbins::cli {

namespace {

using nlohmann::json;

enum class Format { Text, Csv, Json };

struct RunConfig {
    bool exact = false;
    double epsilon = NumericMode::kDefaultEpsilon;
    Format format = Format::Text;
    int digits = 10;
    bool fraction = false;
    unsigned threads = 1;
    std::int64_t n_cap = 4000;
    double tol = 1e-9;

    NumericMode mode() const { return exact ? NumericMode::exact() : NumericMode::floating(epsilon); }
};

std::string decimal(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%#.*g", digits, v);
    return buf;
}

json header(const std::string& command) { return json{{"schema", kSchema}, {"command", command}}; }

json position_json(Position p) { return json::array({p.heads, p.tails}); }

json coefficients_json(const Polynomial& p) {
    json arr = json::array();
    for (const auto& c : p) arr.push_back(to_string(c));
    return arr;
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
    std::vector<std::int64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        std::size_t used = 0;
        const long long v = std::stoll(item.substr(b), &used);
        if (item.find_first_not_of(" \t", b + used) != std::string::npos)
            throw DomainError("not an integer: '" + item + "'");
        out.push_back(v);
    }
    return out;
}

Comparison parse_comparison(const std::string& s) { return s == "weak" ? Comparison::Weak : Comparison::Strict; }

MissedGoalPayoff parse_missed(const std::string& s) {
    return s == "floor" ? MissedGoalPayoff::Floor : MissedGoalPayoff::Zero;
}

void write_distribution_rows(const FloatDistribution& d, const RunConfig& cfg, std::ostream& out) {
    for (const auto& [payoff, prob] : d.atoms) {
        if (cfg.format == Format::Csv)
            out << to_string(payoff) << "," << decimal(prob, cfg.digits) << "\n";
        else
            out << to_string(payoff) << " " << decimal(prob, cfg.digits) << "\n";
    }
}

json distribution_json(const FloatDistribution& d) {
    json atoms = json::array();
    for (const auto& [payoff, prob] : d.atoms) atoms.push_back({{"payoff", to_string(payoff)}, {"probability", prob}});
    return atoms;
}

json moments_json(const Moments& m) {
    json j{{"mean", m.mean}};
    if (m.std_dev) j["std_dev"] = *m.std_dev;
    j["skewness"] = m.skewness ? json(*m.skewness) : json(nullptr);
    j["kurtosis"] = m.kurtosis ? json(*m.kurtosis) : json(nullptr);
    return j;
}

std::string optional_decimal(const std::optional<double>& v, int digits) {
    return v ? decimal(*v, digits) : std::string("undefined");
}

FloatDistribution to_float(const ExactDistribution& d) {
    FloatDistribution out;
    for (const auto& [payoff, prob] : d.atoms) out.atoms.emplace(payoff, to_double(prob));
    return out;
}

void write_formula(const PiecewiseFormula& f, const RunConfig& cfg, std::ostream& out) {
    const std::string lower_tail = "<=" + std::to_string(-f.m);
    const std::string tail_den = polynomial_to_string({Rational(1 - f.m), Rational(2)});
    if (cfg.format == Format::Json) {
        json j = header("piecewise");
        j["m"] = f.m;
        j["valid_from"] = f.valid_from;
        json pieces = json::array();
        pieces.push_back({{"m", f.m},
                          {"alpha", lower_tail},
                          {"numerator", json::array({"1"})},
                          {"denominator", json::array({"2"})},
                          {"valid_from", f.valid_from}});
        for (const auto& [alpha, rf] : f.pieces)
            pieces.push_back({{"m", f.m},
                              {"alpha", alpha},
                              {"numerator", coefficients_json(rf.numerator())},
                              {"denominator", coefficients_json(rf.denominator())},
                              {"valid_from", f.valid_from}});
        pieces.push_back({{"m", f.m},
                          {"alpha", ">=1"},
                          {"numerator", json::array({"alpha", "1"})},
                          {"denominator", json::array({std::to_string(1 - f.m), "2"})},
                          {"valid_from", f.valid_from}});
        j["pieces"] = pieces;
        out << j.dump() << "\n";
    } else if (cfg.format == Format::Csv) {
        out << "m,alpha,formula,valid_from\n";
        out << f.m << "," << lower_tail << ",1/2," << f.valid_from << "\n";
        for (const auto& [alpha, rf] : f.pieces) out << f.m << "," << alpha << "," << rf.to_string() << "," << f.valid_from << "\n";
        out << f.m << ",>=1,(n+alpha)/(" << tail_den << ")," << f.valid_from << "\n";
    } else {
        out << "F(" << f.m << ", alpha, n) for n >= " << f.valid_from << ":\n";
        out << "  alpha " << lower_tail << ": 1/2\n";
        for (const auto& [alpha, rf] : f.pieces) out << "  alpha = " << alpha << ": " << rf.to_string() << "\n";
        out << "  alpha >=1: (n+alpha)/(" << tail_den << ")\n";
    }
}

// Reads "n value" pairs, one per line; '#' starts a comment.
std::vector<DataPoint> read_points(std::istream& in) {
    std::vector<DataPoint> points;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string n_text, v_text;
        if (!(ls >> n_text)) continue;
        if (!(ls >> v_text)) throw DomainError("point line needs 'n value': " + line);
        points.push_back({std::stoll(n_text), parse_rational(v_text)});
    }
    return points;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Chow-Robbins coin game: optimal stopping values, boundaries, distributions and closed forms",
                 "chowrobbins"};
    app.require_subcommand(1);
    app.fallthrough();
    // "-h" would collide with the --h (heads) option of the position commands.
    app.set_help_flag("--help", "print this help message and exit");

    RunConfig cfg;
    if (const char* env = std::getenv(kThreadsEnv)) {
        const int n = std::atoi(env);
        if (n > 0) cfg.threads = static_cast<unsigned>(n);
    }
    std::string format_name = "text";
    app.add_flag("--exact", cfg.exact, "exact rational arithmetic for stop/go decisions");
    app.add_option("--epsilon", cfg.epsilon, "float-mode decision guard")->check(CLI::Range(0.0, 1e-6));
    app.add_option("--format", format_name, "output format")->check(CLI::IsMember({"text", "csv", "json"}));
    app.add_option("--digits", cfg.digits, "significant digits for decimals")->check(CLI::Range(1, 17));
    app.add_flag("--fraction", cfg.fraction, "print exact values as num/den (with --exact)");
    app.add_option("--threads", cfg.threads, std::string("worker threads (default from ") + kThreadsEnv + ")")
        ->check(CLI::Range(1u, 1024u));

    std::function<void()> run;
    auto on = [&](CLI::App* sub, std::function<void()> body) { sub->callback([&run, body] { run = body; }); };

    std::int64_t h = 0, t = 0, N = 0;
    auto add_position = [&](CLI::App* sub, bool need_horizon) {
        sub->add_option("--h", h, "heads")->required()->check(CLI::NonNegativeNumber);
        sub->add_option("--t", t, "tails")->required()->check(CLI::NonNegativeNumber);
        if (need_horizon) sub->add_option("--N", N, "horizon (maximum number of tosses)")->required();
    };

    // value
    auto* value_cmd = app.add_subcommand("value", "optimal expected payoff f_N(h,t)");
    add_position(value_cmd, true);
    on(value_cmd, [&] {
        const Position p{h, t};
        const Horizon horizon(N);
        if (cfg.exact) {
            const Rational v = exact_value(p, horizon);
            const std::string shown = cfg.fraction ? to_string(v) : decimal(to_double(v), cfg.digits);
            if (cfg.format == Format::Json) {
                json j = header("value");
                j.update({{"h", h}, {"t", t}, {"N", N}, {"value", to_double(v)}, {"exact", to_string(v)}});
                out << j.dump() << "\n";
            } else if (cfg.format == Format::Csv) {
                out << "h,t,N,value\n" << h << "," << t << "," << N << "," << shown << "\n";
            } else {
                out << shown << "\n";
            }
            return;
        }
        const double v = value(p, horizon, cfg.mode());
        if (cfg.format == Format::Json) {
            json j = header("value");
            j.update({{"h", h}, {"t", t}, {"N", N}, {"value", v}});
            out << j.dump() << "\n";
        } else if (cfg.format == Format::Csv) {
            out << "h,t,N,value\n" << h << "," << t << "," << N << "," << decimal(v, cfg.digits) << "\n";
        } else {
            out << decimal(v, cfg.digits) << "\n";
        }
    });

    // decision
    auto* decision_cmd = app.add_subcommand("decision", "stop or go at (h,t) under horizon N");
    add_position(decision_cmd, true);
    on(decision_cmd, [&] {
        const Decision d = decision(Position{h, t}, Horizon(N), cfg.mode());
        if (cfg.format == Format::Json) {
            json j = header("decision");
            j.update({{"h", h}, {"t", t}, {"N", N}, {"decision", to_string(d)}});
            out << j.dump() << "\n";
        } else if (cfg.format == Format::Csv) {
            out << "h,t,N,decision\n" << h << "," << t << "," << N << "," << to_string(d) << "\n";
        } else {
            out << to_string(d) << "\n";
        }
    });

    // beta
    std::int64_t n_max = 0;
    auto* beta_cmd = app.add_subcommand("beta", "stopping boundary beta_n(N) for n = 1..n-max");
    beta_cmd->add_option("--N", N, "horizon")->required();
    beta_cmd->add_option("--n-max", n_max, "number of levels to report")->required();
    on(beta_cmd, [&] {
        ProgressCallback progress;
        const std::int64_t report_every = N >= 20000 ? N / 10 : 0;
        if (report_every > 0)
            progress = [&](std::int64_t level) {
                if (level % report_every == 0) err << "beta: level " << level << " of " << N << "\n";
            };
        const BetaSequence beta = beta_sequence(Horizon(N), n_max, cfg.mode(), progress);
        if (cfg.format == Format::Json) {
            json j = header("beta");
            j.update({{"N", N}, {"n_max", n_max}, {"beta", beta.entries}});
            out << j.dump() << "\n";
        } else if (cfg.format == Format::Csv) {
            out << "n,beta\n";
            for (std::int64_t n = 1; n <= n_max; ++n) out << n << "," << beta.at(n) << "\n";
        } else {
            for (std::int64_t n = 1; n <= n_max; ++n) out << (n > 1 ? "," : "") << beta.at(n);
            out << "\n";
        }
    });

    // cutoff
    auto* cutoff_cmd = app.add_subcommand("cutoff", "smallest horizon at which (h,t) becomes go");
    add_position(cutoff_cmd, false);
    cutoff_cmd->add_option("--N-cap", cfg.n_cap, "largest horizon searched")->capture_default_str();
    on(cutoff_cmd, [&] {
        const auto rec = cutoff(Position{h, t}, Horizon(cfg.n_cap), cfg.mode());
        if (cfg.format == Format::Json) {
            json j = header("cutoff");
            j.update({{"h", h}, {"t", t}, {"N_cap", cfg.n_cap}, {"cutoff", rec ? json(rec->cutoff) : json(nullptr)}});
            out << j.dump() << "\n";
        } else if (cfg.format == Format::Csv) {
            out << "h,t,cutoff\n" << h << "," << t << "," << (rec ? std::to_string(rec->cutoff) : "") << "\n";
        } else if (rec) {
            out << rec->cutoff << "\n";
        } else {
            out << "still stop at N_cap=" << cfg.n_cap << "\n";
        }
    });

    // frontier
    std::int64_t total_max = 100, n_ref = 2000;
    auto* frontier_cmd = app.add_subcommand("frontier", "largest-heads go position per total, with cutoffs");
    frontier_cmd->add_option("--total-max", total_max, "largest h+t reported")->capture_default_str();
    frontier_cmd->add_option("--N-ref", n_ref, "horizon that decides go/stop")->capture_default_str();
    frontier_cmd->add_option("--N-cap", cfg.n_cap, "largest horizon searched for cutoffs")->capture_default_str();
    on(frontier_cmd, [&] {
        const auto entries = go_frontier(total_max, Horizon(n_ref), Horizon(cfg.n_cap), cfg.mode(), cfg.threads);
        if (cfg.format == Format::Json) {
            json j = header("frontier");
            json rows = json::array();
            for (const auto& e : entries)
                rows.push_back({{"total", e.total},
                                {"position", position_json(e.position)},
                                {"cutoff", e.cutoff ? json(*e.cutoff) : json(nullptr)}});
            j.update({{"N_ref", n_ref}, {"N_cap", cfg.n_cap}, {"entries", rows}});
            out << j.dump() << "\n";
        } else if (cfg.format == Format::Csv) {
            out << "h,t,cutoff\n";
            for (const auto& e : entries)
                out << e.position.heads << "," << e.position.tails << ","
                    << (e.cutoff ? std::to_string(*e.cutoff) : "") << "\n";
        } else {
            for (const auto& e : entries)
                out << "[[" << e.position.heads << ", " << e.position.tails << "], "
                    << (e.cutoff ? std::to_string(*e.cutoff) : "none") << "]\n";
        }
    });

    // dist
    int moment_order = 4;
    auto* dist_cmd = app.add_subcommand("dist", "payoff distribution under the optimal policy");
    add_position(dist_cmd, true);
    dist_cmd->add_option("--moments", moment_order, "number of moments")->check(CLI::Range(1, 4))->capture_default_str();
    on(dist_cmd, [&] {
        const FloatDistribution d =
            cfg.exact ? to_float(exact_payoff_distribution(Position{h, t}, Horizon(N)))
                      : payoff_distribution(Position{h, t}, Horizon(N), cfg.mode());
        const Moments m = moments(d, moment_order);
        if (cfg.format == Format::Json) {
            json j = header("dist");
            j.update({{"h", h}, {"t", t}, {"N", N}, {"atoms", distribution_json(d)}, {"moments", moments_json(m)}});
            out << j.dump() << "\n";
            return;
        }
        if (cfg.format == Format::Csv) out << "payoff,probability\n";
        write_distribution_rows(d, cfg, out);
        if (cfg.format == Format::Text) {
            out << "mean " << decimal(m.mean, cfg.digits) << "\n";
            if (m.std_dev) out << "std_dev " << decimal(*m.std_dev, cfg.digits) << "\n";
            if (moment_order >= 3) out << "skewness " << optional_decimal(m.skewness, cfg.digits) << "\n";
            if (moment_order >= 4) out << "kurtosis " << optional_decimal(m.kurtosis, cfg.digits) << "\n";
        }
    });

    // goal
    std::string goal_text;
    std::string missed_name = "zero";
    bool with_distribution = false;
    auto* goal_cmd = app.add_subcommand("goal", "probability of reaching ratio g (goal strategy)");
    goal_cmd->add_option("--g", goal_text, "goal ratio, decimal or p/q")->required();
    add_position(goal_cmd, true);
    goal_cmd->add_flag("--distribution", with_distribution, "also print the goal strategy's payoff law");
    goal_cmd->add_option("--missed-goal", missed_name, "payoff when the goal is missed at the horizon")
        ->check(CLI::IsMember({"zero", "floor"}))
        ->capture_default_str();
    on(goal_cmd, [&] {
        const GoalParams goal(parse_rational(goal_text));
        const Position p{h, t};
        const double prob = goal_value(goal, p, Horizon(N), cfg.mode());
        std::optional<FloatDistribution> d;
        if (with_distribution) d = goal_distribution(goal, p, Horizon(N), cfg.mode(), parse_missed(missed_name));
        if (cfg.format == Format::Json) {
            json j = header("goal");
            j.update({{"g", to_string(goal.g())}, {"h", h}, {"t", t}, {"N", N}, {"probability", prob}});
            if (d) {
                j["missed_goal"] = missed_name;
                j["atoms"] = distribution_json(*d);
                j["mean"] = d->mean();
            }
            out << j.dump() << "\n";
            return;
        }
        if (cfg.format == Format::Csv) {
            if (d) {
                out << "payoff,probability\n";
                write_distribution_rows(*d, cfg, out);
            } else {
                out << "g,h,t,N,probability\n"
                    << to_string(goal.g()) << "," << h << "," << t << "," << N << "," << decimal(prob, cfg.digits) << "\n";
            }
            return;
        }
        out << decimal(prob, cfg.digits) << "\n";
        if (d) {
            write_distribution_rows(*d, cfg, out);
            out << "mean " << decimal(d->mean(), cfg.digits) << "\n";
        }
    });

    // compare
    auto* compare_cmd = app.add_subcommand("compare", "optimal policy vs goal strategy from (0,0)");
    compare_cmd->add_option("--g", goal_text, "goal ratio")->required();
    compare_cmd->add_option("--N", N, "horizon")->required();
    compare_cmd->add_option("--missed-goal", missed_name, "payoff when the goal is missed at the horizon")
        ->check(CLI::IsMember({"zero", "floor"}))
        ->capture_default_str();
    on(compare_cmd, [&] {
        const CompareReport r = compare(GoalParams(parse_rational(goal_text)), Horizon(N), cfg.mode(),
                                        parse_missed(missed_name));
        if (cfg.format == Format::Json) {
            json j = header("compare");
            j.update({{"N", N},
                      {"g", to_string(r.goal.g())},
                      {"missed_goal", to_string(r.missed_goal)},
                      {"optimal_expectation", r.optimal_expectation},
                      {"optimal_goal_prob", r.optimal_goal_prob},
                      {"goal_strategy_expectation", r.goal_strategy_expectation},
                      {"goal_strategy_prob", r.goal_strategy_prob}});
            out << j.dump() << "\n";
        } else if (cfg.format == Format::Csv) {
            out << "N,g,optimal_expectation,optimal_goal_prob,goal_strategy_expectation,goal_strategy_prob\n"
                << N << "," << to_string(r.goal.g()) << "," << decimal(r.optimal_expectation, cfg.digits) << ","
                << decimal(r.optimal_goal_prob, cfg.digits) << "," << decimal(r.goal_strategy_expectation, cfg.digits)
                << "," << decimal(r.goal_strategy_prob, cfg.digits) << "\n";
        } else {
            out << "optimal_expectation " << decimal(r.optimal_expectation, cfg.digits) << "\n"
                << "optimal_goal_prob " << decimal(r.optimal_goal_prob, cfg.digits) << "\n"
                << "goal_strategy_expectation " << decimal(r.goal_strategy_expectation, cfg.digits) << "\n"
                << "goal_strategy_prob " << decimal(r.goal_strategy_prob, cfg.digits) << "\n";
        }
    });

    // escape
    std::int64_t a = 0, b = 0, max_steps = 100000;
    auto* escape_cmd = app.add_subcommand("escape", "probability that heads/tails ever exceeds (reaches) a/b");
    escape_cmd->add_option("--a", a, "numerator of the ratio")->required();
    escape_cmd->add_option("--b", b, "denominator of the ratio")->required();
    escape_cmd->add_option("--tol", cfg.tol, "bracket width")->capture_default_str();
    escape_cmd->add_option("--max-steps", max_steps, "step cap")->capture_default_str();
    on(escape_cmd, [&] {
        const EscapeResult strict = escape_probability(Barrier(a, b, Comparison::Strict), cfg.tol, max_steps);
        const EscapeResult weak = escape_probability(Barrier(a, b, Comparison::Weak), cfg.tol, max_steps);
        const double width = std::max(strict.width(), weak.width());
        if (cfg.format == Format::Json) {
            json j = header("escape");
            j.update({{"a", a},
                      {"b", b},
                      {"strict_value", strict.value},
                      {"weak_value", weak.value},
                      {"bracket_width", width},
                      {"strict_bracket", {strict.lower, strict.upper}},
                      {"weak_bracket", {weak.lower, weak.upper}}});
            out << j.dump() << "\n";
        } else if (cfg.format == Format::Csv) {
            out << "a,b,strict_value,weak_value,bracket_width\n"
                << a << "," << b << "," << decimal(strict.value, cfg.digits) << "," << decimal(weak.value, cfg.digits)
                << "," << decimal(width, 3) << "\n";
        } else {
            out << "strict " << decimal(strict.value, cfg.digits) << " [" << decimal(strict.lower, 12) << ", "
                << decimal(strict.upper, 12) << "]\n"
                << "weak " << decimal(weak.value, cfg.digits) << " [" << decimal(weak.lower, 12) << ", "
                << decimal(weak.upper, 12) << "]\n";
        }
    });

    // walks
    std::string family = "diagonal", comparison_name = "strict";
    auto* walks_cmd = app.add_subcommand("walks", "lattice walks that never escape the barrier");
    walks_cmd->add_option("--a", a)->required();
    walks_cmd->add_option("--b", b)->required();
    walks_cmd->add_option("--n-max", n_max)->required();
    walks_cmd->add_option("--family", family, "endpoints (n,n) or (an,bn)")
        ->check(CLI::IsMember({"diagonal", "barrier"}))
        ->capture_default_str();
    walks_cmd->add_option("--comparison", comparison_name)->check(CLI::IsMember({"strict", "weak"}))->capture_default_str();
    on(walks_cmd, [&] {
        const Barrier bar(a, b, parse_comparison(comparison_name));
        const auto counts = family == "diagonal" ? walk_counts_diagonal(bar, n_max) : walk_counts_barrier(bar, n_max);
        if (cfg.format == Format::Json) {
            json j = header("walks");
            json arr = json::array();
            for (const auto& c : counts) arr.push_back(to_string(c));
            j.update({{"a", a}, {"b", b}, {"family", family}, {"comparison", comparison_name}, {"counts", arr}});
            out << j.dump() << "\n";
        } else {
            if (cfg.format == Format::Csv) out << "n,count\n";
            const char* sep = cfg.format == Format::Csv ? "," : " ";
            for (std::size_t n = 0; n < counts.size(); ++n) out << n << sep << to_string(counts[n]) << "\n";
        }
    });

    // constants
    int order = 2;
    auto* constants_cmd = app.add_subcommand("constants", "extrapolated growth constants C1(a,b), C2(a,b)");
    constants_cmd->add_option("--a", a)->required();
    constants_cmd->add_option("--b", b)->required();
    constants_cmd->add_option("--n-max", n_max, "terms used")->required();
    constants_cmd->add_option("--order", order, "Richardson order")->check(CLI::Range(0, 12))->capture_default_str();
    constants_cmd->add_option("--comparison", comparison_name)->check(CLI::IsMember({"strict", "weak"}))->capture_default_str();
    on(constants_cmd, [&] {
        const Barrier bar(a, b, parse_comparison(comparison_name));
        const AsymptoticEstimate c1 = estimate_constant(walk_counts_diagonal(bar, n_max), diagonal_growth(), order);
        const AsymptoticEstimate c2 = estimate_constant(walk_counts_barrier(bar, n_max), barrier_growth(bar), order);
        if (cfg.format == Format::Json) {
            json j = header("constants");
            auto row = [](const AsymptoticEstimate& e) {
                return json{{"constant", e.constant},
                            {"terms_used", e.terms_used},
                            {"order", e.extrapolation_order},
                            {"error_proxy", e.error_proxy}};
            };
            j.update({{"a", a}, {"b", b}, {"comparison", comparison_name}, {"C1", row(c1)}, {"C2", row(c2)}});
            out << j.dump() << "\n";
        } else if (cfg.format == Format::Csv) {
            out << "a,b,comparison,name,constant,order,terms_used,error_proxy\n";
            for (const auto& [name, e] : {std::pair{"C1", c1}, std::pair{"C2", c2}})
                out << a << "," << b << "," << comparison_name << "," << name << "," << decimal(e.constant, cfg.digits)
                    << "," << e.extrapolation_order << "," << e.terms_used << "," << decimal(e.error_proxy, 3) << "\n";
        } else {
            out << "C1 " << decimal(c1.constant, cfg.digits) << " (+- " << decimal(c1.error_proxy, 2) << ")\n"
                << "C2 " << decimal(c2.constant, cfg.digits) << " (+- " << decimal(c2.error_proxy, 2) << ")\n";
        }
    });

    // guess
    std::string input_path;
    std::int64_t m = 0, alpha = 0, from = 0, count = 0;
    int max_degree = 0;
    auto* guess_cmd = app.add_subcommand("guess", "guess a rational function of n from exact data");
    guess_cmd->add_option("--input", input_path, "file of 'n value' lines ('-' for stdin)");
    guess_cmd->add_option("--m", m, "cone depth (data from F(m, alpha, n))");
    guess_cmd->add_option("--alpha", alpha, "cone offset");
    guess_cmd->add_option("--from", from, "first n");
    guess_cmd->add_option("--count", count, "number of n values");
    guess_cmd->add_option("--max-degree", max_degree, "largest numerator/denominator degree");
    on(guess_cmd, [&] {
        std::vector<DataPoint> points;
        if (!input_path.empty()) {
            if (input_path == "-") {
                points = read_points(std::cin);
            } else {
                std::ifstream in(input_path);
                if (!in) throw DomainError("cannot open " + input_path);
                points = read_points(in);
            }
        } else {
            if (m < 1 || from < 1) throw CLI::ValidationError("guess needs --input or --m/--alpha/--from");
            if (count <= 0) count = 2 * (std::max(max_degree, static_cast<int>(m) + 1) + 1) + 4;
            for (std::int64_t n = from; n < from + count; ++n) points.push_back({n, cone_values_exact({m, alpha, n})});
        }
        const int degree = max_degree > 0 ? max_degree : static_cast<int>((points.size() - 3) / 2);
        const auto fit = guess_rational_function(points, degree);
        if (cfg.format == Format::Json) {
            json j = header("guess");
            j["points"] = points.size();
            if (fit) {
                j["numerator"] = coefficients_json(fit->numerator());
                j["denominator"] = coefficients_json(fit->denominator());
            } else {
                j["numerator"] = nullptr;
                j["denominator"] = nullptr;
            }
            out << j.dump() << "\n";
        } else {
            out << (fit ? fit->to_string() : std::string("no fit")) << "\n";
        }
        if (!fit) throw DomainError("no rational function of degree <= " + std::to_string(degree) + " fits");
    });

    // piecewise
    bool find_start = false;
    auto* piecewise_cmd = app.add_subcommand("piecewise", "piecewise closed form of F(m, alpha, n)");
    piecewise_cmd->add_option("--m", m, "cone depth")->required();
    piecewise_cmd->add_option("--from", from, "first sampled n (default: recurrence a_m)");
    piecewise_cmd->add_option("--max-degree", max_degree, "largest degree (default m+1)");
    piecewise_cmd->add_flag("--find-start", find_start, "search down from --from for the smallest valid n");
    on(piecewise_cmd, [&] {
        if (m < 1) throw DomainError("--m must be >= 1");
        const std::int64_t start = from > 0 ? from : start_index_sequence(m).a[static_cast<std::size_t>(m)];
        PiecewiseFormula f = build_piecewise(m, start, max_degree);
        if (find_start) f.valid_from = find_start_index(f, start);
        write_formula(f, cfg, out);
    });

    // startindex
    std::int64_t m_max = 0;
    std::string check_list;
    auto* start_cmd = app.add_subcommand("startindex", "start indices a_m of the closed forms");
    start_cmd->add_option("--m-max", m_max, "compute a_1..a_{m-max} by search");
    start_cmd->add_option("--check", check_list, "comma-separated a_1,a_2,... to test against the recurrence");
    on(start_cmd, [&] {
        if (!check_list.empty()) {
            const auto list = parse_int_list(check_list);
            const RecurrenceCheck rc = check_start_recurrence(list);
            if (cfg.format == Format::Json) {
                json j = header("startindex");
                j.update({{"ok", rc.ok},
                          {"first_violation", rc.first_violation ? json(*rc.first_violation) : json(nullptr)}});
                out << j.dump() << "\n";
            } else if (rc.ok) {
                out << "true\n";
            } else {
                out << "false (first violation at m=" << *rc.first_violation << ")\n";
            }
            return;
        }
        if (m_max < 1) throw CLI::ValidationError("startindex needs --m-max or --check");
        const StartIndexSequence rec = start_index_sequence(m_max);
        std::vector<std::int64_t> found;
        for (std::int64_t k = 1; k <= m_max; ++k) {
            // Sample well above the conjectured start, then search down.
            const std::int64_t sample = 2 * rec.a[static_cast<std::size_t>(k)] + 5;
            const PiecewiseFormula f = build_piecewise(k, sample);
            found.push_back(find_start_index(f, sample));
            err << "startindex: m=" << k << " a_m=" << found.back() << "\n";
        }
        if (cfg.format == Format::Json) {
            json j = header("startindex");
            j.update({{"start_index", found}, {"recurrence", std::vector<std::int64_t>(rec.a.begin() + 1, rec.a.end())}});
            out << j.dump() << "\n";
        } else if (cfg.format == Format::Csv) {
            out << "m,start_index,recurrence\n";
            for (std::int64_t k = 1; k <= m_max; ++k)
                out << k << "," << found[static_cast<std::size_t>(k - 1)] << "," << rec.a[static_cast<std::size_t>(k)] << "\n";
        } else {
            for (std::size_t i = 0; i < found.size(); ++i) out << (i ? ", " : "") << found[i];
            out << "\n";
        }
    });

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& s : args) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kUsage;
    }
    cfg.format = format_name == "json" ? Format::Json : format_name == "csv" ? Format::Csv : Format::Text;

    try {
        run();
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ConvergenceError& e) {
        err << "convergence error: " << e.what() << "\n";
        return kConvergence;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return kDomain;
    } catch (const NoFitError& e) {
        err << "no fit: " << e.what() << "\n";
        return kDomain;
    } catch (const ThresholdViolation& e) {
        err << "threshold violation: " << e.what() << "\n";
        return kDomain;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kOk;
}

}  // namespace chowrobbins::cli
