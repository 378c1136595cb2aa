// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "guesswork/cli.hpp"
#include "guesswork/exponents.hpp"
#include "guesswork/moments.hpp"
#include "guesswork/ranks.hpp"
#include "guesswork/verify.hpp"

using namespace guesswork;

namespace {

struct Outcome {
    bool passed = true;
    std::vector<std::string> notes;

    void check(bool ok, const std::string& note) {
        passed = passed && ok;
        notes.push_back((ok ? "ok: " : "FAILED: ") + note);
    }
};

std::string fmt(const char* pattern, auto... args) {
    char buffer[512];
    std::snprintf(buffer, sizeof buffer, pattern, args...);
    return buffer;
}

const std::vector<double> kAlphas = {0.25, 0.5, 1.0, 2.0, 4.0};
const std::vector<int> kAgents = {1, 2, 3, 5, 10};

std::vector<double> delta_grid() {
    std::vector<double> out;
    for (int i = 0; i <= 12; ++i) out.push_back(0.01 + 0.04 * i);
    return out;
}

std::vector<double> eps_grid() {
    std::vector<double> out;
    for (int i = 0; i <= 20; ++i) out.push_back(0.05 * i);
    return out;
}

double E(const SchemeSpec& s, const ChannelSpec& c, double alpha) {
    return exponent(s, c, MomentOrder(alpha)).value;
}

Outcome closed_form_spots() {
    Outcome o;
    const auto spot = [&](const char* what, double got, double want) {
        o.check(std::abs(got - want) <= 1e-9, fmt("%s = %.12f, expected %.12f", what, got, want));
    };
    spot("single BEC eps=0.5", E(SchemeSpec::single(), ChannelSpec::bec(0.5), 1), std::log2(1.5));
    spot("centralized BEC eps=0.5 m=2", E(SchemeSpec::centralized(2), ChannelSpec::bec(0.5), 1), std::log2(1.25));
    spot("centralized BSC delta=0.25 m=2", E(SchemeSpec::centralized(2), ChannelSpec::bsc(0.25), 1),
         std::log2(4 * 0.25 * 0.75 + 1));
    spot("decentralized BSC delta=0.25 m=2", E(SchemeSpec::decentralized(2), ChannelSpec::bsc(0.25), 1),
         3 * std::log2(std::pow(0.25, 2.0 / 3) + std::pow(0.75, 2.0 / 3)));
    return o;
}

Outcome three_way_pooled_bsc() {
    Outcome o;
    double worst = 0.0;
    for (double alpha : kAlphas) {
        for (double d : delta_grid()) {
            const double opt = exponent_centralized_bsc2(MomentOrder(alpha), Prob(d)).value;
            const double sum = centralized_bsc2_log_sum(MomentOrder(alpha), Prob(d));
            const double letter =
                exponent_centralized_generic(MomentOrder(alpha), ChannelSpec::bsc(d), AgentCount(2)).value;
            worst = std::max({worst, std::abs(opt - sum), std::abs(opt - letter), std::abs(sum - letter)});
        }
    }
    o.check(worst <= 1e-8, fmt("max pairwise deviation %.3g over 5 x 13 grid (tol 1e-8)", worst));
    return o;
}

Outcome dual_form_decentralized_bsc() {
    Outcome o;
    double worst = 0.0;
    for (double alpha : kAlphas) {
        for (double d : delta_grid()) {
            for (int m : kAgents) {
                const double closed = exponent_decentralized_bsc(MomentOrder(alpha), Prob(d), AgentCount(m)).value;
                const double var =
                    exponent_decentralized_bsc_variational(MomentOrder(alpha), Prob(d), AgentCount(m)).value;
                worst = std::max(worst, std::abs(closed - var));
            }
        }
    }
    o.check(worst <= 1e-8, fmt("max deviation %.3g over 5 x 13 x 5 grid (tol 1e-8)", worst));
    return o;
}

Outcome ordering_and_limits() {
    Outcome o;
    int violations = 0;
    int points = 0;
    int below_alpha_eps = 0;
    for (double alpha : kAlphas) {
        for (int m : kAgents) {
            const auto order = [&](const ChannelSpec& c) {
                const double cen = E(SchemeSpec::centralized(m), c, alpha);
                const double dec = E(SchemeSpec::decentralized(m), c, alpha);
                const double one = E(SchemeSpec::single(), c, alpha);
                ++points;
                violations += !(cen <= dec + 1e-12 && dec <= one + 1e-12);
                return dec;
            };
            for (double d : delta_grid()) order(ChannelSpec::bsc(d));
            for (double e : eps_grid()) {
                const double dec = order(ChannelSpec::bec(e));
                below_alpha_eps += dec < alpha * e - 1e-12;
            }
        }
    }
    o.check(violations == 0, fmt("centralized <= decentralized <= single: %d violations in %d points", violations, points));
    o.check(below_alpha_eps == 0, fmt("decentralized BEC >= alpha*eps: %d violations", below_alpha_eps));

    double worst = 0.0;
    for (double d : delta_grid()) {
        const double v = exponent_decentralized_bsc(MomentOrder(1), Prob(d), AgentCount(1024)).value;
        worst = std::max(worst, std::abs(v - binary_shannon_entropy(Prob(d))));
    }
    o.check(worst <= 1e-3, fmt("decentralized BSC m=1024 vs H(delta) at alpha=1: max gap %.3g (tol 1e-3)", worst));

    const double m21 = exponent_centralized_generic(MomentOrder(1), ChannelSpec::bsc(0.25), AgentCount(21)).value;
    o.check(m21 < 0.02, fmt("centralized BSC m=21, delta=0.25, alpha=1: %.6f (required < 0.02)", m21));
    return o;
}

Outcome convexity_and_derivative() {
    Outcome o;
    for (int m : {2, 3, 5}) {
        std::vector<double> values;
        for (int i = 0; i <= 1000; ++i) {
            values.push_back(exponent_centralized_bec(MomentOrder(1), Prob(i * 1e-3), AgentCount(m)).value);
        }
        double min_second = INFINITY;
        for (std::size_t i = 1; i + 1 < values.size(); ++i) {
            min_second = std::min(min_second, values[i + 1] - 2 * values[i] + values[i - 1]);
        }
        o.check(min_second >= -1e-12, fmt("m=%d: min second difference %.3g (tol -1e-12)", m, min_second));

        // the stated derivative is that of the natural-log form
        double worst = 0.0;
        for (std::size_t i = 1; i + 1 < values.size(); ++i) {
            const double eps = i * 1e-3;
            const double numeric = (values[i + 1] - values[i - 1]) / 2e-3 * std::log(2.0);
            const double analytic = m * std::pow(eps, m - 1) / (1 + std::pow(eps, m));
            worst = std::max(worst, std::abs(numeric - analytic));
        }
        o.check(worst <= 1e-5, fmt("m=%d: derivative max deviation %.3g (tol 1e-5)", m, worst));
    }
    return o;
}

Outcome rank_oracle_equivalence() {
    Outcome o;
    MismatchCount bsc, bec, pooled;
    for (int n = 1; n <= 10; ++n) {
        const auto add = [](MismatchCount& into, MismatchCount c) {
            into.checked += c.checked;
            into.mismatches += c.mismatches;
        };
        add(bsc, compare_bsc_rank_with_oracle(n));
        add(bec, compare_bec_rank_with_oracle(n));
        add(pooled, compare_centralized_bsc2_rank_with_oracle(n));
    }
    const auto line = [](const char* what, MismatchCount c) {
        return fmt("%s: %llu mismatches in %llu pairs", what, static_cast<unsigned long long>(c.mismatches),
                   static_cast<unsigned long long>(c.checked));
    };
    o.check(bsc.mismatches == 0, line("bsc_rank", bsc));
    o.check(bec.mismatches == 0, line("bec_rank", bec));
    o.check(pooled.mismatches == 0, line("centralized_bsc2_rank", pooled));
    return o;
}

Outcome exact_identities() {
    Outcome o;
    double worst = 0.0;
    for (int n = 1; n <= 24; ++n) {
        for (int i = 1; i <= 9; ++i) {
            const double eps = i / 10.0;
            const double want = (std::pow(1 + eps, n) + 1) / 2;
            const double got = exact_moment_single_bec(MomentOrder(1), Prob(eps), n).value;
            worst = std::max(worst, std::abs(got - want) / want);
        }
    }
    o.check(worst < 1e-12, fmt("single BEC closed form: max relative error %.3g (tol 1e-12)", worst));

    int collapse_mismatches = 0;
    for (double alpha : {0.5, 1.0, 2.0}) {
        for (int n = 1; n <= 12; ++n) {
            const double bsc = exact_moment_single_bsc(MomentOrder(alpha), Prob(0.2), n).value;
            const double bec = exact_moment_single_bec(MomentOrder(alpha), Prob(0.4), n).value;
            const MomentOrder a(alpha);
            collapse_mismatches += exact_moment_decentralized_bsc(a, Prob(0.2), AgentCount(1), n).value != bsc;
            collapse_mismatches += exact_moment_decentralized_bec(a, Prob(0.4), AgentCount(1), n).value != bec;
            collapse_mismatches += exact_moment(SchemeSpec::centralized(1), ChannelSpec::bsc(0.2), a, n).value != bsc;
            collapse_mismatches += exact_moment(SchemeSpec::centralized(1), ChannelSpec::bec(0.4), a, n).value != bec;
        }
    }
    o.check(collapse_mismatches == 0, fmt("m=1 collapses: %d inexact", collapse_mismatches));

    const int n = 6;
    CompensatedSum brute;
    for (std::uint64_t z1 = 0; z1 < 64; ++z1) {
        for (std::uint64_t z2 = 0; z2 < 64; ++z2) {
            const BitString a(n, z1);
            const BitString b(n, z2);
            const double p = std::pow(0.25, a.weight() + b.weight()) * std::pow(0.75, 2 * n - a.weight() - b.weight());
            brute.add(p * static_cast<double>(std::min(bsc_rank(a), bsc_rank(b))));
        }
    }
    const double exact = exact_moment_decentralized_bsc(MomentOrder(1), Prob(0.25), AgentCount(2), n).value;
    const double rel = std::abs(exact - brute.value()) / brute.value();
    o.check(rel <= 4 * 2.220446049250313e-16,
            fmt("decentralized BSC m=2 n=6 vs 4096-term brute force: %.17g vs %.17g (relative %.3g)", exact,
                brute.value(), rel));
    return o;
}

std::vector<double> exact_slopes(const SchemeSpec& s, const ChannelSpec& c, int first, int last,
                                 double* target) {
    std::vector<MomentRecord> records;
    for (int n = first; n <= last; ++n) records.push_back(exact_moment(s, c, MomentOrder(1), n));
    const SlopeReport report = slope_report(records, exponent(s, c, MomentOrder(1)));
    if (target) *target = report.analytic_target;
    return report.slopes();
}

bool nondecreasing(const std::vector<double>& v, std::size_t from = 0) {
    for (std::size_t i = from + 1; i < v.size(); ++i) {
        if (v[i] < v[i - 1]) return false;
    }
    return true;
}

Outcome convergence_trends() {
    Outcome o;
    double target = 0.0;
    const std::vector<double> bsc = exact_slopes(SchemeSpec::single(), ChannelSpec::bsc(0.25), 4, 22, &target);
    o.check(std::abs(bsc.back() - target) <= 0.05,
            fmt("single BSC delta=0.25: last slope %.6f vs exponent %.6f (tol 0.05)", bsc.back(), target));
    bool approaching = true;
    for (std::size_t i = bsc.size() - 8; i < bsc.size(); ++i) {
        approaching = approaching && std::abs(bsc[i] - target) <= std::abs(bsc[i - 1] - target);
    }
    o.check(approaching, "single BSC: distance to exponent shrinks over the last 8 slopes");

    bool bec_ok = true;
    double bec_gap = 0.0;
    for (int i = 1; i <= 9; ++i) {
        const double eps = i / 10.0;
        const std::vector<double> s = exact_slopes(SchemeSpec::single(), ChannelSpec::bec(eps), 1, 24, &target);
        bec_ok = bec_ok && nondecreasing(s) && s.back() < target;
        bec_gap = std::max(bec_gap, target - s.back());
    }
    o.check(bec_ok, fmt("single BEC eps=0.1..0.9: slopes rise monotonically from below, largest final gap %.3g",
                        bec_gap));

    const ChannelSpec half = ChannelSpec::bec(0.5);
    const std::vector<double> dec = exact_slopes(SchemeSpec::decentralized(2), half, 4, 10, &target);
    const double low = E(SchemeSpec::centralized(2), half, 1);
    const double high = E(SchemeSpec::single(), half, 1);
    bool between = true;
    std::string listing;
    for (double s : dec) {
        between = between && s > low && s < high;
        listing += fmt(" %.4f", s);
    }
    o.check(between && nondecreasing(dec),
            fmt("decentralized BEC m=2 eps=0.5 slopes n=4..10:%s within (%.4f, %.4f), non-decreasing",
                listing.c_str(), low, high));
    return o;
}

struct McCase {
    SchemeSpec scheme;
    ChannelSpec channel;
    double alpha;
    int n;
};

Outcome monte_carlo_consistency() {
    const std::vector<McCase> cases = {
        {SchemeSpec::single(), ChannelSpec::bec(0.5), 1, 12},
        {SchemeSpec::single(), ChannelSpec::bec(0.3), 2, 10},
        {SchemeSpec::single(), ChannelSpec::bec(0.9), 3, 6},
        {SchemeSpec::single(), ChannelSpec::bsc(0.25), 1, 10},
        {SchemeSpec::single(), ChannelSpec::bsc(0.1), 0.5, 12},
        {SchemeSpec::single(), ChannelSpec::bsc(0.4), 3, 8},
        {SchemeSpec::centralized(2), ChannelSpec::bec(0.5), 1, 12},
        {SchemeSpec::centralized(3), ChannelSpec::bec(0.7), 2, 10},
        {SchemeSpec::centralized(2), ChannelSpec::bsc(0.25), 1, 10},
        {SchemeSpec::centralized(2), ChannelSpec::bsc(0.1), 2, 12},
        {SchemeSpec::centralized(2), ChannelSpec::bsc(0.3), 0.5, 8},
        {SchemeSpec::decentralized(2), ChannelSpec::bsc(0.25), 1, 10},
        {SchemeSpec::decentralized(3), ChannelSpec::bsc(0.2), 1, 12},
        {SchemeSpec::decentralized(5), ChannelSpec::bsc(0.3), 2, 8},
        {SchemeSpec::decentralized(2), ChannelSpec::bsc(0.1), 0.5, 12},
        {SchemeSpec::decentralized(3), ChannelSpec::bsc(0.45), 3, 6},
        {SchemeSpec::decentralized(2), ChannelSpec::bec(0.5), 1, 10},
        {SchemeSpec::decentralized(2), ChannelSpec::bec(0.5), 2, 8},
        {SchemeSpec::decentralized(3), ChannelSpec::bec(0.3), 1, 6},
        {SchemeSpec::decentralized(2), ChannelSpec::bec(0.7), 0.5, 9},
    };
    const std::uint64_t trials = 1000000;
    const std::uint64_t seed = 20240601;

    Outcome o;
    int covered = 0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const McCase& c = cases[i];
        const MomentRecord exact = exact_moment(c.scheme, c.channel, MomentOrder(c.alpha), c.n);
        const MomentRecord mc = mc_estimate_moment(c.scheme, c.channel, MomentOrder(c.alpha), c.n, trials, seed + i);
        const bool inside = *mc.ci_low <= exact.value && exact.value <= *mc.ci_high;
        covered += inside;
        o.notes.push_back(fmt("%s %s(%g) m=%d alpha=%g n=%d: exact %.6g, CI [%.6g, %.6g] %s",
                              std::string(to_string(c.scheme.mode())).c_str(),
                              std::string(to_string(c.channel.kind())).c_str(), c.channel.param().value(),
                              c.scheme.m(), c.alpha, c.n, exact.value, *mc.ci_low, *mc.ci_high,
                              inside ? "covered" : "MISSED"));
    }
    o.check(covered >= 18, fmt("%d of 20 intervals contain the exact moment (need >= 18)", covered));

    const auto render = [] {
        std::ostringstream out;
        std::ostringstream err;
        guesswork::cli::run({"simulate", "--scheme", "decentralized", "--channel", "bsc", "--param", "0.25", "--m",
                             "2", "--n", "10", "--trials", "1000000", "--seed", "42"},
                            out, err);
        return out.str();
    };
    const std::string first = render();
    o.check(!first.empty() && first == render(), "identical seeds give byte-identical simulate output");
    return o;
}

struct Curve {
    std::vector<double> param;
    std::vector<double> single, centralized, decentralized;
};

Curve sweep(const std::string& channel, const std::string& grid) {
    std::ostringstream out;
    std::ostringstream err;
    const int code =
        guesswork::cli::run({"sweep", "--channel", channel, "--m", "2", "--alpha", "1", "--grid", grid}, out, err);
    if (code != 0) throw std::runtime_error("sweep failed: " + err.str());
    Curve c;
    std::istringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) {
        std::vector<std::string> cells;
        std::istringstream fields(line);
        std::string cell;
        while (std::getline(fields, cell, ',')) cells.push_back(cell);
        const double value = std::stod(cells[6]);
        if (cells[0] == "single") {
            c.param.push_back(std::stod(cells[2]));
            c.single.push_back(value);
        } else if (cells[0] == "centralized") {
            c.centralized.push_back(value);
        } else {
            c.decentralized.push_back(value);
        }
    }
    return c;
}

Outcome figure_relations() {
    Outcome o;
    const Curve bec = sweep("bec", "0:1:0.01");
    const Curve bsc = sweep("bsc", "0:0.5:0.005");
    for (const auto& [name, c] : {std::pair<const char*, const Curve&>{"BEC", bec}, {"BSC", bsc}}) {
        const std::size_t last = c.param.size() - 1;
        o.check(std::abs(c.single[last] - 1) < 1e-9 && std::abs(c.centralized[last] - 1) < 1e-9 &&
                    std::abs(c.decentralized[last] - 1) < 1e-9,
                fmt("%s: %zu grid points, all curves equal 1 at the right end", name, c.param.size()));
        bool strict = true;
        bool ordered = true;
        bool increasing = true;
        for (std::size_t i = 1; i < last; ++i) {
            strict = strict && c.centralized[i] < c.decentralized[i];
            ordered = ordered && c.decentralized[i] <= c.single[i];
        }
        for (std::size_t i = 1; i <= last; ++i) {
            increasing = increasing && c.single[i] > c.single[i - 1] && c.centralized[i] > c.centralized[i - 1] &&
                         c.decentralized[i] > c.decentralized[i - 1];
        }
        o.check(strict, fmt("%s: centralized strictly below decentralized on the open interval", name));
        o.check(ordered && increasing, fmt("%s: decentralized <= single, all curves increasing", name));
    }
    const double slope = (bec.centralized[2] - bec.centralized[0]) / 0.02;
    o.check(slope < 0.05, fmt("centralized BEC slope at eps=0.01: %.4f (required < 0.05)", slope));
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "closed-form spot values", 1, closed_form_spots},
        {2, "pooled two-agent BSC: three forms agree", 5, three_way_pooled_bsc},
        {3, "decentralized BSC: closed vs variational form", 5, dual_form_decentralized_bsc},
        {4, "ordering and limits", 10, ordering_and_limits},
        {5, "centralized BEC convexity and derivative", 10, convexity_and_derivative},
        {6, "closed-form ranks equal the posterior oracle (n <= 10)", 60, rank_oracle_equivalence},
        {7, "exact-moment identities", 10, exact_identities},
        {8, "finite-n convergence trends", 120, convergence_trends},
        {9, "Monte Carlo consistency", 300, monte_carlo_consistency},
        {10, "figure curves: qualitative relations", 10, figure_relations},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome.check(false, std::string("exception: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        outcome.check(seconds <= c.budget_s, fmt("runtime %.2f s (budget %.0f s)", seconds, c.budget_s));
        failures += !outcome.passed;
        std::cout << (outcome.passed ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << '\n';
        for (const std::string& note : outcome.notes) std::cout << "    " << note << '\n';
        std::cout.flush();
    }
    std::cout << (failures == 0 ? "all criteria passed" : fmt("%d criteria failed", failures)) << '\n';
    return failures == 0 ? 0 : 1;
}
