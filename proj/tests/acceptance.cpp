// Acceptance suite. One PASS/FAIL line per criterion; exit status is the
// number of failures. Tolerances and time limits are fixed below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "xcorr/experiments.hpp"
#include "xcorr/measures.hpp"
#include "xcorr/tailmath.hpp"

using namespace xcorr;

namespace {

constexpr double kTailRelTol = 1e-12;
constexpr double kClosedFormTol = 0.15;
constexpr double kPointLo = 0.99, kPointHi = 1.01;
constexpr double kCollisionFormula = 0.610, kCollisionFormulaTol = 0.001, kCollisionMcTol = 0.03;
constexpr double kBandFraction = 0.95;
constexpr double kTvTol = 0.03;

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Ordered k-tuples with repetition, nondecreasing shifts (distinct where the
// contents are equal), every window; symbol products summed directly.
std::uint64_t naive_phi(std::span<const BinarySequence> fam, std::size_t k) {
    const std::size_t n = fam.front().size();
    std::uint64_t best = 0;
    std::vector<std::size_t> idx(k), d(k);
    std::function<void(std::size_t)> shifts = [&](std::size_t pos) {
        if (pos == k) {
            for (std::size_t m = 1; m + d[k - 1] <= n; ++m) {
                long v = 0;
                for (std::size_t t = 0; t < m; ++t) {
                    int p = 1;
                    for (std::size_t i = 0; i < k; ++i) p *= fam[idx[i]][t + d[i]];
                    v += p;
                }
                best = std::max<std::uint64_t>(best, std::labs(v));
            }
            return;
        }
        for (std::size_t s = pos ? d[pos - 1] : 0; s < n; ++s) {
            bool clash = false;
            for (std::size_t j = 0; j < pos; ++j) clash |= d[j] == s && fam[idx[j]] == fam[idx[pos]];
            if (clash) continue;
            d[pos] = s;
            shifts(pos + 1);
        }
    };
    std::function<void(std::size_t)> tuples = [&](std::size_t pos) {
        if (pos == k) return shifts(0);
        for (std::size_t i = 0; i < fam.size(); ++i) {
            idx[pos] = i;
            tuples(pos + 1);
        }
    };
    tuples(0);
    return best;
}

Outcome oracle_equivalence() {
    Outcome o;
    int mismatches = 0, checks = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        RandomStream rng(seed, 0);
        const std::size_t n = 3 + rng.below(6);
        const std::size_t f = 1 + rng.below(3);
        const auto fam = sample_family(n, f, rng);
        for (std::size_t k : {2u, 3u}) {
            ++checks;
            if (phi(fam, k).value != naive_phi(fam.members(), k)) ++mismatches;
        }
    }
    o.pass = mismatches == 0;
    o.detail = std::to_string(checks) + " instances, " + std::to_string(mismatches) + " mismatches";
    return o;
}

Outcome singleton_dominance() {
    Outcome o;
    int bad = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        RandomStream rng(seed, 1);
        const std::size_t k = 2 + seed % 2;
        const std::size_t n = k == 2 ? 4 + rng.below(61) : 4 + rng.below(29) * 2;
        const std::size_t f = 1 + rng.below(4);
        const auto fam = sample_family(n, f, rng);
        std::uint64_t best = 0;
        for (const auto& e : fam.members()) {
            const auto c = correlation_measure(e, k).value;
            if (phi(SequenceFamily({e}), k).value != c) ++bad;
            best = std::max(best, c);
        }
        if (phi(fam, k).value < best) ++bad;
    }
    o.pass = bad == 0;
    o.detail = "200 instances, " + std::to_string(bad) + " violations";
    return o;
}

Outcome fixtures() {
    Outcome o;
    const auto ones4 = BinarySequence::all_ones(4), alt4 = BinarySequence::alternating(4);
    const auto e = parse_sequence("++-+--");
    const std::vector pair{ones4, alt4};
    const auto e8 = parse_sequence("+--+-+++");
    const std::vector<std::pair<std::uint64_t, std::uint64_t>> got{
        {correlation_measure(BinarySequence::all_ones(8), 3).value, 6},
        {correlation_measure(BinarySequence::alternating(6), 2).value, 5},
        {correlation_measure(e, 2).value, 3},
        {cross_correlation_k_tuple(pair, 2).value, 1},
        {phi_tilde(GeneratorSample({e8, e8, BinarySequence::all_ones(8)}), 2).value, 8},
    };
    std::ostringstream s;
    for (const auto& [v, want] : got) {
        o.pass &= v == want;
        s << v << (v == want ? "" : "!") << " ";
    }
    s << "(want 6 5 3 1 8)";
    o.detail = s.str();
    return o;
}

Outcome tail_math() {
    Outcome o;
    double worst = 0;
    for (std::uint64_t n = 1; n <= 256; ++n)
        for (std::int64_t t = 0; t <= static_cast<std::int64_t>(n); ++t) {
            const double exact = binom_tail_exact(n, t, TailMode::exact_rational);
            worst = std::max(worst, std::abs(binom_tail_exact(n, t) - exact) / exact);
        }
    int hoeffding = 0;
    for (std::uint64_t n = 2; n <= 256; ++n)
        for (std::uint64_t a = 1; a <= n; ++a)
            hoeffding += !(signed_walk_tail(n, double(a)) < hoeffding_bound(n, double(a)));
    double ml_worst = 0;
    const std::uint64_t n = 10'000;
    for (int i = 0; i <= 30; ++i) {
        const double c = 1.5 + 0.05 * i;
        const double exact = binom_tail_at_least(n, n / 2 + c * std::sqrt(double(n)));
        ml_worst = std::max(ml_worst, std::abs(exact / ml_tail(c, MoivreLaplaceForm::closed) - 1));
    }
    const double point = binom_point_lower_bound(100, 0).ratio();
    o.pass = worst <= kTailRelTol && hoeffding == 0 && ml_worst <= kClosedFormTol && point >= kPointLo &&
             point <= kPointHi;
    std::ostringstream s;
    s << "tail rel err " << worst << ", hoeffding violations " << hoeffding << ", closed-form worst " << ml_worst
      << ", point ratio " << point;
    o.detail = s.str();
    return o;
}

Outcome rk() {
    Outcome o;
    const auto r = rk_threshold(24, 2, 2);
    int disagree = 0, points = 0;
    for (std::uint64_t n : {6u, 12u, 24u, 30u, 48u, 96u, 200u, 500u, 1000u, 4000u})
        for (std::uint64_t k = 2; k <= 6; ++k)
            for (std::uint64_t s : {2u, 16u, 4096u, 1u << 31}) {
                const auto a = rk_threshold(n, k, s), b = rk_threshold_descending(n, k, s);
                disagree += a.r != b.r || a.satisfied != b.satisfied;
                ++points;
            }
    o.pass = r.r == 2 && disagree == 0;
    o.detail = "r_2(24, 2 seeds) = " + std::to_string(r.r) + ", " + std::to_string(points) + " grid points, " +
               std::to_string(disagree) + " disagreements";
    return o;
}

Outcome collision() {
    Outcome o;
    const double formula = collision_free_probability(12, 64);
    const auto mc = collision_experiment(12, 64, 10'000, 1);
    o.pass = std::abs(formula - kCollisionFormula) <= kCollisionFormulaTol &&
             std::abs(mc.empirical - formula) <= kCollisionMcTol;
    std::ostringstream s;
    s << "formula " << formula << ", empirical " << mc.empirical;
    o.detail = s.str();
    return o;
}

Outcome band() {
    Outcome o;
    ExperimentConfig c;
    c.length = 128;
    c.cardinality = 4;
    c.trials = 50;
    c.seed = 1;
    const auto rs = run_trials(c);
    const double n = 128;
    const double b = std::sqrt(n * (std::log(n * (n - 1) / 2) + 2 * std::log(4.0)));
    int inside = 0;
    for (const auto& r : rs) inside += 0.4 * b < r.value && r.value < 2.5 * b;
    const double frac = inside / 50.0;
    o.pass = frac >= kBandFraction;
    std::ostringstream s;
    s << inside << "/50 inside (" << 0.4 * b << ", " << 2.5 * b << ")";
    o.detail = s.str();
    return o;
}

Outcome distribution() {
    Outcome o;
    const auto oracle = exact_distribution_oracle(3, 1, 2);
    ExperimentConfig c;
    c.length = 3;
    c.cardinality = 1;
    c.trials = 10'000;
    c.seed = 1;
    const double tv = total_variation(oracle.pmf, empirical_pmf(run_trials(c), 2));
    o.pass = tv <= kTvTol;
    o.detail = "total variation " + std::to_string(tv);
    return o;
}

struct Run {
    int status;
    std::string out;
};

Run run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + XCORR_CLI + "\" " + args + " 2>/dev/null";
    Run r{-1, {}};
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
    r.status = pclose(p);
    return r;
}

Outcome determinism() {
    Outcome o;
    const std::vector<std::string> workloads{
        "mc --length 8 --size 3 --k-min 2 --k-max 3 --trials 100 --seed 1 --format csv",
        "mc --length 128 --size 4 --k 2 --trials 50 --seed 1",
        "oracle --length 3 --size 1 --k 2 --trials 10000 --seed 1",
    };
    std::ostringstream s;
    for (const auto& w : workloads) {
        const Run a = run_cli(w + " --threads 1");
        const Run b = run_cli(w + " --threads 8");
        const Run c = run_cli(w + " --threads 8");
        const bool ok = a.status == 0 && b.status == 0 && c.status == 0 && !a.out.empty() && a.out == b.out &&
                        b.out == c.out;
        o.pass &= ok;
        s << (ok ? "same" : "DIFF") << "(" << a.out.size() << "B) ";
    }
    o.detail = s.str();
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit_s;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {1, "oracle equivalence", 60, oracle_equivalence},
        {2, "singleton and dominance", 120, singleton_dominance},
        {3, "fixtures", 10, fixtures},
        {4, "tail math", 60, tail_math},
        {5, "r_k threshold", 10, rk},
        {6, "collision", 30, collision},
        {7, "soft band check", 300, band},
        {8, "distribution oracle", 30, distribution},
        {9, "determinism and parallelism", 600, determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs < c.limit_s;
        const bool pass = o.pass && in_time;
        failures += !pass;
        std::printf("criterion %d %-28s %s  %s [%.2fs / %.0fs%s]\n", c.id, c.name, pass ? "PASS" : "FAIL",
                    o.detail.c_str(), secs, c.limit_s, in_time ? "" : " over limit");
        std::fflush(stdout);
    }
    return failures;
}
