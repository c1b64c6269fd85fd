#include <doctest.h>

#include <cmath>

#include "xcorr/error.hpp"
#include "xcorr/experiments.hpp"

using namespace xcorr;

namespace {

ExperimentConfig config(std::size_t n, std::size_t card, std::size_t k_min, std::size_t k_max, std::uint64_t trials,
                        std::uint64_t seed, ExperimentMode mode = ExperimentMode::family) {
    ExperimentConfig c;
    c.length = n;
    c.cardinality = card;
    c.k_min = k_min;
    c.k_max = k_max;
    c.trials = trials;
    c.seed = seed;
    c.mode = mode;
    return c;
}

std::string stream_of(const std::vector<BoundsRecord>& rs) {
    std::string s;
    for (const auto& r : rs) s += to_jsonl(r, false) + "\n";
    return s;
}

}  // namespace

TEST_CASE("run_trials basic shape") {
    const auto c = config(16, 2, 2, 2, 10, 3);
    const auto rs = run_trials(c);
    REQUIRE(rs.size() == 10);
    for (std::size_t i = 0; i < rs.size(); ++i) {
        CHECK(rs[i].trial == i);
        CHECK(rs[i].value >= 1);
        CHECK(rs[i].value <= 16);
        CHECK(rs[i].within_band == (rs[i].lower < rs[i].value && rs[i].value < rs[i].upper));
        CHECK_FALSE(rs[i].approximate);
    }
    const auto multi = run_trials(config(10, 2, 2, 4, 3, 1));
    REQUIRE(multi.size() == 9);
    CHECK(multi[0].k == 2);
    CHECK(multi[2].k == 4);
    CHECK(multi[3].trial == 1);
}

TEST_CASE("records are deterministic across runs and thread counts") {
    for (auto mode : {ExperimentMode::family, ExperimentMode::generator, ExperimentMode::single}) {
        auto c = config(24, mode == ExperimentMode::single ? 1 : 3, 2, 3, 12, 77, mode);
        c.threads = 1;
        const auto a = stream_of(run_trials(c));
        c.threads = 8;
        const auto b = stream_of(run_trials(c));
        CHECK(a == b);
        CHECK(a == stream_of(run_trials(c)));
    }
}

TEST_CASE("every record re-validates against its witness") {
    for (auto mode : {ExperimentMode::family, ExperimentMode::generator, ExperimentMode::single}) {
        const auto c = config(20, mode == ExperimentMode::single ? 1 : 3, 2, 3, 6, 5, mode);
        for (const auto& r : run_trials(c)) {
            const auto seqs = trial_sequences(c, r.trial);
            CHECK(static_cast<std::uint64_t>(std::llabs(evaluate_pattern(seqs, r.witness))) == r.value);
            if (mode == ExperimentMode::family) CHECK(r.value == phi(SequenceFamily(seqs), r.k).value);
            if (mode == ExperimentMode::single) CHECK(r.value == correlation_measure(seqs[0], r.k).value);
        }
    }
}

TEST_CASE("budget refusal and approximation") {
    auto c = config(64, 4, 3, 3, 2, 9);
    c.budget = 1000;
    CHECK_THROWS_AS(run_trials(c), Infeasible);
    c.allow_approx = true;
    const auto rs = run_trials(c);
    REQUIRE(rs.size() == 2);
    for (const auto& r : rs) {
        CHECK(r.approximate);
        const auto seqs = trial_sequences(c, r.trial);
        CHECK(static_cast<std::uint64_t>(std::llabs(evaluate_pattern(seqs, r.witness))) == r.value);
    }
    CHECK_THROWS_AS(run_trials(config(8, 2, 1, 2, 1, 0)), InvalidArgument);
    CHECK_THROWS_AS(run_trials(config(8, 2, 3, 2, 1, 0)), InvalidArgument);
    CHECK_THROWS_AS(run_trials(config(8, 2, 2, 2, 0, 0)), InvalidArgument);
}

TEST_CASE("jsonl record layout") {
    BoundsRecord r;
    r.length = 8;
    r.k = 2;
    r.cardinality = 2;
    r.value = 5;
    r.lower = 0.1;
    r.upper = 2.5;
    r.witness = {{0, 1}, {0, 3}, 5};
    r.trial = 4;
    r.seed = 9;
    r.elapsed_ms = 1.5;
    CHECK(to_jsonl(r) ==
          "{\"n\":8,\"k\":2,\"mode\":\"family\",\"cardinality\":2,\"measure\":\"phi\",\"value\":5,"
          "\"lower\":0.10000000000000001,\"upper\":2.5,\"within_band\":false,\"approximate\":false,"
          "\"witness\":{\"members\":[0,1],\"d\":[0,3],\"m\":5},\"trial\":4,\"seed\":9,\"elapsed_ms\":1.5}");
    CHECK(to_jsonl(r, false).find("\"elapsed_ms\":0}") != std::string::npos);
    const auto parsed = nlohmann::json::parse(to_jsonl(r));
    CHECK(parsed["witness"]["d"][1] == 3);
    CHECK(to_csv(r) == "8,2,family,2,phi,5,0.10000000000000001,2.5,0,0,0 1,0 3,5,4,9");
}

TEST_CASE("distribution oracle") {
    const auto two = exact_distribution_oracle(2, 1, 2);
    CHECK(two.families == 4);
    CHECK(two.pmf == Pmf{{1, 1.0}});

    const auto three = exact_distribution_oracle(3, 1, 2);
    CHECK(three.families == 8);
    Pmf direct;
    for (int bits = 0; bits < 8; ++bits) {
        const std::vector<int> sym{bits & 1 ? -1 : 1, bits & 2 ? -1 : 1, bits & 4 ? -1 : 1};
        direct[correlation_measure(BinarySequence(sym), 2).value] += 1.0 / 8;
    }
    CHECK(three.pmf == direct);

    const auto pairs = exact_distribution_oracle(4, 2, 3, 1);
    CHECK(pairs.families == 120);
    double total = 0;
    for (const auto& [v, p] : pairs.pmf) {
        total += p;
        CHECK(std::abs(p * 120 - std::round(p * 120)) < 1e-9);
    }
    CHECK(total == doctest::Approx(1.0));
    CHECK(exact_distribution_oracle(4, 2, 3, 8).pmf == pairs.pmf);

    CHECK_THROWS_AS(exact_distribution_oracle(13, 1, 2), Infeasible);
    CHECK_THROWS_AS(exact_distribution_oracle(12, 3, 2), Infeasible);
}

TEST_CASE("Monte Carlo pmf approaches the oracle") {
    const auto oracle = exact_distribution_oracle(3, 1, 2);
    const auto rs = run_trials(config(3, 1, 2, 2, 10000, 1));
    const double tv = total_variation(oracle.pmf, empirical_pmf(rs, 2));
    MESSAGE("tv " << tv);
    CHECK(tv <= 0.03);
    CHECK(total_variation(Pmf{{1, 1.0}}, Pmf{{2, 1.0}}) == 1.0);
    CHECK(total_variation(Pmf{{1, 0.5}, {2, 0.5}}, Pmf{{1, 0.5}, {2, 0.5}}) == 0.0);
}

TEST_CASE("collision experiment") {
    const auto coin = collision_experiment(1, 2, 10000, 1);
    CHECK(std::abs(coin.empirical - 0.5) <= 0.02);
    CHECK(collision_experiment(10, 1, 100, 1).empirical == 1.0);
    const auto r = collision_experiment(12, 64, 10000, 1);
    CHECK(r.formula == doctest::Approx(0.6097228014700677).epsilon(1e-12));
    CHECK(std::abs(r.empirical - 0.610) <= 0.03);

    for (std::size_t n : {4u, 8u, 12u})
        for (std::size_t s : {2u, 5u, 20u}) {
            const auto g = collision_experiment(n, s, 20000, 100 + n + s);
            if (g.standard_error > 0) CHECK(std::abs(g.empirical - g.formula) <= 3 * g.standard_error);
            else CHECK(g.empirical == g.formula);
        }
    CHECK(collision_experiment(12, 64, 5000, 4, 1).collision_free == collision_experiment(12, 64, 5000, 4, 8).collision_free);
}

TEST_CASE("summaries") {
    const auto single = run_trials(config(16, 2, 2, 2, 1, 3));
    const auto s1 = summarize(single);
    REQUIRE(s1.size() == 1);
    CHECK(s1[0]["value_min"] == static_cast<double>(single[0].value));
    CHECK(s1[0]["value_median"] == static_cast<double>(single[0].value));
    CHECK(s1[0]["value_max"] == static_cast<double>(single[0].value));
    CHECK(s1[0]["lower"] == single[0].lower);

    const auto two = run_trials(config(12, 2, 2, 3, 4, 3));
    const auto s2 = summarize(two);
    REQUIRE(s2.size() == 2);
    CHECK(s2[0]["k"] == 2);
    CHECK(s2[1]["k"] == 3);

    const auto band = run_trials(config(128, 4, 2, 2, 50, 1));
    std::size_t within = 0;
    for (const auto& r : band) within += r.within_band;
    const auto s3 = summarize(band);
    CHECK(s3[0]["within_band_count"] == within);
    CHECK(s3[0]["within_band_fraction"] == static_cast<double>(within) / 50);
    CHECK_THROWS_AS(summarize(std::vector<BoundsRecord>{}), InvalidArgument);
}
