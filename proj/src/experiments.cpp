#include "xcorr/experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <optional>

#include <fmt/format.h>

#include "xcorr/error.hpp"

namespace xcorr {

namespace {

BandKind band_kind(ExperimentMode mode) {
    switch (mode) {
        case ExperimentMode::family: return BandKind::family;
        case ExperimentMode::generator: return BandKind::generator;
        case ExperimentMode::single: return BandKind::single_sequence;
    }
    return BandKind::family;
}

void validate(const ExperimentConfig& c) {
    if (c.length == 0) throw InvalidArgument("length must be positive");
    if (c.trials == 0) throw InvalidArgument("trials must be positive");
    if (c.cardinality == 0) throw InvalidArgument("cardinality must be positive");
    if (c.mode == ExperimentMode::single && c.cardinality != 1)
        throw InvalidArgument("single-sequence mode measures one sequence");
    if (c.k_min < 2 || c.k_max < c.k_min || c.k_max > c.length)
        throw InvalidArgument("k range [" + std::to_string(c.k_min) + ", " + std::to_string(c.k_max) +
                              "] must lie within [2, " + std::to_string(c.length) + "]");
    if (!(c.confidence > 0 && c.confidence < 1)) throw InvalidArgument("confidence must lie in (0, 1)");
}

std::string join(const std::vector<std::size_t>& v, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(v[i]);
    }
    return out;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

const char* mode_name(ExperimentMode mode) {
    switch (mode) {
        case ExperimentMode::family: return "family";
        case ExperimentMode::generator: return "generator";
        case ExperimentMode::single: return "single";
    }
    return "?";
}

const char* measure_name(ExperimentMode mode) {
    switch (mode) {
        case ExperimentMode::family: return "phi";
        case ExperimentMode::generator: return "phi_tilde";
        case ExperimentMode::single: return "c_k";
    }
    return "?";
}

std::vector<BinarySequence> trial_sequences(const ExperimentConfig& c, std::uint64_t trial) {
    RandomStream rng(c.seed, trial);
    switch (c.mode) {
        case ExperimentMode::family: {
            auto fam = sample_family(c.length, c.cardinality, rng);
            return {fam.members().begin(), fam.members().end()};
        }
        case ExperimentMode::generator: {
            auto gen = sample_generator(c.length, c.cardinality, rng);
            return {gen.images().begin(), gen.images().end()};
        }
        case ExperimentMode::single:
            return {sample_sequence(c.length, rng)};
    }
    return {};
}

std::vector<BoundsRecord> run_trials(const ExperimentConfig& config) {
    validate(config);
    const std::size_t nk = config.k_max - config.k_min + 1;
    std::vector<bool> exact(nk);
    for (std::size_t i = 0; i < nk; ++i) {
        const CountResult count = count_windows(config.length, config.k_min + i, config.cardinality);
        exact[i] = !count.saturated && count.value <= config.budget;
        if (!exact[i] && !config.allow_approx)
            throw Infeasible("order k=" + std::to_string(config.k_min + i) +
                             " needs more configurations than the budget allows; enable approximation to "
                             "use the randomized estimator");
    }
    std::vector<Band> bands;
    for (std::size_t i = 0; i < nk; ++i)
        bands.push_back(theorem_band(config.length, config.k_min + i, config.cardinality, band_kind(config.mode)));

    std::vector<BoundsRecord> records(config.trials * nk);
    std::vector<std::exception_ptr> errors(config.trials);
    const int nthreads = config.threads > 0 ? config.threads : omp_get_max_threads();
    // Parallelize over trials when there are several; otherwise let the
    // enumeration use the threads.
    const bool outer = config.trials > 1;
    MeasureOptions opts;
    opts.threads = outer ? 1 : nthreads;
    opts.force = true;  // budget already checked above

#pragma omp parallel for schedule(dynamic, 1) num_threads(outer ? nthreads : 1)
    for (std::int64_t ti = 0; ti < static_cast<std::int64_t>(config.trials); ++ti) {
        const auto trial = static_cast<std::uint64_t>(ti);
        try {
            RandomStream rng(config.seed, trial);
            std::optional<SequenceFamily> family;
            std::optional<GeneratorSample> gen;
            switch (config.mode) {
                case ExperimentMode::family: family.emplace(sample_family(config.length, config.cardinality, rng)); break;
                case ExperimentMode::generator: gen.emplace(sample_generator(config.length, config.cardinality, rng)); break;
                case ExperimentMode::single: family.emplace(std::vector{sample_sequence(config.length, rng)}); break;
            }
            for (std::size_t i = 0; i < nk; ++i) {
                const std::size_t k = config.k_min + i;
                const auto start = std::chrono::steady_clock::now();
                MeasureResult m;
                if (!exact[i]) {
                    const std::uint64_t samples = std::clamp<std::uint64_t>(config.budget, 1, kMaxEstimatorSamples);
                    m = gen ? estimate_phi_tilde(*gen, k, samples, rng, opts.threads)
                            : estimate_phi(*family, k, samples, rng, opts.threads);
                } else if (gen) {
                    m = phi_tilde(*gen, k, opts);
                } else if (config.mode == ExperimentMode::single) {
                    m = correlation_measure((*family)[0], k, opts);
                } else {
                    m = phi(*family, k, opts);
                }
                const auto stop = std::chrono::steady_clock::now();

                BoundsRecord& r = records[trial * nk + i];
                r.length = config.length;
                r.k = k;
                r.mode = config.mode;
                r.cardinality = config.cardinality;
                r.value = m.value;
                r.lower = bands[i].lower;
                r.upper = bands[i].upper;
                const auto v = static_cast<double>(m.value);
                r.within_band = r.lower < v && v < r.upper;
                r.approximate = m.approximate;
                r.witness = std::move(m.witness);
                r.trial = trial;
                r.seed = config.seed;
                r.elapsed_ms = std::chrono::duration<double, std::milli>(stop - start).count();
            }
        } catch (...) {
            errors[trial] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return records;
}

std::string to_jsonl(const BoundsRecord& r, bool include_timing) {
    return fmt::format(
        "{{\"n\":{},\"k\":{},\"mode\":\"{}\",\"cardinality\":{},\"measure\":\"{}\",\"value\":{},"
        "\"lower\":{:.17g},\"upper\":{:.17g},\"within_band\":{},\"approximate\":{},"
        "\"witness\":{{\"members\":[{}],\"d\":[{}],\"m\":{}}},\"trial\":{},\"seed\":{},\"elapsed_ms\":{:.17g}}}",
        r.length, r.k, mode_name(r.mode), r.cardinality, measure_name(r.mode), r.value, r.lower, r.upper,
        r.within_band, r.approximate, join(r.witness.members, ","), join(r.witness.shifts, ","),
        r.witness.window, r.trial, r.seed, include_timing ? r.elapsed_ms : 0.0);
}

std::string csv_header() {
    return "n,k,mode,cardinality,measure,value,lower,upper,within_band,approximate,witness_members,witness_d,"
           "witness_m,trial,seed";
}

std::string to_csv(const BoundsRecord& r) {
    return fmt::format("{},{},{},{},{},{},{:.17g},{:.17g},{},{},{},{},{},{},{}", r.length, r.k, mode_name(r.mode),
                       r.cardinality, measure_name(r.mode), r.value, r.lower, r.upper, r.within_band ? 1 : 0,
                       r.approximate ? 1 : 0, join(r.witness.members, " "), join(r.witness.shifts, " "),
                       r.witness.window, r.trial, r.seed);
}

DistributionOracle exact_distribution_oracle(std::size_t length, std::size_t family_size, std::size_t k,
                                             int threads) {
    if (length == 0 || family_size == 0) throw InvalidArgument("length and family size must be positive");
    if (k < 2) throw InvalidArgument("order must be at least 2");
    if (length > 12) throw Infeasible("distribution oracle needs N <= 12");
    const std::uint64_t space = std::uint64_t{1} << length;
    if (family_size > space) throw InvalidArgument("family size exceeds 2^N");
    const double log_families = log_binomial(static_cast<double>(space), static_cast<double>(family_size));
    if (log_families > std::log(1e7) + 1e-9) throw Infeasible("distribution oracle limited to 10^7 families");
    if (count_windows(length, k, family_size).value == 0)
        throw InvalidArgument("no admissible configuration for this order");

    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
    const std::uint64_t firsts = space - family_size + 1;
    std::vector<std::map<std::uint64_t, std::uint64_t>> partial(firsts);

    // Families are index sets {i_0 < i_1 < ...}; sequence i has bit pattern i.
#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads)
    for (std::int64_t f = 0; f < static_cast<std::int64_t>(firsts); ++f) {
        auto& counts = partial[static_cast<std::size_t>(f)];
        std::vector<std::uint64_t> idx(family_size);
        for (std::size_t i = 0; i < family_size; ++i) idx[i] = static_cast<std::uint64_t>(f) + i;
        MeasureOptions opts;
        opts.threads = 1;
        opts.force = true;
        for (;;) {
            std::vector<BinarySequence> members;
            members.reserve(family_size);
            for (auto i : idx) members.push_back(BinarySequence::from_words(length, {i}));
            ++counts[phi(SequenceFamily(std::move(members)), k, opts).value];

            std::size_t i = family_size;
            while (i > 1 && idx[i - 1] == space - family_size + (i - 1)) --i;
            if (i <= 1) break;
            ++idx[i - 1];
            for (std::size_t j = i; j < family_size; ++j) idx[j] = idx[j - 1] + 1;
        }
    }

    std::map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t total = 0;
    for (const auto& p : partial)
        for (const auto& [v, c] : p) counts[v] += c, total += c;
    DistributionOracle out;
    out.families = total;
    for (const auto& [v, c] : counts) out.pmf[v] = static_cast<double>(c) / static_cast<double>(total);
    return out;
}

Pmf empirical_pmf(std::span<const BoundsRecord> records, std::size_t k) {
    std::map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t total = 0;
    for (const auto& r : records)
        if (r.k == k) ++counts[r.value], ++total;
    Pmf pmf;
    for (const auto& [v, c] : counts) pmf[v] = static_cast<double>(c) / static_cast<double>(total);
    return pmf;
}

double total_variation(const Pmf& p, const Pmf& q) {
    double sum = 0;
    for (const auto& [v, x] : p) {
        const auto it = q.find(v);
        sum += std::fabs(x - (it == q.end() ? 0.0 : it->second));
    }
    for (const auto& [v, y] : q)
        if (!p.contains(v)) sum += y;
    return 0.5 * sum;
}

CollisionReport collision_experiment(std::size_t length, std::size_t seed_count, std::uint64_t trials,
                                     std::uint64_t seed, int threads) {
    if (trials == 0) throw InvalidArgument("trials must be positive");
    if (seed_count == 0) throw InvalidArgument("seed count must be positive");
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
    std::uint64_t free_count = 0;
#pragma omp parallel for schedule(static) num_threads(nthreads) reduction(+ : free_count)
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(trials); ++t) {
        RandomStream rng(seed, static_cast<std::uint64_t>(t));
        if (sample_generator(length, seed_count, rng).injective()) ++free_count;
    }
    CollisionReport rep;
    rep.trials = trials;
    rep.collision_free = free_count;
    rep.empirical = static_cast<double>(free_count) / static_cast<double>(trials);
    rep.formula = collision_free_probability(length, seed_count);
    rep.standard_error = std::sqrt(rep.formula * (1 - rep.formula) / static_cast<double>(trials));
    return rep;
}

nlohmann::ordered_json summarize(std::span<const BoundsRecord> records) {
    if (records.empty()) throw InvalidArgument("no records to summarize");
    std::map<std::size_t, std::vector<const BoundsRecord*>> by_k;
    for (const auto& r : records) by_k[r.k].push_back(&r);

    auto out = nlohmann::ordered_json::array();
    for (const auto& [k, rs] : by_k) {
        const BoundsRecord& first = *rs.front();
        const Band band = theorem_band(first.length, k, first.cardinality, band_kind(first.mode));
        std::vector<double> values, ratios;
        std::size_t within = 0, approx = 0;
        for (const auto* r : rs) {
            values.push_back(static_cast<double>(r->value));
            ratios.push_back(static_cast<double>(r->value) / band.base);
            within += r->within_band;
            approx += r->approximate;
        }
        double mean = 0;
        for (double x : ratios) mean += x;
        mean /= static_cast<double>(ratios.size());

        nlohmann::ordered_json row;
        row["k"] = k;
        row["n"] = first.length;
        row["mode"] = mode_name(first.mode);
        row["cardinality"] = first.cardinality;
        row["measure"] = measure_name(first.mode);
        row["count"] = rs.size();
        row["value_min"] = *std::min_element(values.begin(), values.end());
        row["value_median"] = median(values);
        row["value_max"] = *std::max_element(values.begin(), values.end());
        row["lower"] = first.lower;
        row["upper"] = first.upper;
        row["within_band_count"] = within;
        row["within_band_fraction"] = static_cast<double>(within) / static_cast<double>(rs.size());
        row["approximate_count"] = approx;
        row["ratio_min"] = *std::min_element(ratios.begin(), ratios.end());
        row["ratio_median"] = median(ratios);
        row["ratio_max"] = *std::max_element(ratios.begin(), ratios.end());
        row["ratio_mean"] = mean;
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace xcorr
